#include "wfdual/config_parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace wfdual {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
    throw ConfigParseError("line " + std::to_string(line_no) + ": " + msg);
}

std::vector<double> parse_numbers(const std::string& s, std::size_t want, int line_no) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail(line_no, "empty value");
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (...) {
            fail(line_no, "not a number: '" + tok + "'");
        }
        if (pos != tok.size()) fail(line_no, "trailing characters after number: '" + tok + "'");
        out.push_back(v);
    }
    if (out.size() != want)
        fail(line_no, "expected " + std::to_string(want) + " comma-separated values");
    return out;
}

}  // namespace

ModelConfig parse_config_text(const std::string& text) {
    ModelConfig cfg;
    cfg.selection.kappa = 0;  // sentinel: no [selection] section seen yet
    cfg.selection.beta.clear();
    cfg.selection.p.clear();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    bool kappa_seen = false;

    while (std::getline(in, raw)) {
        ++line_no;
        auto hash_pos = raw.find('#');
        if (hash_pos != std::string::npos) raw = raw.substr(0, hash_pos);
        std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "lambda" && section != "mu" && section != "nu" &&
                section != "theta" && section != "selection")
                fail(line_no, "unknown section [" + section + "]");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty()) fail(line_no, "key outside any section");

        if (section == "lambda" || section == "mu" || section == "nu") {
            JumpMeasure& m = section == "lambda" ? cfg.lambda : (section == "mu" ? cfg.mu : cfg.nu);
            if (key == "atom") {
                auto v = parse_numbers(val, 2, line_no);
                m.atoms.emplace_back(v[0], v[1]);
            } else if (key == "beta_density") {
                auto v = parse_numbers(val, 3, line_no);
                if (m.beta) fail(line_no, "duplicate beta_density in [" + section + "]");
                m.beta = BetaComponent{v[0], v[1], v[2]};
            } else {
                fail(line_no, "unknown key '" + key + "' in [" + section + "]");
            }
        } else if (section == "theta") {
            auto v = parse_numbers(val, 1, line_no);
            if (key == "theta_a")
                cfg.theta_a = v[0];
            else if (key == "theta_A")
                cfg.theta_A = v[0];
            else
                fail(line_no, "unknown key '" + key + "' in [theta]");
        } else {  // selection
            if (key == "kappa") {
                auto v = parse_numbers(val, 1, line_no);
                int kappa = static_cast<int>(v[0]);
                if (kappa != v[0] || kappa < 2) fail(line_no, "kappa must be an integer > 1");
                cfg.selection.kappa = kappa;
                cfg.selection.beta.assign(static_cast<std::size_t>(kappa - 1), 0.0);
                cfg.selection.p.clear();
                for (int l = 2; l <= kappa; ++l) {
                    std::vector<double> row(static_cast<std::size_t>(l + 1), 0.0);
                    row.back() = 1.0;  // p_l = 1; p_0 = 0 already
                    // interior entries default to i/l so omitted rows stay neutral
                    for (int i = 1; i < l; ++i) row[static_cast<std::size_t>(i)] = static_cast<double>(i) / l;
                    cfg.selection.p.push_back(std::move(row));
                }
                kappa_seen = true;
            } else if (key == "beta_l") {
                if (!kappa_seen) fail(line_no, "kappa must come before beta_l");
                auto v = parse_numbers(val, 2, line_no);
                int l = static_cast<int>(v[0]);
                if (l != v[0] || l < 2 || l > cfg.selection.kappa)
                    fail(line_no, "beta_l: l must be an integer in 2..kappa");
                cfg.selection.beta[static_cast<std::size_t>(l - 2)] = v[1];
            } else if (key == "p") {
                if (!kappa_seen) fail(line_no, "kappa must come before p");
                auto v = parse_numbers(val, 3, line_no);
                int l = static_cast<int>(v[0]);
                int i = static_cast<int>(v[1]);
                if (l != v[0] || l < 2 || l > cfg.selection.kappa)
                    fail(line_no, "p: l must be an integer in 2..kappa");
                if (i != v[1] || i < 0 || i > l) fail(line_no, "p: i must be an integer in 0..l");
                cfg.selection.p[static_cast<std::size_t>(l - 2)][static_cast<std::size_t>(i)] = v[2];
            } else {
                fail(line_no, "unknown key '" + key + "' in [selection]");
            }
        }
    }

    if (!kappa_seen) cfg.selection = SelectionRepr::neutral();

    auto violations = cfg.validate();
    if (!violations.empty()) {
        std::string msg = "config has " + std::to_string(violations.size()) + " violation(s):";
        for (const auto& v : violations) msg += "\n  " + v;
        throw ConfigParseError(msg);
    }
    return cfg;
}

ModelConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace wfdual
