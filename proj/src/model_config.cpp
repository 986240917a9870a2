#include "wfdual/model_config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace wfdual {

const Sigma& ModelConfig::sigma() const {
    if (!sigma_built_) {
        sigma_cache_ = Sigma(selection);
        sigma_built_ = true;
    }
    return sigma_cache_;
}

bool ModelConfig::bidirectional_mutation() const {
    double nu_pos = nu.mass(0.0, 1.0, false, false);
    double nu_neg = nu.mass(-1.0, 0.0, false, false);
    return theta_a + nu_pos > 0 && theta_A + nu_neg > 0;
}

bool ModelConfig::no_mutation_regime() const {
    return theta_a == 0.0 && theta_A == 0.0 && nu.is_zero();
}

bool ModelConfig::siegmund_admissible(std::string* why) const {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (!no_mutation_regime()) return fail("config must have nu = 0 and theta_a = theta_A = 0");
    if (lambda.atom_mass_at(0.0) > 0) return fail("lambda({0}) must be 0 (1/r integral diverges)");
    if (lambda.atom_mass_at(1.0) > 0) return fail("lambda({1}) must be 0");
    if (lambda.beta && lambda.beta->c > 0 && lambda.beta->a <= 1.0)
        return fail("lambda Beta component needs a > 1 for a finite 1/r integral");
    if (lambda.is_zero()) return fail("lambda must have positive mass on (0,1)");
    return true;
}

std::vector<std::string> ModelConfig::validate() const {
    std::vector<std::string> out;
    auto append = [&](std::vector<std::string> v) {
        out.insert(out.end(), v.begin(), v.end());
    };
    append(lambda.validate("lambda"));
    append(mu.validate("mu"));
    append(nu.validate("nu"));
    if (theta_a < 0) out.push_back("theta_a must be >= 0");
    if (theta_A < 0) out.push_back("theta_A must be >= 0");
    append(selection.validate());
    for (const auto& [loc, mass] : lambda.atoms)
        if ((loc < 0 || loc > 1) && mass > 0) out.push_back("lambda atoms must lie in [0,1]");
    return out;
}

std::string ModelConfig::canonical_text() const {
    std::ostringstream os;
    auto put_measure = [&](const char* name, const JumpMeasure& m) {
        os << "[" << name << "]\n";
        for (const auto& [loc, mass] : m.atoms) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "atom = %.17g, %.17g\n", loc, mass);
            os << buf;
        }
        if (m.beta && m.beta->c > 0) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "beta_density = %.17g, %.17g, %.17g\n", m.beta->c,
                          m.beta->a, m.beta->b);
            os << buf;
        }
    };
    put_measure("lambda", lambda);
    put_measure("mu", mu);
    put_measure("nu", nu);
    char buf[128];
    std::snprintf(buf, sizeof buf, "[theta]\ntheta_a = %.17g\ntheta_A = %.17g\n", theta_a, theta_A);
    os << buf;
    os << "[selection]\nkappa = " << selection.kappa << "\n";
    for (int l = 2; l <= selection.kappa; ++l) {
        std::snprintf(buf, sizeof buf, "beta_l = %d, %.17g\n", l, selection.beta_rate(l));
        os << buf;
        for (int i = 0; i <= l; ++i) {
            std::snprintf(buf, sizeof buf, "p = %d, %d, %.17g\n", l, i, selection.prob(l, i));
            os << buf;
        }
    }
    return os.str();
}

std::uint64_t ModelConfig::hash() const {
    // FNV-1a over the canonical text
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double lambda_rate(const ModelConfig& cfg, int n, int k) {
    return cfg.lambda.abs_moment(k - 2, n - k, +1);
}

SelMutRates sel_mut_rates(const ModelConfig& cfg, int n, int l) {
    SelMutRates r;
    r.sigma_nl = cfg.mu.abs_moment(l - 1, n - l, +1) + cfg.mu.abs_moment(l - 1, n - l, -1);
    r.m_nl = cfg.nu.abs_moment(l - 1, n - l, +1) + cfg.nu.abs_moment(l - 1, n - l, -1);
    return r;
}

double sigma_rate_signed(const ModelConfig& cfg, int n, int l, int sign) {
    return cfg.mu.abs_moment(l - 1, n - l, sign);
}

double m_rate_signed(const ModelConfig& cfg, int n, int l, int sign) {
    return cfg.nu.abs_moment(l - 1, n - l, sign);
}

double sigma_eval_product(const ModelConfig& cfg, double x) { return cfg.sigma().product(x); }

}  // namespace wfdual
