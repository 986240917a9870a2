#include "wfdual/siegmund_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "wfdual/parallel.hpp"

namespace wfdual {

double median_jump(double y, double r, double u) {
    double lo = (y - r) / (1.0 - r);
    double hi = y / (1.0 - r);
    double mid = std::max(lo, std::min(hi, u));  // median of {lo, hi, u}
    return mid - y;
}

double env_jump(double y, double r) {
    if (std::abs(r) < 1e-8) return -r * y * (1.0 - y);  // series branch, avoids cancellation
    double disc = (1.0 + r) * (1.0 + r) - 4.0 * r * y;
    disc = std::max(disc, 0.0);
    return (1.0 + r - std::sqrt(disc)) / (2.0 * r) - y;
}

SiegmundLaw::SiegmundLaw(const ModelConfig& cfg, const Scheme& scheme)
    : cfg_(&cfg), scheme_(scheme) {
    std::string why;
    if (!cfg.siegmund_admissible(&why))
        throw std::invalid_argument("siegmund dual not defined: " + why);
    if (scheme.dt <= 0) throw std::invalid_argument("scheme: dt must be > 0");
    if (scheme.eps_trunc <= 0 || scheme.eps_trunc >= 1)
        throw std::invalid_argument("scheme: eps_trunc must be in (0,1)");
    const double eps = scheme.eps_trunc;
    lambda_big_ = RestrictedSampler(cfg.lambda, eps, 2.0, +1);
    mu_pos_ = RestrictedSampler(cfg.mu, eps, 1.0, +1);
    mu_neg_ = RestrictedSampler(cfg.mu, eps, 1.0, -1);
    rate_lambda_ = lambda_big_.total_rate();
    rate_mu_ = mu_pos_.total_rate() + mu_neg_.total_rate();
    rate_total_ = rate_lambda_ + rate_mu_;
    small_drift_coef_ = cfg.lambda.mass(0.0, eps, false, true);
    mu_small_drift_ = cfg.mu.mass(0.0, eps, false, true) - cfg.mu.mass(-eps, 0.0, true, false);
}

double SiegmundLaw::drift(double y) const {
    // -sigma drift plus first-order restoration of truncated small jumps:
    // reproduction marks have mean r^2 (1-2y)/(2(1-r)^2), environment marks
    // mean -r y(1-y)
    return -cfg_->sigma().value(y) * y * (1.0 - y) +
           0.5 * (1.0 - 2.0 * y) * small_drift_coef_ - mu_small_drift_ * y * (1.0 - y);
}

double SiegmundLaw::advance(double y, double h) const {
    double k1 = drift(y);
    double k2 = drift(y + 0.5 * h * k1);
    double k3 = drift(y + 0.5 * h * k2);
    double k4 = drift(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    return std::clamp(y, 0.0, 1.0);
}

SiegmundLaw::EventMark SiegmundLaw::draw_mark(Rng& rng) const {
    EventMark mark{0, 0.0, 0.0};
    double u = rng.uniform() * rate_total_;
    if (u < rate_lambda_) {
        mark.channel = 0;
        mark.r = lambda_big_.sample(rng);
        mark.u = rng.uniform();
    } else {
        mark.channel = 1;
        double v = rng.uniform() * rate_mu_;
        mark.r = v < mu_pos_.total_rate() ? mu_pos_.sample(rng) : mu_neg_.sample(rng);
    }
    return mark;
}

double SiegmundLaw::apply_mark(double y, const EventMark& mark) const {
    if (mark.channel == 0)
        y += median_jump(y, mark.r, mark.u);
    else
        y += env_jump(y, mark.r);
    return std::clamp(y, 0.0, 1.0);
}

Path simulate_siegmund(const ModelConfig& cfg, double y0, double T, const Scheme& scheme,
                       std::uint64_t seed) {
    SiegmundLaw law(cfg, scheme);
    Rng rng(seed, 0);
    Path path;
    path.seed = seed;
    path.scheme = scheme;
    simulate_siegmund_observe(law, y0, T, rng, [&](double t, double y) {
        path.times.push_back(t);
        path.values.push_back(y);
    });
    return path;
}

std::vector<double> sample_siegmund_law(const ModelConfig& cfg, double y0, double t, int n_traj,
                                        std::uint64_t seed, const Scheme& scheme) {
    SiegmundLaw law(cfg, scheme);
    std::vector<double> out(static_cast<std::size_t>(n_traj));
    parallel_chunks(n_traj, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            double last = y0;
            simulate_siegmund_observe(law, y0, t, rng, [&](double, double y) { last = y; });
            out[static_cast<std::size_t>(i)] = last;
        }
    });
    return out;
}

AbsorptionStats absorption_stats(const ModelConfig& cfg, double y0, double t, double a,
                                 int n_traj, std::uint64_t seed, const Scheme& scheme) {
    if (a <= 0 || a >= 0.5) throw std::invalid_argument("absorption_stats: a must be in (0,1/2)");
    auto ends = sample_siegmund_law(cfg, y0, t, n_traj, seed, scheme);
    AbsorptionStats s;
    s.a = a;
    s.t = t;
    s.n_traj = n_traj;
    for (double y : ends) {
        if (y < a)
            s.p_low += 1;
        else if (y <= 1 - a)
            s.p_mid += 1;
        else
            s.p_high += 1;
    }
    s.p_low /= n_traj;
    s.p_mid /= n_traj;
    s.p_high /= n_traj;
    auto se = [&](double p) { return std::sqrt(std::max(0.0, p * (1 - p) / n_traj)); };
    s.se_low = se(s.p_low);
    s.se_mid = se(s.p_mid);
    s.se_high = se(s.p_high);
    return s;
}

DualityGap siegmund_duality_gap(const ModelConfig& cfg, double x, double y, double t, int n_traj,
                                std::uint64_t seed, const Scheme& scheme) {
    auto fwd = sample_law(cfg, x, t, n_traj, seed, scheme);
    auto dual = sample_siegmund_law(cfg, y, t, n_traj, seed + 0x517eb, scheme);
    DualityGap g;
    for (double v : fwd) g.lhs += (v >= y) ? 1.0 : 0.0;
    for (double v : dual) g.rhs += (v <= x) ? 1.0 : 0.0;
    g.lhs /= n_traj;
    g.rhs /= n_traj;
    g.joint_se = std::sqrt(std::max(0.0, g.lhs * (1 - g.lhs) / n_traj) +
                           std::max(0.0, g.rhs * (1 - g.rhs) / n_traj));
    return g;
}

}  // namespace wfdual
