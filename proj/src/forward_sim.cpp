#include "wfdual/forward_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "wfdual/parallel.hpp"

namespace wfdual {

Scheme Scheme::defaults_for(const ModelConfig& cfg) {
    Scheme s;
    double lam0 = cfg.lambda.atom_mass_at(0.0);
    s.dt = 1e-3 * std::min(1.0, 1.0 / (1.0 + lam0));
    s.eps_trunc = 1e-3;
    return s;
}

ForwardLaw::ForwardLaw(const ModelConfig& cfg, const Scheme& scheme)
    : cfg_(&cfg), scheme_(scheme) {
    if (scheme.dt <= 0) throw std::invalid_argument("scheme: dt must be > 0");
    if (scheme.eps_trunc <= 0 || scheme.eps_trunc >= 1)
        throw std::invalid_argument("scheme: eps_trunc must be in (0,1)");
    const double eps = scheme.eps_trunc;

    lambda_big_ = RestrictedSampler(cfg.lambda, eps, 2.0, +1);
    mu_pos_ = RestrictedSampler(cfg.mu, eps, 1.0, +1);
    mu_neg_ = RestrictedSampler(cfg.mu, eps, 1.0, -1);
    nu_pos_ = RestrictedSampler(cfg.nu, eps, 1.0, +1);
    nu_neg_ = RestrictedSampler(cfg.nu, eps, 1.0, -1);
    rate_lambda_ = lambda_big_.total_rate();
    rate_mu_ = mu_pos_.total_rate() + mu_neg_.total_rate();
    rate_nu_ = nu_pos_.total_rate() + nu_neg_.total_rate();
    rate_total_ = rate_lambda_ + rate_mu_ + rate_nu_;

    // truncated reproduction jumps are compensated: their variance (but no
    // drift) is restored through the Brownian term
    diff_coeff_ = cfg.lambda.atom_mass_at(0.0) + cfg.lambda.mass(0.0, eps, false, true);

    // truncated mu / nu jumps are not compensated: restore their mean drift
    mu_small_drift_ = cfg.mu.mass(0.0, eps, false, true) - cfg.mu.mass(-eps, 0.0, true, false);
    theta_a_eff_ = cfg.theta_a + cfg.nu.mass(0.0, eps, false, true);
    theta_A_eff_ = cfg.theta_A + cfg.nu.mass(-eps, 0.0, true, false);
}

double ForwardLaw::drift(double x) const {
    return (cfg_->sigma().value(x) + mu_small_drift_) * x * (1.0 - x) +
           theta_a_eff_ * (1.0 - x) - theta_A_eff_ * x;
}

double ForwardLaw::step_with_noise(double x, double h, double z) const {
    if (has_diffusion()) {
        double d = diff_coeff_ * x * (1.0 - x);
        x += drift(x) * h + (d > 0 ? std::sqrt(d * h) * z : 0.0);
    } else {
        double k1 = drift(x);
        double k2 = drift(x + 0.5 * h * k1);
        double k3 = drift(x + 0.5 * h * k2);
        double k4 = drift(x + h * k3);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return std::clamp(x, 0.0, 1.0);
}

ForwardLaw::EventMark ForwardLaw::draw_mark(Rng& rng) const {
    EventMark mark{0, 0.0, 0.0};
    double u = rng.uniform() * rate_total_;
    if (u < rate_lambda_) {
        mark.channel = 0;
        mark.r = lambda_big_.sample(rng);
        mark.u = rng.uniform();
    } else if (u < rate_lambda_ + rate_mu_) {
        mark.channel = 1;
        double v = rng.uniform() * rate_mu_;
        mark.r = v < mu_pos_.total_rate() ? mu_pos_.sample(rng) : mu_neg_.sample(rng);
    } else {
        mark.channel = 2;
        double v = rng.uniform() * rate_nu_;
        mark.r = v < nu_pos_.total_rate() ? nu_pos_.sample(rng) : nu_neg_.sample(rng);
    }
    return mark;
}

double ForwardLaw::apply_mark(double x, const EventMark& mark) const {
    switch (mark.channel) {
        case 0:  // reproduction: resampling jump
            x = mark.u <= x ? x + mark.r * (1.0 - x) : x - mark.r * x;
            break;
        case 1:  // environment / coordinated selection
            x = x + mark.r * x * (1.0 - x);
            break;
        default:  // coordinated mutation
            x = mark.r >= 0 ? x + mark.r * (1.0 - x) : x + mark.r * x;
            break;
    }
    return std::clamp(x, 0.0, 1.0);
}

Path simulate_forward(const ModelConfig& cfg, double x0, double T, const Scheme& scheme,
                      std::uint64_t seed) {
    ForwardLaw law(cfg, scheme);
    Rng rng(seed, 0);
    Path path;
    path.seed = seed;
    path.scheme = scheme;
    simulate_forward_observe(law, x0, T, rng, [&](double t, double x) {
        path.times.push_back(t);
        path.values.push_back(x);
    });
    return path;
}

std::vector<double> sample_law(const ModelConfig& cfg, double x0, double t, int n_traj,
                               std::uint64_t seed, const Scheme& scheme) {
    ForwardLaw law(cfg, scheme);
    std::vector<double> out(static_cast<std::size_t>(n_traj));
    parallel_chunks(n_traj, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            double last = x0;
            simulate_forward_observe(law, x0, t, rng, [&](double, double x) { last = x; });
            out[static_cast<std::size_t>(i)] = last;
        }
    });
    return out;
}

MonotonePair simulate_monotone_pair(const ModelConfig& cfg, double x1, double x2, double T,
                                    const Scheme& scheme, std::uint64_t seed) {
    if (x1 > x2) throw std::invalid_argument("simulate_monotone_pair: need x1 <= x2");
    ForwardLaw law(cfg, scheme);
    Rng rng(seed, 0);

    MonotonePair pair;
    pair.low.seed = pair.high.seed = seed;
    pair.low.scheme = pair.high.scheme = scheme;
    double lo = x1, hi = x2, t = 0.0;
    auto record = [&](double time) {
        pair.low.times.push_back(time);
        pair.low.values.push_back(lo);
        pair.high.times.push_back(time);
        pair.high.values.push_back(hi);
    };
    record(0.0);

    double next_event =
        law.total_event_rate() > 0 ? rng.exponential(law.total_event_rate()) : T + 1.0;
    const double dt = scheme.dt;
    auto enforce_order = [&]() {
        if (lo > hi) {
            // Euler overshoot near a boundary; the exact dynamics coalesce here
            double mid = 0.5 * (lo + hi);
            lo = hi = mid;
            ++pair.order_fixes;
        }
    };
    while (t < T) {
        double target = std::min(T, next_event);
        while (t < target) {
            double h = std::min(dt, target - t);
            if (h <= 1e-12) {
                t = target;
                break;
            }
            double z = law.has_diffusion() ? rng.normal() : 0.0;
            lo = law.step_with_noise(lo, h, z);
            hi = law.step_with_noise(hi, h, z);
            enforce_order();
            t += h;
            record(t);
        }
        if (next_event <= T) {
            auto mark = law.draw_mark(rng);
            lo = law.apply_mark(lo, mark);
            hi = law.apply_mark(hi, mark);
            enforce_order();
            record(t);
            next_event += rng.exponential(law.total_event_rate());
        }
    }
    return pair;
}

}  // namespace wfdual
