#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wfdual/model_config.hpp"
#include "wfdual/rng.hpp"

namespace wfdual {

struct Scheme {
    double dt = 1e-3;         // diffusion / drift substep
    double eps_trunc = 1e-3;  // small-jump cutoff for density-type measures

    static Scheme defaults_for(const ModelConfig& cfg);
};

struct Path {
    std::vector<double> times;   // increasing, times[0] = 0
    std::vector<double> values;  // in [0,1]
    std::uint64_t seed = 0;
    Scheme scheme;
};

// Precomputed event machinery shared by a batch of forward trajectories.
// All jump intensities in the SDE are state independent, so event times come
// from a single exponential clock and marks from restricted samplers.
class ForwardLaw {
public:
    ForwardLaw(const ModelConfig& cfg, const Scheme& scheme);

    const ModelConfig& cfg() const { return *cfg_; }
    const Scheme& scheme() const { return scheme_; }
    double total_event_rate() const { return rate_total_; }
    double diffusion_coeff() const { return diff_coeff_; }

    // Advances state x over a step of length h with no events inside.  Uses one
    // Euler-Maruyama step with noise z when a diffusion part is present and a
    // 4th-order deterministic step otherwise (z ignored).
    double step_with_noise(double x, double h, double z) const;

    double advance_between_events(double x, double h, Rng& rng) const {
        return step_with_noise(x, h, has_diffusion() ? rng.normal() : 0.0);
    }

    // One event mark; the coupled simulators apply the same mark to both states.
    struct EventMark {
        int channel;  // 0 = lambda, 1 = mu, 2 = nu
        double r;
        double u;  // only for lambda marks
    };
    EventMark draw_mark(Rng& rng) const;
    double apply_mark(double x, const EventMark& mark) const;
    double apply_event(double x, Rng& rng) const { return apply_mark(x, draw_mark(rng)); }

    double drift(double x) const;

    bool has_diffusion() const { return diff_coeff_ > 0; }

private:
    const ModelConfig* cfg_;
    Scheme scheme_;
    RestrictedSampler lambda_big_;  // r^-2 lambda(dr) on (eps, 1]
    RestrictedSampler mu_pos_, mu_neg_;
    RestrictedSampler nu_pos_, nu_neg_;
    double rate_lambda_ = 0, rate_mu_ = 0, rate_nu_ = 0, rate_total_ = 0;
    double diff_coeff_ = 0;       // lambda({0}) + variance proxy of truncated small jumps
    double theta_a_eff_ = 0;      // theta_a + drift of truncated small nu(0,eps] jumps
    double theta_A_eff_ = 0;
    double mu_small_drift_ = 0;   // signed mass of truncated small mu jumps
};

// Jump-adapted scheme for the forward SDE; observer receives (t, x) after the
// initial point, every substep and every event.
template <class Observer>
void simulate_forward_observe(const ForwardLaw& law, double x0, double T, Rng& rng,
                              Observer&& observe);

Path simulate_forward(const ModelConfig& cfg, double x0, double T, const Scheme& scheme,
                      std::uint64_t seed);

// N independent endpoint draws of X_t, stream-seeded per trajectory index.
std::vector<double> sample_law(const ModelConfig& cfg, double x0, double t, int n_traj,
                               std::uint64_t seed, const Scheme& scheme);

// Shared-noise monotone coupling; returns pathwise-ordered trajectories and the
// number of order restorations the scheme had to apply (0 for pure-jump
// configs; rare boundary-step corrections otherwise).
struct MonotonePair {
    Path low;
    Path high;
    std::uint64_t order_fixes = 0;
};
MonotonePair simulate_monotone_pair(const ModelConfig& cfg, double x1, double x2, double T,
                                    const Scheme& scheme, std::uint64_t seed);

// --- template implementation ---

template <class Observer>
void simulate_forward_observe(const ForwardLaw& law, double x0, double T, Rng& rng,
                              Observer&& observe) {
    double x = x0;
    double t = 0.0;
    observe(t, x);
    double next_event = law.total_event_rate() > 0
                            ? rng.exponential(law.total_event_rate())
                            : T + 1.0;
    const double dt = law.scheme().dt;
    while (t < T) {
        double target = std::min(T, next_event);
        while (t < target) {
            double h = std::min(dt, target - t);
            if (h <= 1e-12) {
                t = target;
                break;
            }
            x = law.advance_between_events(x, h, rng);
            t += h;
            observe(t, x);
        }
        if (next_event <= T) {
            x = law.apply_event(x, rng);
            observe(t, x);
            next_event += rng.exponential(law.total_event_rate());
        }
    }
}

}  // namespace wfdual
