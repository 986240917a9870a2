#pragma once

#include <cstdint>
#include <vector>

#include "wfdual/forward_sim.hpp"
#include "wfdual/model_config.hpp"
#include "wfdual/rng.hpp"

namespace wfdual {

// Jump maps of the Siegmund dual SDE.
double median_jump(double y, double r, double u);  // reproduction mark
double env_jump(double y, double r);               // environment mark

struct AbsorptionStats {
    double p_low = 0, p_mid = 0, p_high = 0;   // mass in [0,a), [a,1-a], (1-a,1]
    double se_low = 0, se_mid = 0, se_high = 0;
    double a = 0;
    double t = 0;
    int n_traj = 0;
};

// Event machinery for the dual SDE; only valid in the no-mutation regime with
// lambda({0}) = lambda({1}) = 0 and a finite 1/r integral of lambda.
class SiegmundLaw {
public:
    SiegmundLaw(const ModelConfig& cfg, const Scheme& scheme);

    double total_event_rate() const { return rate_total_; }
    const Scheme& scheme() const { return scheme_; }

    struct EventMark {
        int channel;  // 0 = reproduction (median), 1 = environment
        double r;
        double u;
    };
    EventMark draw_mark(Rng& rng) const;
    double apply_mark(double y, const EventMark& mark) const;

    double drift(double y) const;              // -sigma(y) y (1-y) + small-jump restore
    double advance(double y, double h) const;  // RK4 drift step, clamped

private:
    const ModelConfig* cfg_;
    Scheme scheme_;
    RestrictedSampler lambda_big_, mu_pos_, mu_neg_;
    double rate_lambda_ = 0, rate_mu_ = 0, rate_total_ = 0;
    double small_drift_coef_ = 0;  // lambda mass on (0,eps], mean of dropped median jumps
    double mu_small_drift_ = 0;    // signed mu mass on the dropped band
};

template <class Observer>
void simulate_siegmund_observe(const SiegmundLaw& law, double y0, double T, Rng& rng,
                               Observer&& observe);

Path simulate_siegmund(const ModelConfig& cfg, double y0, double T, const Scheme& scheme,
                       std::uint64_t seed);

std::vector<double> sample_siegmund_law(const ModelConfig& cfg, double y0, double t, int n_traj,
                                        std::uint64_t seed, const Scheme& scheme);

AbsorptionStats absorption_stats(const ModelConfig& cfg, double y0, double t, double a,
                                 int n_traj, std::uint64_t seed, const Scheme& scheme);

struct DualityGap {
    double lhs = 0;  // P_x(X_t >= y) from the forward process
    double rhs = 0;  // P_y(Y_t <= x) from the Siegmund dual
    double joint_se = 0;
};
DualityGap siegmund_duality_gap(const ModelConfig& cfg, double x, double y, double t, int n_traj,
                                std::uint64_t seed, const Scheme& scheme);

// --- template implementation ---

template <class Observer>
void simulate_siegmund_observe(const SiegmundLaw& law, double y0, double T, Rng& rng,
                               Observer&& observe) {
    double y = y0;
    double t = 0.0;
    observe(t, y);
    double next_event =
        law.total_event_rate() > 0 ? rng.exponential(law.total_event_rate()) : T + 1.0;
    const double dt = law.scheme().dt;
    while (t < T) {
        double target = std::min(T, next_event);
        while (t < target) {
            double h = std::min(dt, target - t);
            if (h <= 1e-12) {
                t = target;
                break;
            }
            y = law.advance(y, h);
            t += h;
            observe(t, y);
        }
        if (next_event <= T) {
            y = law.apply_mark(y, law.draw_mark(rng));
            observe(t, y);
            next_event += rng.exponential(law.total_event_rate());
        }
    }
}

}  // namespace wfdual
