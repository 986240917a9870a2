#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfdual/rng.hpp"

namespace wfdual {

// Finite measure given by point atoms plus one optional scaled Beta density
// c * z^(a-1) * (1-z)^(b-1).  Two domains are supported: [0,1] (reproduction
// measures) and (-1,1) (selection / mutation environment measures).  For the
// signed domain the density part lives on (0,1); negative mass is expressed
// through atoms.
struct BetaComponent {
    double c = 0.0;  // scale, >= 0
    double a = 1.0;  // > 0
    double b = 1.0;  // > 0
};

enum class MeasureDomain { unit_interval, signed_unit };

struct JumpMeasure {
    MeasureDomain domain = MeasureDomain::unit_interval;
    std::vector<std::pair<double, double>> atoms;  // (location, mass >= 0)
    std::optional<BetaComponent> beta;

    static JumpMeasure zero(MeasureDomain d) { return JumpMeasure{d, {}, {}}; }

    static JumpMeasure atom_at(MeasureDomain d, double loc, double mass) {
        return JumpMeasure{d, {{loc, mass}}, {}};
    }

    bool is_zero() const;
    double atom_mass_at(double loc) const;
    double total_mass() const;

    // Mass of the interval between lo and hi with configurable endpoint
    // inclusion.  The Beta part is integrated in closed form (regularized
    // incomplete beta).
    double mass(double lo, double hi, bool closed_lo, bool closed_hi) const;

    // integral of |z|^p (1-|z|)^q d|m| restricted to the positive (sign=+1) or
    // negative (sign=-1) part of the domain, with the 0^0 = 1 convention at
    // atoms sitting on the boundary of the domain.
    double abs_moment(double p, double q, int sign) const;

    // integral of f(z) dm over atoms plus density, with f supplied; used for
    // the handful of non-moment integrals (log kernels, Laplace exponents).
    template <class F>
    double integrate(F&& f) const;

    // Validation messages; empty if the measure is well formed.
    std::vector<std::string> validate(const std::string& name) const;
};

// One-sided restricted sampler for event marks.  Samples |r| from the measure
// conditioned on |r| > threshold with weight |r|^(-weight_power); atoms and the
// Beta density are both handled, the density by exact rejection.
class RestrictedSampler {
public:
    RestrictedSampler() = default;
    // sign: +1 samples from m restricted to (threshold, 1), -1 from the
    // negative part (locations in (-1,-threshold), returned as negative r).
    RestrictedSampler(const JumpMeasure& m, double threshold, double weight_power, int sign);

    double total_rate() const { return total_rate_; }
    bool empty() const { return total_rate_ <= 0.0; }
    double sample(Rng& rng) const;  // returns r with correct sign

private:
    struct DensityPart {
        double c = 0, a = 0, b = 0;   // restricted density c r^(a-1-w) (1-r)^(b-1)
        double alpha = 0;             // net power of r in the proposal: a-1-w
        double rate = 0;
        double lo = 0;
        bool propose_in_r = true;     // proposal ~ r^alpha vs ~ (1-r)^(b-1)
    };

    std::vector<double> atom_vals_;
    std::vector<double> atom_weights_;
    double atom_rate_ = 0.0;
    std::optional<DensityPart> dens_;
    double total_rate_ = 0.0;
    int sign_ = 1;
};

double log_beta(double a, double b);
double beta_function(double a, double b);

template <class F>
double JumpMeasure::integrate(F&& f) const {
    double total = 0.0;
    for (const auto& [loc, mass] : atoms) total += mass * f(loc);
    if (beta && beta->c > 0) total += integrate_beta_density(*beta, std::forward<F>(f));
    return total;
}

// Adaptive integral of f against the density c z^(a-1)(1-z)^(b-1) on (0,1);
// declared here so integrate() can stay in the header.
double integrate_beta_density(const BetaComponent& bc, const std::function<double(double)>& f);

}  // namespace wfdual
