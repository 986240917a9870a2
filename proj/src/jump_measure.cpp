#include "wfdual/jump_measure.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wfdual {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_function(double a, double b) { return std::exp(log_beta(a, b)); }

double integrate_beta_density(const BetaComponent& bc, const std::function<double(double)>& f) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto g = [&](double z) {
        return bc.c * std::pow(z, bc.a - 1.0) * std::pow(1.0 - z, bc.b - 1.0) * f(z);
    };
    return integrator.integrate(g, 0.0, 1.0);
}

bool JumpMeasure::is_zero() const {
    if (beta && beta->c > 0) return false;
    for (const auto& [loc, mass] : atoms)
        if (mass > 0) return false;
    return true;
}

double JumpMeasure::atom_mass_at(double loc) const {
    double m = 0.0;
    for (const auto& [l, mass] : atoms)
        if (l == loc) m += mass;
    return m;
}

double JumpMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& [loc, mass] : atoms) m += mass;
    if (beta && beta->c > 0) m += beta->c * beta_function(beta->a, beta->b);
    return m;
}

double JumpMeasure::mass(double lo, double hi, bool closed_lo, bool closed_hi) const {
    const double dom_lo = domain == MeasureDomain::unit_interval ? 0.0 : -1.0;
    const double dom_hi = 1.0;
    if (lo < dom_lo - 1e-15 || hi > dom_hi + 1e-15 || lo > hi)
        throw std::invalid_argument("measure_mass: interval outside measure domain");
    double m = 0.0;
    for (const auto& [l, mass] : atoms) {
        bool in = (l > lo && l < hi) || (closed_lo && l == lo) || (closed_hi && l == hi);
        if (in) m += mass;
    }
    if (beta && beta->c > 0) {
        // density lives on (0,1) in either domain; endpoints carry no density mass
        double a = std::clamp(lo, 0.0, 1.0);
        double b = std::clamp(hi, 0.0, 1.0);
        if (b > a) {
            double full = beta_function(beta->a, beta->b);
            double frac = boost::math::ibeta(beta->a, beta->b, b) -
                          boost::math::ibeta(beta->a, beta->b, a);
            m += beta->c * full * frac;
        }
    }
    return m;
}

double JumpMeasure::abs_moment(double p, double q, int sign) const {
    auto pow00 = [](double base, double e) {
        // 0^0 = 1 convention used throughout the dual rate matrix
        if (e == 0.0) return 1.0;
        return std::pow(base, e);
    };
    double m = 0.0;
    for (const auto& [loc, mass] : atoms) {
        if (sign > 0 && loc < 0) continue;
        if (sign < 0 && loc >= 0) continue;
        double z = std::abs(loc);
        m += mass * pow00(z, p) * pow00(1.0 - z, q);
    }
    if (sign > 0 && beta && beta->c > 0) {
        // closed form: c * B(a+p, b+q), valid when both shifted exponents are positive
        double aa = beta->a + p;
        double bb = beta->b + q;
        if (aa <= 0 || bb <= 0)
            throw std::domain_error("abs_moment: divergent Beta moment");
        m += beta->c * beta_function(aa, bb);
    }
    return m;
}

std::vector<std::string> JumpMeasure::validate(const std::string& name) const {
    std::vector<std::string> out;
    const double dom_lo = domain == MeasureDomain::unit_interval ? 0.0 : -1.0;
    for (const auto& [loc, mass] : atoms) {
        if (mass < 0) out.push_back(name + ": atom mass must be >= 0");
        bool inside = domain == MeasureDomain::unit_interval
                          ? (loc >= dom_lo && loc <= 1.0)
                          : (loc > -1.0 && loc < 1.0);
        if (!inside) out.push_back(name + ": atom location outside domain");
        if (domain == MeasureDomain::signed_unit && loc == 0.0 && mass > 0)
            out.push_back(name + "({0}) must be 0");
    }
    if (beta) {
        if (beta->c < 0) out.push_back(name + ": beta_density scale c must be >= 0");
        if (beta->a <= 0 || beta->b <= 0)
            out.push_back(name + ": beta_density exponents a,b must be > 0");
    }
    return out;
}

RestrictedSampler::RestrictedSampler(const JumpMeasure& m, double threshold, double weight_power,
                                     int sign)
    : sign_(sign) {
    for (const auto& [loc, mass] : m.atoms) {
        if (mass <= 0) continue;
        if (sign > 0 && loc <= threshold) continue;
        if (sign < 0 && loc >= -threshold) continue;
        double z = std::abs(loc);
        atom_vals_.push_back(z);
        atom_weights_.push_back(mass * std::pow(z, -weight_power));
        atom_rate_ += atom_weights_.back();
    }
    if (sign > 0 && m.beta && m.beta->c > 0) {
        DensityPart d;
        d.c = m.beta->c;
        d.a = m.beta->a;
        d.b = m.beta->b;
        d.alpha = m.beta->a - 1.0 - weight_power;
        d.lo = std::max(threshold, 0.0);
        boost::math::quadrature::tanh_sinh<double> integrator;
        d.rate = integrator.integrate(
            [&](double r) { return d.c * std::pow(r, d.alpha) * std::pow(1.0 - r, d.b - 1.0); },
            d.lo, 1.0);
        d.propose_in_r = d.b >= 1.0;
        if (d.rate > 0) dens_ = d;
    }
    total_rate_ = atom_rate_ + (dens_ ? dens_->rate : 0.0);
}

double RestrictedSampler::sample(Rng& rng) const {
    double u = rng.uniform() * total_rate_;
    if (u < atom_rate_ || !dens_) {
        double cum = 0.0;
        for (std::size_t i = 0; i < atom_vals_.size(); ++i) {
            cum += atom_weights_[i];
            if (u < cum || i + 1 == atom_vals_.size()) return sign_ * atom_vals_[i];
        }
    }
    const DensityPart& d = *dens_;
    for (;;) {
        double r;
        double accept;
        if (d.propose_in_r) {
            // proposal density ~ r^alpha on (lo,1); accept with (1-r)^(b-1) <= 1
            double v = rng.uniform();
            if (d.alpha == -1.0) {
                r = d.lo * std::pow(1.0 / d.lo, v);
            } else {
                double p = d.alpha + 1.0;
                double lo_p = std::pow(d.lo, p);
                r = std::pow(lo_p + v * (1.0 - lo_p), 1.0 / p);
            }
            accept = std::pow(1.0 - r, d.b - 1.0);
        } else {
            // b < 1: proposal ~ (1-r)^(b-1) on (lo,1); accept with (r/lo)^alpha <= 1
            double v = rng.uniform();
            double w = std::pow(1.0 - d.lo, d.b);
            r = 1.0 - std::pow((1.0 - v) * w, 1.0 / d.b);
            accept = d.alpha <= 0 ? std::pow(r / d.lo, d.alpha) : std::pow(r, d.alpha);
        }
        if (rng.uniform() <= accept) return sign_ * r;
    }
}

}  // namespace wfdual
