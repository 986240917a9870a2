#pragma once

#include <string>
#include <vector>

#include "wfdual/jump_measure.hpp"
#include "wfdual/selection.hpp"

namespace wfdual {

// Full parameter set of the forward SDE: reproduction measure lambda on [0,1],
// environment measures mu and nu on (-1,1), mutation rates, and the polynomial
// selection representation.
struct ModelConfig {
    JumpMeasure lambda = JumpMeasure::zero(MeasureDomain::unit_interval);
    JumpMeasure mu = JumpMeasure::zero(MeasureDomain::signed_unit);
    JumpMeasure nu = JumpMeasure::zero(MeasureDomain::signed_unit);
    double theta_a = 0.0;
    double theta_A = 0.0;
    SelectionRepr selection = SelectionRepr::neutral();

    const Sigma& sigma() const;

    // regime predicates
    bool bidirectional_mutation() const;        // theta_a + nu(0,1) > 0 and theta_A + nu(-1,0) > 0
    bool no_mutation_regime() const;            // nu = 0, theta = 0
    // the Siegmund dual construction additionally needs lambda({0}) = lambda({1}) = 0
    // and finite, positive integral of 1/r against lambda
    bool siegmund_admissible(std::string* why = nullptr) const;

    std::vector<std::string> validate() const;

    std::string canonical_text() const;         // stable serialization, also used for hashing
    std::uint64_t hash() const;

private:
    mutable bool sigma_built_ = false;
    mutable Sigma sigma_cache_;
};

// lambda_{n,k} = int z^(k-2) (1-z)^(n-k) lambda(dz), 0^0 = 1
double lambda_rate(const ModelConfig& cfg, int n, int k);

// the (sigma_{n,l}, m_{n,l}) pair of the dual rate matrix; sigma from mu, m from nu
struct SelMutRates {
    double sigma_nl = 0.0;
    double m_nl = 0.0;
};
SelMutRates sel_mut_rates(const ModelConfig& cfg, int n, int l);

// sign-resolved pieces, needed by the ancestral graph (branching direction and
// mutation colour depend on the sign of the environment jump)
double sigma_rate_signed(const ModelConfig& cfg, int n, int l, int sign);
double m_rate_signed(const ModelConfig& cfg, int n, int l, int sign);

// sigma(x) * x(1-x) from the representation; quotient exposed via cfg.sigma()
double sigma_eval_product(const ModelConfig& cfg, double x);

}  // namespace wfdual
