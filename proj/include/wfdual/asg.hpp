#pragma once

#include <cstdint>
#include <vector>

#include "wfdual/forward_sim.hpp"
#include "wfdual/line_dual.hpp"
#include "wfdual/model_config.hpp"
#include "wfdual/rng.hpp"

namespace wfdual {

// One transition of the ancestral selection graph.  `lines` holds the
// participating pre-event slot indices (sorted).  Layout convention: a
// coalescence erases all participants except the smallest (the survivor);
// branchings append the new lines at the end (for coordinated branchings the
// j-th hit line's incoming partner sits at slot count_before + j); mutations
// erase the hit slots.  Slots compact preserving order.
struct AsgEvent {
    enum class Kind : std::uint8_t {
        coalescence,
        selective_branch,
        coord_branch,
        single_mutation,
        coord_mutation,
    };

    double time = 0;
    Kind kind = Kind::coalescence;
    std::vector<int> lines;
    int l = 0;       // group size for selective_branch
    int sign = +1;   // coord_branch: jump sign; mutations: +1 = type a, -1 = type A
    int count_before = 0;
    int count_after = 0;
};

struct AsgHistory {
    int n0 = 0;
    double T = 0;
    std::uint64_t seed = 0;
    bool aborted = false;  // hit the event explosion guard
    std::vector<AsgEvent> events;

    int final_count() const { return events.empty() ? n0 : events.back().count_after; }
    int max_count() const;
};

// Bernstein dual state: dim = L + 1 coefficients.
struct CoeffState {
    std::vector<double> coeffs;
    int dim() const { return static_cast<int>(coeffs.size()); }

    static CoeffState unit(int k) {  // e_k in R^(k+1)
        CoeffState v;
        v.coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
        v.coeffs.back() = 1.0;
        return v;
    }
};

// H(x, v) = sum_i v_i C(L,i) x^i (1-x)^(L-i), L = dim-1
double duality_function(double x, const CoeffState& v);
std::vector<double> binomial_pmf(int n, double x);

AsgHistory simulate_asg(const ModelConfig& cfg, int n0, double T, std::uint64_t seed);

// Applies the event-local linear map to the coefficient vector (closed-form
// hypergeometric weights).
CoeffState apply_event_map(const ModelConfig& cfg, const AsgEvent& ev, const CoeffState& v);

// Coefficient process V_t at the query times (ascending).
std::vector<CoeffState> coeff_process(const ModelConfig& cfg, const AsgHistory& h,
                                      const CoeffState& v0, const std::vector<double>& query_times);

// Independent oracle: per event, enumerates every type assignment of the
// post-event lines and applies the propagation rules literally (rule (b) in
// expectation), with uniform binomial weighting of the assignments.  Requires
// the line count to stay <= 16 along the history.
double asg_oracle_poly(const ModelConfig& cfg, const AsgHistory& h, const CoeffState& v0,
                       double x);
CoeffState oracle_coeff_final(const ModelConfig& cfg, const AsgHistory& h, const CoeffState& v0);

struct BernsteinGap {
    double lhs = 0, rhs = 0, joint_se = 0;
    int aborted = 0;
};
BernsteinGap bernstein_duality_gap(const ModelConfig& cfg, double x, const CoeffState& v0,
                                   double t, int n_traj, std::uint64_t seed, const Scheme& scheme);

// Grey-line restriction coupling: one ancestral graph from m lines whose
// non-grey subsystem is distributed as an ancestral graph from n lines.
struct CoupledAsg {
    AsgHistory full;        // m initial lines
    AsgHistory restricted;  // the embedded n-line subsystem
};
CoupledAsg simulate_coupled_asg(const ModelConfig& cfg, int m, int n, double T,
                                std::uint64_t seed);

// U_infinity extraction: runs until L = 0 or t_max; flagged if not absorbed.
struct AbsorbedCoeff {
    double u = 0;
    bool absorbed = false;
};
AbsorbedCoeff asg_u_infinity(const ModelConfig& cfg, int n0, double t_max, std::uint64_t seed);

}  // namespace wfdual
