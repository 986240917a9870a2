#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wfdual/asg.hpp"
#include "wfdual/forward_sim.hpp"
#include "wfdual/model_config.hpp"
#include "wfdual/siegmund_sim.hpp"

namespace wfdual {

// C = nu(-1,1) + theta_a + theta_A - mu(-1,1) - sum_l beta_l (l-1)
double rate_C(const ModelConfig& cfg);

// Boundary coexistence exponents; -inf when the reproduction integral diverges.
struct CoexistenceConstants {
    double C0;
    double C1;
};
CoexistenceConstants coexistence_constants(const ModelConfig& cfg);

// limsup_{x->0} log Lambda([0,x)) / log x, closed form on the representation:
// 0 with an atom at 0, the Beta exponent a otherwise, +inf if no mass near 0.
double tail_exponent(const JumpMeasure& lambda);

// Open-set-recurrence measure predicate: Lambda([0, 1/2 + eps]) > 0 for all eps.
bool recurrence_predicate(const JumpMeasure& lambda);

// smallest gamma-grid exponent with drift(n) <= -n^gamma for all n in [n0, n_hi]
struct DriftExponent {
    double gamma = 0;
    int n0 = 0;
    bool found = false;
};
DriftExponent drift_exponent_scan(const ModelConfig& cfg, int n_hi);

enum class Metric { w1, wp, radon, lp };

struct BoundRow {
    double x = 0, t = 0;
    std::string metric;
    double empirical = 0, se = 0, bound = 0, bound_se = 0;
    std::string verdict;  // pass / fail
};

struct BoundReport {
    std::vector<BoundRow> rows;
    double C = 0;        // decay rate used in the bounds
    double K_hat = 0;    // scanned sup E_n[L_1] times safety factor (mode A radon bound)
    int mode = 0;        // 1 = mutation regime (C > 0), 2 = coexistence regime
    bool all_pass() const;
};

// Distance-to-stationarity verdicts.  Mode is picked from the config: C > 0
// uses the explicit 3 e^{-Ct/3} / 2K e^{-Ct} bounds; otherwise the coexistence
// regime assembles the dual-side bound from absorption statistics.
BoundReport stationarity_report(const ModelConfig& cfg, const std::vector<double>& x_grid,
                                const std::vector<double>& t_grid, int n_traj, Metric metric,
                                double wp_p, std::uint64_t seed, const Scheme& scheme);

struct ReldualsResult {
    double sup_gap = 0;
    double bound = 0;
    double se_at_sup = 0;
    std::vector<BoundRow> rows;  // per grid point, metric = "relduals"
};

// Two-dual comparison: P_F(Y_t <= x) against E_{v_F,n}[V_t(beta_x(L_t))].
ReldualsResult relduals_gap(const ModelConfig& cfg, const std::function<double(double)>& F,
                            double f_prime_sup, int n, const std::vector<double>& x_grid,
                            const std::vector<double>& t_grid, int n_traj, std::uint64_t seed,
                            const Scheme& scheme);

struct RecurrenceTarget {
    double center;
    double eta;
};

struct RecurrenceRow {
    double center, eta, window_start, window_end;
    double frequency;
    int n_traj;
};

struct RecurrenceScan {
    std::vector<RecurrenceRow> rows;
    std::uint64_t post_first_jump_visits = 0;  // trajectories entering any target after their first event
    bool measure_predicate = false;
};

RecurrenceScan recurrence_scan(const ModelConfig& cfg, double x0,
                               const std::vector<RecurrenceTarget>& targets, double window_len,
                               int n_windows, int n_traj, std::uint64_t seed, const Scheme& scheme);

struct LevyDriftReport {
    double e_l1_closed_form = 0;  // E[L_1^b] from the representation
    double e_l1_mc = 0;
    double e_l1_mc_se = 0;
    std::vector<std::pair<double, double>> psi;   // (lambda, psi_b(lambda)); NaN if divergent
    std::vector<std::pair<double, double>> inf_quantiles;  // (q, quantile of inf_{s<=T} L_s)
    double horizon = 0;
};

LevyDriftReport levy_drift_check(const ModelConfig& cfg, double b,
                                 const std::vector<double>& lambda_grid, int n_traj,
                                 std::uint64_t seed, double horizon, double eps_trunc);

// least squares fit of log(y) = a + slope * t; points with y <= 0 are skipped
struct LogFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    int n_used = 0;
};
LogFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace wfdual
