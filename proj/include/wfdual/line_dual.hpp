#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wfdual/model_config.hpp"
#include "wfdual/rng.hpp"

namespace wfdual {

// One row of the line-counting generator, split by event channel so the
// ancestral-graph simulator can reuse it.  kind encodes what happens to the
// hit set; k is the number of participating lines.
enum class LineEventKind : std::uint8_t {
    coalescence,        // n -> n-k+1, k >= 2 (includes the Kingman atom via k=2)
    selective_branch,   // n -> n+l-1 (k stores l)
    coord_branch_pos,   // n -> n+k, environment jump r > 0
    coord_branch_neg,   // n -> n+k, environment jump r < 0
    coord_mut_a,        // n -> n-k, coordinated mutation to type a (r > 0)
    coord_mut_A,        // n -> n-k, r < 0
    single_mut_a,       // n -> n-1
    single_mut_A,       // n -> n-1
};

struct LineEvent {
    LineEventKind kind;
    int k;        // participants (l for selective_branch)
    double rate;  // channel rate C(n,k) * per-mark rate
};

struct RateRow {
    int from = 0;
    std::vector<LineEvent> channels;                 // all positive-rate channels
    std::vector<std::pair<int, double>> entries;     // merged (to, rate), to != from
    double total_rate = 0.0;
};

// Memoizing row builder.  Instances are cheap; simulation workers hold their own.
class RateTable {
public:
    explicit RateTable(const ModelConfig& cfg) : cfg_(&cfg) {}
    const RateRow& row(int n);

private:
    const ModelConfig* cfg_;
    std::unordered_map<int, RateRow> cache_;
};

RateRow generator_row(const ModelConfig& cfg, int n);

// sum over the row of rate * (to - n); Lemma-style drift diagnostic
double drift_value(const ModelConfig& cfg, int n);

struct SurvivalStats {
    double p_alive = 0.0;
    double mean_L = 0.0;
    double se_alive = 0.0;
    double se_mean = 0.0;
    int n_traj = 0;
    int aborted = 0;  // trajectories that hit the event explosion guard
};

inline constexpr std::uint64_t kExplosionGuard = 1000000;

// Exact event-by-event CTMC simulation of L started from n0, observed at time t.
SurvivalStats survival_stats(const ModelConfig& cfg, int n0, double t, int n_traj,
                             std::uint64_t seed);

struct El1Point {
    int n;
    double mean_L1;
    double se;
    double running_max;
};

// E_n[L_1] on a geometric n-grid up to n_max (n = 2, 4, 8, ...).
std::vector<El1Point> sup_el1_scan(const ModelConfig& cfg, int n_max, int n_traj,
                                   std::uint64_t seed);

// single trajectory endpoint; exposed for the ancestral-graph cross checks
int simulate_line_count(RateTable& table, int n0, double t, Rng& rng, bool* aborted = nullptr);

}  // namespace wfdual
