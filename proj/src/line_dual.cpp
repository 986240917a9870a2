#include "wfdual/line_dual.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wfdual/parallel.hpp"

namespace wfdual {

namespace {

double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// C(n,k) * integral of |z|^(k-e2) (1-|z|)^(n-k) against the measure part,
// assembled in log space so large n stays finite.
double choose_times_atom(int n, int k, double loc_abs, double mass, int p, int q) {
    if (mass <= 0) return 0.0;
    double lg = log_binom(n, k);
    double zp;
    if (p == 0)
        zp = 0.0;
    else if (loc_abs == 0.0)
        return 0.0;
    else
        zp = p * std::log(loc_abs);
    double zq;
    if (q == 0)
        zq = 0.0;
    else if (loc_abs == 1.0)
        return 0.0;
    else
        zq = q * std::log1p(-loc_abs);
    return mass * std::exp(lg + zp + zq);
}

double choose_times_beta(int n, int k, const BetaComponent& bc, int p, int q) {
    if (bc.c <= 0) return 0.0;
    double aa = bc.a + p, bb = bc.b + q;
    return bc.c * std::exp(log_binom(n, k) + log_beta(aa, bb));
}

// C(n,k) * m.abs_moment(p, q, sign), overflow-safe
double choose_times_moment(const JumpMeasure& m, int n, int k, int p, int q, int sign) {
    double total = 0.0;
    for (const auto& [loc, mass] : m.atoms) {
        if (sign > 0 && loc < 0) continue;
        if (sign < 0 && loc >= 0) continue;
        total += choose_times_atom(n, k, std::abs(loc), mass, p, q);
    }
    if (sign > 0 && m.beta) total += choose_times_beta(n, k, *m.beta, p, q);
    return total;
}

}  // namespace

RateRow generator_row(const ModelConfig& cfg, int n) {
    RateRow row;
    row.from = n;
    if (n <= 0) return row;  // 0 is absorbing

    auto push = [&](LineEventKind kind, int k, double rate) {
        if (rate > 0) row.channels.push_back({kind, k, rate});
    };

    // coalescences: n -> n-k+1 at C(n,k) lambda_{n,k}
    for (int k = 2; k <= n; ++k)
        push(LineEventKind::coalescence, k, choose_times_moment(cfg.lambda, n, k, k - 2, n - k, +1));

    // selective branching: n -> n+l-1 at n beta_l
    for (int l = 2; l <= cfg.selection.kappa; ++l)
        push(LineEventKind::selective_branch, l, n * cfg.selection.beta_rate(l));

    // coordinated branching: n -> n+k at C(n,k) sigma_{n,k}, split by jump sign
    for (int k = 1; k <= n; ++k) {
        push(LineEventKind::coord_branch_pos, k, choose_times_moment(cfg.mu, n, k, k - 1, n - k, +1));
        push(LineEventKind::coord_branch_neg, k, choose_times_moment(cfg.mu, n, k, k - 1, n - k, -1));
    }

    // coordinated mutation: n -> n-k at C(n,k) m_{n,k}, colour by jump sign
    for (int k = 1; k <= n; ++k) {
        push(LineEventKind::coord_mut_a, k, choose_times_moment(cfg.nu, n, k, k - 1, n - k, +1));
        push(LineEventKind::coord_mut_A, k, choose_times_moment(cfg.nu, n, k, k - 1, n - k, -1));
    }

    // single mutations: n -> n-1 at n theta
    push(LineEventKind::single_mut_a, 1, n * cfg.theta_a);
    push(LineEventKind::single_mut_A, 1, n * cfg.theta_A);

    // merged (to, rate) view
    std::map<int, double> merged;
    for (const auto& ev : row.channels) {
        int to = n;
        switch (ev.kind) {
            case LineEventKind::coalescence: to = n - ev.k + 1; break;
            case LineEventKind::selective_branch: to = n + ev.k - 1; break;
            case LineEventKind::coord_branch_pos:
            case LineEventKind::coord_branch_neg: to = n + ev.k; break;
            case LineEventKind::coord_mut_a:
            case LineEventKind::coord_mut_A: to = n - ev.k; break;
            case LineEventKind::single_mut_a:
            case LineEventKind::single_mut_A: to = n - 1; break;
        }
        if (to != n) merged[to] += ev.rate;
        row.total_rate += ev.rate;
    }
    row.entries.assign(merged.begin(), merged.end());
    return row;
}

const RateRow& RateTable::row(int n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, generator_row(*cfg_, n)).first;
    return it->second;
}

double drift_value(const ModelConfig& cfg, int n) {
    RateRow row = generator_row(cfg, n);
    double drift = 0.0;
    for (const auto& [to, rate] : row.entries) drift += rate * (to - n);
    return drift;
}

int simulate_line_count(RateTable& table, int n0, double t, Rng& rng, bool* aborted) {
    if (aborted) *aborted = false;
    int n = n0;
    double clock = 0.0;
    std::uint64_t events = 0;
    while (n > 0) {
        const RateRow& row = table.row(n);
        if (row.total_rate <= 0) break;
        clock += rng.exponential(row.total_rate);
        if (clock > t) break;
        double u = rng.uniform() * row.total_rate;
        double cum = 0.0;
        int to = n;
        for (const auto& [target, rate] : row.entries) {
            cum += rate;
            if (u < cum) {
                to = target;
                break;
            }
        }
        if (to == n && !row.entries.empty()) to = row.entries.back().first;
        n = to;
        if (++events >= kExplosionGuard) {
            if (aborted) *aborted = true;
            break;
        }
    }
    return n;
}

SurvivalStats survival_stats(const ModelConfig& cfg, int n0, double t, int n_traj,
                             std::uint64_t seed) {
    std::vector<int> ends(static_cast<std::size_t>(n_traj));
    std::vector<std::uint8_t> bad(static_cast<std::size_t>(n_traj), 0);
    parallel_chunks(n_traj, [&](int begin, int end) {
        RateTable table(cfg);
        for (int i = begin; i < end; ++i) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            bool aborted = false;
            ends[static_cast<std::size_t>(i)] = simulate_line_count(table, n0, t, rng, &aborted);
            bad[static_cast<std::size_t>(i)] = aborted ? 1 : 0;
        }
    });

    SurvivalStats s;
    s.n_traj = n_traj;
    double sum = 0, sum2 = 0, alive = 0;
    for (int i = 0; i < n_traj; ++i) {
        if (bad[static_cast<std::size_t>(i)]) {
            ++s.aborted;
            continue;
        }
        double L = ends[static_cast<std::size_t>(i)];
        sum += L;
        sum2 += L * L;
        alive += (L != 0) ? 1 : 0;
    }
    int good = n_traj - s.aborted;
    if (good > 0) {
        s.p_alive = alive / good;
        s.mean_L = sum / good;
        s.se_alive = std::sqrt(std::max(0.0, s.p_alive * (1 - s.p_alive) / good));
        double var = std::max(0.0, sum2 / good - s.mean_L * s.mean_L);
        s.se_mean = std::sqrt(var / good);
    }
    return s;
}

std::vector<El1Point> sup_el1_scan(const ModelConfig& cfg, int n_max, int n_traj,
                                   std::uint64_t seed) {
    std::vector<El1Point> out;
    double running = 0.0;
    for (int n = 2; n <= n_max; n *= 2) {
        SurvivalStats s = survival_stats(cfg, n, 1.0, n_traj, seed + static_cast<std::uint64_t>(n));
        running = std::max(running, s.mean_L);
        out.push_back({n, s.mean_L, s.se_mean, running});
    }
    return out;
}

}  // namespace wfdual
