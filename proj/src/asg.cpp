#include "wfdual/asg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wfdual/parallel.hpp"

namespace wfdual {

namespace {

// cached lgamma of integers; event maps evaluate many binomials
double lg_int(int n) {
    static thread_local std::vector<double> cache{0.0, 0.0};  // lgamma(1), lgamma(2)
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        cache.push_back(cache.back() + std::log(static_cast<double>(m)));
    }
    return cache[static_cast<std::size_t>(n)];  // = lgamma(n+1) = log(n!)
}

double log_choose(int n, int k) {
    if (k < 0 || k > n) return -1e300;
    return lg_int(n) - lg_int(k) - lg_int(n - k);
}

double hyper_pmf(int group, int total, int taken, int in_group) {
    // P(in_group of `taken` uniform draws land in a group of size `group`)
    double lp = log_choose(group, in_group) + log_choose(total - group, taken - in_group) -
                log_choose(total, taken);
    return lp < -700 ? 0.0 : std::exp(lp);
}

}  // namespace

int AsgHistory::max_count() const {
    int m = n0;
    for (const auto& e : events) m = std::max(m, std::max(e.count_before, e.count_after));
    return m;
}

std::vector<double> binomial_pmf(int n, double x) {
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    if (x <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (x >= 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    // start at the mode and fill outward multiplicatively
    int mode = std::clamp(static_cast<int>((n + 1) * x), 0, n);
    double lmode = log_choose(n, mode) + mode * std::log(x) + (n - mode) * std::log1p(-x);
    pmf[static_cast<std::size_t>(mode)] = std::exp(lmode);
    double odds = x / (1.0 - x);
    for (int i = mode; i < n; ++i)
        pmf[static_cast<std::size_t>(i + 1)] =
            pmf[static_cast<std::size_t>(i)] * odds * (n - i) / (i + 1.0);
    for (int i = mode; i > 0; --i)
        pmf[static_cast<std::size_t>(i - 1)] =
            pmf[static_cast<std::size_t>(i)] / odds * i / (n - i + 1.0);
    return pmf;
}

double duality_function(double x, const CoeffState& v) {
    int L = v.dim() - 1;
    auto pmf = binomial_pmf(L, x);
    double h = 0.0;
    for (int i = 0; i <= L; ++i)
        h += v.coeffs[static_cast<std::size_t>(i)] * pmf[static_cast<std::size_t>(i)];
    return h;
}

// ---------------------------------------------------------------------------
// simulation

namespace {

std::vector<int> uniform_subset(int n, int k, Rng& rng) {
    // Floyd's algorithm; result sorted
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = n - k; j < n; ++j) {
        int t = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(j) + 1));
        if (std::find(out.begin(), out.end(), t) != out.end())
            out.push_back(j);
        else
            out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

AsgEvent make_event(const LineEvent& ch, int n, double time, Rng& rng) {
    AsgEvent ev;
    ev.time = time;
    ev.count_before = n;
    switch (ch.kind) {
        case LineEventKind::coalescence:
            ev.kind = AsgEvent::Kind::coalescence;
            ev.lines = uniform_subset(n, ch.k, rng);
            ev.count_after = n - ch.k + 1;
            break;
        case LineEventKind::selective_branch:
            ev.kind = AsgEvent::Kind::selective_branch;
            ev.l = ch.k;
            ev.lines = {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)))};
            ev.count_after = n + ch.k - 1;
            break;
        case LineEventKind::coord_branch_pos:
        case LineEventKind::coord_branch_neg:
            ev.kind = AsgEvent::Kind::coord_branch;
            ev.sign = ch.kind == LineEventKind::coord_branch_pos ? +1 : -1;
            ev.lines = uniform_subset(n, ch.k, rng);
            ev.count_after = n + ch.k;
            break;
        case LineEventKind::coord_mut_a:
        case LineEventKind::coord_mut_A:
            ev.kind = AsgEvent::Kind::coord_mutation;
            ev.sign = ch.kind == LineEventKind::coord_mut_a ? +1 : -1;
            ev.lines = uniform_subset(n, ch.k, rng);
            ev.count_after = n - ch.k;
            break;
        case LineEventKind::single_mut_a:
        case LineEventKind::single_mut_A:
            ev.kind = AsgEvent::Kind::single_mutation;
            ev.sign = ch.kind == LineEventKind::single_mut_a ? +1 : -1;
            ev.lines = {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)))};
            ev.count_after = n - 1;
            break;
    }
    return ev;
}

}  // namespace

AsgHistory simulate_asg(const ModelConfig& cfg, int n0, double T, std::uint64_t seed) {
    if (n0 < 1) throw std::invalid_argument("simulate_asg: n0 must be >= 1");
    RateTable table(cfg);
    Rng rng(seed, 0);
    AsgHistory h;
    h.n0 = n0;
    h.T = T;
    h.seed = seed;

    int n = n0;
    double t = 0.0;
    while (n > 0) {
        const RateRow& row = table.row(n);
        if (row.total_rate <= 0) break;
        t += rng.exponential(row.total_rate);
        if (t > T) break;
        double u = rng.uniform() * row.total_rate;
        double cum = 0.0;
        const LineEvent* chosen = &row.channels.back();
        for (const auto& ch : row.channels) {
            cum += ch.rate;
            if (u < cum) {
                chosen = &ch;
                break;
            }
        }
        h.events.push_back(make_event(*chosen, n, t, rng));
        n = h.events.back().count_after;
        if (h.events.size() >= kExplosionGuard) {
            h.aborted = true;
            break;
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// coefficient maps

CoeffState apply_event_map(const ModelConfig& cfg, const AsgEvent& ev, const CoeffState& v) {
    const int n = ev.count_before;
    const int np = ev.count_after;
    if (v.dim() != n + 1) throw std::invalid_argument("apply_event_map: dimension mismatch");
    CoeffState out;
    out.coeffs.assign(static_cast<std::size_t>(np) + 1, 0.0);
    auto V = [&](int i) { return v.coeffs[static_cast<std::size_t>(i)]; };

    switch (ev.kind) {
        case AsgEvent::Kind::coalescence: {
            const int k = static_cast<int>(ev.lines.size());
            for (int ip = 0; ip <= np; ++ip) {
                double pa = static_cast<double>(ip) / np;  // merged line is type a
                out.coeffs[static_cast<std::size_t>(ip)] =
                    (1.0 - pa) * V(ip) + pa * V(ip + k - 1);
            }
            break;
        }
        case AsgEvent::Kind::selective_branch: {
            const int l = ev.l;
            for (int ip = 0; ip <= np; ++ip) {
                double acc = 0.0;
                int c_lo = std::max(0, ip - (np - l));
                int c_hi = std::min(l, ip);
                for (int c = c_lo; c <= c_hi; ++c) {
                    double w = hyper_pmf(l, np, ip, c);
                    if (w == 0.0) continue;
                    double pc = cfg.selection.prob(l, c);
                    acc += w * (pc * V(ip - c + 1) + (1.0 - pc) * V(ip - c));
                }
                out.coeffs[static_cast<std::size_t>(ip)] = acc;
            }
            break;
        }
        case AsgEvent::Kind::coord_branch: {
            // post layout: n-k untouched lines and k (continuing, incoming) pairs.
            // With c type-a slots in a pair the pre-event line is type a iff
            // c >= 1 (jump r > 0) or c == 2 (r < 0).
            const int k = static_cast<int>(ev.lines.size());
            const int singles = n - k;
            for (int ip = 0; ip <= np; ++ip) {
                double log_denom = log_choose(np, ip);
                int h_lo = std::max(0, ip - 2 * k);
                int h_hi = std::min(singles, ip);
                for (int h = h_lo; h <= h_hi; ++h) {
                    int rest = ip - h;  // type-a slots among the 2k pair slots
                    for (int o = rest % 2; o <= std::min(k, rest); o += 2) {
                        int q = (rest - o) / 2;
                        if (o + q > k) continue;
                        double lw = log_choose(singles, h) + log_choose(k, o) +
                                    log_choose(k - o, q) + o * std::log(2.0) - log_denom;
                        if (lw < -700) continue;
                        int pre = ev.sign > 0 ? h + o + q : h + q;
                        out.coeffs[static_cast<std::size_t>(ip)] += std::exp(lw) * V(pre);
                    }
                }
            }
            break;
        }
        case AsgEvent::Kind::single_mutation: {
            int shift = ev.sign > 0 ? 1 : 0;
            for (int ip = 0; ip <= np; ++ip)
                out.coeffs[static_cast<std::size_t>(ip)] = V(ip + shift);
            break;
        }
        case AsgEvent::Kind::coord_mutation: {
            int shift = ev.sign > 0 ? static_cast<int>(ev.lines.size()) : 0;
            for (int ip = 0; ip <= np; ++ip)
                out.coeffs[static_cast<std::size_t>(ip)] = V(ip + shift);
            break;
        }
    }
    return out;
}

std::vector<CoeffState> coeff_process(const ModelConfig& cfg, const AsgHistory& h,
                                      const CoeffState& v0,
                                      const std::vector<double>& query_times) {
    if (v0.dim() != h.n0 + 1)
        throw std::invalid_argument("coeff_process: v0 dimension must be n0 + 1");
    std::vector<CoeffState> out;
    out.reserve(query_times.size());
    CoeffState v = v0;
    std::size_t next_event = 0;
    for (double q : query_times) {
        while (next_event < h.events.size() && h.events[next_event].time <= q) {
            v = apply_event_map(cfg, h.events[next_event], v);
            ++next_event;
        }
        out.push_back(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// enumeration oracle

namespace {

// Event map derived by brute force: every type assignment of the post-event
// lines, propagated through the single event by the literal rules.
CoeffState oracle_apply_event(const ModelConfig& cfg, const AsgEvent& ev, const CoeffState& v) {
    const int n = ev.count_before;
    const int np = ev.count_after;
    if (np > 16 || n > 16) throw std::invalid_argument("asg_oracle_poly: enumeration bound exceeded");
    CoeffState out;
    out.coeffs.assign(static_cast<std::size_t>(np) + 1, 0.0);
    std::vector<double> counts(static_cast<std::size_t>(np) + 1, 0.0);

    // post-event slot structure
    const auto& P = ev.lines;
    const int k = static_cast<int>(P.size());

    for (std::uint32_t mask = 0; mask < (1u << np); ++mask) {
        int ip = __builtin_popcount(mask);
        auto bit = [&](int slot) { return (mask >> slot) & 1u; };
        double score;
        switch (ev.kind) {
            case AsgEvent::Kind::coalescence: {
                // merged line sits at the survivor's slot (smallest participant;
                // nothing below it was erased)
                int merged_slot = P.front();
                int tau = static_cast<int>(bit(merged_slot));
                int pre = (ip - tau) + k * tau;
                score = v.coeffs[static_cast<std::size_t>(pre)];
                break;
            }
            case AsgEvent::Kind::selective_branch: {
                // branch group: the splitting line's slot plus the appended slots
                int c = static_cast<int>(bit(P.front()));
                for (int j = 0; j < ev.l - 1; ++j) c += static_cast<int>(bit(n + j));
                int rest = ip - c;
                double pc = cfg.selection.prob(ev.l, c);
                score = pc * v.coeffs[static_cast<std::size_t>(rest + 1)] +
                        (1.0 - pc) * v.coeffs[static_cast<std::size_t>(rest)];
                break;
            }
            case AsgEvent::Kind::coord_branch: {
                // pair j: continuing at P[j], incoming appended at slot n + j
                int pre = 0;
                for (int slot = 0; slot < n; ++slot) {
                    bool is_participant = std::find(P.begin(), P.end(), slot) != P.end();
                    if (!is_participant) pre += static_cast<int>(bit(slot));
                }
                for (int j = 0; j < k; ++j) {
                    int cont = static_cast<int>(bit(P[static_cast<std::size_t>(j)]));
                    int inc = static_cast<int>(bit(n + j));
                    pre += ev.sign > 0 ? (cont | inc) : (cont & inc);
                }
                score = v.coeffs[static_cast<std::size_t>(pre)];
                break;
            }
            case AsgEvent::Kind::single_mutation: {
                int pre = ip + (ev.sign > 0 ? 1 : 0);
                score = v.coeffs[static_cast<std::size_t>(pre)];
                break;
            }
            case AsgEvent::Kind::coord_mutation:
            default: {
                int pre = ip + (ev.sign > 0 ? k : 0);
                score = v.coeffs[static_cast<std::size_t>(pre)];
                break;
            }
        }
        out.coeffs[static_cast<std::size_t>(ip)] += score;
        counts[static_cast<std::size_t>(ip)] += 1.0;
    }
    for (int ip = 0; ip <= np; ++ip)
        out.coeffs[static_cast<std::size_t>(ip)] /= counts[static_cast<std::size_t>(ip)];
    return out;
}

}  // namespace

CoeffState oracle_coeff_final(const ModelConfig& cfg, const AsgHistory& h, const CoeffState& v0) {
    CoeffState v = v0;
    for (const auto& ev : h.events) v = oracle_apply_event(cfg, ev, v);
    return v;
}

double asg_oracle_poly(const ModelConfig& cfg, const AsgHistory& h, const CoeffState& v0,
                       double x) {
    return duality_function(x, oracle_coeff_final(cfg, h, v0));
}

// ---------------------------------------------------------------------------
// duality gap

BernsteinGap bernstein_duality_gap(const ModelConfig& cfg, double x, const CoeffState& v0,
                                   double t, int n_traj, std::uint64_t seed,
                                   const Scheme& scheme) {
    const int n0 = v0.dim() - 1;
    BernsteinGap g;

    auto fwd = sample_law(cfg, x, t, n_traj, seed, scheme);
    std::vector<double> lhs_vals(fwd.size());
    for (std::size_t i = 0; i < fwd.size(); ++i) lhs_vals[i] = duality_function(fwd[i], v0);

    std::vector<double> rhs_vals(static_cast<std::size_t>(n_traj), 0.0);
    std::vector<std::uint8_t> bad(static_cast<std::size_t>(n_traj), 0);
    parallel_chunks(n_traj, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            std::uint64_t s = seed ^ 0xA5C6B3D201u;
            std::uint64_t traj_seed = splitmix64(s) + static_cast<std::uint64_t>(i);
            AsgHistory h = simulate_asg(cfg, n0, t, traj_seed);
            if (h.aborted) {
                bad[static_cast<std::size_t>(i)] = 1;
                continue;
            }
            auto states = coeff_process(cfg, h, v0, {t});
            rhs_vals[static_cast<std::size_t>(i)] = duality_function(x, states[0]);
        }
    });

    double s1 = 0, s2 = 0;
    for (double v : lhs_vals) {
        s1 += v;
        s2 += v * v;
    }
    double n1 = static_cast<double>(lhs_vals.size());
    g.lhs = s1 / n1;
    double var1 = std::max(0.0, s2 / n1 - g.lhs * g.lhs);

    double r1 = 0, r2 = 0, n2 = 0;
    for (int i = 0; i < n_traj; ++i) {
        if (bad[static_cast<std::size_t>(i)]) {
            ++g.aborted;
            continue;
        }
        double v = rhs_vals[static_cast<std::size_t>(i)];
        r1 += v;
        r2 += v * v;
        n2 += 1;
    }
    g.rhs = n2 > 0 ? r1 / n2 : 0.0;
    double var2 = n2 > 0 ? std::max(0.0, r2 / n2 - g.rhs * g.rhs) : 0.0;
    g.joint_se = std::sqrt(var1 / n1 + (n2 > 0 ? var2 / n2 : 0.0));
    return g;
}

// ---------------------------------------------------------------------------
// grey-line coupling

namespace {

struct GreyLine {
    bool grey;
};

}  // namespace

CoupledAsg simulate_coupled_asg(const ModelConfig& cfg, int m, int n, double T,
                                std::uint64_t seed) {
    if (m < n || n < 1) throw std::invalid_argument("simulate_coupled_asg: need m >= n >= 1");
    RateTable table(cfg);
    Rng rng(seed, 0);

    CoupledAsg pair;
    pair.full.n0 = m;
    pair.full.T = T;
    pair.full.seed = seed;
    pair.restricted.n0 = n;
    pair.restricted.T = T;
    pair.restricted.seed = seed;

    std::vector<GreyLine> lines(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) lines[static_cast<std::size_t>(i)].grey = i >= n;  // last m-n grey

    auto sub_count = [&]() {
        int c = 0;
        for (const auto& ln : lines) c += ln.grey ? 0 : 1;
        return c;
    };
    auto sub_indices = [&](const std::vector<int>& slots) {
        // subsystem slot indices of the non-grey members of `slots`
        std::vector<int> out;
        for (int s : slots) {
            if (lines[static_cast<std::size_t>(s)].grey) continue;
            int idx = 0;
            for (int j = 0; j < s; ++j) idx += lines[static_cast<std::size_t>(j)].grey ? 0 : 1;
            out.push_back(idx);
        }
        return out;
    };

    double t = 0.0;
    while (!lines.empty()) {
        int nf = static_cast<int>(lines.size());
        const RateRow& row = table.row(nf);
        if (row.total_rate <= 0) break;
        t += rng.exponential(row.total_rate);
        if (t > T) break;
        double u = rng.uniform() * row.total_rate;
        double cum = 0.0;
        const LineEvent* chosen = &row.channels.back();
        for (const auto& ch : row.channels) {
            cum += ch.rate;
            if (u < cum) {
                chosen = &ch;
                break;
            }
        }
        AsgEvent ev = make_event(*chosen, nf, t, rng);
        int ns_before = sub_count();
        auto sub_lines = sub_indices(ev.lines);
        int ks = static_cast<int>(sub_lines.size());

        // update greyness / slots, then emit the restricted event if visible
        switch (ev.kind) {
            case AsgEvent::Kind::coalescence: {
                bool merged_grey = true;
                for (int s : ev.lines) merged_grey &= lines[static_cast<std::size_t>(s)].grey;
                lines[static_cast<std::size_t>(ev.lines.front())].grey = merged_grey;
                for (std::size_t j = ev.lines.size(); j-- > 1;)
                    lines.erase(lines.begin() + ev.lines[j]);
                if (ks >= 2) {
                    AsgEvent sub = ev;
                    sub.lines = sub_lines;
                    sub.count_before = ns_before;
                    sub.count_after = ns_before - ks + 1;
                    pair.restricted.events.push_back(std::move(sub));
                }
                break;
            }
            case AsgEvent::Kind::selective_branch: {
                bool g = lines[static_cast<std::size_t>(ev.lines.front())].grey;
                for (int j = 0; j < ev.l - 1; ++j) lines.push_back({g});
                if (!g) {
                    AsgEvent sub = ev;
                    sub.lines = sub_lines;
                    sub.count_before = ns_before;
                    sub.count_after = ns_before + ev.l - 1;
                    pair.restricted.events.push_back(std::move(sub));
                }
                break;
            }
            case AsgEvent::Kind::coord_branch: {
                for (int s : ev.lines) lines.push_back({lines[static_cast<std::size_t>(s)].grey});
                if (ks >= 1) {
                    AsgEvent sub = ev;
                    sub.lines = sub_lines;
                    sub.count_before = ns_before;
                    sub.count_after = ns_before + ks;
                    pair.restricted.events.push_back(std::move(sub));
                }
                break;
            }
            case AsgEvent::Kind::single_mutation: {
                bool g = lines[static_cast<std::size_t>(ev.lines.front())].grey;
                lines.erase(lines.begin() + ev.lines.front());
                if (!g) {
                    AsgEvent sub = ev;
                    sub.lines = sub_lines;
                    sub.count_before = ns_before;
                    sub.count_after = ns_before - 1;
                    pair.restricted.events.push_back(std::move(sub));
                }
                break;
            }
            case AsgEvent::Kind::coord_mutation: {
                for (std::size_t j = ev.lines.size(); j-- > 0;)
                    lines.erase(lines.begin() + ev.lines[j]);
                if (ks >= 1) {
                    AsgEvent sub = ev;
                    sub.lines = sub_lines;
                    sub.count_before = ns_before;
                    sub.count_after = ns_before - ks;
                    pair.restricted.events.push_back(std::move(sub));
                }
                break;
            }
        }
        pair.full.events.push_back(std::move(ev));
        if (pair.full.events.size() >= kExplosionGuard) {
            pair.full.aborted = pair.restricted.aborted = true;
            break;
        }
    }
    return pair;
}

AbsorbedCoeff asg_u_infinity(const ModelConfig& cfg, int n0, double t_max, std::uint64_t seed) {
    AsgHistory h = simulate_asg(cfg, n0, t_max, seed);
    AbsorbedCoeff out;
    if (h.aborted || h.final_count() != 0) return out;
    auto states = coeff_process(cfg, h, CoeffState::unit(n0), {t_max});
    out.absorbed = true;
    out.u = states[0].coeffs[0];
    return out;
}

}  // namespace wfdual
