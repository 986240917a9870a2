#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_configs.hpp"
#include "wfdual/forward_sim.hpp"

using namespace wfdual;

TEST_CASE("absorbing boundaries without inward flow") {
    auto cfg = testcfg::kingman_selection(0.8);  // no mutation, no nu
    Scheme s = Scheme::defaults_for(cfg);
    auto p0 = simulate_forward(cfg, 0.0, 2.0, s, 42);
    auto p1 = simulate_forward(cfg, 1.0, 2.0, s, 43);
    for (double v : p0.values) CHECK(v == 0.0);
    for (double v : p1.values) CHECK(v == 1.0);
}

TEST_CASE("paths stay in [0,1] and start at t = 0") {
    auto cfg = testcfg::full_mix();
    Scheme s = Scheme::defaults_for(cfg);
    auto p = simulate_forward(cfg, 0.31, 1.5, s, 7);
    REQUIRE(!p.times.empty());
    CHECK(p.times.front() == 0.0);
    for (std::size_t i = 1; i < p.times.size(); ++i) CHECK(p.times[i] >= p.times[i - 1]);
    for (double v : p.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("determinism: identical inputs give bit-identical paths") {
    auto cfg = testcfg::full_mix();
    Scheme s = Scheme::defaults_for(cfg);
    auto a = simulate_forward(cfg, 0.5, 1.0, s, 2024);
    auto b = simulate_forward(cfg, 0.5, 1.0, s, 2024);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    auto c = simulate_forward(cfg, 0.5, 1.0, s, 2025);
    bool any_diff = c.values.size() != a.values.size();
    for (std::size_t i = 0; !any_diff && i < a.values.size(); ++i)
        any_diff = a.values[i] != c.values[i];
    CHECK(any_diff);
}

TEST_CASE("sample_law: N = 1 equals the endpoint of simulate_forward") {
    auto cfg = testcfg::kingman_mutation();
    Scheme s = Scheme::defaults_for(cfg);
    auto ends = sample_law(cfg, 0.4, 1.0, 1, 99, s);
    auto path = simulate_forward(cfg, 0.4, 1.0, s, 99);
    CHECK(ends[0] == path.values.back());
}

TEST_CASE("neutral martingale: E[X_T] = x0") {
    ModelConfig cfg = testcfg::neutral_kingman();
    Scheme s = Scheme::defaults_for(cfg);
    const int N = 20000;
    auto ends = sample_law(cfg, 0.3, 1.0, N, 31, s);
    double m = 0, m2 = 0;
    for (double v : ends) {
        m += v;
        m2 += v * v;
    }
    m /= N;
    double se = std::sqrt(std::max(0.0, m2 / N - m * m) / N);
    CHECK(std::abs(m - 0.3) <= 3 * se + 1e-4);
}

TEST_CASE("Kingman heterozygosity decay: E[X_t(1-X_t)] = x0(1-x0) e^{-t}") {
    ModelConfig cfg = testcfg::neutral_kingman();
    Scheme s = Scheme::defaults_for(cfg);
    const int N = 20000;
    const double x0 = 0.4, t = 1.0;
    auto ends = sample_law(cfg, x0, t, N, 17, s);
    double m = 0, m2 = 0;
    for (double v : ends) {
        double h = v * (1 - v);
        m += h;
        m2 += h * h;
    }
    m /= N;
    double se = std::sqrt(std::max(0.0, m2 / N - m * m) / N);
    double expect = x0 * (1 - x0) * std::exp(-t);
    CHECK(std::abs(m - expect) <= 3 * se + 2e-3);
}

TEST_CASE("pure-jump reproduction keeps the martingale property") {
    // lambda atom away from zero, no diffusion: E[X_t] = x0 exactly
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.4, 1.0);
    Scheme s = Scheme::defaults_for(cfg);
    const int N = 40000;
    auto ends = sample_law(cfg, 0.55, 2.0, N, 8, s);
    double m = 0, m2 = 0;
    for (double v : ends) {
        m += v;
        m2 += v * v;
    }
    m /= N;
    double se = std::sqrt(std::max(0.0, m2 / N - m * m) / N);
    CHECK(std::abs(m - 0.55) <= 3 * se);
}

TEST_CASE("monotone coupling: equal starts follow identical paths") {
    auto cfg = testcfg::full_mix();
    Scheme s = Scheme::defaults_for(cfg);
    auto pair = simulate_monotone_pair(cfg, 0.4, 0.4, 1.0, s, 5);
    REQUIRE(pair.low.values.size() == pair.high.values.size());
    for (std::size_t i = 0; i < pair.low.values.size(); ++i)
        CHECK(pair.low.values[i] == pair.high.values[i]);
}

TEST_CASE("monotone coupling: order holds at every stored time") {
    for (auto cfg : {testcfg::kingman_mutation(), testcfg::full_mix(), testcfg::coexistence()}) {
        Scheme s = Scheme::defaults_for(cfg);
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            auto pair = simulate_monotone_pair(cfg, 0.2, 0.7, 1.0, s, seed);
            for (std::size_t i = 0; i < pair.low.values.size(); ++i)
                CHECK(pair.low.values[i] <= pair.high.values[i]);
        }
    }
}

TEST_CASE("monotone coupling: pure-jump configs never need order restoration") {
    auto cfg = testcfg::coexistence();
    Scheme s = Scheme::defaults_for(cfg);
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        auto pair = simulate_monotone_pair(cfg, 0.1, 0.9, 2.0, s, seed);
        CHECK(pair.order_fixes == 0);
    }
}

TEST_CASE("scheme self-consistency: halving dt and eps moves the mean < 3 SE") {
    ModelConfig cfg = testcfg::neutral_kingman();
    cfg.lambda.beta = BetaComponent{0.3, 0.8, 1.0};  // infinite-activity component
    Scheme coarse;
    coarse.dt = 1e-3;
    coarse.eps_trunc = 1e-3;
    Scheme fine;
    fine.dt = 5e-4;
    fine.eps_trunc = 5e-4;
    const int N = 20000;
    auto a = sample_law(cfg, 0.3, 1.0, N, 3, coarse);
    auto b = sample_law(cfg, 0.3, 1.0, N, 4, fine);
    auto mean_se = [N](const std::vector<double>& v) {
        double m = 0, m2 = 0;
        for (double x : v) {
            m += x;
            m2 += x * x;
        }
        m /= N;
        return std::pair{m, std::sqrt(std::max(0.0, m2 / N - m * m) / N)};
    };
    auto [ma, sa] = mean_se(a);
    auto [mb, sb] = mean_se(b);
    CHECK(std::abs(ma - mb) <= 3 * std::sqrt(sa * sa + sb * sb));
}

TEST_CASE("invalid scheme parameters are rejected") {
    auto cfg = testcfg::neutral_kingman();
    Scheme bad;
    bad.dt = 0.0;
    CHECK_THROWS(simulate_forward(cfg, 0.5, 1.0, bad, 1));
    bad.dt = 1e-3;
    bad.eps_trunc = 1.5;
    CHECK_THROWS(simulate_forward(cfg, 0.5, 1.0, bad, 1));
}
