#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "test_configs.hpp"
#include "wfdual/analytics.hpp"
#include "wfdual/line_dual.hpp"

using namespace wfdual;

TEST_CASE("generator rows: mutation-only and Kingman examples") {
    auto mut = testcfg::mutation_only(1.0, 1.0);
    auto row = generator_row(mut, 3);
    REQUIRE(row.entries.size() == 1);
    CHECK(row.entries[0].first == 2);
    CHECK(row.entries[0].second == doctest::Approx(6.0));

    auto king = testcfg::neutral_kingman();
    auto row4 = generator_row(king, 4);
    REQUIRE(row4.entries.size() == 1);
    CHECK(row4.entries[0].first == 3);
    CHECK(row4.entries[0].second == doctest::Approx(6.0));
}

TEST_CASE("generator row: selective branching only") {
    ModelConfig cfg;
    cfg.selection.kappa = 3;
    cfg.selection.beta = {0.0, 2.0};
    cfg.selection.p = {{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0, 1.0}};
    auto row = generator_row(cfg, 5);
    REQUIRE(row.entries.size() == 1);
    CHECK(row.entries[0].first == 7);
    CHECK(row.entries[0].second == doctest::Approx(10.0));
}

TEST_CASE("row invariants: absorbing zero, positive rates, unique targets") {
    auto cfg = testcfg::full_mix();
    CHECK(generator_row(cfg, 0).entries.empty());
    for (int n : {1, 2, 5, 17, 60}) {
        auto row = generator_row(cfg, n);
        std::set<int> targets;
        double total = 0.0;
        for (const auto& [to, rate] : row.entries) {
            CHECK(rate > 0.0);
            CHECK(to != n);
            CHECK(to >= 0);
            targets.insert(to);
            total += rate;
        }
        CHECK(targets.size() == row.entries.size());
        CHECK(total == doctest::Approx(row.total_rate));
    }
}

TEST_CASE("drift examples: Kingman plus mutation") {
    auto cfg = testcfg::kingman_mutation(1.0, 1.0);  // C = 2
    CHECK(drift_value(cfg, 0) == doctest::Approx(0.0));
    for (int n : {1, 2, 3, 10, 50}) {
        double expect = -0.5 * n * (n - 1) - 2.0 * n;
        CHECK(drift_value(cfg, n) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("Lemma-style drift inequality holds for C > 0 configs, n = 1..200") {
    for (auto cfg : {testcfg::kingman_mutation(1.0, 1.0), testcfg::kingman_mutation(0.5, 0.5),
                     testcfg::full_mix(), testcfg::counterexample()}) {
        double C = rate_C(cfg);
        REQUIRE(C > 0.0);
        for (int n = 1; n <= 200; ++n)
            CHECK(drift_value(cfg, n) <= -C * n + 1e-9 * n);
    }
}

TEST_CASE("gamma drift exponent exists under the tail condition") {
    // Kingman: tail exponent 0 < 1
    auto cfg = testcfg::kingman_mutation(1.0, 1.0);
    REQUIRE(tail_exponent(cfg.lambda) < 1.0);
    auto ge = drift_exponent_scan(cfg, 1000);
    CHECK(ge.found);
    CHECK(ge.gamma > 1.0);
    for (int n = ge.n0; n <= 1000; n += 37)
        CHECK(drift_value(cfg, n) <= -std::pow(n, ge.gamma));
}

TEST_CASE("survival stats: mutation-only has exact exponential mean") {
    auto cfg = testcfg::mutation_only(1.0, 1.0);
    for (double t : {0.5, 1.0}) {
        auto s = survival_stats(cfg, 10, t, 20000, 99);
        double expect = 10.0 * std::exp(-2.0 * t);
        CHECK(std::abs(s.mean_L - expect) <= 3.0 * s.se_mean + 1e-9);
        CHECK(s.aborted == 0);
    }
}

TEST_CASE("survival stats: Kingman from one line never dies") {
    auto cfg = testcfg::neutral_kingman();
    auto s = survival_stats(cfg, 1, 3.0, 500, 7);
    CHECK(s.p_alive == doctest::Approx(1.0));
    CHECK(s.mean_L == doctest::Approx(1.0));
}

TEST_CASE("survival stats chain P(L_t != 0) <= E[L_t] <= n exp(-Ct)") {
    auto cfg = testcfg::kingman_mutation(0.5, 0.5);  // C = 1
    double C = rate_C(cfg);
    for (int n0 : {1, 5, 25}) {
        for (double t : {1.0, 2.0}) {
            auto s = survival_stats(cfg, n0, t, 4000, 1234 + n0);
            CHECK(s.p_alive <= s.mean_L + 1e-12);
            CHECK(s.mean_L <= n0 * std::exp(-C * t) + 3.0 * s.se_mean);
        }
    }
}

TEST_CASE("survival stats are deterministic per seed") {
    auto cfg = testcfg::full_mix();
    auto a = survival_stats(cfg, 5, 1.0, 2000, 77);
    auto b = survival_stats(cfg, 5, 1.0, 2000, 77);
    CHECK(a.mean_L == b.mean_L);
    CHECK(a.p_alive == b.p_alive);
}

TEST_CASE("sup E_n[L_1] scan: bounded for Kingman, growing for mutation-only") {
    auto king = testcfg::kingman_mutation(1.0, 1.0);
    auto scan = sup_el1_scan(king, 128, 3000, 5);
    REQUIRE(scan.size() >= 4);
    // comes down from infinity: the running max stabilizes
    CHECK(scan.back().running_max <= scan[scan.size() - 2].running_max + 3 * scan.back().se);

    auto mut = testcfg::mutation_only(1.0, 1.0);
    auto scan2 = sup_el1_scan(mut, 128, 3000, 5);
    // exact mean n e^{-2}: linear growth
    for (const auto& pt : scan2)
        CHECK(std::abs(pt.mean_L1 - pt.n * std::exp(-2.0)) <= 4 * pt.se + 1e-9);
    CHECK(std::isinf(tail_exponent(mut.lambda)));
}
