#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "test_configs.hpp"
#include "wfdual/config_parse.hpp"
#include "wfdual/jump_measure.hpp"
#include "wfdual/model_config.hpp"
#include "wfdual/rng.hpp"

using namespace wfdual;

TEST_CASE("measure_mass on atoms and Beta components") {
    auto m = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.0, 2.0);
    CHECK(m.mass(0.0, 0.0, true, true) == doctest::Approx(2.0));
    CHECK(m.mass(0.0, 1.0, false, true) == doctest::Approx(0.0));

    JumpMeasure uniform{MeasureDomain::unit_interval, {}, BetaComponent{1.0, 1.0, 1.0}};
    CHECK(uniform.mass(0.0, 1.0, true, true) == doctest::Approx(1.0));
    CHECK(uniform.mass(0.25, 0.5, false, false) == doctest::Approx(0.25));

    // c * B(a,b) against the closed form: c=2, a=0.5, b=1 -> 2*B(0.5,1) = 4
    JumpMeasure half{MeasureDomain::unit_interval, {}, BetaComponent{2.0, 0.5, 1.0}};
    CHECK(half.mass(0.0, 1.0, true, true) == doctest::Approx(4.0).epsilon(1e-10));

    CHECK_THROWS(half.mass(-0.5, 0.5, true, true));
}

TEST_CASE("measure_mass agrees with adaptive quadrature on the density part") {
    JumpMeasure m{MeasureDomain::unit_interval, {}, BetaComponent{0.7, 1.3, 2.4}};
    boost::math::quadrature::tanh_sinh<double> integ;
    for (auto [lo, hi] : {std::pair{0.1, 0.9}, {0.0, 0.37}, {0.5, 1.0}}) {
        double direct = integ.integrate(
            [&](double z) { return 0.7 * std::pow(z, 0.3) * std::pow(1 - z, 1.4); }, lo, hi);
        CHECK(m.mass(lo, hi, false, false) == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("lambda_rate: atoms at the endpoints use the 0^0 = 1 convention") {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.0, 2.0);
    CHECK(lambda_rate(cfg, 5, 2) == doctest::Approx(2.0));
    CHECK(lambda_rate(cfg, 5, 3) == doctest::Approx(0.0));

    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 1.0, 1.0);
    CHECK(lambda_rate(cfg, 5, 5) == doctest::Approx(1.0));
    CHECK(lambda_rate(cfg, 5, 4) == doctest::Approx(0.0));
}

TEST_CASE("lambda_rate Beta component: closed form c B(a+k-2, b+n-k)") {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure{MeasureDomain::unit_interval, {}, BetaComponent{1.0, 0.5, 1.0}};
    double expect = beta_function(0.5, 3.0);
    CHECK(lambda_rate(cfg, 4, 2) == doctest::Approx(expect).epsilon(1e-12));
    // quadrature cross-check
    boost::math::quadrature::tanh_sinh<double> integ;
    double quad = integ.integrate(
        [](double z) { return std::pow(z, -0.5) * std::pow(1 - z, 2.0); }, 0.0, 1.0);
    CHECK(lambda_rate(cfg, 4, 2) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("sel_mut_rates: atom evaluation on both signs") {
    ModelConfig cfg;
    cfg.nu = JumpMeasure::atom_at(MeasureDomain::signed_unit, 0.5, 1.0);
    CHECK(sel_mut_rates(cfg, 3, 2).m_nl == doctest::Approx(0.25));

    ModelConfig cfg2;
    cfg2.mu = JumpMeasure::atom_at(MeasureDomain::signed_unit, -0.5, 1.0);
    CHECK(sel_mut_rates(cfg2, 3, 3).sigma_nl == doctest::Approx(0.25));

    ModelConfig cfg3;
    cfg3.mu = JumpMeasure{MeasureDomain::signed_unit, {}, BetaComponent{1.0, 1.0, 1.0}};
    CHECK(sel_mut_rates(cfg3, 2, 1).sigma_nl == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("rate functionals stay nonnegative on randomized configs") {
    Rng rng(2024, 7);
    for (int rep = 0; rep < 50; ++rep) {
        ModelConfig cfg;
        cfg.lambda.atoms = {{rng.uniform(), rng.uniform()}};
        if (rng.bernoulli(0.5))
            cfg.lambda.beta = BetaComponent{rng.uniform(), 0.2 + rng.uniform(), 0.2 + rng.uniform()};
        cfg.mu.atoms = {{rng.uniform(0.01, 0.99) * (rng.bernoulli(0.5) ? 1 : -1), rng.uniform()}};
        cfg.nu.atoms = {{rng.uniform(0.01, 0.99) * (rng.bernoulli(0.5) ? 1 : -1), rng.uniform()}};
        int n = 1 + static_cast<int>(rng.uniform_index(10));
        for (int k = 2; k <= n; ++k) CHECK(lambda_rate(cfg, n, k) >= 0.0);
        for (int l = 1; l <= n; ++l) {
            auto r = sel_mut_rates(cfg, n, l);
            CHECK(r.sigma_nl >= 0.0);
            CHECK(r.m_nl >= 0.0);
        }
    }
}

TEST_CASE("sigma_eval: constant-selection representations") {
    auto cfg = testcfg::kingman_selection(0.7);
    const Sigma& s = cfg.sigma();
    CHECK(s.product(0.3) == doctest::Approx(0.7 * 0.3 * 0.7).epsilon(1e-12));
    CHECK(s.value(0.5) == doctest::Approx(0.7));
    CHECK(s.value(0.0) == doctest::Approx(0.7));
    CHECK(s.value(1.0) == doctest::Approx(0.7));

    // p_1 = 0 flips the sign
    cfg.selection.p = {{0.0, 0.0, 1.0}};
    Sigma neg(cfg.selection);
    CHECK(neg.value(0.25) == doctest::Approx(-0.7));
}

TEST_CASE("sigma_eval matches an independent symbolic expansion, kappa = 3") {
    Rng rng(99, 1);
    for (int rep = 0; rep < 10; ++rep) {
        SelectionRepr s;
        s.kappa = 3;
        s.beta = {rng.uniform(), rng.uniform()};
        s.p = {{0.0, rng.uniform(), 1.0}, {0.0, rng.uniform(), rng.uniform(), 1.0}};
        Sigma sig(s);
        for (int g = 0; g <= 20; ++g) {
            double x = g / 20.0;
            // direct expansion of the displayed double sum
            double direct = 0.0;
            for (int l = 2; l <= 3; ++l) {
                double bl = s.beta_rate(l);
                for (int i = 0; i <= l; ++i) {
                    double binom = 1.0;
                    for (int j = 0; j < i; ++j) binom = binom * (l - j) / (j + 1);
                    direct += bl * binom * std::pow(x, i) * std::pow(1 - x, l - i) *
                              (s.prob(l, i) - static_cast<double>(i) / l);
                }
            }
            CHECK(sig.product(x) == doctest::Approx(direct).epsilon(1e-12));
            if (x > 0 && x < 1)
                CHECK(sig.value(x) * x * (1 - x) == doctest::Approx(direct).epsilon(1e-9));
        }
        CHECK(sig.product(0.0) == doctest::Approx(0.0));
        CHECK(sig.product(1.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("validate flags the spec'd violations") {
    auto ok = testcfg::kingman_mutation();
    CHECK(ok.validate().empty());

    auto bad_p = testcfg::kingman_selection();
    bad_p.selection.p[0][0] = 0.3;
    auto v1 = bad_p.validate();
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].find("p_0 must be 0") != std::string::npos);

    ModelConfig bad_mu;
    bad_mu.mu.atoms = {{0.0, 0.5}};
    auto v2 = bad_mu.validate();
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].find("mu({0}) must be 0") != std::string::npos);
}

TEST_CASE("config parser round trip and rejection of unknown keys") {
    std::string text = R"(
# reference: Kingman plus mutation
[lambda]
atom = 0, 1.0
[theta]
theta_a = 1.0
theta_A = 1.0
[selection]
kappa = 2
beta_l = 2, 0.0
)";
    auto cfg = parse_config_text(text);
    CHECK(cfg.lambda.atom_mass_at(0.0) == doctest::Approx(1.0));
    CHECK(cfg.theta_a == doctest::Approx(1.0));

    CHECK_THROWS_AS(parse_config_text("[lambda]\nmystery = 1\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config_text("[volcano]\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config_text("atom = 0, 1\n"), ConfigParseError);

    // invariant violations are reported with the offending rule
    std::string bad = "[selection]\nkappa = 2\np = 2, 0, 0.3\n";
    try {
        parse_config_text(bad);
        CHECK(false);
    } catch (const ConfigParseError& e) {
        CHECK(std::string(e.what()).find("p_0 must be 0") != std::string::npos);
    }
}

TEST_CASE("canonical text and hash are stable") {
    auto a = testcfg::full_mix();
    auto b = testcfg::full_mix();
    CHECK(a.hash() == b.hash());
    b.theta_a += 1e-9;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("restricted sampler matches restricted masses in distribution") {
    // lambda with a density and an atom: sampled frequencies of the atom match
    // its weight share; sampled density values stay above the cutoff
    JumpMeasure m{MeasureDomain::unit_interval, {{0.5, 0.3}}, BetaComponent{0.4, 1.5, 1.0}};
    RestrictedSampler smp(m, 1e-3, 2.0, +1);
    REQUIRE(smp.total_rate() > 0);
    Rng rng(11, 3);
    int atom_hits = 0;
    const int draws = 20000;
    double min_r = 1.0;
    for (int i = 0; i < draws; ++i) {
        double r = smp.sample(rng);
        CHECK(r > 1e-3);
        CHECK(r <= 1.0);
        if (r == 0.5) ++atom_hits;
        min_r = std::min(min_r, r);
    }
    double atom_share = (0.3 / 0.25) / smp.total_rate();
    CHECK(static_cast<double>(atom_hits) / draws == doctest::Approx(atom_share).epsilon(0.05));
}
