#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfdual/metrics.hpp"
#include "wfdual/rng.hpp"

using namespace wfdual;

namespace {

std::vector<double> random_sample(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform();
    return v;
}

}  // namespace

TEST_CASE("wp_empirical basics") {
    CHECK(wp_empirical({0.2, 0.7}, {0.2, 0.7}, 1.0) == doctest::Approx(0.0));
    CHECK(wp_empirical({0.0}, {1.0}, 1.0) == doctest::Approx(1.0));
    CHECK(wp_empirical({0.0, 1.0}, {0.5, 0.5}, 1.0) == doctest::Approx(0.5));
    CHECK_THROWS(wp_empirical({}, {0.5}, 1.0));
}

TEST_CASE("wp_empirical resamples unequal sizes deterministically") {
    Rng rng(5, 0);
    auto a = random_sample(rng, 400);
    auto b = random_sample(rng, 1000);
    double d1 = wp_empirical(a, b, 2.0, 42);
    double d2 = wp_empirical(a, b, 2.0, 42);
    CHECK(d1 == doctest::Approx(d2));
    CHECK(d1 >= 0.0);
}

TEST_CASE("triangle inequality on random triples") {
    Rng rng(7, 0);
    for (int rep = 0; rep < 40; ++rep) {
        auto a = random_sample(rng, 64);
        auto b = random_sample(rng, 64);
        auto c = random_sample(rng, 64);
        for (double p : {1.0, 2.0}) {
            double ab = wp_empirical(a, b, p);
            double bc = wp_empirical(b, c, p);
            double ac = wp_empirical(a, c, p);
            CHECK(ac <= ab + bc + 1e-12);
        }
    }
}

TEST_CASE("radon_binned basics") {
    std::vector<double> a{0.1, 0.2, 0.15};
    CHECK(radon_binned(a, a, 10) == doctest::Approx(0.0));
    // disjoint bin supports: full mass moved, distance 2
    CHECK(radon_binned({0.1, 0.12}, {0.9, 0.95}, 4) == doctest::Approx(2.0));
}

TEST_CASE("radon_binned concentration for equal laws") {
    Rng rng(13, 0);
    auto a = random_sample(rng, 10000);
    auto b = random_sample(rng, 10000);
    CHECK(radon_binned(a, b, 20) <= 0.1);
}

TEST_CASE("2 W1 <= radon on the shared discretization") {
    Rng rng(17, 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto a = random_sample(rng, 256);
        auto b = random_sample(rng, 256);
        int bins = 8 + static_cast<int>(rng.uniform_index(40));
        auto as = snap_to_bins(a, bins);
        auto bs = snap_to_bins(b, bins);
        CHECK(2.0 * wp_empirical(as, bs, 1.0) <= radon_binned(a, b, bins) + 1e-12);
    }
}

TEST_CASE("Levy-Prokhorov: basics and the lp^2 <= W1 inequality") {
    std::vector<double> a{0.3, 0.6};
    CHECK(lp_empirical(a, a) == doctest::Approx(0.0));
    CHECK(lp_empirical({0.0}, {1.0}) == doctest::Approx(1.0).epsilon(1e-10));

    Rng rng(19, 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto x = random_sample(rng, 128);
        auto y = random_sample(rng, 128);
        double lp = lp_empirical(x, y);
        double w1 = wp_empirical(x, y, 1.0);
        CHECK(lp * lp <= w1 + 1e-12);
    }
}

TEST_CASE("bernstein: linear precision and constants") {
    auto id = bernstein_coeffs([](double x) { return x; }, 7);
    auto one = bernstein_coeffs([](double) { return 1.0; }, 5);
    for (double x : {0.0, 0.21, 0.5, 0.93, 1.0}) {
        CHECK(bernstein_eval(id, x) == doctest::Approx(x).epsilon(1e-14));
        CHECK(bernstein_eval(one, x) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("bernstein: f(x) = x^2 at n = 2") {
    auto v = bernstein_coeffs([](double x) { return x * x; }, 2);
    CHECK(bernstein_eval(v, 0.5) == doctest::Approx(0.375));
}

TEST_CASE("de Casteljau matches naive summation") {
    Rng rng(23, 0);
    for (int n : {3, 10, 50}) {
        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (auto& c : v) c = rng.uniform(-1.0, 1.0);
        for (double x : {0.0, 0.1, 0.37, 0.775, 1.0}) {
            double naive = 0.0;
            double binom = 1.0;
            for (int i = 0; i <= n; ++i) {
                naive += v[static_cast<std::size_t>(i)] * binom * std::pow(x, i) *
                         std::pow(1 - x, n - i);
                binom = binom * (n - i) / (i + 1);
            }
            CHECK(bernstein_eval(v, x) == doctest::Approx(naive).epsilon(1e-12));
        }
    }
}

TEST_CASE("1-Lipschitz Bernstein bound 1/(2 sqrt n)") {
    auto f = [](double x) { return std::abs(x - 0.37); };
    for (int n : {4, 16, 64, 256}) {
        auto v = bernstein_coeffs(f, n);
        double worst = 0.0;
        for (int g = 0; g <= 100; ++g) {
            double x = g / 100.0;
            worst = std::max(worst, std::abs(f(x) - bernstein_eval(v, x)));
        }
        CHECK(worst <= 0.5 / std::sqrt(static_cast<double>(n)) + 1e-12);
    }
}
