#include "wfdual/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfdual/rng.hpp"

namespace wfdual {

namespace {

void downsample_to(std::vector<double>& big, std::size_t n, std::uint64_t seed) {
    Rng rng(seed, 0x5e5a);
    for (std::size_t i = big.size(); i > n; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(big[j], big[i - 1]);
        big.pop_back();
    }
}

}  // namespace

double wp_empirical(std::vector<double> a, std::vector<double> b, double p, std::uint64_t seed) {
    if (a.empty() || b.empty()) throw std::invalid_argument("wp_empirical: empty sample");
    if (p < 1.0) throw std::invalid_argument("wp_empirical: p must be >= 1");
    if (a.size() > b.size()) downsample_to(a, b.size(), seed);
    if (b.size() > a.size()) downsample_to(b, a.size(), seed);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(acc / static_cast<double>(a.size()), 1.0 / p);
}

double radon_binned(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    if (bins < 1) throw std::invalid_argument("radon_binned: bins must be >= 1");
    if (a.empty() || b.empty()) throw std::invalid_argument("radon_binned: empty sample");
    std::vector<double> pa(static_cast<std::size_t>(bins), 0.0), pb(pa);
    auto bin_of = [bins](double x) {
        int k = static_cast<int>(x * bins);
        return std::clamp(k, 0, bins - 1);
    };
    for (double x : a) pa[static_cast<std::size_t>(bin_of(x))] += 1.0 / static_cast<double>(a.size());
    for (double x : b) pb[static_cast<std::size_t>(bin_of(x))] += 1.0 / static_cast<double>(b.size());
    double tv = 0.0;
    for (int k = 0; k < bins; ++k) tv += std::abs(pa[static_cast<std::size_t>(k)] - pb[static_cast<std::size_t>(k)]);
    return tv;  // = 2 * total variation
}

std::vector<double> snap_to_bins(const std::vector<double>& a, int bins) {
    std::vector<double> out;
    out.reserve(a.size());
    for (double x : a) {
        int k = std::clamp(static_cast<int>(x * bins), 0, bins - 1);
        out.push_back((k + 0.5) / bins);
    }
    return out;
}

namespace {

// checks F_a(x - eps) - eps <= F_b(x) and F_b(x - eps) - eps <= F_a(x) for all x
bool lp_band_ok(const std::vector<double>& sa, const std::vector<double>& sb, double eps) {
    auto cdf = [](const std::vector<double>& s, double x) {
        return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) /
               static_cast<double>(s.size());
    };
    // sufficient to test at the jump points of either CDF
    for (double x : sa) {
        if (cdf(sa, x) > cdf(sb, x + eps) + eps + 1e-15) return false;
    }
    for (double x : sb) {
        if (cdf(sb, x) > cdf(sa, x + eps) + eps + 1e-15) return false;
    }
    return true;
}

}  // namespace

double lp_empirical(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("lp_empirical: empty sample");
    std::vector<double> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double lo = 0.0, hi = 1.0;
    if (lp_band_ok(sa, sb, 0.0)) return 0.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (lp_band_ok(sa, sb, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::vector<double> bernstein_coeffs(const std::function<double(double)>& f, int n) {
    if (n < 1) throw std::invalid_argument("bernstein_coeffs: n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / n);
    return v;
}

double bernstein_eval(const std::vector<double>& coeffs, double x) {
    std::vector<double> w(coeffs);
    for (std::size_t level = w.size(); level-- > 1;)
        for (std::size_t i = 0; i < level; ++i) w[i] = (1.0 - x) * w[i] + x * w[i + 1];
    return w.empty() ? 0.0 : w[0];
}

}  // namespace wfdual
