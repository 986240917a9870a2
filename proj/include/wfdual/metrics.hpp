#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace wfdual {

// Empirical probability metrics on [0,1]-valued samples.

// W_p between equal-size samples: exact 1-D optimal coupling via sorted pairing.
// Unequal sizes are reduced by resampling the larger sample down with `seed`.
double wp_empirical(std::vector<double> a, std::vector<double> b, double p,
                    std::uint64_t seed = 0);

// Radon distance between the bin-histogram discretizations: 2 * total variation
// of the two probability histograms on a shared uniform grid over [0,1].
double radon_binned(const std::vector<double>& a, const std::vector<double>& b, int bins);

// snap each sample to the center of its bin; radon_binned and wp_empirical are
// then exact distances of the same pair of discretized measures
std::vector<double> snap_to_bins(const std::vector<double>& a, int bins);

// Levy-Prokhorov distance between empirical CDFs, by bisection on epsilon with
// the CDF band criterion; accurate to ~1e-13.
double lp_empirical(const std::vector<double>& a, const std::vector<double>& b);

// Bernstein polynomial utilities.
std::vector<double> bernstein_coeffs(const std::function<double(double)>& f, int n);
double bernstein_eval(const std::vector<double>& coeffs, double x);  // de Casteljau

}  // namespace wfdual
