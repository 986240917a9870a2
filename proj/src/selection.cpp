#include "wfdual/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace wfdual {

double SelectionRepr::total_branch_rate() const {
    double r = 0.0;
    for (double b : beta) r += b;
    return r;
}

std::vector<std::string> SelectionRepr::validate() const {
    std::vector<std::string> out;
    if (kappa < 2) out.push_back("selection: kappa must be > 1");
    if (beta.size() != static_cast<std::size_t>(kappa - 1))
        out.push_back("selection: need one beta rate per group size 2..kappa");
    if (p.size() != static_cast<std::size_t>(kappa - 1))
        out.push_back("selection: need one probability row per group size 2..kappa");
    for (std::size_t j = 0; j < beta.size(); ++j)
        if (beta[j] < 0) out.push_back("selection: beta_" + std::to_string(j + 2) + " must be >= 0");
    for (std::size_t j = 0; j < p.size(); ++j) {
        int l = static_cast<int>(j) + 2;
        if (p[j].size() != static_cast<std::size_t>(l + 1)) {
            out.push_back("selection: p row for l=" + std::to_string(l) + " must have l+1 entries");
            continue;
        }
        for (double q : p[j])
            if (q < 0 || q > 1) out.push_back("selection: p values must lie in [0,1]");
        if (p[j].front() != 0.0) out.push_back("selection: p_0 must be 0");
        if (p[j].back() != 1.0) out.push_back("selection: p_l must be 1");
    }
    return out;
}

namespace {

// coefficients of x^i (1-x)^(l-i) in the monomial basis, accumulated with weight w
void add_bernstein_term(std::vector<double>& coeffs, int i, int l, double w) {
    // (1-x)^(l-i) = sum_j C(l-i,j) (-x)^j
    double binom = 1.0;
    for (int j = 0; j <= l - i; ++j) {
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(i + j)] += w * sign * binom;
        binom = binom * (l - i - j) / (j + 1);
    }
}

}  // namespace

Sigma::Sigma(const SelectionRepr& s) : repr_(s) {
    prod_.assign(static_cast<std::size_t>(s.kappa) + 1, 0.0);
    for (int l = 2; l <= s.kappa; ++l) {
        double bl = s.beta_rate(l);
        if (bl == 0.0) continue;
        double binom = 1.0;  // C(l, i)
        for (int i = 0; i <= l; ++i) {
            double w = bl * binom * (s.prob(l, i) - static_cast<double>(i) / l);
            if (w != 0.0) add_bernstein_term(prod_, i, l, w);
            binom = binom * (l - i) / (i + 1);
        }
    }
    // product vanishes at 0 and 1; deflate exactly.
    // divide by x: drop the constant term (it is 0 up to round-off)
    std::vector<double> q1(prod_.begin() + 1, prod_.end());
    // divide by (1-x): synthetic division, quotient coefficients low-to-high
    quot_.assign(q1.size() > 0 ? q1.size() - 1 : 0, 0.0);
    double carry = 0.0;
    for (std::size_t j = 0; j + 1 < q1.size(); ++j) {
        carry += q1[j];
        quot_[j] = carry;
    }
    if (quot_.empty()) quot_.push_back(0.0);
}

double Sigma::product(double x) const {
    // evaluate the displayed Bernstein sum directly
    double total = 0.0;
    for (int l = 2; l <= repr_.kappa; ++l) {
        double bl = repr_.beta_rate(l);
        if (bl == 0.0) continue;
        double term = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= l; ++i) {
            term += binom * std::pow(x, i) * std::pow(1.0 - x, l - i) *
                    (repr_.prob(l, i) - static_cast<double>(i) / l);
            binom = binom * (l - i) / (i + 1);
        }
        total += bl * term;
    }
    return total;
}

double Sigma::value(double x) const {
    double v = 0.0;
    for (std::size_t j = quot_.size(); j-- > 0;) v = v * x + quot_[j];
    return v;
}

double Sigma::derivative(double x) const {
    double v = 0.0;
    for (std::size_t j = quot_.size(); j-- > 1;) v = v * x + quot_[j] * static_cast<double>(j);
    return v;
}

double Sigma::c1_norm() const {
    double sup_v = 0.0, sup_d = 0.0;
    const int grid = 2000;
    for (int i = 0; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        sup_v = std::max(sup_v, std::abs(value(x)));
        sup_d = std::max(sup_d, std::abs(derivative(x)));
    }
    return sup_v + sup_d;
}

}  // namespace wfdual
