#pragma once

#include <string>
#include <vector>

namespace wfdual {

// Polynomial frequency-dependent selection in its branching representation:
// rates beta_l for group sizes l = 2..kappa and success probabilities
// p[l][i], i = 0..l, with p[l][0] = 0 and p[l][l] = 1.
struct SelectionRepr {
    int kappa = 2;
    std::vector<double> beta;                // beta[l-2] is the rate for group size l
    std::vector<std::vector<double>> p;      // p[l-2][i]

    static SelectionRepr neutral() {
        SelectionRepr s;
        s.kappa = 2;
        s.beta = {0.0};
        s.p = {{0.0, 0.5, 1.0}};
        return s;
    }

    double beta_rate(int l) const { return beta[static_cast<std::size_t>(l - 2)]; }
    double prob(int l, int i) const { return p[static_cast<std::size_t>(l - 2)][static_cast<std::size_t>(i)]; }
    double total_branch_rate() const;

    std::vector<std::string> validate() const;
};

// Selection functional sigma.  Construction deflates the Bernstein-form product
// sigma(x) x (1-x) by its roots at 0 and 1, so the quotient is available as a
// stable polynomial on all of [0,1] including the endpoints.
class Sigma {
public:
    Sigma() : Sigma(SelectionRepr::neutral()) {}
    explicit Sigma(const SelectionRepr& s);

    // sigma(x) * x * (1-x), evaluated from the displayed Bernstein sum
    double product(double x) const;
    // the quotient sigma(x), by polynomial continuation at the endpoints
    double value(double x) const;
    double derivative(double x) const;

    double at_zero() const { return value(0.0); }
    double at_one() const { return value(1.0); }
    // sup |sigma| + sup |sigma'| over [0,1] (grid supremum, 2001 points)
    double c1_norm() const;

    const std::vector<double>& quotient_coeffs() const { return quot_; }

private:
    SelectionRepr repr_;
    std::vector<double> prod_;  // monomial coefficients of sigma(x) x (1-x)
    std::vector<double> quot_;  // monomial coefficients of sigma(x)
};

}  // namespace wfdual
