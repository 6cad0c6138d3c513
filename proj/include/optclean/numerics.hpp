#pragma once

#include <span>
#include <vector>

#include "optclean/errors.hpp"

namespace optclean {

/// Polynomial coefficients ordered by ascending power.
struct PolyCoeffs {
    std::vector<double> c;

    int degree() const noexcept { return static_cast<int>(c.size()) - 1; }

    /// Horner evaluation.
    double operator()(double x) const noexcept {
        double value = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) value = value * x + *it;
        return value;
    }
};

/// Least-squares polynomial fit of y on x.
///
/// Solved by Householder QR on a centered and rescaled abscissa, then expanded
/// back to coefficients of the raw variable; stays stable for strike-sized x
/// where raw normal equations lose digits.
///
/// Throws InsufficientPoints when n < degree + 1 and SingularDesign when the
/// design matrix is rank deficient (e.g. all x identical).
PolyCoeffs fit_polynomial(std::span<const double> x, std::span<const double> y,
                          int degree);

/// r_j = y_j - p(x_j), order preserved.
std::vector<double> residuals(std::span<const double> x, std::span<const double> y,
                              const PolyCoeffs& coeffs);

/// Sample standard deviation (divisor n - 1) about the mean.
/// Throws DegenerateResiduals when n < 2 or the variance is zero.
double residual_sigma(std::span<const double> values);

/// Standard normal quantile Phi^-1(p) for p in (0, 1).
///
/// Wichura's algorithm AS 241 (PPND16): rational approximations on three
/// regions, relative error below 1e-15 across (1e-300, 1 - 1e-16).
/// Throws OutOfDomain outside (0, 1).
double normal_quantile(double p);

}  // namespace optclean
