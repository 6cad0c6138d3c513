#include "optclean/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optclean {

namespace {

// Binomial coefficients for expanding the centered basis back to raw powers.
double binomial(int n, int k) {
    double value = 1.0;
    for (int i = 1; i <= k; ++i) value = value * static_cast<double>(n - k + i) / i;
    return value;
}

}  // namespace

PolyCoeffs fit_polynomial(std::span<const double> x, std::span<const double> y,
                          int degree) {
    const std::size_t n = x.size();
    if (degree < 0) throw Error("fit_polynomial: degree must be >= 0");
    if (y.size() != n) throw Error("fit_polynomial: x and y lengths differ");
    const std::size_t cols = static_cast<std::size_t>(degree) + 1;
    if (n < cols)
        throw InsufficientPoints("fit_polynomial: " + std::to_string(n) +
                                 " points cannot determine degree " +
                                 std::to_string(degree));

    // Center and rescale the abscissa to [-1, 1] before building the
    // Vandermonde matrix; raw strike powers (K^2 ~ 1e6) make the columns
    // wildly out of scale.
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v - mean));
    if (scale == 0.0)
        throw SingularDesign("fit_polynomial: all abscissa values identical");

    // Column-major design matrix in the scaled variable z = (x - mean)/scale.
    std::vector<double> a(n * cols);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (x[i] - mean) / scale;
        double p = 1.0;
        for (std::size_t j = 0; j < cols; ++j) {
            a[j * n + i] = p;
            p *= z;
        }
    }
    std::vector<double> rhs(y.begin(), y.end());

    // Householder QR, applying the reflections to rhs as we go.
    std::vector<double> diag(cols);
    for (std::size_t k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm = std::hypot(norm, a[k * n + i]);
        if (a[k * n + k] > 0.0) norm = -norm;
        diag[k] = norm;
        if (norm == 0.0) continue;  // rank check below
        for (std::size_t i = k; i < n; ++i) a[k * n + i] /= norm;
        a[k * n + k] -= 1.0;
        for (std::size_t j = k + 1; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += a[k * n + i] * a[j * n + i];
            s /= a[k * n + k];
            for (std::size_t i = k; i < n; ++i) a[j * n + i] += s * a[k * n + i];
        }
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += a[k * n + i] * rhs[i];
        s /= a[k * n + k];
        for (std::size_t i = k; i < n; ++i) rhs[i] += s * a[k * n + i];
    }

    double max_diag = 0.0;
    for (double d : diag) max_diag = std::max(max_diag, std::abs(d));
    for (double d : diag)
        if (std::abs(d) <= 1e-12 * max_diag)
            throw SingularDesign("fit_polynomial: rank-deficient design matrix");

    // Back substitution for the coefficients in z.
    std::vector<double> beta(cols);
    for (std::size_t k = cols; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < cols; ++j) s -= beta[j] * a[j * n + k];
        beta[k] = s / diag[k];
    }

    // Expand p(z) with z = (x - mean)/scale into raw-x coefficients.
    PolyCoeffs out;
    out.c.assign(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        const double bj = beta[j] / std::pow(scale, static_cast<double>(j));
        double shift_pow = 1.0;  // (-mean)^(j-i), built from the top power down
        for (std::size_t i = j + 1; i-- > 0;) {
            out.c[i] += bj * binomial(static_cast<int>(j), static_cast<int>(i)) * shift_pow;
            shift_pow *= -mean;
        }
    }
    return out;
}

std::vector<double> residuals(std::span<const double> x, std::span<const double> y,
                              const PolyCoeffs& coeffs) {
    if (x.size() != y.size()) throw Error("residuals: x and y lengths differ");
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[i] - coeffs(x[i]);
    return r;
}

double residual_sigma(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2)
        throw DegenerateResiduals("residual_sigma: need at least two residuals, got " +
                                  std::to_string(n));
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    if (ss == 0.0)
        throw DegenerateResiduals("residual_sigma: zero variance");
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw OutOfDomain("normal_quantile: p must be in (0, 1), got " + std::to_string(p));

    // Wichura (1988), Algorithm AS 241, PPND16.
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e+3 * r +
                                  3.3430575583588128105e+4) * r +
                                 6.7265770927008700853e+4) * r +
                                4.5921953931549871457e+4) * r +
                               1.3731693765509461125e+4) * r +
                              1.9715909503065514427e+3) * r +
                             1.3314166789178437745e+2) * r +
                            3.3871328727963666080e+0) * q;
        const double den = (((((((5.2264952788528545610e+3 * r +
                                  2.8729085735721942674e+4) * r +
                                 3.9307895800092710610e+4) * r +
                                2.1213794301586595867e+4) * r +
                               5.3941960214247511077e+3) * r +
                              6.8718700749205790830e+2) * r +
                             4.2313330701600911252e+1) * r +
                            1.0);
        return num / den;
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r +
                                  2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) * r +
                                1.27045825245236838258e+0) * r +
                               3.64784832476320460504e+0) * r +
                              5.76949722146069140550e+0) * r +
                             4.63033784615654529590e+0) * r +
                            1.42343711074968357734e+0);
        const double den = (((((((1.05075007164441684324e-9 * r +
                                  5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) * r +
                                1.48103976427480074590e-1) * r +
                               6.89767334985100004550e-1) * r +
                              1.67638483018380384940e+0) * r +
                             2.05319162663775882187e+0) * r +
                            1.0);
        x = num / den;
    } else {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r +
                                  2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) * r +
                                2.65321895265761230930e-2) * r +
                               2.96560571828504891230e-1) * r +
                              1.78482653991729133580e+0) * r +
                             5.46378491116411436990e+0) * r +
                            6.65790464350110377720e+0);
        const double den = (((((((2.04426310338993978564e-15 * r +
                                  1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) * r +
                                7.86869131145613259100e-4) * r +
                               1.48753612908506148525e-2) * r +
                              1.36929880922735805310e-1) * r +
                             5.99832206555887937690e-1) * r +
                            1.0);
        x = num / den;
    }
    return q < 0.0 ? -x : x;
}

}  // namespace optclean
