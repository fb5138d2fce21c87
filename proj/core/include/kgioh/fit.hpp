#pragma once

#include <functional>
#include <vector>

namespace kgioh {

struct LinearFit {
    double slope;
    double intercept;
    double residual;  // RMS of the residuals
};

// Ordinary least squares y = intercept + slope x. FitError on rank deficiency.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct LeastSquares {
    std::vector<double> coeffs;
    double residual;  // RMS of the residuals
};

// y ~ sum_j c_j basis_j(x), column-pivoted QR; FitError if rank < basis count.
LeastSquares fit_basis(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<std::function<double(double)>>& basis);

// c T^p by a line in log-log coordinates.
struct PowerFit {
    double exponent;
    double prefactor;
    double residual;  // RMS in log space
};
PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kgioh
