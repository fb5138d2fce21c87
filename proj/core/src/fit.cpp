#include "kgioh/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kgioh/errors.hpp"

namespace kgioh {

LeastSquares fit_basis(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<std::function<double(double)>>& basis) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto k = static_cast<Eigen::Index>(basis.size());
    if (x.size() != y.size()) throw FitError("x and y differ in length");
    if (n < k || k == 0) throw FitError("fewer points than fit parameters");
    Eigen::MatrixXd a(n, k);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw FitError("non-finite data point");
        for (Eigen::Index j = 0; j < k; ++j) a(i, j) = basis[j](x[i]);
        b(i) = y[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-12);
    if (qr.rank() < k) throw FitError("design matrix is rank deficient");
    const Eigen::VectorXd c = qr.solve(b);
    const double rms = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
    return {std::vector<double>(c.data(), c.data() + k), rms};
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const LeastSquares f = fit_basis(x, y, {[](double) { return 1.0; }, [](double t) { return t; }});
    return {f.coeffs[1], f.coeffs[0], f.residual};
}

PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("power fit requires positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const LinearFit f = fit_line(lx, ly);
    return {f.slope, std::exp(f.intercept), f.residual};
}

}  // namespace kgioh
