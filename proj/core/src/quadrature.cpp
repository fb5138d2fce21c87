#include "kgioh/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "kgioh/errors.hpp"

namespace kgioh::quad {

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                     unsigned max_depth) {
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol, &err);
    if (!std::isfinite(v) || err > std::max(abs_tol, rel_tol * std::abs(v)) * 10.0)
        throw QuadratureError("Gauss-Kronrod did not converge (estimate " + std::to_string(err) + ")");
    return {v, err};
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol) {
    boost::math::quadrature::exp_sinh<double> es;
    double err = 0.0;
    double l1 = 0.0;
    double v = 0.0;
    try {
        v = es.integrate([&](double t) { return f(a + t); }, rel_tol, &err, &l1);
    } catch (const std::exception& e) {
        throw QuadratureError(e.what());
    }
    if (!std::isfinite(v) || err > 10.0 * rel_tol * std::max(std::abs(v), l1 * 1e-16))
        throw QuadratureError("exp-sinh did not converge (estimate " + std::to_string(err) + ")");
    return {v, err};
}

}  // namespace kgioh::quad
