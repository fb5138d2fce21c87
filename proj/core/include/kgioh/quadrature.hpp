#pragma once

#include <functional>

namespace kgioh::quad {

struct QuadResult {
    double value;
    double est_err;
};

// Adaptive Gauss-Kronrod (61 point) on [a, b]. Throws QuadratureError when the
// error estimate exceeds max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, unsigned max_depth = 15);

// Integral over [a, +inf) by exp-sinh quadrature.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol = 1e-10);

}  // namespace kgioh::quad
