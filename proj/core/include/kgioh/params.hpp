#pragma once

#include <complex>

namespace kgioh {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Physical constants and convention flags shared by every formula.
struct ModelParams {
    double m = 1.0;
    double omega = 1.0;
    double v0 = 0.0;
    double lambda = 0.0;
    double a0 = 0.0;
    double t_crit = 0.0;
    // Replace the complex tower by the real ladder E_n = omega (n + 1/2).
    bool hermitian_reference = false;

    // Throws DomainError when m <= 0 or omega < 0 or a field is non-finite.
    void validate() const;
};

// Truncation control for infinite mode sums.
struct TruncationPolicy {
    int n_min = 8;
    double rel_tol = 1e-12;
    int n_max = 100000;
    // When > 0 the sum is taken over exactly n < mode_cap terms and no
    // convergence test is applied.
    int mode_cap = 0;

    void validate() const;
};

}  // namespace kgioh
