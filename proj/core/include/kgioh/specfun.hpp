#pragma once

#include "kgioh/params.hpp"

namespace kgioh::specfun {

// Gamma function for complex argument (Lanczos, g = 7).
cplx gamma_complex(cplx z);
// Principal log-gamma; continuous away from the negative real axis.
cplx lgamma_complex(cplx z);
// 1/Gamma(z); exactly zero at the poles.
cplx rgamma_complex(cplx z);

cplx erfc_complex(cplx z);
cplx erf_complex(cplx z);

// Physicists' Hermite polynomial by the three-term recurrence.
cplx hermite(int n, cplx z);

enum class PcfMethod { series, asymptotic, hermite_reduction, ode };

const char* to_string(PcfMethod m);

struct PcfEvalReport {
    cplx value;
    PcfMethod method;
    double est_abs_err;
};

inline constexpr double kPcfDefaultTol = 1e-10;

// Parabolic cylinder function D_nu(z). Throws AccuracyError when the best
// available estimate exceeds rel_tol relative to |value|.
PcfEvalReport pcf_d(double nu, cplx z, double rel_tol = kPcfDefaultTol);
// Complex order, used for the continuum family nu = -1/2 + iE/omega.
PcfEvalReport pcf_d(cplx nu, cplx z, double rel_tol = kPcfDefaultTol);

// D_nu'(z) = -(z/2) D_nu(z) + nu D_{nu-1}(z).
cplx pcf_d_prime(cplx nu, cplx z, double rel_tol = kPcfDefaultTol);

cplx pcf_at_zero(cplx nu);
cplx pcf_deriv_at_zero(cplx nu);

// Individual branches, exposed for cross-validation.
PcfEvalReport pcf_d_series(cplx nu, cplx z);
PcfEvalReport pcf_d_asymptotic(cplx nu, cplx z);
PcfEvalReport pcf_d_hermite(int n, cplx z);

// |D(z) d/dz[D(-z)] - D'(z) D(-z) - sqrt(2 pi)/Gamma(-nu)|.
double pcf_wronskian_residual(double nu, cplx z);
// Same combination with the sign and evaluation point exactly as printed:
// |D(z) D'(-z) - D'(z) D(-z) + sqrt(2 pi)/Gamma(-nu)|.
double pcf_wronskian_residual_printed(double nu, cplx z);

// |D_nu(z) - Gamma(nu+1)/sqrt(2 pi) [e^{i pi nu/2} D_{-nu-1}(iz) + e^{-i pi nu/2} D_{-nu-1}(-iz)]|
double pcf_connection_residual(double nu, cplx z);

// |N_E|^2 = 1 / (2 cosh(pi E / omega)).
double norm_const(double E, double omega);

struct NormCheck {
    double cosh_form;   // 1/(2 cosh(pi E/omega))
    double gamma_form;  // |Gamma(1/4 + iE/(2 omega))|^2 / (2 pi)
    double rel_diff;    // |gamma_form - cosh_form| / cosh_form
    double half_form;   // |Gamma(1/2 + iE/omega)|^2 / (2 pi)
};
NormCheck norm_const_check(double E, double omega);

// N_E [D_nu(e^{i pi/4} sqrt(2 m omega) x) + D_nu(-e^{i pi/4} sqrt(2 m omega) x)],
// nu = -1/2 + iE/omega, N_E = sqrt(norm_const).
cplx psi_continuum(double E, double x, const ModelParams& params);

// Numerical experiment for the general-order overlap formula: returns the
// quadrature of D_nu(x) D_nu2(x) over the real line and the closed form.
struct OverlapExperiment {
    double quadrature;
    double formula;
};
OverlapExperiment pcf_overlap_experiment(double nu, double nu2);

}  // namespace kgioh::specfun
