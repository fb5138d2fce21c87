#pragma once

#include <vector>

#include "kgioh/params.hpp"

namespace kgioh {

// prefactor * exp(coeff_diag (x^2 + x'^2) + coeff_cross x x')
struct GaussianKernelCoeffs {
    cplx prefactor;
    cplx coeff_diag;
    cplx coeff_cross;
    cplx operator()(double x, double x2) const;
};

// Real-time IOH propagator at complex time t (principal square root, which is
// continuous from t -> 0+ along the positive real axis). t = -i tau gives the
// Euclidean kernel exactly.
GaussianKernelCoeffs propagator_coeffs(cplx t, const ModelParams& params);
cplx propagator_realtime(double x, double x2, double t, const ModelParams& params);
cplx propagator_complex_time(double x, double x2, cplx t, const ModelParams& params);

// Euclidean kernel sqrt(m w/(2 pi sin w tau)) exp{-(m w/(2 sin w tau))[(x^2+x'^2) cos w tau - 2 x x']}.
// SingularTimeError at omega tau in pi Z.
GaussianKernelCoeffs euclidean_coeffs(double tau, const ModelParams& params);
cplx propagator_euclidean(double x, double x2, double tau, const ModelParams& params);

// Harmonic (Mehler) kernel with sinh/cosh; used in hermitian_reference mode.
GaussianKernelCoeffs mehler_coeffs(double tau, const ModelParams& params);

// K_E(x, x'; beta)/z_norm (Mehler kernel in hermitian_reference mode).
// DomainError unless omega beta in (0, pi) for the inverted kernel.
cplx density_kernel(double x, double x2, double beta, const ModelParams& params, cplx z_norm);
// Diagonal element as printed: exponent -(m w cos/sin) x^2 (no cross term).
cplx diagonal_paper(double x, double beta, const ModelParams& params, cplx z_norm);
// density_kernel(x, x, beta): exponent -(m w (cos - 1)/sin) x^2.
cplx diagonal_consistent(double x, double beta, const ModelParams& params, cplx z_norm);
// sigma^2 = sin(w beta)/(2 m w cos(w beta)); infinite at cos = 0.
double width_sq(double beta, const ModelParams& params);
// cos(omega beta) <= 0: the thermal width is no longer a normalisable Gaussian.
bool delocalized(double beta, const ModelParams& params);
// Z of one reference oscillator, 1/(2 sinh(beta omega/2)).
double reference_partition(double beta, const ModelParams& params);

double t_c_paper(double omega);       // omega/pi^2
double t_c_divergence(double omega);  // 2 omega/pi, from omega beta = pi/2

enum class GTauVariant { paper, standard };
const char* to_string(GTauVariant v);

// paper:    e^{-E tau}/(1 - e^{-beta E}) for tau >= 0, e^{E(tau - beta)}/(1 - e^{-beta E}) otherwise
// standard: cosh(E(|tau| - beta/2))/(2 E sinh(beta E/2))
cplx g_tau(int n, double tau, double beta, const ModelParams& params, GTauVariant variant);
cplx g_tau_energy(cplx E, double tau, double beta, GTauVariant variant);
// 2 E standard - paper; zero only if the two normalisations agreed.
cplx g_tau_consistency(int n, double tau, double beta, const ModelParams& params);

struct SeriesResult {
    cplx value;
    double est_abs_err = 0.0;
    int n_used = 0;
    const char* method = "direct";  // "direct" or "levin"
};

// sum_n psi_n(x) psi_n(x')^* / (omega_l^2 + E_n^2), omega_l = 2 pi l/beta.
// TruncationError when the error estimate exceeds trunc.rel_tol |value|.
SeriesResult green_full(int ell, double x, double x2, double beta, const ModelParams& params,
                        const TruncationPolicy& trunc);

// sum_n psi_n(x) psi_n(x')^* / (E_n^2 - omega^2 - i eps)
SeriesResult retarded_green(double omega_r, double x, double x2, const ModelParams& params, double eps,
                            const TruncationPolicy& trunc);

// (1/pi) Im G^R; positive delta weights psi_n(x) psi_n(x')^* delta(omega^2 - E_n^2).
// eps <= 0 selects the default 1e-2 Re E_0.
double spectral_density(double omega_r, double x, double x2, const ModelParams& params, double eps,
                        const TruncationPolicy& trunc);
double default_broadening(const ModelParams& params);

// cosh^2(omega t)
double otoc(double t, const ModelParams& params);
struct SlopeFit {
    double slope;
    double intercept;
    double residual;
};
// Least-squares slope of ln C(t) over [t0, t1].
SlopeFit otoc_log_slope(double t0, double t1, int points, const ModelParams& params);

// sum [(nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2)]; nu = 1/2 contributes 0.
// DomainError for nu < 1/2 - 1e-12; values within 1e-12 below 1/2 are clamped.
double gaussian_entropy(const std::vector<double>& nu);
double gaussian_entropy_term(double nu);

}  // namespace kgioh
