#include "kgioh/correlators.hpp"

#include <cmath>
#include <string>

#include "kgioh/errors.hpp"
#include "kgioh/fit.hpp"
#include "kgioh/spectrum.hpp"

namespace kgioh {

namespace {

constexpr cplx kI(0.0, 1.0);

// sinh(w t)/w with the w -> 0 limit.
cplx sinh_over(double w, cplx t) { return w == 0.0 ? t : std::sinh(w * t) / w; }

bool near_multiple_of_pi(double a) {
    const double r = a / kPi;
    return std::abs(r - std::round(r)) < 1e-12;
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

cplx GaussianKernelCoeffs::operator()(double x, double x2) const {
    return prefactor * std::exp(coeff_diag * (x * x + x2 * x2) + coeff_cross * x * x2);
}

GaussianKernelCoeffs propagator_coeffs(cplx t, const ModelParams& p) {
    if (t == cplx(0.0)) throw SingularTimeError("propagator at t = 0");
    const double w = p.omega;
    const cplx s = sinh_over(w, t);
    if (std::abs(s) < 1e-300) throw SingularTimeError("sinh(omega t) = 0");
    const cplx c = std::cosh(w * t);
    GaussianKernelCoeffs k;
    k.prefactor = std::sqrt(p.m / (2.0 * kPi * kI * s));
    k.coeff_diag = kI * p.m * c / (2.0 * s);
    k.coeff_cross = -kI * p.m / s;
    return k;
}

cplx propagator_complex_time(double x, double x2, cplx t, const ModelParams& p) {
    const cplx v = propagator_coeffs(t, p)(x, x2);
    if (!finite(v)) throw OverflowError("propagator overflow");
    return v;
}

cplx propagator_realtime(double x, double x2, double t, const ModelParams& p) {
    if (t == 0.0) throw SingularTimeError("propagator at t = 0");
    return propagator_complex_time(x, x2, cplx(t, 0.0), p);
}

GaussianKernelCoeffs euclidean_coeffs(double tau, const ModelParams& p) {
    const double w = p.omega;
    if (tau == 0.0 || (w > 0.0 && near_multiple_of_pi(w * tau)))
        throw SingularTimeError("Euclidean kernel singular at omega tau in pi Z");
    const double s = w == 0.0 ? tau : std::sin(w * tau) / w;
    const double c = std::cos(w * tau);
    GaussianKernelCoeffs k;
    k.prefactor = std::sqrt(cplx(p.m / (2.0 * kPi * s), 0.0));
    k.coeff_diag = -p.m * c / (2.0 * s);
    k.coeff_cross = p.m / s;
    return k;
}

cplx propagator_euclidean(double x, double x2, double tau, const ModelParams& p) {
    const cplx v = euclidean_coeffs(tau, p)(x, x2);
    if (!finite(v)) throw OverflowError("Euclidean kernel overflow");
    return v;
}

GaussianKernelCoeffs mehler_coeffs(double tau, const ModelParams& p) {
    if (!(tau > 0.0)) throw SingularTimeError("Mehler kernel requires tau > 0");
    const double w = p.omega;
    const double s = w == 0.0 ? tau : std::sinh(w * tau) / w;
    const double c = std::cosh(w * tau);
    GaussianKernelCoeffs k;
    k.prefactor = std::sqrt(p.m / (2.0 * kPi * s));
    k.coeff_diag = -p.m * c / (2.0 * s);
    k.coeff_cross = p.m / s;
    return k;
}

namespace {

GaussianKernelCoeffs density_coeffs(double beta, const ModelParams& p) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (p.hermitian_reference) return mehler_coeffs(beta, p);
    const double wb = p.omega * beta;
    if (!(wb > 0.0 && wb < kPi)) throw DomainError("density kernel requires omega beta in (0, pi)");
    return euclidean_coeffs(beta, p);
}

}  // namespace

cplx density_kernel(double x, double x2, double beta, const ModelParams& p, cplx z_norm) {
    return density_coeffs(beta, p)(x, x2) / z_norm;
}

cplx diagonal_paper(double x, double beta, const ModelParams& p, cplx z_norm) {
    const double wb = p.omega * beta;
    if (!(wb > 0.0 && wb < kPi)) throw DomainError("density kernel requires omega beta in (0, pi)");
    const double mw = p.m * p.omega;
    const double s = std::sin(wb);
    return std::sqrt(cplx(mw / (2.0 * kPi * s), 0.0)) * std::exp(-mw * std::cos(wb) / s * x * x) / z_norm;
}

cplx diagonal_consistent(double x, double beta, const ModelParams& p, cplx z_norm) {
    return density_kernel(x, x, beta, p, z_norm);
}

double width_sq(double beta, const ModelParams& p) {
    const double wb = p.omega * beta;
    const double c = std::cos(wb);
    if (c == 0.0) return INFINITY;
    return std::sin(wb) / (2.0 * p.m * p.omega * c);
}

bool delocalized(double beta, const ModelParams& p) { return std::cos(p.omega * beta) <= 0.0; }

double reference_partition(double beta, const ModelParams& p) { return 0.5 / std::sinh(0.5 * beta * p.omega); }

double t_c_paper(double omega) { return omega / (kPi * kPi); }
double t_c_divergence(double omega) { return 2.0 * omega / kPi; }

const char* to_string(GTauVariant v) { return v == GTauVariant::paper ? "paper" : "standard"; }

cplx g_tau_energy(cplx E, double tau, double beta, GTauVariant variant) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (std::abs(tau) > beta) throw DomainError("g_tau requires |tau| <= beta");
    const cplx denom = 1.0 - std::exp(-beta * E);
    if (std::abs(denom) < 1e-300) throw PoleError("1 - e^{-beta E} = 0");
    if (variant == GTauVariant::paper) {
        // theta(0) = 1
        return tau >= 0.0 ? std::exp(-E * tau) / denom : std::exp(E * (tau - beta)) / denom;
    }
    const double a = std::abs(tau);
    // cosh(E(a - beta/2))/(2 E sinh(beta E/2)) in decaying exponentials
    return (std::exp(-E * a) + std::exp(-E * (beta - a))) / (2.0 * E * denom);
}

cplx g_tau(int n, double tau, double beta, const ModelParams& p, GTauVariant variant) {
    return g_tau_energy(energy(n, p), tau, beta, variant);
}

cplx g_tau_consistency(int n, double tau, double beta, const ModelParams& p) {
    const cplx e = energy(n, p);
    return 2.0 * e * g_tau_energy(e, tau, beta, GTauVariant::standard) -
           g_tau_energy(e, tau, beta, GTauVariant::paper);
}

double otoc(double t, const ModelParams& p) {
    const double c = std::cosh(p.omega * t);
    const double v = c * c;
    if (!std::isfinite(v)) throw OverflowError("OTOC overflow at omega t = " + std::to_string(p.omega * t));
    return v;
}

SlopeFit otoc_log_slope(double t0, double t1, int points, const ModelParams& p) {
    if (points < 2 || !(t1 > t0)) throw DomainError("otoc_log_slope needs t1 > t0 and >= 2 points");
    std::vector<double> t(points), y(points);
    for (int i = 0; i < points; ++i) {
        t[i] = t0 + (t1 - t0) * i / (points - 1);
        y[i] = std::log(otoc(t[i], p));
    }
    const LinearFit f = fit_line(t, y);
    return {f.slope, f.intercept, f.residual};
}

double gaussian_entropy_term(double nu) {
    if (!(nu >= 0.5 - 1e-12)) throw DomainError("symplectic eigenvalue below 1/2: " + std::to_string(nu));
    if (nu <= 0.5) return 0.0;
    const double a = nu + 0.5;
    const double b = nu - 0.5;
    return a * std::log(a) - b * std::log(b);
}

double gaussian_entropy(const std::vector<double>& nu) {
    double s = 0.0;
    for (double v : nu) s += gaussian_entropy_term(v);
    return s;
}

}  // namespace kgioh
