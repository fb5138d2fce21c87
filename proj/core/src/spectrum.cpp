#include "kgioh/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgioh/errors.hpp"
#include "kgioh/quadrature.hpp"

namespace kgioh {

void ModelParams::validate() const {
    for (double v : {m, omega, v0, lambda, a0, t_crit})
        if (!std::isfinite(v)) throw DomainError("model parameters must be finite");
    if (!(m > 0.0)) throw DomainError("m must be positive");
    if (omega < 0.0) throw DomainError("omega must be non-negative");
}

void TruncationPolicy::validate() const {
    if (n_min < 8) throw DomainError("n_min must be >= 8");
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (n_max < n_min) throw DomainError("n_max must be >= n_min");
    if (mode_cap < 0) throw DomainError("mode_cap must be >= 0");
}

cplx energy(int n, const ModelParams& p) {
    if (n < 0) throw DomainError("energy index must be non-negative");
    if (p.hermitian_reference) return p.omega * (n + 0.5);
    return std::sqrt(cplx(p.m * p.m, p.omega * (2.0 * n + 1.0 - p.m)));
}

EffectiveSpectrum::EffectiveSpectrum(const ModelParams& params) : params_(params) { params_.validate(); }

double EffectiveSpectrum::identity_residual(int n) const {
    const cplx e = (*this)(n);
    const cplx target = params_.hermitian_reference
                            ? cplx(params_.omega * (n + 0.5)) * (params_.omega * (n + 0.5))
                            : cplx(params_.m * params_.m, params_.omega * (2.0 * n + 1.0 - params_.m));
    return std::abs(e * e - target) / std::abs(e * e);
}

namespace {

void require_oscillator(const ModelParams& p) {
    if (!(p.m > 0.0) || !(p.omega > 0.0)) throw DomainError("mode functions require m > 0 and omega > 0");
}

// phi_n(zeta) = C_n H_n(zeta) without the Gaussian, by the normalised recurrence.
template <class T>
void normalised_hermite(int count, T zeta, double mw, std::vector<T>& out) {
    out.assign(count, T(0));
    if (count == 0) return;
    out[0] = T(std::pow(mw / kPi, 0.25));
    if (count == 1) return;
    out[1] = std::sqrt(2.0) * zeta * out[0];
    for (int n = 1; n + 1 < count; ++n)
        out[n + 1] = std::sqrt(2.0 / (n + 1)) * zeta * out[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * out[n - 1];
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

cplx mode_function_at(int n, cplx x, const ModelParams& p) {
    if (n < 0 || n > 200) throw DomainError("mode_function requires 0 <= n <= 200");
    require_oscillator(p);
    const double mw = p.m * p.omega;
    const cplx zeta = std::sqrt(mw) * std::polar(1.0, kPi / 4.0) * x;
    std::vector<cplx> h;
    normalised_hermite(n + 1, zeta, mw, h);
    const cplx v = h[n] * std::exp(cplx(0.0, -0.5 * mw) * x * x);
    if (!finite(v)) throw OverflowError("mode function overflow at n = " + std::to_string(n));
    return v;
}

cplx mode_function(int n, double x, const ModelParams& p) {
    if (n < 0 || n > 200) throw DomainError("mode_function requires 0 <= n <= 200");
    require_oscillator(p);
    const double mw = p.m * p.omega;
    const double xi = std::sqrt(mw) * x;
    std::vector<cplx> h;
    normalised_hermite(n + 1, xi * std::polar(1.0, kPi / 4.0), mw, h);
    // |exp(-i m omega x^2/2)| = 1 exactly
    const cplx v = h[n] * std::polar(1.0, -0.5 * xi * xi);
    if (!finite(v)) throw OverflowError("mode function overflow at n = " + std::to_string(n));
    return v;
}

double oscillator_function(int n, double x, double m, double omega) {
    if (n < 0) throw DomainError("oscillator_function requires n >= 0");
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("oscillator_function requires m, omega > 0");
    const double mw = m * omega;
    const double xi = std::sqrt(mw) * x;
    std::vector<double> h;
    // Gaussian split across the recurrence to avoid underflow at large xi.
    normalised_hermite(n + 1, xi, mw, h);
    return h[n] * std::exp(-0.5 * xi * xi);
}

std::vector<cplx> mode_tower(int count, double x, const ModelParams& p) {
    require_oscillator(p);
    const double mw = p.m * p.omega;
    const double xi = std::sqrt(mw) * x;
    std::vector<cplx> out;
    if (p.hermitian_reference) {
        std::vector<double> h;
        normalised_hermite(count, xi, mw, h);
        const double g = std::exp(-0.5 * xi * xi);
        out.resize(count);
        for (int n = 0; n < count; ++n) out[n] = h[n] * g;
        return out;
    }
    normalised_hermite(count, xi * std::polar(1.0, kPi / 4.0), mw, out);
    const cplx g = std::polar(1.0, -0.5 * xi * xi);
    for (auto& v : out) {
        v *= g;
        if (!finite(v)) throw OverflowError("mode tower overflow");
    }
    return out;
}

std::vector<cplx> mode_transform_tower(int count, double k, const ModelParams& p) {
    require_oscillator(p);
    if (count < 0) throw DomainError("mode count must be non-negative");
    const double a = 1.0 / (p.m * p.omega);
    const double kappa = std::sqrt(a) * k;
    std::vector<cplx> out;
    cplx g;
    if (p.hermitian_reference) {
        normalised_hermite(count, cplx(kappa), a, out);
        g = std::exp(-0.5 * kappa * kappa);
    } else {
        normalised_hermite(count, kappa * std::polar(1.0, -kPi / 4.0), a, out);
        g = std::polar(1.0, 0.5 * kappa * kappa);
    }
    const cplx step(0.0, -1.0);
    cplx phase = 1.0;
    for (auto& v : out) {
        v *= g * phase;
        phase *= step;
        if (!finite(v)) throw OverflowError("mode transform overflow");
    }
    return out;
}

cplx mode_transform(int n, double k, const ModelParams& p) {
    if (n < 0) throw DomainError("mode index must be non-negative");
    return mode_transform_tower(n + 1, k, p)[n];
}

ModeStream::ModeStream(double x, const ModelParams& p) {
    require_oscillator(p);
    const double mw = p.m * p.omega;
    const double xi = std::sqrt(mw) * x;
    // The Gaussian (or its unimodular continuation) is folded into psi_0.
    if (p.hermitian_reference) {
        zeta_ = xi;
        cur_ = std::pow(mw / kPi, 0.25) * std::exp(-0.5 * xi * xi);
    } else {
        zeta_ = xi * std::polar(1.0, kPi / 4.0);
        cur_ = std::pow(mw / kPi, 0.25) * std::polar(1.0, -0.5 * xi * xi);
    }
}

cplx ModeStream::next() {
    const cplx out = cur_;
    if (!finite(out)) throw OverflowError("mode stream overflow at n = " + std::to_string(n_));
    const double n = n_;
    const cplx nxt = std::sqrt(2.0 / (n + 1.0)) * zeta_ * cur_ - std::sqrt(n / (n + 1.0)) * prev_;
    prev_ = cur_;
    cur_ = nxt;
    ++n_;
    return out;
}

double contour_gram(int n_max, const ModelParams& p) {
    if (n_max < 0 || n_max > 12) throw DomainError("contour_gram requires 0 <= n_max <= 12");
    require_oscillator(p);
    const double L = 12.0 / std::sqrt(p.m * p.omega);
    const cplx dir = std::polar(1.0, -kPi / 4.0);
    ModelParams q = p;
    q.hermitian_reference = false;
    // The integrand must have decayed at the window edge.
    const double edge = std::abs(mode_function_at(n_max, L * dir, q));
    if (edge * edge * 2.0 * L > 1e-10) throw QuadratureError("contour window too small for n_max");
    double worst = 0.0;
    for (int a = 0; a <= n_max; ++a)
        for (int b = a; b <= n_max; ++b) {
            auto part = [&](bool imag) {
                return quad::integrate(
                           [&](double s) {
                               const cplx v = std::conj(mode_function_at(a, s * dir, q)) * mode_function_at(b, s * dir, q);
                               return imag ? v.imag() : v.real();
                           },
                           -L, L, 1e-12, 1e-14)
                    .value;
            };
            const cplx g(part(false), part(true));
            worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace kgioh
