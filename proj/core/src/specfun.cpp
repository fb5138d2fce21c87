#include "kgioh/specfun.hpp"

#include <array>
#include <cfloat>
#include <cmath>

#include "kgioh/errors.hpp"

namespace kgioh::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * kPi);
const double kLogMax = std::log(DBL_MAX);

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

// ln Gamma(z) for Re z >= 1/2.
cplx lanczos_log(cplx z) {
    z -= 1.0;
    cplx a = kLanczos[0];
    const cplx t = z + kLanczosG + 0.5;
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
    return kLogSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(a);
}

// Upward shift count that brings Re z above 1/2.
int shift_count(cplx z) {
    return z.real() >= 0.5 ? 0 : static_cast<int>(std::ceil(0.5 - z.real()));
}

constexpr int kMaxShift = 12;

}  // namespace

cplx lgamma_complex(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("lgamma at non-positive integer");
    if (z.real() >= 0.5) return lanczos_log(z);
    const int k = shift_count(z);
    if (k <= kMaxShift) {
        cplx acc = lanczos_log(z + static_cast<double>(k));
        for (int j = 0; j < k; ++j) acc -= std::log(z + static_cast<double>(j));
        return acc;
    }
    return std::log(kPi) - std::log(std::sin(kPi * z)) - lanczos_log(1.0 - z);
}

cplx gamma_complex(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw OverflowError("gamma of non-finite argument");
    if (is_nonpositive_integer(z)) throw PoleError("gamma at non-positive integer");
    cplx g;
    if (z.real() >= 0.5) {
        const cplx l = lanczos_log(z);
        if (l.real() > kLogMax) throw OverflowError("|Gamma(z)| exceeds double range");
        g = std::exp(l);
    } else if (const int k = shift_count(z); k <= kMaxShift) {
        g = gamma_complex(z + static_cast<double>(k));
        for (int j = 0; j < k; ++j) g /= (z + static_cast<double>(j));
    } else {
        // Reflection; Gamma(1-z) has Re(1-z) > 12.
        const cplx l = std::log(kPi) - std::log(std::sin(kPi * z)) - lanczos_log(1.0 - z);
        if (l.real() > kLogMax) throw OverflowError("|Gamma(z)| exceeds double range");
        g = std::exp(l);
    }
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
        throw OverflowError("|Gamma(z)| exceeds double range");
    return g;
}

cplx rgamma_complex(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() >= 0.5) return std::exp(-lanczos_log(z));
    if (const int k = shift_count(z); k <= kMaxShift) {
        cplx r = rgamma_complex(z + static_cast<double>(k));
        for (int j = 0; j < k; ++j) r *= (z + static_cast<double>(j));
        return r;
    }
    return std::sin(kPi * z) * std::exp(lanczos_log(1.0 - z)) / kPi;
}

namespace {

cplx erf_series(cplx z) {
    // erf z = 2/sqrt(pi) sum (-1)^n z^{2n+1} / (n! (2n+1))
    const cplx z2 = z * z;
    cplx term = z;  // (-1)^n z^{2n+1} / n!
    cplx sum = z;
    for (int n = 1; n < 2000; ++n) {
        term *= -z2 / static_cast<double>(n);
        const cplx add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum) && n > 4) break;
    }
    return sum * (2.0 / std::sqrt(kPi));
}

// Laplace continued fraction, Re z > 0:
// erfc z = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
cplx erfc_cf(cplx z) {
    constexpr double tiny = 1e-300;
    cplx f = z;
    cplx C = f;
    cplx D = 0.0;
    for (int k = 1; k < 20000; ++k) {
        const double a = 0.5 * k;
        D = z + a * D;
        if (std::abs(D) < tiny) D = tiny;
        C = z + a / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        const cplx delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z * z) / (std::sqrt(kPi) * f);
}

}  // namespace

cplx erfc_complex(cplx z) {
    if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
    if (z.real() <= 2.0) return 1.0 - erf_series(z);
    return erfc_cf(z);
}

cplx erf_complex(cplx z) {
    if (std::abs(z) < 2.0) return erf_series(z);
    return 1.0 - erfc_complex(z);
}

cplx hermite(int n, cplx z) {
    if (n < 0 || n > 200) throw DomainError("hermite requires 0 <= n <= 200");
    cplx h0 = 1.0;
    if (n == 0) return h0;
    cplx h1 = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        const cplx h2 = 2.0 * z * h1 - 2.0 * static_cast<double>(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    if (!std::isfinite(h1.real()) || !std::isfinite(h1.imag()))
        throw OverflowError("Hermite polynomial overflow");
    return h1;
}

double norm_const(double E, double omega) {
    if (!(omega > 0.0)) throw DomainError("norm_const requires omega > 0");
    return 0.5 / std::cosh(kPi * E / omega);
}

NormCheck norm_const_check(double E, double omega) {
    NormCheck c{};
    c.cosh_form = norm_const(E, omega);
    const double g = std::abs(gamma_complex(cplx(0.25, E / (2.0 * omega))));
    c.gamma_form = g * g / (2.0 * kPi);
    const double h = std::abs(gamma_complex(cplx(0.5, E / omega)));
    c.half_form = h * h / (2.0 * kPi);
    c.rel_diff = std::abs(c.gamma_form - c.cosh_form) / c.cosh_form;
    return c;
}

cplx psi_continuum(double E, double x, const ModelParams& params) {
    if (!(params.m > 0.0) || !(params.omega > 0.0))
        throw DomainError("psi_continuum requires m > 0 and omega > 0");
    const cplx nu(-0.5, E / params.omega);
    const cplx z = (std::sqrt(2.0 * params.m * params.omega) * x) * std::polar(1.0, kPi / 4.0);
    const double n = std::sqrt(norm_const(E, params.omega));
    return n * (pcf_d(nu, z).value + pcf_d(nu, -z).value);
}

}  // namespace kgioh::specfun
