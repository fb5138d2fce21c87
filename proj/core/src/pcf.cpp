#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "kgioh/errors.hpp"
#include "kgioh/quadrature.hpp"
#include "kgioh/specfun.hpp"

namespace kgioh::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Error level at which a branch is accepted without consulting the others.
constexpr double kGoodEnough = 1e-14;
// Beyond this radius the Maclaurin series is never attempted.
constexpr double kSeriesMaxRadius = 12.0;
constexpr double kAsymptoticMinRadius = 3.0;
constexpr double kOdeMaxRadius = 13.0;
constexpr double kOdeStep = 0.25;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

bool is_nonneg_integer(cplx nu) {
    return nu.imag() == 0.0 && nu.real() >= 0.0 && nu.real() == std::round(nu.real());
}

void check_order(cplx nu) {
    if (!(std::abs(nu.real()) <= 10.5) || !(std::abs(nu.imag()) <= 40.0))
        throw DomainError("pcf_d order outside |Re nu| <= 10.5, |Im nu| <= 40");
}

// Taylor stepping of D'' = (z^2/4 - nu - 1/2) D from z0 to z0 + h.
void taylor_step(cplx nu, cplx z0, cplx& y, cplx& yp, cplx h) {
    const cplx q0 = z0 * z0 / 4.0 - nu - 0.5;
    const cplx q1 = z0 / 2.0;
    constexpr double q2 = 0.25;
    std::array<cplx, 128> t{};
    t[0] = y;
    t[1] = yp;
    cplx s = t[0] + t[1] * h;
    cplx sp = t[1];
    cplx hk = h;  // h^{k-1} for the current index k
    double mag = std::abs(s) + 1e-300;
    int quiet = 0;
    for (std::size_t k = 2; k < t.size(); ++k) {
        cplx acc = q0 * t[k - 2];
        if (k >= 3) acc += q1 * t[k - 3];
        if (k >= 4) acc += q2 * t[k - 4];
        t[k] = acc / static_cast<double>(k * (k - 1));
        sp += static_cast<double>(k) * t[k] * hk;
        hk *= h;
        const cplx term = t[k] * hk;
        s += term;
        mag = std::max(mag, std::abs(s));
        quiet = std::abs(term) < 1e-18 * mag ? quiet + 1 : 0;
        if (quiet >= 3) break;
    }
    y = s;
    yp = sp;
}

}  // namespace

const char* to_string(PcfMethod m) {
    switch (m) {
        case PcfMethod::series: return "series";
        case PcfMethod::asymptotic: return "asymptotic";
        case PcfMethod::hermite_reduction: return "hermite-reduction";
        case PcfMethod::ode: return "ode";
    }
    return "unknown";
}

cplx pcf_at_zero(cplx nu) {
    return std::sqrt(kPi) * std::pow(2.0, nu / 2.0) * rgamma_complex((1.0 - nu) / 2.0);
}

cplx pcf_deriv_at_zero(cplx nu) {
    return -std::sqrt(kPi) * std::pow(2.0, (nu + 1.0) / 2.0) * rgamma_complex(-nu / 2.0);
}

PcfEvalReport pcf_d_hermite(int n, cplx z) {
    if (n < 0 || n > 200) throw DomainError("Hermite reduction requires 0 <= n <= 200");
    const cplx v = std::pow(2.0, -0.5 * n) * std::exp(-z * z / 4.0) * hermite(n, z / std::sqrt(2.0));
    if (!finite(v)) throw OverflowError("D_n overflow");
    return {v, PcfMethod::hermite_reduction, 4.0 * kEps * (n + 1) * std::abs(v)};
}

PcfEvalReport pcf_d_series(cplx nu, cplx z) {
    // c_{k+2} (k+1)(k+2) = -(nu + 1/2) c_k + c_{k-2} / 4
    const cplx a = -(nu + 0.5);
    std::vector<cplx> c;
    c.reserve(512);
    c.push_back(pcf_at_zero(nu));
    c.push_back(pcf_deriv_at_zero(nu));
    cplx sum = c[0] + c[1] * z;
    double abs_sum = std::abs(c[0]) + std::abs(c[1] * z);
    cplx zk = z;  // z^{k+1} when computing term k+2
    double last = 0.0;
    // Coefficients can vanish in pairs (nu = -1/2), so require four quiet terms.
    int quiet = 0;
    for (int k = 0; k < 2000; ++k) {
        const cplx ckm2 = k >= 2 ? c[k - 2] : cplx(0.0);
        const cplx cn = (a * c[k] + 0.25 * ckm2) / (static_cast<double>(k + 1) * (k + 2));
        c.push_back(cn);
        zk *= z;
        const cplx t = cn * zk;
        sum += t;
        abs_sum += std::abs(t);
        last = std::abs(t);
        quiet = last <= 1e-17 * std::abs(sum) ? quiet + 1 : 0;
        if (k > 8 && quiet >= 4) break;
    }
    if (!finite(sum)) throw OverflowError("D_nu series overflow");
    return {sum, PcfMethod::series, 8.0 * kEps * abs_sum + last};
}

namespace {

// Sum_{k} s_k with s_{k+1} = s_k * f(k) / (2 z^2 (k+1)), optimally truncated.
struct AsymSum {
    cplx sum;
    double last;  // magnitude of the last included term
};

AsymSum asym_sum(cplx z2, cplx p0, cplx p1, double sign) {
    // term_{k+1} = term_k * sign * (p0 + 2k)(p1 + 2k) / ((k+1) 2 z^2)
    cplx s = 1.0;
    cplx t = 1.0;
    double last = 1.0;
    for (int k = 0; k < 400; ++k) {
        const cplx tn = t * sign * (p0 + 2.0 * k) * (p1 + 2.0 * k) / (static_cast<double>(k + 1) * 2.0 * z2);
        if (std::abs(tn) >= std::abs(t) && k > 0) break;
        t = tn;
        s += t;
        last = std::abs(t);
        if (last < 1e-17 * std::abs(s) || last == 0.0) break;
    }
    return {s, last};
}

}  // namespace

PcfEvalReport pcf_d_asymptotic(cplx nu, cplx z) {
    if (z == cplx(0.0)) throw DomainError("asymptotic expansion at z = 0");
    const cplx z2 = z * z;
    const cplx lz = std::log(z);
    // e^{-z^2/4} z^nu sum (-1)^k (-nu)_{2k} / (k! (2 z^2)^k)
    const AsymSum s1 = asym_sum(z2, -nu, -nu + 1.0, -1.0);
    const cplx pre1 = std::exp(-z2 / 4.0 + nu * lz);
    cplx v = pre1 * s1.sum;
    double err = 2.0 * std::abs(pre1) * s1.last;
    const double ph = std::arg(z);
    if (std::abs(ph) > kPi / 2.0) {
        const double sg = ph > 0.0 ? 1.0 : -1.0;
        // - sqrt(2 pi)/Gamma(-nu) e^{+-i pi nu} e^{z^2/4} z^{-nu-1} sum (nu+1)_{2k} / (k! (2 z^2)^k)
        const cplx rg = rgamma_complex(-nu);
        if (rg != cplx(0.0)) {
            const AsymSum s2 = asym_sum(z2, nu + 1.0, nu + 2.0, 1.0);
            const cplx pre2 = -std::sqrt(2.0 * kPi) * rg * std::exp(cplx(0.0, sg * kPi) * nu) *
                              std::exp(z2 / 4.0 - (nu + 1.0) * lz);
            v += pre2 * s2.sum;
            err += 2.0 * std::abs(pre2) * s2.last;
        }
    }
    if (!finite(v)) throw OverflowError("D_nu asymptotic overflow");
    return {v, PcfMethod::asymptotic, err + 4.0 * kEps * std::abs(v)};
}

namespace {

// Integrate inward along the ray from radius r0 to z.
cplx ode_inward(cplx nu, cplx z, double r0) {
    const cplx u = z / std::abs(z);
    const cplx z0 = r0 * u;
    cplx y = pcf_d_asymptotic(nu, z0).value;
    cplx yp = -z0 / 2.0 * y + nu * pcf_d_asymptotic(nu - 1.0, z0).value;
    const int n = static_cast<int>(std::ceil((r0 - std::abs(z)) / kOdeStep));
    const cplx h = (z - z0) / static_cast<double>(n);
    cplx zc = z0;
    for (int i = 0; i < n; ++i) {
        taylor_step(nu, zc, y, yp, h);
        zc = z0 + static_cast<double>(i + 1) * h;
    }
    return y;
}

// Start radius where the asymptotic value is accurate to ~1e-15.
double ode_start_radius(cplx nu, cplx u, double r) {
    for (double r0 : {10.0, 12.0, 14.0, 17.0, 20.0, 24.0, 28.0, 34.0}) {
        if (r0 <= r) continue;
        const PcfEvalReport a = pcf_d_asymptotic(nu, r0 * u);
        if (a.est_abs_err <= 2e-15 * std::abs(a.value)) return r0;
    }
    return 0.0;
}

PcfEvalReport pcf_d_ode(cplx nu, cplx z) {
    const double r = std::abs(z);
    const cplx u = z / r;
    const double r0 = ode_start_radius(nu, u, r);
    if (r0 == 0.0) return {0.0, PcfMethod::ode, std::numeric_limits<double>::infinity()};
    const cplx y1 = ode_inward(nu, z, r0);
    const cplx y2 = ode_inward(nu, z, r0 + 2.0);
    if (!finite(y1) || !finite(y2)) return {0.0, PcfMethod::ode, std::numeric_limits<double>::infinity()};
    return {y1, PcfMethod::ode, std::abs(y1 - y2) + 16.0 * kEps * std::abs(y1)};
}

bool acceptable(const PcfEvalReport& r, double tol) {
    return std::isfinite(r.est_abs_err) && r.est_abs_err <= tol * std::abs(r.value);
}

}  // namespace

PcfEvalReport pcf_d(cplx nu, cplx z, double rel_tol) {
    check_order(nu);
    if (!finite(z)) throw DomainError("pcf_d argument not finite");
    if (is_nonneg_integer(nu)) return pcf_d_hermite(static_cast<int>(nu.real()), z);

    const double r = std::abs(z);
    std::vector<PcfEvalReport> cands;
    auto attempt = [&](auto&& f) {
        try {
            cands.push_back(f());
            return acceptable(cands.back(), kGoodEnough);
        } catch (const OverflowError&) {
            return false;
        }
    };

    if (r <= kSeriesMaxRadius && attempt([&] { return pcf_d_series(nu, z); })) return cands.back();
    if (r >= kAsymptoticMinRadius && attempt([&] { return pcf_d_asymptotic(nu, z); })) return cands.back();
    if (r > 0.0 && r <= kOdeMaxRadius &&
        attempt([&] { return pcf_d_ode(nu, z); }))
        return cands.back();

    if (cands.empty()) throw OverflowError("D_nu not representable at this argument");
    const auto best = std::min_element(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        const double ra = a.est_abs_err / std::max(std::abs(a.value), 1e-300);
        const double rb = b.est_abs_err / std::max(std::abs(b.value), 1e-300);
        return ra < rb;
    });
    if (!acceptable(*best, rel_tol))
        throw AccuracyError("D_nu estimated relative error " +
                            std::to_string(best->est_abs_err / std::abs(best->value)) + " exceeds tolerance");
    return *best;
}

PcfEvalReport pcf_d(double nu, cplx z, double rel_tol) {
    if (!(nu >= -10.0 && nu <= 10.0)) throw DomainError("pcf_d requires nu in [-10, 10]");
    return pcf_d(cplx(nu, 0.0), z, rel_tol);
}

cplx pcf_d_prime(cplx nu, cplx z, double rel_tol) {
    const cplx d = pcf_d(nu, z, rel_tol).value;
    if (nu == cplx(0.0)) return -z / 2.0 * d;
    return -z / 2.0 * d + nu * pcf_d(nu - 1.0, z, rel_tol).value;
}

double pcf_wronskian_residual(double nu, cplx z) {
    if (nu >= 0.0 && nu == std::round(nu)) throw PoleError("Wronskian residual undefined for integer nu >= 0");
    const cplx w0 = std::sqrt(2.0 * kPi) * rgamma_complex(-nu);
    cplx d, dp, dm, dpm;
    if (z == cplx(0.0)) {
        d = dm = pcf_at_zero(nu);
        dp = dpm = pcf_deriv_at_zero(nu);
    } else {
        d = pcf_d(nu, z).value;
        dp = pcf_d_prime(nu, z);
        dm = pcf_d(nu, -z).value;
        dpm = pcf_d_prime(nu, -z);
    }
    // d/dz [D(-z)] = -D'(-z)
    const cplx w = d * (-dpm) - dp * dm;
    return std::abs(w - w0);
}

double pcf_wronskian_residual_printed(double nu, cplx z) {
    if (nu >= 0.0 && nu == std::round(nu)) throw PoleError("Wronskian residual undefined for integer nu >= 0");
    const cplx w0 = std::sqrt(2.0 * kPi) * rgamma_complex(-nu);
    cplx d, dp, dm, dpm;
    if (z == cplx(0.0)) {
        d = dm = pcf_at_zero(nu);
        dp = dpm = pcf_deriv_at_zero(nu);
    } else {
        d = pcf_d(nu, z).value;
        dp = pcf_d_prime(nu, z);
        dm = pcf_d(nu, -z).value;
        dpm = pcf_d_prime(nu, -z);
    }
    return std::abs(d * dpm - dp * dm + w0);
}

double pcf_connection_residual(double nu, cplx z) {
    const cplx i(0.0, 1.0);
    const double mu = -nu - 1.0;
    const cplx rhs = gamma_complex(nu + 1.0) / std::sqrt(2.0 * kPi) *
                     (std::exp(i * kPi * nu / 2.0) * pcf_d(mu, i * z).value +
                      std::exp(-i * kPi * nu / 2.0) * pcf_d(mu, -i * z).value);
    return std::abs(pcf_d(nu, z).value - rhs);
}

}  // namespace kgioh::specfun

namespace kgioh::specfun {

OverlapExperiment pcf_overlap_experiment(double nu, double nu2) {
    // Finite window; for non-integer order the integrand grows like e^{x^2/4}
    // on the negative axis, so the value depends on the window.
    constexpr double L = 8.0;
    double q = 0.0;
    try {
        q = quad::integrate(
                [&](double x) {
                    return (pcf_d(nu, cplx(x, 0.0), 1e-8).value * pcf_d(nu2, cplx(x, 0.0), 1e-8).value).real();
                },
                -L, L, 1e-9, 1e-12)
                .value;
    } catch (const QuadratureError&) {
        q = std::numeric_limits<double>::quiet_NaN();
    }
    const double s = nu + nu2 + 1.0;
    const double sinc = std::abs(s) < 1e-15 ? 1.0 : std::sin(kPi * s) / (kPi * s);
    const double f = (std::sqrt(2.0 * kPi) * gamma_complex(nu + 1.0) * rgamma_complex(-nu2)).real() * sinc;
    return {q, f};
}

}  // namespace kgioh::specfun
