#include <cmath>
#include <vector>

#include "kgioh/correlators.hpp"
#include "kgioh/errors.hpp"
#include "kgioh/quadrature.hpp"
#include "kgioh/spectrum.hpp"
#include "oracle.hpp"

using namespace kgioh;
using oracle::cplx;

namespace {

ModelParams model(double m = 1.0, double omega = 1.0, bool reference = false) {
    ModelParams p;
    p.m = m;
    p.omega = omega;
    p.hermitian_reference = reference;
    return p;
}

// (1/beta) sum_{|l| <= L} e^{-i w_l tau}/(w_l^2 + E^2), paired so the result is real.
double matsubara_sum(double E, double tau, double beta, long L) {
    double s = 1.0 / (E * E);
    for (long l = L; l >= 1; --l) {
        const double w = 2.0 * kPi * l / beta;
        s += 2.0 * std::cos(w * tau) / (w * w + E * E);
    }
    return s / beta;
}

// Reference oscillator: sum_k psi_{2k}(0)^2/(w_l^2 + E_{2k}^2) with the k^{-5/2} tail integrated.
double reference_green_origin(double wl, double m, double omega) {
    const long K = 1000000;
    double c = std::sqrt(m * omega / kPi);  // psi_0(0)^2
    double s = 0.0;
    for (long k = 0; k < K; ++k) {
        const double e = omega * (2.0 * k + 0.5);
        s += c / (wl * wl + e * e);
        c *= (2.0 * k + 1.0) / (2.0 * k + 2.0);
    }
    const double a = std::sqrt(m * omega / kPi) / std::sqrt(kPi);  // psi_{2k}(0)^2 ~ a k^{-1/2}
    return s + a / (4.0 * omega * omega) * (2.0 / 3.0) * std::pow(static_cast<double>(K), -1.5);
}

}  // namespace

TEST_CASE("real-time propagator") {
    const cplx free = propagator_realtime(0.0, 0.0, 1.0, model(1.0, 1e-8));
    CHECK_REL(free, std::sqrt(1.0 / (2.0 * kPi * cplx(0.0, 1.0))), 1e-12);
    CHECK(std::abs(std::abs(propagator_realtime(0.0, 0.0, 2.0, model())) - std::sqrt(1.0 / (2.0 * kPi * std::sinh(2.0)))) <
          1e-14);
    CHECK_THROWS_AS(propagator_realtime(0.0, 0.0, 0.0, model()), SingularTimeError);
    // free-particle phase
    const cplx k = propagator_realtime(0.4, -0.3, 0.8, model(1.3, 1e-9));
    const cplx expect = std::sqrt(1.3 / (2.0 * kPi * cplx(0.0, 0.8))) * std::exp(cplx(0.0, 1.3 * 0.49 / 1.6));
    CHECK_REL(k, expect, 1e-8);
}

TEST_CASE("Wick rotation modulus identity") {
    for (double m : {1.0, 2.3})
        for (double omega : {1.0, 0.4})
            for (double wt : {0.1, 0.7, 1.5, 2.4, 3.0}) {
                const double tau = wt / omega;
                for (auto xx : {std::pair{0.0, 0.0}, std::pair{0.5, -0.2}, std::pair{1.1, 0.9}}) {
                    const ModelParams p = model(m, omega);
                    const double a = std::abs(propagator_complex_time(xx.first, xx.second, cplx(0.0, -tau), p));
                    const double b = std::abs(propagator_euclidean(xx.first, xx.second, tau, p));
                    CHECK(std::abs(a - b) < 1e-10 * b);
                }
            }
}

TEST_CASE("Euclidean kernel") {
    const ModelParams p = model();
    CHECK(std::abs(propagator_euclidean(0.0, 0.0, kPi / 2, p) - std::sqrt(1.0 / (2.0 * kPi))) < 1e-15);
    for (double tau : {0.3, 1.2, 2.9}) {
        // a half period flips the cross term: periodic up to x' -> -x'
        const double a = std::abs(propagator_euclidean(0.4, -0.6, tau, p));
        const double b = std::abs(propagator_euclidean(0.4, 0.6, tau + kPi, p));
        CHECK(std::abs(a - b) < 1e-12 * a);
        const double c = std::abs(propagator_euclidean(0.4, 0.0, tau, p));
        const double d = std::abs(propagator_euclidean(0.4, 0.0, tau + kPi, p));
        CHECK(std::abs(c - d) < 1e-12 * c);
        CHECK(propagator_euclidean(0.4, -0.6, tau, p) == propagator_euclidean(-0.6, 0.4, tau, p));
    }
    CHECK_THROWS_AS(propagator_euclidean(0.0, 0.0, kPi, p), SingularTimeError);
}

TEST_CASE("density kernel, widths and critical temperatures") {
    const ModelParams p = model();
    CHECK(std::abs(width_sq(kPi / 4, p) - 0.5) < 1e-15);
    CHECK(width_sq(kPi / 2 - 1e-9, p) > 1e8);
    CHECK(delocalized(kPi / 2 + 1e-9, p));
    CHECK(!delocalized(1.0, p));
    CHECK(std::abs(t_c_paper(1.0) - 1.0 / (kPi * kPi)) < 1e-16);
    CHECK(std::abs(t_c_paper(1.0) - 0.101321) < 1e-6);
    CHECK(std::abs(t_c_divergence(1.0) - 2.0 / kPi) < 1e-16);
    // the printed diagonal drops the cross term; both agree at the origin only
    CHECK_REL(diagonal_paper(0.0, 1.0, p, 1.0), diagonal_consistent(0.0, 1.0, p, 1.0), 1e-15);
    CHECK(std::abs(diagonal_paper(0.8, 1.0, p, 1.0) - diagonal_consistent(0.8, 1.0, p, 1.0)) > 1e-3);
    CHECK_THROWS_AS(density_kernel(0.0, 0.0, 4.0, p, 1.0), DomainError);
}

TEST_CASE("reference kernel trace is one") {
    for (double beta : {0.3, 1.0, 5.0}) {
        const ModelParams p = model(1.4, 0.9, true);
        const double z = reference_partition(beta, p);
        const double tr =
            quad::integrate([&](double x) { return density_kernel(x, x, beta, p, z).real(); }, -40.0, 40.0, 1e-12, 1e-14)
                .value;
        CHECK(std::abs(tr - 1.0) < 1e-8);
    }
}

TEST_CASE("g_tau variants") {
    const ModelParams p = model();
    const cplx e = energy(2, p);
    const double beta = 1.3;
    CHECK_REL(g_tau(2, 1e-300, beta, p, GTauVariant::paper), 1.0 / (1.0 - std::exp(-beta * e)), 1e-14);
    CHECK(std::abs(g_tau_energy(1.0, 1.0, 2.0, GTauVariant::standard) - 1.0 / (2.0 * std::sinh(1.0))) < 1e-15);
    CHECK(std::abs(g_tau_energy(1.0, 1.0, 2.0, GTauVariant::standard) - 0.425459) < 1e-6);
    // bosonic periodicity G(tau - beta) = G(tau) holds for the standard form
    CHECK_REL(g_tau_energy(e, 0.4 - beta, beta, GTauVariant::standard),
              g_tau_energy(e, 0.4, beta, GTauVariant::standard), 1e-13);
    // the printed form is evaluated verbatim on tau < 0
    CHECK_REL(g_tau_energy(e, -0.4, beta, GTauVariant::paper),
              std::exp(e * (-0.4 - beta)) / (1.0 - std::exp(-beta * e)), 1e-14);
    CHECK(std::abs(g_tau_consistency(2, 0.4, beta, p)) > 1e-3);
    CHECK_THROWS_AS(g_tau(0, 3.0, 1.0, p, GTauVariant::paper), DomainError);
}

TEST_CASE("standard g_tau equals the Matsubara sum") {
    for (double E : {0.5, 1.7, 5.0})
        for (double beta : {0.5, 1.5, 4.0})
            for (double frac : {0.1, 0.5, 0.85}) {
                const double tau = frac * beta;
                const double ref = matsubara_sum(E, tau, beta, 100000);
                const cplx g = g_tau_energy(E, tau, beta, GTauVariant::standard);
                CHECK(std::abs(g - ref) < 1e-4 * std::abs(ref));
            }
}

TEST_CASE("green_full") {
    TruncationPolicy trunc;
    trunc.rel_tol = 1e-10;
    const ModelParams ref = model(1.0, 1.0, true);
    const double beta = 2.0;
    for (int ell : {0, 1, 3}) {
        const double wl = 2.0 * kPi * ell / beta;
        const SeriesResult g = green_full(ell, 0.0, 0.0, beta, ref, trunc);
        CHECK(std::abs(g.value - reference_green_origin(wl, 1.0, 1.0)) < 1e-8 * std::abs(g.value));
    }
    TruncationPolicy loose;
    loose.rel_tol = 1e-4;
    // complex tower: terms ~ k^{-3/2} at the origin, accelerated to a looser tolerance
    const ModelParams p = model(1.0, 0.7);
    const SeriesResult a = green_full(2, 0.0, 0.0, 1.5, p, loose);
    const SeriesResult b = green_full(-2, 0.0, 0.0, 1.5, p, loose);
    CHECK(a.value == b.value);
    // 4e7-term partial sum plus Euler-Maclaurin tail
    CHECK(std::abs(a.value - cplx(0.042110392496502246, -0.04169828827406966)) < 1e-4 * std::abs(a.value));
    // decay in ell (reference tower): monotone, no faster than the 1/omega_l^2 envelope
    double prev = INFINITY, prev_scaled = 0.0;
    for (int ell : {1, 2, 4, 8, 16, 32}) {
        const double wl = 2.0 * kPi * ell / beta;
        const double g = std::abs(green_full(ell, 0.0, 0.0, beta, ref, loose).value);
        CHECK(g < prev);
        CHECK(g * wl * wl > prev_scaled);
        prev = g;
        prev_scaled = g * wl * wl;
    }
    // off the origin |psi_n(x)|^2 grows like e^{c sqrt n}: no convergent sum
    CHECK_THROWS_AS(green_full(0, 0.3, 0.3, 1.5, p, trunc), TruncationError);
    TruncationPolicy cap;
    cap.mode_cap = 40;
    CHECK(green_full(0, 0.3, 0.3, 1.5, p, cap).n_used == 40);
}

TEST_CASE("spectral density: Lorentzian recovery in reference mode") {
    TruncationPolicy trunc;
    trunc.rel_tol = 1e-10;
    const ModelParams p = model(1.0, 1.0, true);
    const double x = 0.0;
    const double e0 = 0.5;
    const double eps = 1e-3;
    // peak at omega_r = E_0 within eps
    double best = 0.0, at = 0.0;
    for (int i = -50; i <= 50; ++i) {
        const double w = e0 + i * 1e-4;
        const double v = spectral_density(w, x, x, p, eps, trunc);
        if (v > best) best = v, at = w;
    }
    CHECK(std::abs(at - e0) < eps);
    CHECK(best > 0.0);
    // integral over omega_r^2 around E_0^2 recovers |psi_0(0)|^2
    const double w0 = std::sqrt(1.0 / kPi);
    const double s0 = e0 * e0;
    auto rho = [&](double s) { return spectral_density(std::sqrt(s), x, x, p, eps, trunc); };
    double integral = 0.0;
    for (double lo : {-1.0, -0.1, -0.01, 0.0, 0.01, 0.1}) {
        const double hi = lo == -1.0 ? -0.1 : lo == -0.1 ? -0.01 : lo == -0.01 ? 0.0 : lo == 0.0 ? 0.01 : lo == 0.01 ? 0.1 : 1.0;
        integral += quad::integrate(rho, s0 + std::max(lo, -s0 + 1e-9), s0 + hi, 1e-8, 1e-12).value;
    }
    CHECK(std::abs(integral - w0) < 1e-2 * w0);
    // peak height ~ 1/eps
    const double h1 = spectral_density(e0, x, x, p, 1e-3, trunc);
    const double h2 = spectral_density(e0, x, x, p, 1e-2, trunc);
    CHECK(std::abs(h1 / h2 - 10.0) < 0.1);
    CHECK(default_broadening(p) == doctest::Approx(5e-3));
}

TEST_CASE("OTOC") {
    CHECK(otoc(0.0, model()) == 1.0);
    CHECK(otoc(3.0, model(1.0, 0.0)) == 1.0);
    for (double omega : {1.0, 0.5, 2.0}) {
        const SlopeFit f = otoc_log_slope(5.0 / omega, 10.0 / omega, 101, model(1.0, omega));
        CHECK(std::abs(f.slope - 2.0 * omega) < 1e-3);
    }
    CHECK_THROWS_AS(otoc(1000.0, model()), OverflowError);
}

TEST_CASE("Gaussian entropy") {
    CHECK(gaussian_entropy({0.5, 0.5, 0.5}) == 0.0);
    CHECK(std::abs(gaussian_entropy({1.5}) - 2.0 * std::log(2.0)) < 1e-12);
    CHECK(std::abs(gaussian_entropy({1.5}) - 1.386294) < 1e-6);
    double prev = -1.0;
    for (int i = 0; i <= 2000; ++i) {
        const double nu = 0.5 + 99.5 * i / 2000.0;
        const double s = gaussian_entropy_term(nu);
        const double x = nu - 0.5;
        const double alt = x > 0.0 ? (x + 1.0) * std::log(x + 1.0) - x * std::log(x) : 0.0;
        CHECK(std::abs(s - alt) < 1e-12 * std::max(1.0, alt));
        CHECK(s > prev);
        prev = s;
    }
    CHECK_THROWS_AS(gaussian_entropy({0.4}), DomainError);
}
