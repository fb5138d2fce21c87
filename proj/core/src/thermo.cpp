#include "kgioh/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgioh/errors.hpp"
#include "kgioh/spectrum.hpp"

namespace kgioh {

namespace {

constexpr double kPoleTol = 1e-13;

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
}

}  // namespace

cplx expm1c(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    if (std::abs(x) > 1.0) return std::exp(z) - 1.0;
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

cplx log1mc(cplx q) {
    const double a = q.real();
    const double b = q.imag();
    return {0.5 * std::log1p(-2.0 * a + a * a + b * b), std::atan2(-b, 1.0 - a)};
}

cplx bose(cplx E, double beta) {
    const cplx be = beta * E;
    const cplx d = expm1c(be);
    if (std::abs(d) < kPoleTol) throw PoleError("e^{beta E} = 1 (Bose pole)");
    if (be.real() > 1.0) {
        const cplx q = std::exp(-be);
        return q / (1.0 - q);
    }
    return 1.0 / d;
}

cplx occupation(int n, double beta, const ModelParams& params) {
    check_beta(beta);
    return bose(energy(n, params), beta);
}

ModeThermo thermo_single(cplx E, double beta) {
    check_beta(beta);
    const cplx be = beta * E;
    const cplx nb = bose(E, beta);
    // q = e^{-beta E}; -ln(1 - q)
    const cplx lz = be.real() > 1.0 ? -log1mc(std::exp(-be)) : -std::log(-expm1c(-be));
    ModeThermo t;
    t.ln_z = lz;
    t.z = std::exp(lz);
    t.mean_energy = E * nb;
    t.entropy = be * nb + lz;
    // (beta E)^2 e^{beta E}/(e^{beta E} - 1)^2 = (beta E)^2 n (n + 1)
    t.heat_capacity = be * be * nb * (nb + 1.0);
    return t;
}

RealObservables ThermalObservables::real_projection() const {
    return {ln_z.real(), free_energy.real(), mean_energy.real(), entropy.real(), heat_capacity.real()};
}

RealObservables ThermalObservables::modulus_projection() const {
    return {std::abs(ln_z), std::abs(free_energy), std::abs(mean_energy), std::abs(entropy), std::abs(heat_capacity)};
}

double ThermalObservables::identity_residual() const {
    return std::abs(free_energy - (mean_energy - entropy / beta)) / std::abs(free_energy);
}

namespace {

// Canonical ensemble of one oscillator with levels omega (n + 1/2).
ThermalObservables thermo_ladder(double beta, const ModelParams& p, const TruncationPolicy& trunc) {
    if (!(p.omega > 0.0) && trunc.mode_cap == 0)
        throw TruncationError("omega = 0 gives a degenerate ladder; supply a mode cap");
    ThermalObservables r;
    r.beta = beta;
    r.ensemble = "canonical-ladder";
    // Weights relative to the ground level to stay in range at large beta.
    const double e0 = energy(0, p).real();
    double z = 0.0, zx = 0.0, s1 = 0.0, s2 = 0.0;  // zx = z - 1 (excited levels)
    int quiet = 0;
    int n = 0;
    const double ratio = std::exp(-beta * p.omega);
    const int limit = trunc.mode_cap > 0 ? trunc.mode_cap : trunc.n_max;
    for (; n < limit; ++n) {
        const double e = energy(n, p).real();
        const double w = std::exp(-beta * (e - e0));
        const double de = e - e0;
        z += w;
        if (n > 0) zx += w;
        s1 += w * de;
        s2 += w * de * de;
        if (trunc.mode_cap > 0) continue;
        const bool small = w < trunc.rel_tol * z && w * de <= trunc.rel_tol * std::max(s1, 1e-300) &&
                           w * de * de <= trunc.rel_tol * std::max(s2, 1e-300);
        quiet = small ? quiet + 1 : 0;
        if (n + 1 >= trunc.n_min && quiet >= 3 && n > 0) {
            // geometric tails of w de^k; the ratio of consecutive terms falls with n
            const double g = (n + 1.0) / n;
            auto tail = [&](double term, double rho) { return rho < 1.0 ? term * rho / (1.0 - rho) : INFINITY; };
            const double t0 = tail(w, ratio);
            const double t1 = tail(w * de, ratio * g);
            const double t2 = tail(w * de * de, ratio * g * g);
            const double lz = std::log(z) - beta * e0;
            r.tail_bound = t0 / z;
            const double tol = 0.1 * trunc.rel_tol;
            if (r.tail_bound < trunc.rel_tol * std::max(std::abs(lz), 1e-300) && t0 < tol * z && t1 < tol * s1 &&
                t2 < tol * s2) {
                ++n;
                break;
            }
        }
    }
    if (trunc.mode_cap == 0 && n >= limit) throw TruncationError("n_max reached before tolerance");
    r.n_used = n;
    const double mean_shift = s1 / z;
    const double var = s2 / z - mean_shift * mean_shift;
    r.ln_z = std::log1p(zx) - beta * e0;
    r.mean_energy = e0 + mean_shift;
    // ln z + beta s1/z avoids the ln Z + beta <E> cancellation at low T
    r.entropy = std::log1p(zx) + beta * mean_shift;
    r.free_energy = -r.ln_z / beta;
    r.heat_capacity = beta * beta * var;
    return r;
}

}  // namespace

ThermalObservables thermo(double beta, const ModelParams& p, const TruncationPolicy& trunc) {
    check_beta(beta);
    p.validate();
    trunc.validate();
    if (p.hermitian_reference) return thermo_ladder(beta, p, trunc);
    if (p.omega == 0.0 && trunc.mode_cap == 0)
        throw TruncationError("omega = 0: every E_n = m and the mode sum diverges; supply a mode cap");

    ThermalObservables r;
    r.beta = beta;
    cplx lz = 0.0, me = 0.0, s = 0.0, cv = 0.0;
    int quiet = 0;
    int n = 0;
    const int limit = trunc.mode_cap > 0 ? trunc.mode_cap : trunc.n_max;
    bool converged = false;
    for (; n < limit; ++n) {
        const cplx e = energy(n, p);
        if (!(e.real() > 0.0)) throw DivergenceError("Re E_n <= 0 at n = " + std::to_string(n));
        const ModeThermo t = thermo_single(e, beta);
        lz += t.ln_z;
        me += t.mean_energy;
        s += t.entropy;
        cv += t.heat_capacity;
        if (trunc.mode_cap > 0) continue;
        auto rel = [](cplx term, cplx sum) { return term == cplx(0.0) ? 0.0 : std::abs(term) / std::abs(sum); };
        const double worst = std::max({rel(t.ln_z, lz), rel(t.mean_energy, me), rel(t.entropy, s), rel(t.heat_capacity, cv)});
        quiet = worst < trunc.rel_tol ? quiet + 1 : 0;
        if (n + 1 >= trunc.n_min && quiet >= 3) {
            // sum_{k>n} e^{-beta sqrt(omega k)} <= (2/(beta^2 omega)) (beta sqrt(omega n) + 1) e^{-beta sqrt(omega n)}
            const double bw = beta * beta * p.omega;
            r.tail_bound = std::abs(t.ln_z) * (2.0 / bw) * (beta * std::sqrt(p.omega * n) + 1.0);
            if (r.tail_bound < trunc.rel_tol * std::abs(lz)) {
                ++n;
                converged = true;
                break;
            }
        }
    }
    if (trunc.mode_cap == 0 && !converged) throw TruncationError("n_max reached before tolerance");
    r.n_used = n;
    r.ln_z = lz;
    r.mean_energy = me;
    r.entropy = s;
    r.heat_capacity = cv;
    r.free_energy = -lz / beta;
    return r;
}

}  // namespace kgioh
