#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <functional>
#include <vector>

#include "kgioh/correlators.hpp"
#include "kgioh/errors.hpp"
#include "kgioh/spectrum.hpp"

namespace kgioh {

namespace {

constexpr int kLevinTerms = 48;
constexpr int kLevinMaxOrder = 40;

struct Estimate {
    cplx value;
    double err;
};

// Levin u-transform of the partial sums of a, a_j carrying global index b - 1 + j;
// the order with the smallest change between consecutive orders is selected.
Estimate levin_u(const cplx* a, int n, double b) {
    Estimate best{0.0, INFINITY};
    for (int j = 0; j < n; ++j)
        if (a[j] == cplx(0.0)) return best;
    std::vector<cplx> s(n);
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) s[j] = acc += a[j];
    cplx prev = 0.0;
    bool have_prev = false;
    for (int k = 1; k <= std::min(kLevinMaxOrder, n - 1); ++k) {
        cplx num = 0.0, den = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            const double w = binom * std::pow((b + j) / (b + k), k - 1) * (j % 2 == 0 ? 1.0 : -1.0);
            const cplx inv = 1.0 / ((b + j) * a[j]);
            num += w * s[j] * inv;
            den += w * inv;
            binom = binom * (k - j) / (j + 1.0);
        }
        const cplx lk = num / den;
        if (have_prev) {
            const double d = std::abs(lk - prev);
            if (std::isfinite(d) && d < best.err) best = {lk, d};
        }
        prev = lk;
        have_prev = true;
    }
    return best;
}

// sum_n psi_n(x) conj(psi_n(x2)) / denom(E_n^2), summed in (even, odd) pairs.
// Levin is applied to the trailing window at doubling checkpoints on top of
// the exact partial sum; its error is the larger of the order spread and the
// change since the previous checkpoint.
SeriesResult mode_sum(double x, double x2, const ModelParams& p, const std::function<cplx(cplx)>& denom,
                      const TruncationPolicy& trunc) {
    p.validate();
    trunc.validate();
    ModeStream s1(x, p), s2(x2, p);
    std::vector<cplx> pairs;
    cplx sum = 0.0;
    int quiet = 0;
    Estimate levin{0.0, INFINITY};
    cplx levin_prev = 0.0;
    bool have_levin = false;
    int checkpoint = kLevinTerms;
    const int limit = trunc.mode_cap > 0 ? trunc.mode_cap : trunc.n_max;
    int n = 0;
    double direct_err = INFINITY;
    while (n + 1 < limit) {
        cplx a = 0.0;
        for (int r = 0; r < 2; ++r, ++n) {
            const cplx e = energy(n, p);
            a += s1.next() * std::conj(s2.next()) / denom(e * e);
        }
        sum += a;
        if (trunc.mode_cap > 0) continue;
        pairs.push_back(a);
        const int k = static_cast<int>(pairs.size());
        // Tail of a series decaying like k^{-3/2} or faster: <= 2 k |a_k|.
        direct_err = 2.0 * std::abs(a) * k;
        quiet = direct_err < trunc.rel_tol * std::abs(sum) ? quiet + 1 : 0;
        if (n >= trunc.n_min && quiet >= 3) return {sum, direct_err, n, "direct"};
        if (k == checkpoint) {
            const int off = k - kLevinTerms;
            cplx head = 0.0;
            for (int j = 0; j < off; ++j) head += pairs[j];
            const Estimate t = levin_u(pairs.data() + off, kLevinTerms, off + 1.0);
            if (std::isfinite(t.err)) {
                const cplx v = head + t.value;
                const double err = have_levin ? std::max(t.err, std::abs(v - levin_prev)) : INFINITY;
                if (err < levin.err) levin = {v, err};
                levin_prev = v;
                have_levin = true;
                if (err <= trunc.rel_tol * std::abs(v)) return {v, err, n, "levin"};
            }
            checkpoint *= 2;
        }
    }
    if (trunc.mode_cap > 0) return {sum, 0.0, n, "direct"};
    if (levin.err < direct_err) {
        if (levin.err <= trunc.rel_tol * std::abs(levin.value)) return {levin.value, levin.err, n, "levin"};
    } else if (direct_err <= trunc.rel_tol * std::abs(sum)) {
        return {sum, direct_err, n, "direct"};
    }
    char buf[64];
    const double rel_levin = levin.err / std::abs(levin.value);
    const double rel_direct = direct_err / std::abs(sum);
    std::snprintf(buf, sizeof buf, "%.3e", std::isfinite(rel_levin) ? std::min(rel_levin, rel_direct) : rel_direct);
    throw TruncationError(std::string("mode sum not converged: relative estimate ") + buf);
}

}  // namespace

SeriesResult green_full(int ell, double x, double x2, double beta, const ModelParams& p,
                        const TruncationPolicy& trunc) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    const double wl = 2.0 * kPi * ell / beta;
    return mode_sum(x, x2, p, [&](cplx e2) { return wl * wl + e2; }, trunc);
}

SeriesResult retarded_green(double omega_r, double x, double x2, const ModelParams& p, double eps,
                            const TruncationPolicy& trunc) {
    if (eps <= 0.0) eps = default_broadening(p);
    const double w2 = omega_r * omega_r;
    return mode_sum(x, x2, p, [&](cplx e2) { return e2 - w2 - cplx(0.0, eps); }, trunc);
}

double default_broadening(const ModelParams& p) { return 1e-2 * energy(0, p).real(); }

double spectral_density(double omega_r, double x, double x2, const ModelParams& p, double eps,
                        const TruncationPolicy& trunc) {
    return retarded_green(omega_r, x, x2, p, eps, trunc).value.imag() / kPi;
}

}  // namespace kgioh
