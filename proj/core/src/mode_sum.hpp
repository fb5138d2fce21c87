#pragma once

#include <cmath>
#include <string>

#include "kgioh/errors.hpp"
#include "kgioh/params.hpp"
#include "kgioh/spectrum.hpp"
#include "kgioh/thermo.hpp"

namespace kgioh::detail {

struct ModeSum {
    cplx value = 0.0;
    int n_used = 0;
    double tail_bound = 0.0;
};

// sum_n term(n, E_n) for terms decaying like E_n^power e^{-beta E_n}, stopped
// by the policy: three quiet terms past n_min and an integral tail bound
// below rel_tol |sum|. mode_cap > 0 sums exactly n < mode_cap. The stopping
// test uses majorant(n, E_n) >= |term|, so terms that vanish by clipping
// cannot end the sum early.
template <class F, class G>
ModeSum policy_sum(F&& term, G&& majorant, double beta, int power, const ModelParams& p,
                   const TruncationPolicy& trunc) {
    trunc.validate();
    if (p.omega == 0.0 && trunc.mode_cap == 0)
        throw TruncationError("omega = 0: the mode sum does not decay; supply a mode cap");
    ModeSum r;
    const int limit = trunc.mode_cap > 0 ? trunc.mode_cap : trunc.n_max;
    int quiet = 0;
    for (int n = 0; n < limit; ++n) {
        const cplx e = energy(n, p);
        if (!(e.real() > 0.0)) throw DivergenceError("Re E_n <= 0 at n = " + std::to_string(n));
        const cplx t = term(n, e);
        r.value += t;
        if (trunc.mode_cap > 0) continue;
        const double at = majorant(n, e);
        const double as = std::abs(r.value);
        quiet = at <= trunc.rel_tol * as ? quiet + 1 : 0;
        if (n + 1 < trunc.n_min || quiet < 3) continue;
        double ratio;
        if (p.hermitian_reference) {
            const double q = std::exp(-beta * p.omega) * (power > 0 ? (n + 1.5) / (n + 0.5) : 1.0);
            ratio = q < 1.0 ? q / (1.0 - q) : INFINITY;
        } else {
            // integral of u^power e^{-beta u} over u = sqrt(omega k) > sqrt(omega n), per term value
            const double u = std::sqrt(p.omega * std::max(n, 1));
            ratio = power > 0 ? (2.0 / p.omega) * (u / beta + 2.0 / (beta * beta) + 2.0 / (beta * beta * beta * u))
                              : (2.0 / (beta * beta * p.omega)) * (beta * u + 1.0);
        }
        r.tail_bound = at * ratio;
        if (r.tail_bound <= trunc.rel_tol * as) {
            r.n_used = n + 1;
            return r;
        }
    }
    if (trunc.mode_cap == 0) throw TruncationError("n_max reached before tolerance");
    r.n_used = limit;
    return r;
}

template <class F>
ModeSum policy_sum(F&& term, double beta, int power, const ModelParams& p, const TruncationPolicy& trunc) {
    return policy_sum(term, [&](int n, cplx e) { return std::abs(term(n, e)); }, beta, power, p, trunc);
}

// coth(beta E/2) = 1 + 2 n_B
inline cplx coth_half(cplx e, double beta) { return 1.0 + 2.0 * bose(e, beta); }

}  // namespace kgioh::detail
