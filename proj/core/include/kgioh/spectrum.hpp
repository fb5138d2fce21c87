#pragma once

#include <vector>

#include "kgioh/params.hpp"

namespace kgioh {

// E_n = principal sqrt(m^2 + i omega (2n + 1 - m)); omega (n + 1/2) in
// hermitian_reference mode.
cplx energy(int n, const ModelParams& params);

// Indexed complex tower with principal-branch square roots (Re E_n >= 0).
class EffectiveSpectrum {
public:
    explicit EffectiveSpectrum(const ModelParams& params);
    cplx operator()(int n) const { return energy(n, params_); }
    const ModelParams& params() const { return params_; }
    static constexpr const char* branch() { return "principal"; }
    // |E_n^2 - m^2 - i omega (2n + 1 - m)| / |E_n^2|
    double identity_residual(int n) const;

private:
    ModelParams params_;
};

// C_n H_n(sqrt(m omega) e^{i pi/4} x) exp(-i m omega x^2 / 2),
// C_n = (m omega/pi)^{1/4} (2^n n!)^{-1/2}. Requires n <= 200.
cplx mode_function(int n, double x, const ModelParams& params);

// Same analytic function at complex position.
cplx mode_function_at(int n, cplx x, const ModelParams& params);

// Standard oscillator eigenfunction (real), used in hermitian_reference mode.
double oscillator_function(int n, double x, double m, double omega);

// psi_0 .. psi_{count-1} at x by the normalised three-term recurrence; complex
// modes, or oscillator functions in hermitian_reference mode.
std::vector<cplx> mode_tower(int count, double x, const ModelParams& params);

// Momentum-space modes u~_0 .. u~_{count-1} at k: (-i)^n times the oscillator
// eigenfunction with m omega -> 1/(m omega), taken at k e^{-i pi/4} for the
// complex tower (Gaussian factor e^{+i k^2/(2 m omega)}) and at real k in
// hermitian_reference mode.
std::vector<cplx> mode_transform_tower(int count, double k, const ModelParams& params);
cplx mode_transform(int n, double k, const ModelParams& params);

// Sequential psi_0, psi_1, ... at fixed x (same family as mode_tower) for long sums.
class ModeStream {
public:
    ModeStream(double x, const ModelParams& params);
    // Returns psi_n and advances n. OverflowError once values stop being finite.
    cplx next();
    int index() const { return n_; }

private:
    cplx zeta_;
    cplx prev_ = 0.0;
    cplx cur_;
    int n_ = 0;
};

// max |G - I| over m, n <= n_max of the Gram matrix on the contour
// x = e^{-i pi/4} s (arc-length measure), s in [-L, L], L = 12/sqrt(m omega).
double contour_gram(int n_max, const ModelParams& params);

}  // namespace kgioh
