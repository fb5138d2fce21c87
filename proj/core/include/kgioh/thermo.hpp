#pragma once

#include "kgioh/params.hpp"

namespace kgioh {

struct RealObservables {
    double ln_z, free_energy, mean_energy, entropy, heat_capacity;
};

struct ThermalObservables {
    double beta = 0.0;
    cplx ln_z, free_energy, mean_energy, entropy, heat_capacity;
    int n_used = 0;
    double tail_bound = 0.0;
    // "bose-mode-sum" for the complex tower, "canonical-ladder" in
    // hermitian_reference mode (Z = sum_n e^{-beta E_n} of one oscillator).
    const char* ensemble = "bose-mode-sum";

    RealObservables real_projection() const;
    RealObservables modulus_projection() const;
    // |F - (<E> - T S)| / |F|
    double identity_residual() const;
};

// Bose factors of a single mode of energy E.
struct ModeThermo {
    cplx ln_z, mean_energy, entropy, heat_capacity;
    cplx z;
};
ModeThermo thermo_single(cplx E, double beta);

// Mode sum over the effective spectrum with the three-small-terms stopping rule.
// TruncationError when n_max is reached (or omega = 0 without mode_cap);
// DivergenceError if Re E_n <= 0; PoleError at e^{beta E_n} = 1.
ThermalObservables thermo(double beta, const ModelParams& params, const TruncationPolicy& trunc);

// 1/(e^{beta E_n} - 1).
cplx occupation(int n, double beta, const ModelParams& params);
cplx bose(cplx E, double beta);

// e^z - 1 and log(1 - q) without cancellation near zero.
cplx expm1c(cplx z);
cplx log1mc(cplx q);

}  // namespace kgioh
