#pragma once

#include <vector>

#include "kgioh/params.hpp"
#include "kgioh/table.hpp"

namespace kgioh {

struct PhaseTransitionConfig {
    double a0 = 1.0;
    double t_crit = 1.0;
    double m = 1.0;
    double lambda = 0.0;
    int mode_cutoff = 16;  // modes kept in the non-decaying sums (<phi^2>, w)

    // DomainError unless a0 > 0, t_crit > 0, m > 0, lambda >= 0, mode_cutoff >= 1.
    void validate() const;
    // sqrt(2 a0 (1 - T/Tc)/m^2) below Tc, 0 at and above.
    double omega_pt(double temperature) const;
    // sqrt(2 a0/(m^2 Tc)), as printed; omega_0 sqrt(eps) equals omega_pt only at Tc = 1.
    double omega_0() const;
    // |a(T)| = a0 |T/Tc - 1|
    double abs_a(double temperature) const;
    ModelParams model(double temperature) const;
    // (1/2)(1 - lambda/(8 pi m^2))
    double beta_exponent() const;
};

// One row per T in t_grid (each in (0, Tc), DomainError otherwise). Columns:
//   T, eps, absE0..absE4, max_collapse_dev (max_n ||E_n| - m|),
//   xi = 1/sqrt|E_0^2 - m^2|, xi_inverse_omega = 1/omega_pt,
//   C_V (real part of the mode-sum heat capacity at beta = 1/T),
//   w_real, w_imag (unit-weight EOS over mode_cutoff modes, M^2 = m^2 - m^2 omega^2, V0 = 0),
//   phi2_real, phi2_imag (sum (2 N_n + 1)/(2 E_n) over mode_cutoff modes),
//   phi_vev, phi_vev_flag (0 ok, 1 negative radicand -> 0, 2 lambda = 0 -> 0), beta_exp.
// Metadata: log-log slopes of xi and xi_inverse_omega against eps, the C_V
// log fit (C_V = c + B ln eps) and whether C_V increases as eps decreases.
SweepTable pt_sweep(const PhaseTransitionConfig& cfg, const std::vector<double>& t_grid,
                    const TruncationPolicy& trunc);

struct LandauFit {
    double f0, a, b;  // Re F = f0 + A eps + B eps^2 ln eps
    double residual;
};
// eps_grid strictly increasing inside (0, 0.5); F from thermo at the given beta with omega_pt(Tc(1 - eps)).
LandauFit pt_free_energy_fit(const PhaseTransitionConfig& cfg, const std::vector<double>& eps_grid, double beta,
                             const TruncationPolicy& trunc);

}  // namespace kgioh
