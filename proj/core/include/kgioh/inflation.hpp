#pragma once

#include <vector>

#include "kgioh/params.hpp"
#include "kgioh/table.hpp"

namespace kgioh {

enum class KnRule { zero, user };
const char* to_string(KnRule r);

struct InflationConfig {
    double mu = 1.0;  // tachyonic mass
    double m = 1.0;
    double v0 = 0.0;
    std::vector<double> k_grid;
    int mode_cutoff = 8;
    KnRule k_n_rule = KnRule::zero;
    std::vector<double> k_n;  // used with KnRule::user, one entry per mode
    bool hermitian_reference = false;

    // DomainError unless mu > 0, m > 0, mode_cutoff >= 1 and k_n covers the modes.
    void validate() const;
    double omega() const { return mu / m; }
    double m_eff_sq() const { return m * m - mu * mu; }
    // {m, omega = mu/m, v0, hermitian_reference}
    ModelParams model() const;
    double k_n_at(int n) const;
};

// Columns k, P_total, P_vacuum, delta_P_thermal, G_R0 (each _real/_imag):
//   P_total = sum_n |u~_n(k)|^2 coth(beta E_n/2)/E_n over n < mode_cutoff,
//   P_vacuum the same with coth -> 1,
//   delta_P_thermal = 2 sum_n |u~_n|^2 n_B(E_n)/E_n (checked against the difference),
//   G_R0 = G^R(0, k, k) = sum_n |u~_n|^2/E_n^2 (high-T limit delta_P -> 2 T G_R0).
SweepTable inflation_power_spectrum(const InflationConfig& cfg, double beta, const TruncationPolicy& trunc);

struct InflationTemperatures {
    double t_ioh;  // mu/(pi m)
    double t_gh;   // H/(2 pi)
    double ratio;  // t_ioh/t_gh
};
InflationTemperatures inflation_temperatures(const InflationConfig& cfg, double hubble);

// Thermal averages of one beta with unit mode weights over the supplied energies.
struct EosPoint {
    cplx k_t;           // sum E_n^2 coth
    cplx k_x;           // sum k_n^2 coth
    cplx potential;     // V0 - (mu^2/2) sum coth
    cplx w;             // (A - M^2 B - 2 V0)/(A + M^2 B + 2 V0), A = k_t + k_x, B = sum coth
    cplx w_components;  // p/rho with rho, p = (k_t + k_x)/2 +- potential
};
EosPoint eos_point(const std::vector<cplx>& energies, const std::vector<double>& k_n, double mu_sq,
                   double m_eff_sq, double v0, double beta);

// Columns T, w, K_t, K_x, V, w_components (complex ones split _real/_imag),
// one row per beta in the given order. Metadata records the k_n rule, the
// weights and M_eff^2, and t_star (w_real = 0 crossing, log-interpolated) when present.
SweepTable inflation_eos(const InflationConfig& cfg, const std::vector<double>& beta_grid,
                         const TruncationPolicy& trunc);

struct ParticleCount {
    cplx n_total;
    cplx occupation_0;
    bool dominated_by_n0;  // |n_total - N_0| <= 1e-3 |N_0|
    int n_used;
    double tail_bound;
};
ParticleCount inflation_particles(const InflationConfig& cfg, double beta, const TruncationPolicy& trunc);

}  // namespace kgioh
