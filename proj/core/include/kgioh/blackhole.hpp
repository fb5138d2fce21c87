#pragma once

#include <vector>

#include "kgioh/params.hpp"
#include "kgioh/table.hpp"

namespace kgioh {

struct BlackHoleConfig {
    double kappa = 1.0;  // surface gravity
    double m = 1.0;
    double g_newton = 1.0;
    double mass_bh = 0.0;  // only used for the printed area term 4 pi G M^2

    // DomainError unless kappa > 0 and m > 0.
    void validate() const;
    double omega_bh() const;   // kappa sqrt(m)
    double beta_h() const;     // 2 pi/kappa
    ModelParams model() const;  // {m, omega_bh}
};

// kappa = 1/(4 G M)
double schwarzschild_kappa(double g_newton, double mass_bh);

struct BlackHoleReport {
    double omega_bh = 0.0;
    double beta_h = 0.0;
    double t_ioh = 0.0;      // kappa sqrt(m)/pi
    double t_hawking = 0.0;  // kappa/(2 pi)
    double ratio = 0.0;      // t_ioh/t_hawking
    double ratio_residual = 0.0;  // |ratio - 2 sqrt(m)|
    double omega_beta = 0.0;      // omega_bh beta_h = 2 pi sqrt(m)
    double ell_h_sq = 0.0;        // sin(w beta)/(2 w cos(w beta)), as printed
    bool ell_h_valid = false;     // omega_beta in (0, pi/2)
    std::vector<cplx> energies;
    std::vector<cplx> occupations;  // <N_n> at T_H for n < occupation_count
    cplx total_power;               // sum E_n <N_n>
    int power_n_used = 0;
    cplx entropy;  // S_BH from thermo at beta_h
    int entropy_n_used = 0;
    double area_entropy = 0.0;  // 4 pi G M^2
};

BlackHoleReport bh_report(const BlackHoleConfig& cfg, const TruncationPolicy& trunc, int occupation_count = 8);

// ell_H^2 with DomainError outside omega_bh beta_h in (0, pi/2).
double bh_ell_h_sq(const BlackHoleConfig& cfg);

// (1/pi) int_0^inf k/(e^{k/T} - 1) dk by quadrature; closed form pi T^2/6.
double continuum_power(double temperature);

// Columns T_H, P_rad_real, P_rad_imag, P_continuum, P_continuum_exact, n_used.
// The mode sum P_rad = sum E_n/(e^{E_n/T} - 1) at omega_bh is fit to c T^p;
// fit_exponent, fit_prefactor and fit_residual go to the metadata.
SweepTable bh_power_scaling(const BlackHoleConfig& cfg, const std::vector<double>& t_grid,
                            const TruncationPolicy& trunc);

// Columns t_ratio (T_H/Re E_0), T_H, S_ent, n_used. nu_n = max(Re <N_n>, 0) + 1/2.
// Metadata: log_fit_slope/intercept/residual of S_ent against ln(T_H/E_0) over
// the top decade of the grid, claimed_slope = 1/6 and the deviation.
SweepTable bh_entanglement(const BlackHoleConfig& cfg, const std::vector<double>& t_ratio_grid,
                           const TruncationPolicy& trunc);

struct EntropyCorrectionFit {
    double alpha;     // slope of S_BH against ln(4 pi G M^2)
    double constant;
    double residual;
};
// For each mass: kappa = 1/(4 G M), S_BH at beta_H; fit S_BH = alpha ln(4 pi G M^2) + c.
EntropyCorrectionFit bh_entropy_correction_fit(const BlackHoleConfig& cfg, const std::vector<double>& mass_grid,
                                               const TruncationPolicy& trunc);

}  // namespace kgioh
