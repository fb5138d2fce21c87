#include "kgioh/blackhole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgioh/correlators.hpp"
#include "kgioh/errors.hpp"
#include "kgioh/fit.hpp"
#include "kgioh/quadrature.hpp"
#include "kgioh/spectrum.hpp"
#include "kgioh/thermo.hpp"
#include "mode_sum.hpp"

namespace kgioh {

void BlackHoleConfig::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("m must be positive");
    if (!std::isfinite(g_newton) || !std::isfinite(mass_bh)) throw DomainError("G and M must be finite");
}

double BlackHoleConfig::omega_bh() const { return kappa * std::sqrt(m); }
double BlackHoleConfig::beta_h() const { return 2.0 * kPi / kappa; }

ModelParams BlackHoleConfig::model() const {
    ModelParams p;
    p.m = m;
    p.omega = omega_bh();
    return p;
}

double schwarzschild_kappa(double g_newton, double mass_bh) {
    if (!(g_newton > 0.0) || !(mass_bh > 0.0)) throw DomainError("G and M must be positive");
    return 1.0 / (4.0 * g_newton * mass_bh);
}

namespace {

bool ell_h_in_domain(double wb) { return wb > 0.0 && wb < 0.5 * kPi; }

double ell_h_printed(double w, double wb) { return std::sin(wb) / (2.0 * w * std::cos(wb)); }

}  // namespace

double bh_ell_h_sq(const BlackHoleConfig& cfg) {
    cfg.validate();
    const double w = cfg.omega_bh();
    const double wb = w * cfg.beta_h();
    if (!ell_h_in_domain(wb)) throw DomainError("ell_H requires omega_BH beta_H in (0, pi/2)");
    return ell_h_printed(w, wb);
}

BlackHoleReport bh_report(const BlackHoleConfig& cfg, const TruncationPolicy& trunc, int occupation_count) {
    cfg.validate();
    BlackHoleReport r;
    r.omega_bh = cfg.omega_bh();
    r.beta_h = cfg.beta_h();
    r.t_ioh = r.omega_bh / kPi;
    r.t_hawking = cfg.kappa / (2.0 * kPi);
    r.ratio = r.t_ioh / r.t_hawking;
    r.ratio_residual = std::abs(r.ratio - 2.0 * std::sqrt(cfg.m));
    r.omega_beta = r.omega_bh * r.beta_h;
    r.ell_h_sq = ell_h_printed(r.omega_bh, r.omega_beta);
    r.ell_h_valid = ell_h_in_domain(r.omega_beta);
    const ModelParams p = cfg.model();
    for (int n = 0; n < occupation_count; ++n) {
        r.energies.push_back(energy(n, p));
        r.occupations.push_back(bose(r.energies.back(), r.beta_h));
    }
    const double beta = r.beta_h;
    const auto pw = detail::policy_sum([&](int, cplx e) { return e * bose(e, beta); }, beta, 1, p, trunc);
    r.total_power = pw.value;
    r.power_n_used = pw.n_used;
    const ThermalObservables th = thermo(beta, p, trunc);
    r.entropy = th.entropy;
    r.entropy_n_used = th.n_used;
    r.area_entropy = 4.0 * kPi * cfg.g_newton * cfg.mass_bh * cfg.mass_bh;
    return r;
}

double continuum_power(double temperature) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
    const double t = temperature;
    auto f = [t](double k) {
        if (k == 0.0) return t / kPi;
        return k / std::expm1(k / t) / kPi;
    };
    return quad::integrate_to_infinity(f, 0.0, 1e-12).value;
}

SweepTable bh_power_scaling(const BlackHoleConfig& cfg, const std::vector<double>& t_grid,
                            const TruncationPolicy& trunc) {
    cfg.validate();
    if (t_grid.size() < 2) throw DomainError("t_grid needs at least two temperatures");
    const ModelParams p = cfg.model();
    SweepTable t({"T_H", "P_rad_real", "P_rad_imag", "P_continuum", "P_continuum_exact", "n_used"});
    std::vector<double> xs, ys;
    for (double temp : t_grid) {
        if (!(temp > 0.0)) throw DomainError("temperatures must be positive");
        const double beta = 1.0 / temp;
        const auto s = detail::policy_sum([&](int, cplx e) { return e * bose(e, beta); }, beta, 1, p, trunc);
        t.add_row({temp, s.value.real(), s.value.imag(), continuum_power(temp), kPi * temp * temp / 6.0,
                   static_cast<double>(s.n_used)});
        xs.push_back(temp);
        ys.push_back(s.value.real());
    }
    bool positive = true;
    for (double y : ys) positive = positive && y > 0.0;
    if (positive) {
        const PowerFit f = fit_power(xs, ys);
        t.set_meta("fit_exponent", format_double(f.exponent));
        t.set_meta("fit_prefactor", format_double(f.prefactor));
        t.set_meta("fit_residual", format_double(f.residual));
    } else {
        t.set_meta("fit_exponent", "undefined: non-positive P_rad");
    }
    t.set_meta("omega_bh", format_double(cfg.omega_bh()));
    t.set_meta("branch", "principal");
    return t;
}

SweepTable bh_entanglement(const BlackHoleConfig& cfg, const std::vector<double>& t_ratio_grid,
                           const TruncationPolicy& trunc) {
    cfg.validate();
    const ModelParams p = cfg.model();
    const double e0 = energy(0, p).real();
    SweepTable t({"t_ratio", "T_H", "S_ent", "n_used"});
    for (double ratio : t_ratio_grid) {
        if (!(ratio > 0.0)) throw DomainError("T_H/E_0 must be positive");
        const double temp = ratio * e0;
        const double beta = 1.0 / temp;
        const auto s = detail::policy_sum(
            [&](int, cplx e) {
                const double nu = std::max(bose(e, beta).real(), 0.0) + 0.5;
                return cplx(gaussian_entropy_term(nu));
            },
            [&](int, cplx e) { return gaussian_entropy_term(std::abs(bose(e, beta)) + 0.5); }, beta, 1, p, trunc);
        t.add_row({ratio, temp, s.value.real(), static_cast<double>(s.n_used)});
    }
    t.set_meta("occupation_rule", "nu = max(Re N, 0) + 1/2");
    t.set_meta("claimed_slope", format_double(1.0 / 6.0));
    if (!t_ratio_grid.empty()) {
        const double top = *std::max_element(t_ratio_grid.begin(), t_ratio_grid.end());
        std::vector<double> x, y;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t_ratio_grid[i] >= 0.1 * top) {
                x.push_back(std::log(t_ratio_grid[i]));
                y.push_back(t.rows()[i][2]);
            }
        if (x.size() >= 2) {
            const LinearFit f = fit_line(x, y);
            t.set_meta("log_fit_slope", format_double(f.slope));
            t.set_meta("log_fit_intercept", format_double(f.intercept));
            t.set_meta("log_fit_residual", format_double(f.residual));
            t.set_meta("slope_deviation", format_double(f.slope - 1.0 / 6.0));
        }
    }
    return t;
}

EntropyCorrectionFit bh_entropy_correction_fit(const BlackHoleConfig& cfg, const std::vector<double>& mass_grid,
                                               const TruncationPolicy& trunc) {
    if (!(cfg.g_newton > 0.0)) throw DomainError("G must be positive");
    std::vector<double> x, y;
    for (double mass : mass_grid) {
        BlackHoleConfig c = cfg;
        c.mass_bh = mass;
        c.kappa = schwarzschild_kappa(cfg.g_newton, mass);
        c.validate();
        const ThermalObservables th = thermo(c.beta_h(), c.model(), trunc);
        x.push_back(std::log(4.0 * kPi * cfg.g_newton * mass * mass));
        y.push_back(th.entropy.real());
    }
    const LinearFit f = fit_line(x, y);
    return {f.slope, f.intercept, f.residual};
}

}  // namespace kgioh
