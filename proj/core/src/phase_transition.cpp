#include "kgioh/phase_transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgioh/errors.hpp"
#include "kgioh/fit.hpp"
#include "kgioh/inflation.hpp"
#include "kgioh/spectrum.hpp"
#include "kgioh/thermo.hpp"

namespace kgioh {

void PhaseTransitionConfig::validate() const {
    if (!(a0 > 0.0) || !std::isfinite(a0)) throw DomainError("a0 must be positive");
    if (!(t_crit > 0.0) || !std::isfinite(t_crit)) throw DomainError("t_crit must be positive");
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("m must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be non-negative");
    if (mode_cutoff < 1) throw DomainError("mode_cutoff must be >= 1");
}

double PhaseTransitionConfig::omega_pt(double temperature) const {
    if (temperature >= t_crit) return 0.0;
    return std::sqrt(2.0 * a0 * (1.0 - temperature / t_crit) / (m * m));
}

double PhaseTransitionConfig::omega_0() const { return std::sqrt(2.0 * a0 / (m * m * t_crit)); }

double PhaseTransitionConfig::abs_a(double temperature) const { return a0 * std::abs(temperature / t_crit - 1.0); }

ModelParams PhaseTransitionConfig::model(double temperature) const {
    ModelParams p;
    p.m = m;
    p.omega = omega_pt(temperature);
    p.lambda = lambda;
    p.a0 = a0;
    p.t_crit = t_crit;
    return p;
}

double PhaseTransitionConfig::beta_exponent() const { return 0.5 * (1.0 - lambda / (8.0 * kPi * m * m)); }

SweepTable pt_sweep(const PhaseTransitionConfig& cfg, const std::vector<double>& t_grid,
                    const TruncationPolicy& trunc) {
    cfg.validate();
    trunc.validate();
    SweepTable t({"T", "eps", "absE0", "absE1", "absE2", "absE3", "absE4", "max_collapse_dev", "xi",
                  "xi_inverse_omega", "C_V", "w_real", "w_imag", "phi2_real", "phi2_imag", "phi_vev", "phi_vev_flag",
                  "beta_exp"});
    const double m = cfg.m;
    for (double temp : t_grid) {
        if (!(temp > 0.0) || !(temp < cfg.t_crit))
            throw DomainError("pt_sweep temperatures must lie in (0, Tc)");
        const double eps = 1.0 - temp / cfg.t_crit;
        const double beta = 1.0 / temp;
        const ModelParams p = cfg.model(temp);
        std::vector<double> row{temp, eps};
        double dev = 0.0;
        for (int n = 0; n <= 4; ++n) {
            const double a = std::abs(energy(n, p));
            row.push_back(a);
            dev = std::max(dev, std::abs(a - m));
        }
        row.push_back(dev);
        const cplx e0 = energy(0, p);
        row.push_back(1.0 / std::sqrt(std::abs(e0 * e0 - m * m)));
        row.push_back(1.0 / p.omega);
        row.push_back(thermo(beta, p, trunc).heat_capacity.real());

        std::vector<cplx> e(cfg.mode_cutoff);
        cplx phi2 = 0.0;
        for (int n = 0; n < cfg.mode_cutoff; ++n) {
            e[n] = energy(n, p);
            phi2 += (2.0 * bose(e[n], beta) + 1.0) / (2.0 * e[n]);
        }
        const double mw = m * p.omega;
        const EosPoint q = eos_point(e, {}, mw * mw, m * m - mw * mw, 0.0, beta);
        row.push_back(q.w.real());
        row.push_back(q.w.imag());
        row.push_back(phi2.real());
        row.push_back(phi2.imag());
        double vev = 0.0, flag = 2.0;
        if (cfg.lambda > 0.0) {
            const double rad = 6.0 * cfg.abs_a(temp) / cfg.lambda - 0.5 * cfg.lambda * phi2.real();
            flag = rad < 0.0 ? 1.0 : 0.0;
            vev = rad < 0.0 ? 0.0 : std::sqrt(rad);
        }
        row.push_back(vev);
        row.push_back(flag);
        row.push_back(cfg.beta_exponent());
        t.add_row(std::move(row));
    }
    t.set_meta("branch", "principal");
    t.set_meta("mode_cutoff", std::to_string(cfg.mode_cutoff));
    t.set_meta("phi_vev_radicand", "real part");
    t.set_meta("C_V", "real part");
    if (t.size() >= 2) {
        const auto eps = t.column("eps");
        std::vector<double> le;
        for (double v : eps) le.push_back(std::log(v));
        auto loglog = [&](const std::string& col, const std::string& key) {
            std::vector<double> y;
            for (double v : t.column(col)) {
                if (!std::isfinite(v) || !(v > 0.0)) return;
                y.push_back(std::log(v));
            }
            t.set_meta(key, format_double(fit_line(le, y).slope));
        };
        loglog("xi", "xi_loglog_slope");
        loglog("xi_inverse_omega", "xi_inverse_omega_loglog_slope");
        const auto cv = t.column("C_V");
        const LinearFit f = fit_line(le, cv);
        t.set_meta("cv_log_fit_B", format_double(f.slope));
        t.set_meta("cv_log_fit_constant", format_double(f.intercept));
        t.set_meta("cv_log_fit_residual", format_double(f.residual));
        // order rows by decreasing eps and require C_V to increase along it
        std::vector<std::size_t> idx(eps.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
        bool mono = true;
        for (std::size_t i = 1; i < idx.size(); ++i) mono = mono && cv[idx[i]] > cv[idx[i - 1]];
        t.set_meta("cv_increasing_toward_tc", mono ? "true" : "false");
    }
    return t;
}

LandauFit pt_free_energy_fit(const PhaseTransitionConfig& cfg, const std::vector<double>& eps_grid, double beta,
                             const TruncationPolicy& trunc) {
    cfg.validate();
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    std::vector<double> f;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double e = eps_grid[i];
        if (!(e > 0.0 && e < 0.5)) throw DomainError("eps must lie in (0, 0.5)");
        if (i > 0 && !(e > eps_grid[i - 1])) throw DomainError("eps grid must be strictly increasing");
        f.push_back(thermo(beta, cfg.model(cfg.t_crit * (1.0 - e)), trunc).free_energy.real());
    }
    const LeastSquares ls = fit_basis(eps_grid, f,
                                      {[](double) { return 1.0; }, [](double e) { return e; },
                                       [](double e) { return e * e * std::log(e); }});
    return {ls.coeffs[0], ls.coeffs[1], ls.coeffs[2], ls.residual};
}

}  // namespace kgioh
