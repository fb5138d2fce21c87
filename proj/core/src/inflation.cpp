#include "kgioh/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgioh/errors.hpp"
#include "kgioh/spectrum.hpp"
#include "kgioh/thermo.hpp"
#include "mode_sum.hpp"

namespace kgioh {

const char* to_string(KnRule r) { return r == KnRule::zero ? "zero" : "user"; }

void InflationConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("m must be positive");
    if (!std::isfinite(v0)) throw DomainError("v0 must be finite");
    if (mode_cutoff < 1) throw DomainError("mode_cutoff must be >= 1");
    if (k_n_rule == KnRule::user && static_cast<int>(k_n.size()) < mode_cutoff)
        throw DomainError("k_n rule 'user' needs one momentum per mode");
}

ModelParams InflationConfig::model() const {
    ModelParams p;
    p.m = m;
    p.omega = omega();
    p.v0 = v0;
    p.hermitian_reference = hermitian_reference;
    return p;
}

double InflationConfig::k_n_at(int n) const { return k_n_rule == KnRule::zero ? 0.0 : k_n.at(n); }

namespace {

std::vector<cplx> tower(const ModelParams& p, int count) {
    std::vector<cplx> e(count);
    for (int n = 0; n < count; ++n) e[n] = energy(n, p);
    return e;
}

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
}

}  // namespace

SweepTable inflation_power_spectrum(const InflationConfig& cfg, double beta, const TruncationPolicy& trunc) {
    cfg.validate();
    trunc.validate();
    check_beta(beta);
    const ModelParams p = cfg.model();
    const int nc = cfg.mode_cutoff;
    const std::vector<cplx> e = tower(p, nc);
    SweepTable t({"k", "P_total_real", "P_total_imag", "P_vacuum_real", "P_vacuum_imag", "delta_P_thermal_real",
                  "delta_P_thermal_imag", "G_R0_real", "G_R0_imag"});
    double worst = 0.0;
    for (double k : cfg.k_grid) {
        const std::vector<cplx> u = mode_transform_tower(nc, k, p);
        cplx total = 0.0, vac = 0.0, thermal = 0.0, gr = 0.0;
        for (int n = 0; n < nc; ++n) {
            const double w = std::norm(u[n]);
            const cplx nb = bose(e[n], beta);
            total += w * (1.0 + 2.0 * nb) / e[n];
            vac += w / e[n];
            thermal += 2.0 * w * nb / e[n];
            gr += w / (e[n] * e[n]);
        }
        const double scale = std::max(std::abs(total), 1e-300);
        worst = std::max(worst, std::abs(total - vac - thermal) / scale);
        t.add_row({k, total.real(), total.imag(), vac.real(), vac.imag(), thermal.real(), thermal.imag(), gr.real(),
                   gr.imag()});
    }
    t.set_meta("beta", format_double(beta));
    t.set_meta("mode_cutoff", std::to_string(nc));
    t.set_meta("mode_transform", p.hermitian_reference ? "oscillator-real-k" : "oscillator-at-k-exp(-i pi/4)");
    t.set_meta("branch", "principal");
    t.set_meta("identity_residual", format_double(worst));
    return t;
}

InflationTemperatures inflation_temperatures(const InflationConfig& cfg, double hubble) {
    if (!(hubble > 0.0)) throw DomainError("hubble must be positive");
    if (!(cfg.m > 0.0)) throw DomainError("m must be positive");
    InflationTemperatures r;
    r.t_ioh = cfg.mu / (kPi * cfg.m);
    r.t_gh = hubble / (2.0 * kPi);
    r.ratio = r.t_ioh / r.t_gh;
    return r;
}

EosPoint eos_point(const std::vector<cplx>& e, const std::vector<double>& k_n, double mu_sq, double m_eff_sq,
                   double v0, double beta) {
    check_beta(beta);
    cplx kt = 0.0, kx = 0.0, b = 0.0;
    for (std::size_t n = 0; n < e.size(); ++n) {
        const cplx c = detail::coth_half(e[n], beta);
        const double kn = n < k_n.size() ? k_n[n] : 0.0;
        kt += e[n] * e[n] * c;
        kx += kn * kn * c;
        b += c;
    }
    EosPoint r;
    r.k_t = kt;
    r.k_x = kx;
    r.potential = v0 - 0.5 * mu_sq * b;
    const cplx a = kt + kx;
    r.w = (a - m_eff_sq * b - 2.0 * v0) / (a + m_eff_sq * b + 2.0 * v0);
    const cplx rho = 0.5 * a + r.potential;
    const cplx pr = 0.5 * a - r.potential;
    r.w_components = pr / rho;
    return r;
}

SweepTable inflation_eos(const InflationConfig& cfg, const std::vector<double>& beta_grid,
                         const TruncationPolicy& trunc) {
    cfg.validate();
    trunc.validate();
    if (beta_grid.empty()) throw DomainError("beta_grid must be nonempty");
    const ModelParams p = cfg.model();
    const std::vector<cplx> e = tower(p, cfg.mode_cutoff);
    std::vector<double> kn(cfg.mode_cutoff);
    for (int n = 0; n < cfg.mode_cutoff; ++n) kn[n] = cfg.k_n_at(n);
    SweepTable t({"T", "w_real", "w_imag", "K_t_real", "K_t_imag", "K_x_real", "K_x_imag", "V_real", "V_imag",
                  "w_components_real", "w_components_imag"});
    for (double beta : beta_grid) {
        const EosPoint q = eos_point(e, kn, cfg.mu * cfg.mu, cfg.m_eff_sq(), cfg.v0, beta);
        t.add_row({1.0 / beta, q.w.real(), q.w.imag(), q.k_t.real(), q.k_t.imag(), q.k_x.real(), q.k_x.imag(),
                   q.potential.real(), q.potential.imag(), q.w_components.real(), q.w_components.imag()});
    }
    t.set_meta("k_n_rule", to_string(cfg.k_n_rule));
    t.set_meta("mode_weights", "unit");
    t.set_meta("mode_cutoff", std::to_string(cfg.mode_cutoff));
    t.set_meta("m_eff_sq", format_double(cfg.m_eff_sq()));
    t.set_meta("branch", "principal");
    const auto temp = t.column("T");
    const auto w = t.column("w_real");
    for (std::size_t i = 1; i < w.size(); ++i) {
        if ((w[i - 1] < 0.0) != (w[i] < 0.0)) {
            const double la = std::log(temp[i - 1]), lb = std::log(temp[i]);
            const double f = w[i - 1] / (w[i - 1] - w[i]);
            t.set_meta("t_star", format_double(std::exp(la + f * (lb - la))));
            break;
        }
    }
    return t;
}

ParticleCount inflation_particles(const InflationConfig& cfg, double beta, const TruncationPolicy& trunc) {
    cfg.validate();
    check_beta(beta);
    const ModelParams p = cfg.model();
    const auto s = detail::policy_sum([&](int, cplx e) { return bose(e, beta); }, beta, 0, p, trunc);
    ParticleCount r;
    r.n_total = s.value;
    r.occupation_0 = bose(energy(0, p), beta);
    r.dominated_by_n0 = std::abs(r.n_total - r.occupation_0) <= 1e-3 * std::abs(r.occupation_0);
    r.n_used = s.n_used;
    r.tail_bound = s.tail_bound;
    return r;
}

}  // namespace kgioh
