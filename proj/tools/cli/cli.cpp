#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <list>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kgioh/correlators.hpp"
#include "kgioh/errors.hpp"
#include "kgioh/operator_lab.hpp"
#include "kgioh/spectrum.hpp"
#include "kgioh/thermo.hpp"
#include "kgioh/version.hpp"
#include "kgioh_cli.hpp"

namespace kgioh::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Extra {
    std::string key;
    std::string value;
};

// Result of one command before serialisation.
struct Output {
    Json record = Json::object();
    std::optional<SweepTable> table;
    Json conventions = Json::object();
    Json diagnostics = Json::object();
};

Output execute(const RunConfig& cfg);

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << content;
    if (!f) throw IoError("write failed for " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

// Single-row table from a flat record of numbers and complex objects.
SweepTable record_table(const Json& rec) {
    std::vector<std::string> cols;
    std::vector<double> row;
    for (const auto& kv : rec.items()) {
        const Json& v = kv.value();
        if (v.is_number()) {
            cols.push_back(kv.key());
            row.push_back(v.get<double>());
        } else if (v.is_boolean()) {
            cols.push_back(kv.key());
            row.push_back(v.get<bool>() ? 1.0 : 0.0);
        } else if (v.is_object() && v.contains("real") && v.contains("imag") && v.size() == 2) {
            cols.push_back(kv.key() + "_real");
            cols.push_back(kv.key() + "_imag");
            row.push_back(v["real"].get<double>());
            row.push_back(v["imag"].get<double>());
        }
    }
    SweepTable t(cols);
    t.add_row(row);
    return t;
}

Json manifest(const RunConfig& cfg, const Output& out, const std::vector<std::string>& files) {
    Json m;
    m["tool"] = "kgioh";
    m["version"] = version();
    m["dependencies"] = {{"eigen", eigen_version()}, {"boost", boost_version()}};
    m["command"] = cfg.command;
    m["run_config"] = to_json(cfg);
    m["conventions"] = out.conventions;
    m["diagnostics"] = out.diagnostics;
    m["outputs"] = files;
    return m;
}

void copy_meta(const SweepTable& t, Json& into, const std::string& prefix = "") {
    for (const auto& kv : t.metadata()) into[prefix + kv.first] = kv.second;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw DomainError("points must be >= 1");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log grid bounds must be positive");
    std::vector<double> v = linspace(std::log10(a), std::log10(b), n);
    for (auto& x : v) x = std::pow(10.0, x);
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (*end != '\0') throw DomainError("not a number in list: " + item);
        out.push_back(v);
    }
    return out;
}

Json base_conventions(bool reference) {
    return {{"branch", "principal"}, {"energy", reference ? "reference-ladder omega(n+1/2)" : "complex-tower"}};
}

// ---------------------------------------------------------------- commands

Output cmd_thermo(const RunConfig& c) {
    const double beta = c.arg_double("beta");
    const ThermalObservables th = thermo(beta, c.model, c.trunc);
    const RealObservables rp = th.real_projection();
    Output o;
    o.record = {{"beta", beta},
                {"ensemble", th.ensemble},
                {"ln_z", to_json(th.ln_z)},
                {"F", to_json(th.free_energy)},
                {"E", to_json(th.mean_energy)},
                {"S", to_json(th.entropy)},
                {"C_V", to_json(th.heat_capacity)},
                {"n_used", th.n_used},
                {"tail_bound", th.tail_bound},
                {"identity_residual", th.identity_residual()},
                {"real_projection",
                 {{"ln_z", rp.ln_z}, {"F", rp.free_energy}, {"E", rp.mean_energy}, {"S", rp.entropy}, {"C_V", rp.heat_capacity}}}};
    o.table = record_table(o.record);
    o.conventions = base_conventions(c.model.hermitian_reference);
    o.conventions["ensemble"] = th.ensemble;
    o.diagnostics = {{"n_used", th.n_used}, {"tail_bound", th.tail_bound}};
    return o;
}

Output cmd_spectrum(const RunConfig& c) {
    const EffectiveSpectrum spec(c.model);
    const int count = c.arg_int("count");
    if (count < 1) throw DomainError("count must be >= 1");
    SweepTable t({"n", "E_real", "E_imag", "identity_residual"});
    for (int n = 0; n < count; ++n) {
        const cplx e = spec(n);
        t.add_row({double(n), e.real(), e.imag(), spec.identity_residual(n)});
    }
    Output o;
    o.record = {{"branch", EffectiveSpectrum::branch()}, {"table", to_json(t)}};
    o.table = t;
    o.conventions = base_conventions(c.model.hermitian_reference);
    return o;
}

Output cmd_modes(const RunConfig& c) {
    const int count = c.arg_int("count");
    if (count < 1) throw DomainError("count must be >= 1");
    const std::string space = c.arg("space");
    const bool momentum = space == "momentum";
    std::vector<std::string> cols{momentum ? "k" : "x"};
    for (int n = 0; n < count; ++n) {
        const std::string base = (momentum ? "u" : "psi") + std::to_string(n);
        cols.push_back(base + "_real");
        cols.push_back(base + "_imag");
    }
    SweepTable t(cols);
    for (double x : linspace(c.arg_double("x-min"), c.arg_double("x-max"), c.arg_int("points"))) {
        const std::vector<cplx> v = momentum ? mode_transform_tower(count, x, c.model) : mode_tower(count, x, c.model);
        std::vector<double> row{x};
        for (const cplx& z : v) {
            row.push_back(z.real());
            row.push_back(z.imag());
        }
        t.add_row(row);
    }
    Output o;
    o.record = {{"space", space}, {"table", to_json(t)}};
    o.table = t;
    o.conventions = base_conventions(c.model.hermitian_reference);
    o.conventions["mode_family"] = c.model.hermitian_reference ? "oscillator" : "contour C_n H_n(sqrt(m w) e^{i pi/4} x) e^{-i m w x^2/2}";
    if (momentum)
        o.conventions["mode_transform"] =
            c.model.hermitian_reference ? "oscillator-real-k" : "oscillator-at-k-exp(-i pi/4)";
    return o;
}

Output cmd_kernel(const RunConfig& c) {
    const double x = c.arg_double("x"), x2 = c.arg_double("x2");
    const double tau = c.arg_double("tau"), t = c.arg_double("t"), beta = c.arg_double("beta");
    Output o;
    o.record["x"] = x;
    o.record["x2"] = x2;
    o.record["realtime"] = to_json(propagator_realtime(x, x2, t, c.model));
    o.record["euclidean"] = to_json(c.model.hermitian_reference ? mehler_coeffs(tau, c.model)(x, x2)
                                                                : propagator_euclidean(x, x2, tau, c.model));
    o.record["wick_rotated"] = to_json(propagator_complex_time(x, x2, cplx(0.0, -tau), c.model));
    o.record["density_kernel"] = to_json(density_kernel(x, x2, beta, c.model, 1.0));
    if (!c.model.hermitian_reference) {
        o.record["diagonal_paper"] = to_json(diagonal_paper(x, beta, c.model, 1.0));
        o.record["diagonal_consistent"] = to_json(diagonal_consistent(x, beta, c.model, 1.0));
    }
    o.record["width_sq"] = width_sq(beta, c.model);
    o.record["delocalized"] = delocalized(beta, c.model);
    o.record["t_c_paper"] = t_c_paper(c.model.omega);
    o.record["t_c_divergence"] = t_c_divergence(c.model.omega);
    o.table = record_table(o.record);
    o.conventions = base_conventions(c.model.hermitian_reference);
    o.conventions["t_c_pair"] = {{"t_c_paper", "omega/pi^2"}, {"t_c_divergence", "2 omega/pi"}};
    o.conventions["z_norm"] = 1.0;
    o.conventions["sqrt_branch"] = "principal";
    return o;
}

Output cmd_green(const RunConfig& c) {
    const int ell = c.arg_int("ell");
    const double x = c.arg_double("x"), x2 = c.arg_double("x2"), beta = c.arg_double("beta");
    const double tau = c.arg_double("tau");
    const SeriesResult g = green_full(ell, x, x2, beta, c.model, c.trunc);
    Output o;
    o.record["matsubara"] = {{"ell", ell},
                             {"value", to_json(g.value)},
                             {"est_abs_err", g.est_abs_err},
                             {"n_used", g.n_used},
                             {"method", g.method}};
    o.record["g_tau"] = {{"n", 0},
                         {"tau", tau},
                         {"paper", to_json(g_tau(0, tau, beta, c.model, GTauVariant::paper))},
                         {"standard", to_json(g_tau(0, tau, beta, c.model, GTauVariant::standard))},
                         {"consistency", to_json(g_tau_consistency(0, tau, beta, c.model))}};
    const std::string wr = c.arg("omega-r");
    if (!wr.empty()) {
        const double w = c.arg_double("omega-r");
        const double eps = c.arg_double("eps");
        const double used_eps = eps > 0.0 ? eps : default_broadening(c.model);
        const SeriesResult r = retarded_green(w, x, x2, c.model, used_eps, c.trunc);
        o.record["retarded"] = {{"omega", w},
                                {"eps", used_eps},
                                {"value", to_json(r.value)},
                                {"est_abs_err", r.est_abs_err},
                                {"n_used", r.n_used},
                                {"method", r.method},
                                {"spectral_density", r.value.imag() / kPi}};
    }
    SweepTable t({"ell", "G_real", "G_imag", "est_abs_err", "n_used"});
    t.add_row({double(ell), g.value.real(), g.value.imag(), g.est_abs_err, double(g.n_used)});
    o.table = t;
    o.conventions = base_conventions(c.model.hermitian_reference);
    o.conventions["g_tau_variant"] = {{"paper", "e^{-E tau}/(1 - e^{-beta E}), theta(0) = 1"},
                                      {"standard", "cosh(E(|tau| - beta/2))/(2 E sinh(beta E/2))"}};
    o.conventions["spectral_density_sign"] = "+(1/pi) Im G^R";
    o.conventions["series_acceleration"] = "Levin u on (even, odd) pairs";
    o.diagnostics = {{"method", g.method}, {"n_used", g.n_used}, {"est_abs_err", g.est_abs_err}};
    return o;
}

Output cmd_otoc(const RunConfig& c) {
    const double t0 = c.arg_double("t-min"), t1 = c.arg_double("t-max");
    const int pts = c.arg_int("points");
    SweepTable t({"t", "C", "ln_C"});
    for (double s : linspace(t0, t1, pts)) {
        const double v = otoc(s, c.model);
        t.add_row({s, v, std::log(v)});
    }
    const SlopeFit f = otoc_log_slope(t0, t1, pts, c.model);
    t.set_meta("log_slope", format_double(f.slope));
    t.set_meta("expected_slope", format_double(2.0 * c.model.omega));
    Output o;
    o.record = {{"slope", f.slope},
                {"intercept", f.intercept},
                {"residual", f.residual},
                {"expected_slope", 2.0 * c.model.omega},
                {"table", to_json(t)}};
    o.table = t;
    o.conventions = {{"otoc", "cosh^2(omega t)"}};
    copy_meta(t, o.diagnostics);
    return o;
}

Output cmd_operator_lab(const RunConfig& c) {
    const oplab::ChainReport r = oplab::verify_chain(c.arg_int("dim"), c.model);
    Output o;
    o.record = {{"dim", r.dim},
                {"res_vx", r.res_vx},
                {"res_vp", r.res_vp},
                {"res_spectrum", r.res_spectrum},
                {"res_pseudo", r.res_pseudo},
                {"n_reliable", r.n_reliable},
                {"lowest_eigenvalue", r.lowest_eigenvalue},
                {"res_anti_pseudo", r.res_anti_pseudo},
                {"res_pt", r.res_pt},
                {"res_spectrum_truncated_hkg", r.res_spectrum_truncated_hkg},
                {"biortho_offdiag", r.biortho_offdiag},
                {"res_vx_dense", r.res_vx_dense},
                {"res_vp_dense", r.res_vp_dense},
                {"res_vx_printed", r.res_vx_printed},
                {"res_vx_double", r.res_vx_double},
                {"cond_v", r.cond_v}};
    Json ev = Json::array();
    for (const cplx& e : r.transformed_eigenvalues) ev.push_back(to_json(e));
    o.table = record_table(o.record);
    o.record["transformed_eigenvalues"] = ev;
    o.conventions = {{"rotation_sign", "rules: V = exp(+(pi/8)(xP+Px))"},
                     {"metric", "eta = V^2"},
                     {"rotation_residuals", "Lie series, 50-digit arithmetic, low block"}};
    o.diagnostics = {{"n_reliable", r.n_reliable}, {"cond_v", r.cond_v}};
    return o;
}

Output cmd_inflation(const RunConfig& c) {
    const InflationConfig& ic = c.inflation;
    const double beta = c.arg_double("beta");
    const SweepTable ps = inflation_power_spectrum(ic, beta, c.trunc);
    const InflationTemperatures temps = inflation_temperatures(ic, c.arg_double("hubble"));
    const ParticleCount pc = inflation_particles(ic, beta, c.trunc);
    const SweepTable eos = inflation_eos(ic, {beta}, c.trunc);
    Output o;
    o.record["omega"] = ic.omega();
    o.record["m_eff_sq"] = ic.m_eff_sq();
    o.record["temperatures"] = {{"t_ioh", temps.t_ioh}, {"t_gh", temps.t_gh}, {"ratio", temps.ratio}};
    o.record["particles"] = {{"n_total", to_json(pc.n_total)},
                             {"occupation_0", to_json(pc.occupation_0)},
                             {"dominated_by_n0", pc.dominated_by_n0},
                             {"n_used", pc.n_used},
                             {"tail_bound", pc.tail_bound}};
    o.record["eos"] = to_json(eos);
    o.record["power_spectrum"] = to_json(ps);
    o.table = ps;
    o.conventions = base_conventions(ic.hermitian_reference);
    o.conventions["k_n_rule"] = to_string(ic.k_n_rule);
    o.conventions["mode_weights_eos"] = "unit";
    o.conventions["mode_transform"] = ps.meta("mode_transform");
    o.conventions["m_eff_sq"] = "m^2 - mu^2";
    copy_meta(ps, o.diagnostics, "power_spectrum.");
    o.diagnostics["particles.n_used"] = pc.n_used;
    return o;
}

Output cmd_blackhole(const RunConfig& c) {
    const BlackHoleReport r = bh_report(c.blackhole, c.trunc, c.arg_int("occupations"));
    Output o;
    o.record = {{"omega_bh", r.omega_bh},
                {"beta_h", r.beta_h},
                {"t_ioh", r.t_ioh},
                {"t_hawking", r.t_hawking},
                {"ratio", r.ratio},
                {"ratio_residual", r.ratio_residual},
                {"omega_beta", r.omega_beta},
                {"ell_h_sq", r.ell_h_sq},
                {"ell_h_valid", r.ell_h_valid},
                {"total_power", to_json(r.total_power)},
                {"power_n_used", r.power_n_used},
                {"entropy", to_json(r.entropy)},
                {"entropy_n_used", r.entropy_n_used},
                {"area_entropy", r.area_entropy}};
    SweepTable t({"n", "E_real", "E_imag", "N_real", "N_imag"});
    for (std::size_t n = 0; n < r.occupations.size(); ++n)
        t.add_row({double(n), r.energies[n].real(), r.energies[n].imag(), r.occupations[n].real(),
                   r.occupations[n].imag()});
    o.record["occupations"] = to_json(t);
    o.table = t;
    o.conventions = base_conventions(false);
    o.conventions["ell_h"] = "sin(w beta)/(2 w cos(w beta)) as printed; valid for w beta in (0, pi/2)";
    o.diagnostics = {{"power_n_used", r.power_n_used}, {"entropy_n_used", r.entropy_n_used}};
    return o;
}

Output cmd_phase(const RunConfig& c) {
    const PhaseTransitionConfig& pc = c.phase;
    std::vector<double> temps;
    for (double e : logspace(c.arg_double("eps-max"), c.arg_double("eps-min"), c.arg_int("points")))
        temps.push_back(pc.t_crit * (1.0 - e));
    const SweepTable t = pt_sweep(pc, temps, c.trunc);
    Output o;
    o.record["omega_0"] = pc.omega_0();
    o.record["beta_exp"] = pc.beta_exponent();
    o.record["sweep"] = to_json(t);
    const std::vector<double> fit_eps = linspace(0.02, 0.4, 12);
    const LandauFit f = pt_free_energy_fit(pc, fit_eps, c.arg_double("fit-beta"), c.trunc);
    o.record["landau_fit"] = {{"f0", f.f0}, {"A", f.a}, {"B", f.b}, {"residual", f.residual}};
    o.table = t;
    o.conventions = base_conventions(false);
    o.conventions["xi"] = "1/sqrt|E_0^2 - m^2|";
    o.conventions["phi_vev_radicand"] = "real part; 0 and flagged when negative or lambda = 0";
    o.conventions["C_V"] = "real part";
    o.conventions["eos"] = "unit weights, M^2 = m^2 - m^2 omega_pt^2, V0 = 0";
    copy_meta(t, o.diagnostics);
    return o;
}

Output execute(const RunConfig& c) {
    const std::string& cmd = c.command;
    if (cmd == "thermo") return cmd_thermo(c);
    if (cmd == "spectrum") return cmd_spectrum(c);
    if (cmd == "modes") return cmd_modes(c);
    if (cmd == "kernel") return cmd_kernel(c);
    if (cmd == "green") return cmd_green(c);
    if (cmd == "otoc") return cmd_otoc(c);
    if (cmd == "operator-lab") return cmd_operator_lab(c);
    if (cmd == "inflation") return cmd_inflation(c);
    if (cmd == "blackhole") return cmd_blackhole(c);
    if (cmd == "phase-transition") return cmd_phase(c);
    throw DomainError("unknown command " + cmd);
}

// ---------------------------------------------------------------- figures

struct FigureSet {
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    Output info;
};

FigureSet figure_eos(const RunConfig& c) {
    std::vector<double> beta;
    for (double t : logspace(c.arg_double("t-min"), c.arg_double("t-max"), c.arg_int("points"))) beta.push_back(1.0 / t);
    const SweepTable t = inflation_eos(c.inflation, beta, c.trunc);
    FigureSet f;
    f.files.emplace_back("", t.to_csv());
    f.info.conventions = base_conventions(c.inflation.hermitian_reference);
    f.info.conventions["k_n_rule"] = to_string(c.inflation.k_n_rule);
    f.info.conventions["mode_weights"] = "unit";
    f.info.conventions["m_eff_sq"] = "m^2 - mu^2";
    copy_meta(t, f.info.diagnostics);
    return f;
}

FigureSet figure_hawking(const RunConfig& c) {
    const BlackHoleConfig& bc = c.blackhole;
    bc.validate();
    const ModelParams p = bc.model();
    const double e0 = energy(0, p).real();
    const int levels = c.arg_int("levels");
    if (levels < 1) throw DomainError("levels must be >= 1");
    const std::vector<std::pair<std::string, double>> ratios{{"t0p5", 0.5}, {"t1", 1.0}, {"t2", 2.0}};
    std::vector<std::string> cols{"n", "E_real_over_E0", "E_imag_over_E0"};
    for (const auto& r : ratios) {
        cols.push_back("N_" + r.first + "_real");
        cols.push_back("N_" + r.first + "_imag");
    }
    cols.push_back("planck_ref");
    SweepTable spec(cols);
    for (int n = 0; n < levels; ++n) {
        const cplx e = energy(n, p);
        std::vector<double> row{double(n), e.real() / e0, e.imag() / e0};
        for (const auto& r : ratios) {
            const cplx occ = bose(e, 1.0 / (r.second * e0));
            row.push_back(occ.real());
            row.push_back(occ.imag());
        }
        row.push_back(1.0 / std::expm1(e.real() / e0));
        spec.add_row(row);
    }
    const SweepTable ent = bh_entanglement(
        bc, logspace(c.arg_double("ratio-min"), c.arg_double("ratio-max"), c.arg_int("points")), c.trunc);
    SweepTable ent_out({"t_ratio", "S_ent", "S_fit"});
    const bool has_fit = ent.has_meta("log_fit_slope");
    const double slope = has_fit ? std::stod(ent.meta("log_fit_slope")) : 0.0;
    const double icpt = has_fit ? std::stod(ent.meta("log_fit_intercept")) : 0.0;
    for (const auto& row : ent.rows())
        ent_out.add_row({row[0], row[2], has_fit ? icpt + slope * std::log(row[0]) : 0.0});
    FigureSet f;
    f.files.emplace_back("hawking_spectrum.csv", spec.to_csv());
    f.files.emplace_back("hawking_entropy.csv", ent_out.to_csv());
    f.info.conventions = base_conventions(false);
    f.info.conventions["nu_clipping"] = ent.meta("occupation_rule");
    f.info.conventions["planck_ref"] = "1/(e^{Re E_n/E_0} - 1), T_H = E_0";
    f.info.conventions["temperature_ratios"] = "T_H/Re E_0 in {0.5, 1, 2}";
    copy_meta(ent, f.info.diagnostics, "entropy.");
    f.info.diagnostics["E0"] = e0;
    return f;
}

FigureSet figure_pt(const RunConfig& c) {
    const PhaseTransitionConfig& pc = c.phase;
    std::vector<double> temps;
    // eps descending, so T/Tc ascends and the last row is closest to Tc
    for (double e : logspace(c.arg_double("eps-max"), c.arg_double("eps-min"), c.arg_int("points")))
        temps.push_back(pc.t_crit * (1.0 - e));
    const SweepTable t = pt_sweep(pc, temps, c.trunc);
    SweepTable spec({"eps", "absE0", "absE1", "absE2", "absE3", "absE4"});
    SweepTable th({"T_over_Tc", "w_real", "w_imag", "C_V", "C_V_normalised"});
    double cmax = 0.0;
    for (double v : t.column("C_V")) cmax = std::max(cmax, std::abs(v));
    for (std::size_t i = 0; i < t.size(); ++i) {
        spec.add_row({t.at(i, "eps"), t.at(i, "absE0"), t.at(i, "absE1"), t.at(i, "absE2"), t.at(i, "absE3"),
                      t.at(i, "absE4")});
        const double cv = t.at(i, "C_V");
        th.add_row({t.at(i, "T") / pc.t_crit, t.at(i, "w_real"), t.at(i, "w_imag"), cv, cmax > 0.0 ? cv / cmax : 0.0});
    }
    FigureSet f;
    f.files.emplace_back("pt_spectrum.csv", spec.to_csv());
    f.files.emplace_back("pt_thermo.csv", th.to_csv());
    f.info.conventions = base_conventions(false);
    f.info.conventions["C_V"] = "real part, normalised by the column maximum";
    f.info.conventions["eos"] = "unit weights, M^2 = m^2 - m^2 omega_pt^2, V0 = 0";
    copy_meta(t, f.info.diagnostics);
    return f;
}

// ---------------------------------------------------------------- parsing

struct Parser {
    CLI::App app{"kgioh: Klein-Gordon inverted-oscillator thermal toolkit"};
    RunConfig rc;
    std::map<std::string, std::list<Extra>> extras;
    std::map<std::string, TruncationPolicy> truncs;
    std::map<std::string, std::string> fmt;
    std::map<std::string, CLI::App*> subs;
    std::string config_path;
    InflationConfig fig_inflation;

    CLI::App* sub(const std::string& name, const std::string& help, CLI::App* parent = nullptr) {
        CLI::App* s = (parent ? parent : &app)->add_subcommand(name, help);
        const std::string key = parent ? parent->get_name() + " " + name : name;
        subs[key] = s;
        return s;
    }

    static std::string key_of(CLI::App* s) {
        const CLI::App* p = s->get_parent();
        return p && p->get_parent() ? p->get_name() + " " + s->get_name() : s->get_name();
    }

    void extra(CLI::App* s, const std::string& name, const std::string& def, const std::string& help,
               bool numeric = true) {
        auto& list = extras[key_of(s)];
        list.push_back({name, def});
        CLI::Option* o = s->add_option("--" + name, list.back().value, help)->capture_default_str();
        if (numeric) o->check(CLI::Number);
    }

    void model_opts(CLI::App* s, bool with_reference = true) {
        s->add_option("--m", rc.model.m, "mass")->capture_default_str();
        s->add_option("--omega", rc.model.omega, "inverted-oscillator frequency")->capture_default_str();
        if (with_reference)
            s->add_flag("--reference", rc.model.hermitian_reference, "use the real ladder omega(n + 1/2)");
    }

    void trunc_opts(CLI::App* s, int n_max = 100000, double rel_tol = 0.0) {
        TruncationPolicy& t = truncs[key_of(s)];
        t.n_max = n_max;
        if (rel_tol > 0.0) t.rel_tol = rel_tol;
        s->add_option("--trunc-tol", t.rel_tol, "relative tolerance of mode sums")->capture_default_str();
        s->add_option("--trunc-max", t.n_max, "maximum number of modes")->capture_default_str();
        s->add_option("--trunc-min", t.n_min, "minimum number of modes")->capture_default_str();
        s->add_option("--mode-cap", t.mode_cap, "sum exactly this many modes (0: adaptive)")->capture_default_str();
    }

    void output_opts(CLI::App* s, bool with_format = true) {
        s->add_option("--out", rc.out, "output path (stdout when omitted)");
        if (with_format) {
            fmt[key_of(s)] = "json";
            s->add_option("--format", fmt[key_of(s)], "csv or json")
                ->check(CLI::IsMember({"csv", "json"}))
                ->capture_default_str();
        }
        s->add_option("--config", config_path, "flat key = value file; flags take precedence");
    }

    void inflation_opts(CLI::App* s, InflationConfig& ic) {
        s->add_option("--mu", ic.mu, "tachyonic mass")->capture_default_str();
        s->add_option("--m", ic.m, "mass")->capture_default_str();
        s->add_option("--v0", ic.v0, "vacuum energy density")->capture_default_str();
        s->add_option("--mode-cutoff", ic.mode_cutoff, "modes kept")->capture_default_str();
        extra(s, "kn-rule", "zero", "k_n rule: zero or user", false);
        extra(s, "kn", "", "comma-separated k_n for --kn-rule user", false);
    }

    void blackhole_opts(CLI::App* s) {
        s->add_option("--kappa", rc.blackhole.kappa, "surface gravity")->capture_default_str();
        s->add_option("--m", rc.blackhole.m, "field mass")->capture_default_str();
        s->add_option("--g-newton", rc.blackhole.g_newton, "Newton constant")->capture_default_str();
        s->add_option("--mass-bh", rc.blackhole.mass_bh, "black-hole mass (area term only)")->capture_default_str();
    }

    void phase_opts(CLI::App* s) {
        s->add_option("--a0", rc.phase.a0, "Landau coefficient a0")->capture_default_str();
        s->add_option("--tc", rc.phase.t_crit, "critical temperature")->capture_default_str();
        s->add_option("--m", rc.phase.m, "mass")->capture_default_str();
        s->add_option("--lambda", rc.phase.lambda, "quartic coupling")->capture_default_str();
        s->add_option("--mode-cutoff", rc.phase.mode_cutoff, "modes in <phi^2> and w")->capture_default_str();
    }

    Parser() {
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(version()));

        CLI::App* s = sub("thermo", "thermal observables of the effective spectrum");
        model_opts(s);
        trunc_opts(s);
        output_opts(s);
        extra(s, "beta", "1", "inverse temperature");

        s = sub("spectrum", "effective energies E_n");
        model_opts(s);
        output_opts(s);
        extra(s, "count", "10", "number of levels");

        s = sub("modes", "mode functions on a grid");
        model_opts(s);
        output_opts(s);
        extra(s, "count", "4", "number of modes");
        extra(s, "x-min", "-5", "grid start");
        extra(s, "x-max", "5", "grid end");
        extra(s, "points", "101", "grid points");
        extra(s, "space", "position", "position or momentum", false);

        s = sub("kernel", "propagators and thermal density kernel");
        model_opts(s);
        output_opts(s);
        extra(s, "x", "0.5", "first position");
        extra(s, "x2", "-0.25", "second position");
        extra(s, "tau", "0.5", "Euclidean time");
        extra(s, "t", "0.5", "real time");
        extra(s, "beta", "1", "inverse temperature");

        s = sub("green", "Matsubara and retarded Green functions");
        model_opts(s);
        // complex-tower sums converge slowly on the axis and not at all off it
        trunc_opts(s, 100000, 1e-4);
        output_opts(s);
        extra(s, "ell", "0", "Matsubara index");
        extra(s, "x", "0", "first position");
        extra(s, "x2", "0", "second position");
        extra(s, "beta", "1", "inverse temperature");
        extra(s, "tau", "0.25", "imaginary time for g_tau");
        extra(s, "omega-r", "", "real frequency for G^R (omitted: skip)", false);
        extra(s, "eps", "0", "broadening (<= 0: default)");

        s = sub("otoc", "out-of-time-order correlator");
        model_opts(s, false);
        output_opts(s);
        extra(s, "t-min", "0.5", "fit window start");
        extra(s, "t-max", "5", "fit window end");
        extra(s, "points", "10", "samples");

        s = sub("operator-lab", "truncated-basis verification of the rotation chain");
        model_opts(s, false);
        output_opts(s);
        extra(s, "dim", "64", "basis dimension");

        s = sub("inflation", "inflaton power spectrum, temperatures, particles, EOS");
        inflation_opts(s, rc.inflation);
        s->add_flag("--reference", rc.inflation.hermitian_reference, "use the real ladder");
        trunc_opts(s);
        output_opts(s);
        extra(s, "beta", "1", "inverse temperature");
        extra(s, "hubble", "1", "Hubble rate");
        extra(s, "k-min", "-3", "momentum grid start");
        extra(s, "k-max", "3", "momentum grid end");
        extra(s, "points", "13", "momentum grid points");

        s = sub("blackhole", "Hawking-temperature mapping report");
        blackhole_opts(s);
        trunc_opts(s);
        output_opts(s);
        extra(s, "occupations", "8", "occupations listed");

        s = sub("phase-transition", "critical sweep of the order-parameter field");
        phase_opts(s);
        trunc_opts(s, 2000000);
        output_opts(s);
        extra(s, "eps-min", "1e-4", "smallest reduced temperature");
        extra(s, "eps-max", "1e-1", "largest reduced temperature");
        extra(s, "points", "13", "grid points");
        extra(s, "fit-beta", "1", "beta of the Landau free-energy fit");

        CLI::App* fig = sub("figure", "figure data as CSV");
        fig->require_subcommand(1);
        s = sub("eos", "equation of state w(T)", fig);
        fig_inflation.v0 = 1e3;
        inflation_opts(s, fig_inflation);
        trunc_opts(s);
        output_opts(s, false);
        s->get_option("--out")->required();
        extra(s, "t-min", "1e-2", "lowest temperature");
        extra(s, "t-max", "1e4", "highest temperature");
        extra(s, "points", "61", "temperature points");

        s = sub("hawking", "Hawking spectrum and entanglement entropy", fig);
        blackhole_opts(s);
        trunc_opts(s, 2000000);
        output_opts(s, false);
        s->get_option("--out")->required();
        extra(s, "levels", "20", "spectrum rows");
        extra(s, "ratio-min", "0.0316227766016838", "smallest T_H/E_0");
        extra(s, "ratio-max", "10", "largest T_H/E_0");
        extra(s, "points", "26", "entropy rows");

        s = sub("pt", "phase-transition spectrum and thermodynamics", fig);
        phase_opts(s);
        trunc_opts(s, 2000000);
        output_opts(s, false);
        s->get_option("--out")->required();
        extra(s, "eps-min", "1e-4", "smallest reduced temperature");
        extra(s, "eps-max", "0.8", "largest reduced temperature");
        extra(s, "points", "41", "grid points");
    }

    CLI::App* selected() const {
        for (CLI::App* s : app.get_subcommands()) {
            const auto inner = s->get_subcommands();
            return inner.empty() ? s : inner.front();
        }
        return nullptr;
    }

    void finalize() {
        CLI::App* s = selected();
        const std::string key = key_of(s);
        rc.command = key;
        rc.trunc = truncs.count(key) ? truncs[key] : TruncationPolicy{};
        rc.format = fmt.count(key) && fmt[key] == "csv" ? OutputFormat::csv : OutputFormat::json;
        if (key.rfind("figure", 0) == 0) rc.format = OutputFormat::csv;
        for (const Extra& e : extras[key]) rc.args.emplace_back(e.key, e.value);
        if (key == "figure eos") rc.inflation = fig_inflation;
        if (key == "inflation" || key == "figure eos") {
            rc.application = Application::inflation;
            const std::string rule = rc.arg("kn-rule");
            if (rule != "zero" && rule != "user") throw CLI::ValidationError("--kn-rule", "must be zero or user");
            rc.inflation.k_n_rule = rule == "zero" ? KnRule::zero : KnRule::user;
            rc.inflation.k_n = parse_list(rc.arg("kn"));
            if (key == "inflation")
                rc.inflation.k_grid = linspace(rc.arg_double("k-min"), rc.arg_double("k-max"), rc.arg_int("points"));
        } else if (key == "blackhole" || key == "figure hawking") {
            rc.application = Application::blackhole;
        } else if (key == "phase-transition" || key == "figure pt") {
            rc.application = Application::phase_transition;
        }
    }

    // Subcommand tokens at the front of argv (1 or 2 of them).
    std::pair<CLI::App*, std::size_t> locate(const std::vector<std::string>& args) const {
        if (args.empty()) return {nullptr, 0};
        auto it = subs.find(args[0]);
        if (it == subs.end()) return {nullptr, 0};
        if (args[0] == "figure") {
            if (args.size() < 2) return {nullptr, 0};
            auto jt = subs.find("figure " + args[1]);
            return jt == subs.end() ? std::make_pair((CLI::App*)nullptr, std::size_t(0)) : std::make_pair(jt->second, std::size_t(2));
        }
        return {it->second, 1};
    }

    // Inserts --key=value pairs from the config file right after the
    // subcommand tokens; command-line flags come later and win.
    std::vector<std::string> with_config(const std::vector<std::string>& args) const {
        std::string path;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        }
        if (path.empty()) return args;
        const auto [target, n] = locate(args);
        if (!target) return args;
        std::string text;
        try {
            text = read_file(path);
        } catch (const IoError& e) {
            throw CLI::ValidationError("--config", e.what());
        }
        std::vector<std::string> out(args.begin(), args.begin() + n);
        for (const auto& [k, v] : parse_config_text(text)) {
            if (k == "config") continue;
            if (target->get_option_no_throw("--" + k)) {
                out.push_back("--" + k + "=" + v);
                continue;
            }
            bool known = false;
            for (const auto& kv : subs) known = known || kv.second->get_option_no_throw("--" + k) != nullptr;
            if (!known) throw CLI::ValidationError("--config", "unknown key '" + k + "'");
        }
        out.insert(out.end(), args.begin() + n, args.end());
        return out;
    }
};

}  // namespace

std::vector<std::string> emit_figures(const RunConfig& cfg) {
    FigureSet f;
    if (cfg.command == "figure eos") f = figure_eos(cfg);
    else if (cfg.command == "figure hawking") f = figure_hawking(cfg);
    else if (cfg.command == "figure pt") f = figure_pt(cfg);
    else throw DomainError("not a figure command: " + cfg.command);
    if (cfg.out.empty()) throw DomainError("figure output path is empty");
    std::vector<std::string> paths;
    std::string manifest_path;
    if (f.files.size() == 1 && f.files[0].first.empty()) {
        write_file(cfg.out, f.files[0].second);
        paths.push_back(cfg.out);
        manifest_path = cfg.out + ".manifest.json";
    } else {
        const std::filesystem::path dir(cfg.out);
        for (const auto& [name, content] : f.files) {
            const std::string p = (dir / name).string();
            write_file(p, content);
            paths.push_back(p);
        }
        manifest_path = (dir / "manifest.json").string();
    }
    write_file(manifest_path, manifest(cfg, f.info, paths).dump(2) + "\n");
    paths.push_back(manifest_path);
    return paths;
}

int run(const std::vector<std::string>& argv) {
    Parser p;
    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    try {
        args = p.with_config(args);
        // CLI11 consumes a reversed argument vector
        std::vector<std::string> rev(args.rbegin(), args.rend());
        p.app.parse(rev);
        p.finalize();
    } catch (const CLI::CallForHelp& e) {
        return p.app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return p.app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return p.app.exit(e);
    } catch (const CLI::ParseError& e) {
        p.app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    const RunConfig& rc = p.rc;
    try {
        if (rc.command.rfind("figure ", 0) == 0) {
            for (const auto& path : emit_figures(rc)) std::cerr << "wrote " << path << "\n";
            return 0;
        }
        Output o = execute(rc);
        std::string body;
        if (rc.format == OutputFormat::csv) {
            if (!o.table) throw DomainError("command has no tabular output");
            body = o.table->to_csv();
        } else {
            Json j;
            j["command"] = rc.command;
            j["result"] = o.record;
            body = j.dump(2) + "\n";
        }
        if (rc.out.empty()) {
            std::cout << body;
            std::cout.flush();
            return 0;
        }
        write_file(rc.out, body);
        const std::string mpath = rc.out + ".manifest.json";
        write_file(mpath, manifest(rc, o, {rc.out}).dump(2) + "\n");
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace kgioh::cli
