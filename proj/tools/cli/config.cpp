#include <cstdlib>
#include <sstream>

#include "kgioh/errors.hpp"
#include "kgioh_cli.hpp"

namespace kgioh::cli {

const char* to_string(Application a) {
    switch (a) {
        case Application::inflation: return "inflation";
        case Application::blackhole: return "blackhole";
        case Application::phase_transition: return "phase-transition";
        default: return "none";
    }
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

const std::string& RunConfig::arg(const std::string& key) const {
    for (const auto& kv : args)
        if (kv.first == key) return kv.second;
    throw DomainError("missing argument " + key);
}

double RunConfig::arg_double(const std::string& key) const {
    const std::string& s = arg(key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw DomainError("argument " + key + " is not a number: " + s);
    return v;
}

int RunConfig::arg_int(const std::string& key) const {
    const std::string& s = arg(key);
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw DomainError("argument " + key + " is not an integer: " + s);
    return static_cast<int>(v);
}

Json to_json(cplx v) { return Json{{"real", v.real()}, {"imag", v.imag()}}; }

Json to_json(const SweepTable& t) {
    Json j;
    j["columns"] = t.columns();
    j["rows"] = t.rows();
    Json meta = Json::object();
    for (const auto& kv : t.metadata()) meta[kv.first] = kv.second;
    j["metadata"] = meta;
    return j;
}

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["model"] = {{"m", c.model.m},
                  {"omega", c.model.omega},
                  {"v0", c.model.v0},
                  {"lambda", c.model.lambda},
                  {"a0", c.model.a0},
                  {"t_crit", c.model.t_crit},
                  {"hermitian_reference", c.model.hermitian_reference}};
    j["application"] = to_string(c.application);
    switch (c.application) {
        case Application::inflation:
            j["app_params"] = {{"mu", c.inflation.mu},
                               {"m", c.inflation.m},
                               {"v0", c.inflation.v0},
                               {"k_grid", c.inflation.k_grid},
                               {"mode_cutoff", c.inflation.mode_cutoff},
                               {"k_n_rule", to_string(c.inflation.k_n_rule)},
                               {"k_n", c.inflation.k_n},
                               {"hermitian_reference", c.inflation.hermitian_reference}};
            break;
        case Application::blackhole:
            j["app_params"] = {{"kappa", c.blackhole.kappa},
                               {"m", c.blackhole.m},
                               {"g_newton", c.blackhole.g_newton},
                               {"mass_bh", c.blackhole.mass_bh}};
            break;
        case Application::phase_transition:
            j["app_params"] = {{"a0", c.phase.a0},
                               {"t_crit", c.phase.t_crit},
                               {"m", c.phase.m},
                               {"lambda", c.phase.lambda},
                               {"mode_cutoff", c.phase.mode_cutoff}};
            break;
        default: j["app_params"] = Json::object();
    }
    j["trunc"] = {{"n_min", c.trunc.n_min},
                  {"rel_tol", c.trunc.rel_tol},
                  {"n_max", c.trunc.n_max},
                  {"mode_cap", c.trunc.mode_cap}};
    j["output"] = {{"path", c.out}, {"format", to_string(c.format)}};
    Json args = Json::object();
    for (const auto& kv : c.args) args[kv.first] = kv.second;
    j["args"] = args;
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    try {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        const Json& m = j.at("model");
        c.model.m = m.at("m").get<double>();
        c.model.omega = m.at("omega").get<double>();
        c.model.v0 = m.at("v0").get<double>();
        c.model.lambda = m.at("lambda").get<double>();
        c.model.a0 = m.at("a0").get<double>();
        c.model.t_crit = m.at("t_crit").get<double>();
        c.model.hermitian_reference = m.at("hermitian_reference").get<bool>();
        const std::string app = j.at("application").get<std::string>();
        const Json& a = j.at("app_params");
        if (app == "inflation") {
            c.application = Application::inflation;
            c.inflation.mu = a.at("mu").get<double>();
            c.inflation.m = a.at("m").get<double>();
            c.inflation.v0 = a.at("v0").get<double>();
            c.inflation.k_grid = a.at("k_grid").get<std::vector<double>>();
            c.inflation.mode_cutoff = a.at("mode_cutoff").get<int>();
            const std::string rule = a.at("k_n_rule").get<std::string>();
            if (rule != "zero" && rule != "user") throw DomainError("unknown k_n rule " + rule);
            c.inflation.k_n_rule = rule == "zero" ? KnRule::zero : KnRule::user;
            c.inflation.k_n = a.at("k_n").get<std::vector<double>>();
            c.inflation.hermitian_reference = a.at("hermitian_reference").get<bool>();
        } else if (app == "blackhole") {
            c.application = Application::blackhole;
            c.blackhole.kappa = a.at("kappa").get<double>();
            c.blackhole.m = a.at("m").get<double>();
            c.blackhole.g_newton = a.at("g_newton").get<double>();
            c.blackhole.mass_bh = a.at("mass_bh").get<double>();
        } else if (app == "phase-transition") {
            c.application = Application::phase_transition;
            c.phase.a0 = a.at("a0").get<double>();
            c.phase.t_crit = a.at("t_crit").get<double>();
            c.phase.m = a.at("m").get<double>();
            c.phase.lambda = a.at("lambda").get<double>();
            c.phase.mode_cutoff = a.at("mode_cutoff").get<int>();
        } else if (app != "none") {
            throw DomainError("unknown application " + app);
        }
        const Json& t = j.at("trunc");
        c.trunc.n_min = t.at("n_min").get<int>();
        c.trunc.rel_tol = t.at("rel_tol").get<double>();
        c.trunc.n_max = t.at("n_max").get<int>();
        c.trunc.mode_cap = t.at("mode_cap").get<int>();
        c.out = j.at("output").at("path").get<std::string>();
        const std::string fmt = j.at("output").at("format").get<std::string>();
        if (fmt != "csv" && fmt != "json") throw DomainError("unknown format " + fmt);
        c.format = fmt == "csv" ? OutputFormat::csv : OutputFormat::json;
        for (const auto& kv : j.at("args").items()) c.args.emplace_back(kv.key(), kv.value().get<std::string>());
        c.model.validate();
        c.trunc.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed run config: ") + e.what());
    }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw DomainError("config line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, value);
    }
    return out;
}

}  // namespace kgioh::cli
