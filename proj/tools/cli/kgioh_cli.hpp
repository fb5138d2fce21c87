#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kgioh/blackhole.hpp"
#include "kgioh/inflation.hpp"
#include "kgioh/params.hpp"
#include "kgioh/phase_transition.hpp"
#include "kgioh/table.hpp"

namespace kgioh::cli {

using Json = nlohmann::ordered_json;

enum class Application { none, inflation, blackhole, phase_transition };
enum class OutputFormat { csv, json };

const char* to_string(Application a);
const char* to_string(OutputFormat f);

// Everything one invocation needs. Serialises to JSON without loss.
struct RunConfig {
    std::string command;  // "thermo", "figure eos", ...
    ModelParams model;
    Application application = Application::none;
    InflationConfig inflation;
    BlackHoleConfig blackhole;
    PhaseTransitionConfig phase;
    TruncationPolicy trunc;
    std::string out;
    OutputFormat format = OutputFormat::json;
    // Command-specific scalars (beta, dim, grid bounds, ...) in definition order.
    std::vector<std::pair<std::string, std::string>> args;

    const std::string& arg(const std::string& key) const;
    double arg_double(const std::string& key) const;
    int arg_int(const std::string& key) const;
};

Json to_json(const RunConfig& cfg);
// DomainError on malformed input.
RunConfig run_config_from_json(const Json& j);

Json to_json(cplx v);
Json to_json(const SweepTable& t);

// Parses argv, executes, writes outputs and the manifest.
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical error.
int run(const std::vector<std::string>& argv);
int run(int argc, char** argv);

// Figure CSVs for cfg.command in {"figure eos", "figure hawking", "figure pt"};
// returns the written paths in order.
std::vector<std::string> emit_figures(const RunConfig& cfg);

// Flat "key = value" text, '#' comments; keys are long option names without dashes.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

}  // namespace kgioh::cli
