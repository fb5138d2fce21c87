#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "kgioh/errors.hpp"
#include "kgioh/thermo.hpp"
#include "kgioh_cli.hpp"
#include "oracle.hpp"

using namespace kgioh;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kgioh_test_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "kgioh");
    return cli::run(args);
}

cli::Json run_json(std::vector<std::string> args, const fs::path& out) {
    args.push_back("--out");
    args.push_back(out.string());
    REQUIRE(run(args) == 0);
    return cli::Json::parse(slurp(out));
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

// header byte-exact, values within rel 1e-9 (abs 1e-12 floor)
void compare_golden(const fs::path& produced, const std::string& name) {
    const char* env = std::getenv("KGIOH_SEED_DIR");
    const char* dir = env ? env : KGIOH_GOLDEN_DEFAULT;
    const fs::path golden = fs::path(dir) / name;
    REQUIRE(fs::exists(golden));
    const auto a = split_csv(slurp(produced));
    const auto b = split_csv(slurp(golden));
    REQUIRE(a.size() == b.size());
    CHECK(a[0] == b[0]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        REQUIRE(a[i].size() == b[i].size());
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            const double x = std::stod(a[i][j]), y = std::stod(b[i][j]);
            if (std::isnan(y)) {
                CHECK(std::isnan(x));
                continue;
            }
            INFO(name << " row " << i << " col " << b[0][j]);
            CHECK(std::abs(x - y) <= 1e-9 * std::abs(y) + 1e-12);
        }
    }
}

}  // namespace

TEST_CASE("exit codes") {
    const fs::path d = scratch("exit");
    CHECK(run({"thermo", "--beta", "0.7", "--out", (d / "t.json").string()}) == 0);
    CHECK(fs::exists(d / "t.json.manifest.json"));
    CHECK(run({}) == 2);
    CHECK(run({"nonsense"}) == 2);
    CHECK(run({"thermo", "--beta", "abc"}) == 2);
    CHECK(run({"thermo", "--format", "xml"}) == 2);
    CHECK(run({"thermo", "--beta", "-1", "--out", (d / "n.json").string()}) == 3);
    CHECK(run({"thermo", "--omega", "0", "--out", (d / "z.json").string()}) == 3);
    CHECK(run({"green", "--x", "0.3", "--out", (d / "g.json").string()}) == 3);
    CHECK(run({"figure", "eos"}) == 2);  // --out required
    // a regular file where a directory is needed
    std::ofstream(d / "blocker") << "x";
    CHECK(run({"thermo", "--out", (d / "blocker" / "t.json").string()}) == 1);
    CHECK(run({"thermo", "--config", (d / "missing.cfg").string()}) == 2);
}

TEST_CASE("thermo output matches the library") {
    const fs::path d = scratch("thermo");
    const cli::Json j = run_json({"thermo", "--beta", "0.8", "--m", "1.5", "--omega", "0.7"}, d / "t.json");
    ModelParams p;
    p.m = 1.5;
    p.omega = 0.7;
    const ThermalObservables th = thermo(0.8, p, TruncationPolicy{});
    CHECK(j["result"]["F"]["real"].get<double>() == th.free_energy.real());
    CHECK(j["result"]["S"]["imag"].get<double>() == th.entropy.imag());
    CHECK(j["result"]["n_used"].get<int>() == th.n_used);
}

TEST_CASE("config file and flag precedence") {
    const auto kv = cli::parse_config_text("# comment\nbeta = 2.5\n  --m=1.2 # trailing\n\nomega= 0.4\n");
    REQUIRE(kv.size() == 3);
    CHECK(kv[0] == std::make_pair(std::string("beta"), std::string("2.5")));
    CHECK(kv[1] == std::make_pair(std::string("m"), std::string("1.2")));
    CHECK(kv[2].second == "0.4");
    CHECK_THROWS_AS(cli::parse_config_text("beta 2"), DomainError);
    CHECK_THROWS_AS(cli::parse_config_text(" = 2"), DomainError);

    const fs::path d = scratch("config");
    std::ofstream(d / "run.cfg") << "beta = 2.5\nm = 1.2\nomega = 0.4\n";
    const std::string cfg = (d / "run.cfg").string();
    const cli::Json a = run_json({"thermo", "--config", cfg}, d / "a.json");
    CHECK(a["result"]["beta"].get<double>() == 2.5);
    const cli::Json b = run_json({"thermo", "--config", cfg, "--beta", "0.5"}, d / "b.json");
    CHECK(b["result"]["beta"].get<double>() == 0.5);
    const cli::Json man = cli::Json::parse(slurp(d / "b.json.manifest.json"));
    CHECK(man["run_config"]["model"]["m"].get<double>() == 1.2);
    CHECK(man["run_config"]["model"]["omega"].get<double>() == 0.4);
    std::ofstream(d / "bad.cfg") << "no-such-key = 1\n";
    CHECK(run({"thermo", "--config", (d / "bad.cfg").string()}) == 2);
}

TEST_CASE("RunConfig JSON round trip") {
    const fs::path d = scratch("roundtrip");
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"thermo", "--beta", "0.3", "--reference", "--trunc-tol", "1e-9"},
          std::vector<std::string>{"inflation", "--mu", "2", "--kn-rule", "user", "--kn", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8"},
          std::vector<std::string>{"blackhole", "--kappa", "0.5", "--m", "0.3"},
          std::vector<std::string>{"phase-transition", "--lambda", "0.2", "--points", "5"}}) {
        std::vector<std::string> a = args;
        a.push_back("--out");
        a.push_back((d / "r.json").string());
        REQUIRE(run(a) == 0);
        const cli::Json man = cli::Json::parse(slurp(d / "r.json.manifest.json"));
        const cli::RunConfig rc = cli::run_config_from_json(man["run_config"]);
        CHECK(cli::to_json(rc) == man["run_config"]);
        CHECK(rc.command == args[0]);
    }
    CHECK_THROWS_AS(cli::run_config_from_json(cli::Json::parse("{\"command\": 3}")), DomainError);
}

TEST_CASE("csv output") {
    const fs::path d = scratch("csv");
    REQUIRE(run({"spectrum", "--count", "3", "--format", "csv", "--out", (d / "s.csv").string()}) == 0);
    const auto rows = split_csv(slurp(d / "s.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"n", "E_real", "E_imag", "identity_residual"});
    CHECK(rows[1][1] == "1.000000000000e+00");
}

TEST_CASE("figures: determinism, goldens, manifest") {
    const fs::path a = scratch("fig_a"), b = scratch("fig_b");
    for (const fs::path& d : {a, b}) {
        REQUIRE(run({"figure", "eos", "--out", (d / "eos.csv").string()}) == 0);
        REQUIRE(run({"figure", "hawking", "--out", d.string()}) == 0);
        REQUIRE(run({"figure", "pt", "--out", d.string()}) == 0);
    }
    const std::vector<std::string> names{"eos.csv", "hawking_spectrum.csv", "hawking_entropy.csv", "pt_spectrum.csv",
                                         "pt_thermo.csv"};
    for (const auto& n : names) {
        CHECK(slurp(a / n) == slurp(b / n));
        compare_golden(a / n, n);
    }

    const cli::Json eos = cli::Json::parse(slurp(a / "eos.csv.manifest.json"));
    CHECK(eos["conventions"]["branch"] == "principal");
    CHECK(eos["conventions"]["k_n_rule"] == "zero");
    CHECK(eos["conventions"]["mode_weights"] == "unit");
    CHECK(eos["conventions"].contains("m_eff_sq"));
    CHECK(eos["diagnostics"].contains("t_star"));
    CHECK(eos.contains("version"));
    CHECK(eos["dependencies"].contains("eigen"));

    const cli::Json m = cli::Json::parse(slurp(a / "manifest.json"));
    CHECK(m["command"] == "figure pt");
    CHECK(m["conventions"]["C_V"].is_string());
    CHECK(m["conventions"]["eos"].is_string());
    CHECK(m["outputs"].size() == 2);

    const fs::path h = scratch("fig_h");
    REQUIRE(run({"figure", "hawking", "--out", h.string()}) == 0);
    const cli::Json hm = cli::Json::parse(slurp(h / "manifest.json"));
    CHECK(hm["conventions"]["nu_clipping"] == "nu = max(Re N, 0) + 1/2");
    CHECK(hm["conventions"].contains("planck_ref"));
    CHECK(hm["diagnostics"].contains("entropy.claimed_slope"));
}

TEST_CASE("every subcommand runs on defaults") {
    const fs::path d = scratch("all");
    for (const char* c : {"thermo", "spectrum", "modes", "kernel", "green", "otoc", "inflation", "blackhole",
                          "phase-transition"}) {
        INFO(c);
        CHECK(run({c, "--out", (d / (std::string(c) + ".json")).string()}) == 0);
    }
    CHECK(run({"operator-lab", "--dim", "32", "--out", (d / "op.json").string()}) == 0);
    const cli::Json op = cli::Json::parse(slurp(d / "op.json"));
    CHECK(op["result"]["dim"] == 32);
    CHECK(op["result"]["n_reliable"] == 8);
}
