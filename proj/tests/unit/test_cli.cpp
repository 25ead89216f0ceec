#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "adapt/harness.hpp"

using namespace adapt;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "adapt_cli_test";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args) {
    const fs::path out = kWork / "stdout.txt";
    const std::string cmd =
        std::string("\"") + ADAPT_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + (kWork / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    return r;
}

void write_config(const fs::path& p) {
    std::ofstream(p) << R"({"instances": [{"generate": {"n_nodes": 8, "seed": 2}}],
        "planners": ["Offline", "ADAPT"], "delta_mu_grid": [0.0, 0.2], "delta_sigma_grid": [0.0],
        "n_executions": 2, "root_seed": 5,
        "planner": {"acs": {"n_ants": 8, "n_iterations": 30}}})";
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
    ~Workspace() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("generate writes a loadable instance") {
    Workspace ws;
    const fs::path f = kWork / "gen.json";
    CHECK(cli("generate -n 6 -s 3 --side 500 -o " + f.string()).code == 0);
    const Instance inst = load_instance(f);
    CHECK(inst.nodes.size() == 6);
    for (const auto& n : inst.nodes) {
        CHECK(n.position.x <= 500.0);
        CHECK(n.position.y <= 500.0);
    }
    const Result r = cli("generate -n 6 -s 3 --side 500");
    CHECK(r.code == 0);
    CHECK(instance_from_text(r.out) == inst);
}

TEST_CASE("run, validate and sweep") {
    Workspace ws;
    const fs::path cfg = kWork / "cfg.json";
    write_config(cfg);
    const fs::path out = kWork / "run";
    const Result r = cli("run -q -c " + cfg.string() + " -o " + out.string() + " -j 2");
    REQUIRE(r.code == 0);
    CHECK(r.out == slurp(out / "metrics.csv"));
    CHECK(fs::exists(out / "timing.csv"));
    CHECK(fs::exists(out / "traces.jsonl"));
    CHECK(read_trace_file(out / "traces.jsonl").size() == 2 * 2 * 2);

    const Result v = cli("validate " + out.string());
    CHECK(v.code == 0);
    CHECK(v.out.find("8 traces, 0 problems") != std::string::npos);
    CHECK(v.out.find("metrics.csv matches") != std::string::npos);
    CHECK(cli("validate " + (out / "traces.jsonl").string()).code == 0);

    // Same seed reproduces the table; a different one changes the traces.
    const fs::path again = kWork / "again";
    CHECK(cli("run -q -c " + cfg.string() + " -o " + again.string()).code == 0);
    CHECK(slurp(again / "metrics.csv") == slurp(out / "metrics.csv"));
    const fs::path other = kWork / "other";
    CHECK(cli("run -q -c " + cfg.string() + " -o " + other.string() + " -s 6").code == 0);
    CHECK(slurp(other / "traces.jsonl") != slurp(out / "traces.jsonl"));

    // Tampering is reported with exit code 2.
    std::ofstream(out / "metrics.csv", std::ios::app) << "x,ADAPT,0,0,1,1,1,1,0,1,0\n";
    const Result bad = cli("validate " + out.string());
    CHECK(bad.code == 2);
    CHECK(bad.out.find("does NOT match") != std::string::npos);

    const Result s = cli("sweep-theta -q -c " + cfg.string() + " -o " + (kWork / "sweep").string() + " -g 0.65,0.75");
    REQUIRE(s.code == 0);
    CHECK(s.out == slurp(kWork / "sweep" / "theta_sweep.csv"));
    CHECK(s.out.find("\n0.65,") != std::string::npos);
    CHECK(s.out.find("\n0.75,") != std::string::npos);
}

TEST_CASE("mission failures are not operational errors") {
    Workspace ws;
    const fs::path cfg = kWork / "cfg.json";
    std::ofstream(cfg) << R"({"instances": [{"generate": {"n_nodes": 20, "seed": 11}}], "planners": ["Offline"],
        "delta_mu_grid": [0.2], "delta_sigma_grid": [0.0], "n_executions": 2})";
    const Result r = cli("run -q -c " + cfg.string() + " -o " + (kWork / "fail").string());
    CHECK(r.code == 0);
    CHECK(r.out.find(",2,0,0,N/A,N/A,N/A,N/A") != std::string::npos);
}

TEST_CASE("operational errors exit nonzero") {
    Workspace ws;
    CHECK(cli("").code != 0);
    CHECK(cli("frobnicate").code != 0);
    CHECK(cli("run").code != 0);
    CHECK(cli("run -c " + (kWork / "missing.json").string()).code != 0);
    CHECK(cli("validate " + (kWork / "missing").string()).code != 0);

    const fs::path bad = kWork / "bad.json";
    std::ofstream(bad) << R"({"instances": [{"generate": {}}], "bogus": 1})";
    CHECK(cli("run -q -c " + bad.string()).code == 1);
    CHECK(slurp(kWork / "stderr.txt").find("bogus") != std::string::npos);

    const fs::path broken = kWork / "broken.jsonl";
    std::ofstream(broken) << "{\n";
    CHECK(cli("validate " + broken.string()).code == 2);

    const fs::path romp = kWork / "romp.json";
    std::ofstream(romp) << R"({"instances": [{"generate": {"n_nodes": 4}}], "planners": ["ROMP"]})";
    CHECK(cli("sweep-theta -q -c " + romp.string()).code == 1);
}
