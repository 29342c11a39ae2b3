// Integration tests driving the goe-fluct binary. The binary path comes
// from GOE_FLUCT_BIN (set by the ctest registration).

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "goefluct/config.hpp"
#include "goefluct/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary_path() {
    const char* env = std::getenv("GOE_FLUCT_BIN");
    REQUIRE_MESSAGE(env != nullptr, "GOE_FLUCT_BIN must point at goe-fluct");
    return env;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + binary_path() + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) {
        result.output += buf.data();
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("goefluct_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

}  // namespace

TEST_CASE("covariance subcommand prints the oracle values") {
    const RunResult r1 = run("covariance --f x --g x --model bm --s 1 --t 1 --json");
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("\"rcorrected\": 2.0") != std::string::npos);

    const RunResult r2 =
        run("covariance --f x --g x --model bm --s 0.5 --t 1 --json");
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("\"rcorrected\": 1.0") != std::string::npos);
    CHECK(r2.output.find("\"paperliteral\": 2.0") != std::string::npos);

    // Forced quadrature at rho = 1 refuses with a numeric-failure exit.
    const RunResult r3 =
        run("covariance --f x --g x --model bm --s 1 --t 1 --route quadrature");
    CHECK(r3.exit_code == 3);
    CHECK(r3.output.find("series route") != std::string::npos);

    const RunResult r4 = run("covariance --f x --g x --model nonsense --s 1 --t 1");
    CHECK(r4.exit_code == 2);
    CHECK(run("covariance --f bogus --g x --model bm --s 1 --t 1").exit_code == 2);
}

TEST_CASE("verify subcommands") {
    CHECK(run("verify quadrature").exit_code == 0);
    const RunResult bad = run("verify nonsense");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("simulate: exit codes and CSV shape") {
    const fs::path dir = temp_dir("simulate");
    const fs::path config = dir / "config.json";
    write(config,
          R"({"model":{"kind":"bm"},"n":4,"grid":[0.5,1.0],"functions":["x","x^2"],)"
          R"("replicas":5,"seed":3})");
    const RunResult ok =
        run("simulate --config " + config.string() + " --out " + (dir / "out").string());
    CHECK(ok.exit_code == 0);
    const std::string eig =
        goefluct::read_text_file((dir / "out" / "eigenvalues.csv").string());
    CHECK(eig.rfind("replica,time,lambda_001,lambda_002,lambda_003,lambda_004\n",
                    0) == 0);
    // 5 replicas x 2 times + header.
    CHECK(std::count(eig.begin(), eig.end(), '\n') == 11);
    const std::string stats =
        goefluct::read_text_file((dir / "out" / "statistics.csv").string());
    CHECK(stats.rfind("replica,time,x,x^2\n", 0) == 0);

    CHECK(run("simulate --config /nonexistent.json").exit_code == 2);

    const fs::path degenerate = dir / "degenerate.json";
    write(degenerate,
          R"({"model":{"kind":"fbm","hurst":0.7},"n":4,"grid":[0.0,1.0],)"
          R"("functions":["x"],"replicas":5,"seed":3})");
    const RunResult deg = run("simulate --config " + degenerate.string());
    CHECK(deg.exit_code == 2);
    CHECK(deg.output.find("degenerate") != std::string::npos);

    const fs::path malformed = dir / "malformed.json";
    write(malformed, "{not json");
    CHECK(run("simulate --config " + malformed.string()).exit_code == 2);
}

TEST_CASE("experiment: replicas=1 rejected, reruns byte-identical") {
    const fs::path dir = temp_dir("experiment");
    const fs::path config = dir / "config.json";
    write(config,
          R"({"model":{"kind":"bm"},"n":8,"grid":[1.0],"functions":["x^2"],)"
          R"("replicas":120,"seed":99})");

    const RunResult a = run("experiment --config " + config.string() + " --out " +
                            (dir / "a").string());
    CHECK(a.exit_code == 0);
    const RunResult b = run("experiment --config " + config.string() + " --out " +
                            (dir / "b").string());
    CHECK(b.exit_code == 0);
    CHECK(goefluct::read_text_file((dir / "a" / "report.json").string()) ==
          goefluct::read_text_file((dir / "b" / "report.json").string()));
    CHECK(goefluct::read_text_file((dir / "a" / "replicas.csv").string()) ==
          goefluct::read_text_file((dir / "b" / "replicas.csv").string()));

    const fs::path single = dir / "single.json";
    write(single,
          R"({"model":{"kind":"bm"},"n":8,"grid":[1.0],"functions":["x^2"],)"
          R"("replicas":1,"seed":99})");
    CHECK(run("experiment --config " + single.string()).exit_code == 2);
}

TEST_CASE("thread count does not change output bytes") {
    const fs::path dir = temp_dir("threads");
    const fs::path config = dir / "config.json";
    write(config,
          R"({"model":{"kind":"fbm","hurst":0.6},"n":10,"grid":[0.5,1.0],)"
          R"("functions":["x","x^2"],"replicas":90,"seed":4})");
    const RunResult one =
        run("experiment --config " + config.string() + " --out " +
                (dir / "one").string(),
            "GOE_FLUCT_THREADS=1 ");
    const RunResult four =
        run("experiment --config " + config.string() + " --out " +
                (dir / "four").string(),
            "GOE_FLUCT_THREADS=4 ");
    CHECK(one.exit_code == 0);
    CHECK(four.exit_code == 0);
    CHECK(goefluct::read_text_file((dir / "one" / "report.json").string()) ==
          goefluct::read_text_file((dir / "four" / "report.json").string()));
    CHECK(goefluct::read_text_file((dir / "one" / "replicas.csv").string()) ==
          goefluct::read_text_file((dir / "four" / "replicas.csv").string()));
}

TEST_CASE("SIMD dispatch override") {
    // scalar is always available; a bogus name must fail loudly.
    const RunResult scalar =
        run("covariance --f x --g x --model bm --s 1 --t 1",
            "GOE_FLUCT_SIMD=scalar ");
    CHECK(scalar.exit_code == 0);
    const RunResult bogus =
        run("covariance --f x --g x --model bm --s 1 --t 1",
            "GOE_FLUCT_SIMD=bogus ");
    CHECK(bogus.exit_code == 3);
    CHECK(bogus.output.find("GOE_FLUCT_SIMD") != std::string::npos);
}

TEST_CASE("manifest config echo re-parses to an equivalent config") {
    const fs::path dir = temp_dir("echo");
    const fs::path config = dir / "config.json";
    const std::string raw =
        R"({"model":{"kind":"ou","theta":1.5},"n":6,"grid":[0.25,1.0],)"
        R"("functions":["x","poly:0,0,2"],"replicas":16,"seed":55})";
    write(config, raw);
    REQUIRE(run("experiment --config " + config.string() + " --out " +
                (dir / "out").string())
                .exit_code == 0);
    const std::string manifest =
        goefluct::read_text_file((dir / "out" / "manifest.json").string());
    // Byte-faithful echo: the raw config text appears inside the manifest
    // as one JSON string.
    const auto parsed = nlohmann::json::parse(manifest);
    CHECK(parsed.at("config_echo").get<std::string>() == raw);
    const goefluct::ExperimentConfig original =
        goefluct::parse_experiment_config(raw);
    const goefluct::ExperimentConfig echoed = goefluct::parse_experiment_config(
        parsed.at("config_echo").get<std::string>());
    CHECK(echoed.n == original.n);
    CHECK(echoed.replicas == original.replicas);
    CHECK(echoed.seed == original.seed);
    CHECK(echoed.grid.times == original.grid.times);
    CHECK(echoed.functions.size() == original.functions.size());
    CHECK(echoed.model.describe() == original.model.describe());
}

TEST_CASE("bundled example config runs") {
    const char* src_dir = std::getenv("GOE_FLUCT_SRC");
    REQUIRE(src_dir != nullptr);
    const fs::path config = fs::path(src_dir) / "configs" / "bm_x2.json";
    const fs::path out = temp_dir("bundled") / "out";
    const RunResult r =
        run("experiment --config " + config.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("rcorrected") != std::string::npos);
    const std::string report =
        goefluct::read_text_file((out / "report.json").string());
    CHECK(report.find("\"covariance\"") != std::string::npos);
    const std::string manifest =
        goefluct::read_text_file((out / "manifest.json").string());
    CHECK(manifest.find("fnv1a64") != std::string::npos);
    CHECK(manifest.find("config_echo") != std::string::npos);
}
