#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("SPGCL_CLI"); }

int run(const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("spgcl_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace

#define REQUIRE_CLI()                                  \
    const char* cli = cli_path();                      \
    if (!cli) {                                        \
        MESSAGE("SPGCL_CLI not set; skipping");        \
        return;                                        \
    }                                                  \
    const std::string tool = quoted(cli)

TEST_CASE("help exits zero, parse errors exit one") {
    REQUIRE_CLI();
    CHECK(run(tool + " --help") == 0);
    CHECK(run(tool + " synth --help") == 0);
    CHECK(run(tool + " --no-such-flag") == 1);
    CHECK(run(tool + " synth --bogus 3") == 1);
    CHECK(run(tool) == 1);
}

TEST_CASE("synth writes the dataset triple plus metadata") {
    REQUIRE_CLI();
    TempDir dir;
    CHECK(run(tool + " synth --model csbm --n 30 --p 0.4 --s 0.1 --mu-sep 1 --feat-dim 3 --seed 5 --out-dir " +
              (dir / "")) == 0);
    for (const char* name : {"graph.tsv", "features.csv", "labels.txt", "meta.json", "report.json"})
        CHECK(fs::exists(dir.path / name));
    const json report = load_json(dir.path / "report.json");
    CHECK(report["command"] == "synth");
    CHECK(report["config"]["seed"] == 5);
    CHECK(report["results"]["nodes"] == 30);
    CHECK(report.contains("timing"));
}

TEST_CASE("missing inputs exit two, config errors exit one") {
    REQUIRE_CLI();
    TempDir dir;
    CHECK(run(tool + " train --graph " + (dir / "absent.tsv") + " --features " +
              (dir / "absent.csv") + " --out-dir " + (dir / "out")) == 2);
    CHECK(run(tool + " eval --checkpoint " + (dir / "absent.bin") + " --graph g --features f --labels l --out-dir " +
              (dir / "out")) == 2);

    std::ofstream(dir / "config.json") << "{\"bogus\": 1}\n";
    CHECK(run(tool + " synth --n 10 --p 0.5 --s 0.1 --feat-dim 2 --out-dir " + (dir / "data")) == 0);
    CHECK(run(tool + " train --graph " + (dir / "data/graph.tsv") + " --features " +
              (dir / "data/features.csv") + " --config " + (dir / "config.json") + " --out-dir " +
              (dir / "out")) == 1);
    std::ofstream(dir / "broken.json") << "{not json\n";
    CHECK(run(tool + " train --graph " + (dir / "data/graph.tsv") + " --features " +
              (dir / "data/features.csv") + " --config " + (dir / "broken.json") + " --out-dir " +
              (dir / "out")) == 1);
}

TEST_CASE("reruns are reproducible in config and results") {
    REQUIRE_CLI();
    TempDir dir;
    const std::string base = " synth --n 25 --p 0.3 --s 0.05 --mu-sep 2 --feat-dim 3 --seed 9 --out-dir ";
    CHECK(run(tool + base + (dir / "a")) == 0);
    CHECK(run(tool + base + (dir / "b")) == 0);
    const json a = load_json(dir.path / "a" / "report.json");
    const json b = load_json(dir.path / "b" / "report.json");
    CHECK(a["config"] == b["config"]);
    CHECK(a["results"] == b["results"]);

    std::ifstream ga(dir.path / "a" / "graph.tsv"), gb(dir.path / "b" / "graph.tsv");
    const std::string text_a((std::istreambuf_iterator<char>(ga)), {});
    const std::string text_b((std::istreambuf_iterator<char>(gb)), {});
    CHECK(text_a == text_b);
}

TEST_CASE("environment seed overrides the flag") {
    REQUIRE_CLI();
    TempDir dir;
    CHECK(run("SPGCL_SEED=42 " + tool + " synth --n 12 --p 0.5 --s 0.1 --feat-dim 2 --seed 3 --out-dir " +
              (dir / "env")) == 0);
    CHECK(load_json(dir.path / "env" / "report.json")["config"]["seed"] == 42);
    CHECK(run("SPGCL_SEED=notanumber " + tool + " synth --n 12 --p 0.5 --s 0.1 --feat-dim 2 --out-dir " +
              (dir / "bad")) == 1);
}

TEST_CASE("train, eval, verify, spectral, and ablate round trip") {
    REQUIRE_CLI();
    TempDir dir;
    REQUIRE(run(tool + " synth --n 40 --p 0.4 --s 0.05 --mu-sep 1.5 --feat-dim 4 --seed 2 --out-dir " +
                (dir / "data")) == 0);
    const std::string inputs = " --graph " + (dir / "data/graph.tsv") + " --features " +
                               (dir / "data/features.csv") + " --labels " + (dir / "data/labels.txt");

    REQUIRE(run(tool + " train" + inputs +
                " --epochs 2 --batch 16 --embed-dim 8 --k-pos 2 --k-neg 10 --seed 11 --out-dir " +
                (dir / "run")) == 0);
    CHECK(fs::exists(dir.path / "run" / "checkpoint.bin"));
    CHECK(fs::exists(dir.path / "run" / "metrics.jsonl"));
    {
        std::ifstream metrics(dir.path / "run" / "metrics.jsonl");
        std::string line;
        int rows = 0;
        while (std::getline(metrics, line))
            if (!line.empty()) {
                const json row = json::parse(line);
                CHECK(row["epoch"] == rows);
                rows += 1;
            }
        CHECK(rows == 2);
    }

    REQUIRE(run(tool + " eval --checkpoint " + (dir / "run/checkpoint.bin") + inputs +
                " --repeats 2 --seed 11 --out-dir " + (dir / "ev") + " --out result.json") == 0);
    const json eval_report = load_json(dir.path / "ev" / "result.json");
    const double accuracy = eval_report["results"]["accuracy_mean"].get<double>();
    CHECK(accuracy >= 0.0);
    CHECK(accuracy <= 1.0);

    REQUIRE(run(tool + " verify --suite lemma1 --seed 7 --out-dir " + (dir / "vf")) == 0);
    const json verify_report = load_json(dir.path / "vf" / "report.json");
    CHECK(verify_report["results"]["lemma1"]["pass"] == true);

    REQUIRE(run(tool + " spectral --graph " + (dir / "data/graph.tsv") +
                " --aug-kind drop-edges --ratio 0.2 --bands 4 --seeds 3 --seed 1 --out-dir " +
                (dir / "sp")) == 0);
    const json spectral_report = load_json(dir.path / "sp" / "report.json");
    CHECK(spectral_report["results"]["bands"].size() == 4);

    REQUIRE(run(tool + " ablate" + inputs +
                " --sweep k-pos --values 2 --repeats 1 --epochs 2 --batch 16 --embed-dim 8 "
                "--k-neg 10 --seed 11 --out-dir " + (dir / "ab")) == 0);
    const json ablate_report = load_json(dir.path / "ab" / "report.json");
    REQUIRE(ablate_report["results"]["sweep"].size() == 1);
    const double swept = ablate_report["results"]["sweep"][0]["accuracy_mean"].get<double>();

    REQUIRE(run(tool + " train" + inputs +
                " --epochs 2 --batch 16 --embed-dim 8 --k-pos 2 --k-neg 10 --seed 11 --out-dir " +
                (dir / "run2")) == 0);
    REQUIRE(run(tool + " eval --checkpoint " + (dir / "run2/checkpoint.bin") + inputs +
                " --repeats 1 --seed 11 --out-dir " + (dir / "ev2") + " --out result.json") == 0);
    const json plain = load_json(dir.path / "ev2" / "result.json");
    CHECK(swept == doctest::Approx(plain["results"]["accuracy_mean"].get<double>()).epsilon(1e-12));
}
