#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gcshi/cli.hpp"
#include "gcshi/io.hpp"
#include "support/paths.hpp"
#include "support/temp.hpp"

using testsupport::TempDir;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = gcshi::run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

// Runs the installed binary in `dir`, capturing stdout; returns the exit
// code.
int run_binary(const std::string& dir, const std::string& args, const std::string& out_file) {
    std::string cmd = "cd '" + dir + "' && '" + GCSHI_CLI_BINARY + "' " + args + " > '" +
                      out_file + "' 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("help exits cleanly and a missing subcommand is an error") {
    CliResult help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("cluster") != std::string::npos);
    CHECK(help.out.find("reproduce") != std::string::npos);

    CliResult none = cli({});
    CHECK(none.code == 1);
    CHECK(none.err.rfind("error: ", 0) == 0);

    CliResult unknown = cli({"cluster", "--bogus"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.rfind("error: ", 0) == 0);
}

TEST_CASE("cluster categorizes the bundled ratings by default") {
    CliResult r = cli({"cluster"});
    CHECK(r.code == 0);
    CHECK(r.out == "5 clusters, 0 noise\n");
    CHECK(r.err.empty());
}

TEST_CASE("cluster validates parameters before touching files") {
    CliResult eps = cli({"cluster", "--eps", "-1"});
    CHECK(eps.code == 1);
    CHECK(eps.err == "error: epsilon must be >= 0\n");

    CliResult pts = cli({"cluster", "--min-pts", "0"});
    CHECK(pts.code == 1);
    CHECK(pts.err == "error: min-pts must be >= 1\n");

    CliResult fmt = cli({"cluster", "--format", "plot-data"});
    CHECK(fmt.code == 1);
    CHECK(fmt.err == "error: cluster reports support json or markdown\n");

    CliResult missing = cli({"cluster", "--ratings", "/nonexistent/r.csv"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open file") != std::string::npos);
}

TEST_CASE("cluster writes a report when asked") {
    TempDir tmp;
    std::string out_path = tmp.file("report.json");
    CliResult r = cli({"cluster", "--out", out_path, "--format", "json"});
    CHECK(r.code == 0);
    gcshi::ordered_json report =
        gcshi::detail::parse_json(gcshi::detail::read_file(out_path), out_path);
    CHECK(report.contains("clustering"));
    CHECK(report["clustering"]["categories"].size() == 5);

    std::string md_path = tmp.file("report.md");
    CliResult md = cli({"cluster", "--out", md_path, "--format", "markdown"});
    CHECK(md.code == 0);
    CHECK(gcshi::detail::read_file(md_path).rfind("# Decision analysis report", 0) == 0);
}

TEST_CASE("a looser epsilon merges the bundled categories") {
    CliResult r = cli({"cluster", "--eps", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "3 clusters, 0 noise\n");
}

TEST_CASE("weights derives from the bundled candidate matrix by default") {
    CliResult r = cli({"weights"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "E1: 0.1047\n"
          "E2: 0.6370\n"
          "E3: 0.2583\n"
          "consistency ratio: 0.0332 (acceptable)\n");
}

TEST_CASE("weights echoes an explicit vector without a consistency check") {
    CliResult r = cli({"weights", "--weights", "0.25,0.25,0.5"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "w1: 0.2500\n"
          "w2: 0.2500\n"
          "w3: 0.5000\n"
          "consistency ratio: n/a (weights supplied directly)\n");

    // Unnormalized input is rescaled.
    CliResult scaled = cli({"weights", "--weights", "1,1,2"});
    CHECK(scaled.out == r.out);

    CliResult bad = cli({"weights", "--weights", "0.5,oops"});
    CHECK(bad.code == 1);
    CHECK(bad.err == "error: invalid number 'oops' in --weights\n");

    CliResult both =
        cli({"weights", "--weights", "0.5,0.5", "--pairwise", "x.csv"});
    CHECK(both.code == 1);
    CHECK(both.err == "error: use either --pairwise or --weights, not both\n");
}

TEST_CASE("weights rejects files that hold no comparison matrix") {
    CliResult r = cli({"weights", "--pairwise", testsupport::data_file("weights.csv")});
    CHECK(r.code == 1);
    CHECK(r.err.find("does not contain a square comparison matrix") != std::string::npos);
}

TEST_CASE("weights --strict fails on an unacceptable ratio with exit 3") {
    TempDir tmp;
    std::string path = tmp.write("incoherent.csv",
                                 "1,9,0.1111111111111111\n"
                                 "0.1111111111111111,1,9\n"
                                 "9,0.1111111111111111,1\n");
    CliResult lax = cli({"weights", "--pairwise", path});
    CHECK(lax.code == 0);
    CHECK(lax.out.find("(not acceptable)") != std::string::npos);

    CliResult strict = cli({"weights", "--pairwise", path, "--strict"});
    CHECK(strict.code == 3);
    CHECK(strict.err.find("exceeds the 0.10 acceptance threshold") != std::string::npos);
}

TEST_CASE("rank reproduces the published priority order by default") {
    CliResult r = cli({"rank"});
    CHECK(r.code == 0);
    CHECK(r.out == "C3 > C2 > C4 > C5 > C1\n");
}

TEST_CASE("rank accepts explicit weights and criterion kinds") {
    CliResult top = cli({"rank", "--weights", "1,0,0"});
    CHECK(top.code == 0);
    CHECK(top.out == "C5 > C4 > C3 > C1 > C2\n");

    CliResult wrong_count = cli({"rank", "--kinds", "benefit,benefit"});
    CHECK(wrong_count.code == 1);
    CHECK(wrong_count.err.find("criterion kind list does not match") != std::string::npos);

    CliResult bad_kind = cli({"rank", "--kinds", "benefit,maybe,cost"});
    CHECK(bad_kind.code == 1);
    CHECK(bad_kind.err.find("unknown criterion kind") != std::string::npos);

    CliResult both = cli({"rank", "--weights", "1,0,0", "--pairwise", "x.csv"});
    CHECK(both.code == 1);
    CHECK(both.err == "error: use either --weights or --pairwise, not both\n");
}

TEST_CASE("rank derives weights from a comparison matrix file") {
    CliResult r = cli({"rank", "--pairwise", testsupport::data_file("pairwise.csv")});
    CHECK(r.code == 0);
    CHECK(r.out == "C3 > C2 > C4 > C5 > C1\n");

    CliResult not_matrix =
        cli({"rank", "--pairwise", testsupport::data_file("weights.csv")});
    CHECK(not_matrix.code == 1);
    CHECK(not_matrix.err.find("does not contain a square comparison matrix") !=
          std::string::npos);
}

TEST_CASE("rank writes plot data on request") {
    TempDir tmp;
    std::string path = tmp.file("plot.csv");
    CliResult r = cli({"rank", "--out", path, "--format", "plot-data"});
    CHECK(r.code == 0);
    std::string pd = gcshi::detail::read_file(path);
    CHECK(pd.rfind("series,x,y\n", 0) == 0);
    CHECK(std::count(pd.begin(), pd.end(), '\n') == 6);  // header + 5 alternatives
}

TEST_CASE("pipeline runs the shipped reference configuration") {
    CliResult r = cli({"pipeline", "--config", testsupport::data_file("reference-config.json")});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "categorization: 5 categories, 0 noise\n"
          "weighting: source published\n"
          "prioritization: C3 > C2 > C4 > C5 > C1\n"
          "errata: 8 cell(s) flagged\n");
}

TEST_CASE("pipeline resolves paths relative to the config file") {
    TempDir tmp;
    tmp.write("decision.csv", "alternative,E1,E2\nA,1,4\nB,2,3\n");
    std::string config_path = tmp.write("config.json", R"({
  "decision": "decision.csv",
  "weights": [0.5, 0.5],
  "samples": 10,
  "radius": 0.1,
  "seed": 9,
  "out": "report.json"
})");
    CliResult r = cli({"pipeline", "--config", config_path});
    INFO(r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("weighting: source explicit\n") != std::string::npos);
    CHECK(r.out.find("sensitivity: 10 samples, radius 0.1, seed 9\n") != std::string::npos);
    CHECK(r.out.find("report written: ") != std::string::npos);
    gcshi::ordered_json report = gcshi::detail::parse_json(
        gcshi::detail::read_file(tmp.file("report.json")), "report.json");
    CHECK(report.contains("prioritization"));
    CHECK(report.contains("sensitivity"));
    CHECK_FALSE(report.contains("clustering"));
}

TEST_CASE("pipeline config errors are specific") {
    TempDir tmp;

    CliResult missing = cli({"pipeline", "--config", tmp.file("nope.json")});
    CHECK(missing.code == 2);

    std::string unknown_path = tmp.write("u.json", R"({"ratings": "bundled", "foo": 1})");
    CliResult unknown = cli({"pipeline", "--config", unknown_path});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("unknown config key 'foo'") != std::string::npos);

    std::string not_object = tmp.write("n.json", "[1, 2]");
    CliResult array = cli({"pipeline", "--config", not_object});
    CHECK(array.code == 1);
    CHECK(array.err.find("config must be a JSON object") != std::string::npos);

    std::string bad_ref = tmp.write("m.json", R"({"ratings": "missing.csv"})");
    CliResult unreadable = cli({"pipeline", "--config", bad_ref});
    CHECK(unreadable.code == 2);
    CHECK(unreadable.err.find("categorization: ") != std::string::npos);

    std::string bad_type = tmp.write("t.json", R"({"epsilon": "wide"})");
    CliResult typed = cli({"pipeline", "--config", bad_type});
    CHECK(typed.code == 1);
    CHECK(typed.err.find("key 'epsilon' must be a number") != std::string::npos);
}

TEST_CASE("sensitivity prints per-alternative stability") {
    CliResult r = cli({"sensitivity", "--samples", "10", "--radius", "0"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "sensitivity: 10 samples, radius 0, seed 42\n"
          "C1: base rank 5, top-rank frequency 0.0000\n"
          "C2: base rank 2, top-rank frequency 0.0000\n"
          "C3: base rank 1, top-rank frequency 1.0000\n"
          "C4: base rank 3, top-rank frequency 0.0000\n"
          "C5: base rank 4, top-rank frequency 0.0000\n");
}

TEST_CASE("sensitivity validates flags before reading anything") {
    CliResult radius = cli({"sensitivity", "--radius", "1.5"});
    CHECK(radius.code == 1);
    CHECK(radius.err == "error: radius must be in [0, 1]\n");

    CliResult samples = cli({"sensitivity", "--samples", "0"});
    CHECK(samples.code == 1);
    CHECK(samples.err == "error: samples must be >= 1\n");
}

TEST_CASE("sensitivity output is seed-deterministic") {
    std::vector<std::string> args = {"sensitivity", "--samples", "40", "--radius", "0.9",
                                     "--seed", "5"};
    CliResult first = cli(args);
    CliResult second = cli(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);

    CliResult other = cli({"sensitivity", "--samples", "40", "--radius", "0.9", "--seed",
                           "6"});
    CHECK(other.code == 0);
    CHECK(other.out != first.out);
}

TEST_CASE("reproduce succeeds end to end and is byte-stable") {
    TempDir a;
    TempDir b;
    int code_a = run_binary(a.path(), "reproduce", a.file("stdout.txt"));
    int code_b = run_binary(b.path(), "reproduce", b.file("stdout.txt"));
    CHECK(code_a == 0);
    CHECK(code_b == 0);

    std::string out_a = gcshi::detail::read_file(a.file("stdout.txt"));
    CHECK(out_a.find("FAIL") == std::string::npos);
    CHECK(out_a.find("ok - categorization reproduces published memberships") !=
          std::string::npos);
    CHECK(out_a.find("ok - documented errata reproduced exactly") != std::string::npos);
    CHECK(out_a.find("categorization: exact match; closeness (C2-C5): max |delta| ") !=
          std::string::npos);
    CHECK(out_a.find("report written: reproduce-report.json") != std::string::npos);

    std::string report_a = gcshi::detail::read_file(a.file("reproduce-report.json"));
    std::string report_b = gcshi::detail::read_file(b.file("reproduce-report.json"));
    CHECK(report_a == report_b);
    CHECK(out_a == gcshi::detail::read_file(b.file("stdout.txt")));
}
