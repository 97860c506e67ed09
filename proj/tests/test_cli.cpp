#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmk/cli.hpp"

using Catch::Matchers::ContainsSubstring;
using nlohmann::json;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult result;
    result.code = mmk::cli::run(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::string fx(const char* name) {
    return std::string(MMK_FIXTURE_DIR) + "/" + name;
}

std::string strip_timing(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.find("timing_ms") == std::string::npos) {
            out += line;
            out += "\n";
        }
    }
    return out;
}

std::string write_temp(const char* name, const std::string& contents) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    return path;
}

} // namespace

TEST_CASE("global flags and usage errors", "[cli]") {
    const auto version = run_cli({"--version"});
    REQUIRE(version.code == 0);
    REQUIRE_THAT(version.out, ContainsSubstring("0.1.0"));

    const auto help = run_cli({"--help"});
    REQUIRE(help.code == 0);
    REQUIRE_THAT(help.out, ContainsSubstring("simulate"));
    REQUIRE_THAT(help.out, ContainsSubstring("detect"));

    REQUIRE(run_cli({}).code == 2);
    REQUIRE(run_cli({"bogus"}).code == 2);
    REQUIRE(run_cli({"parse"}).code == 2);  // missing file argument
}

TEST_CASE("parse reports a clean bill for the zoo fixture", "[cli]") {
    const auto result = run_cli({"parse", fx("zoo.mmk"), "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["command"] == "parse");
    REQUIRE(report["version"] == "0.1.0");
    REQUIRE(report["seed"].is_null());
    REQUIRE(report["results"]["errors"] == 0);
    REQUIRE(report["results"]["warnings"] == 0);
    REQUIRE(report["results"]["blocks"]["worlds"] == 2);
    REQUIRE(report["results"]["blocks"]["theories"] == 10);
    REQUIRE(report["results"]["blocks"]["maps"] == 0);
    REQUIRE(report["results"]["blocks"]["experiments"] == 1);
    REQUIRE(report["results"]["blocks"]["concept_blocks"] == 0);

    const auto checked = run_cli({"parse", fx("zoo.mmk"), "--check", "--json"});
    REQUIRE(checked.code == 0);
    REQUIRE(json::parse(checked.out)["results"]["errors"] == 0);
}

TEST_CASE("the report keys keep a stable order", "[cli]") {
    const auto result = run_cli({"parse", fx("zoo.mmk"), "--json"});
    const auto pos = [&](const char* key) {
        const auto at = result.out.find(std::string("\"") + key + "\"");
        REQUIRE(at != std::string::npos);
        return at;
    };
    REQUIRE(pos("command") < pos("version"));
    REQUIRE(pos("version") < pos("seed"));
    REQUIRE(pos("seed") < pos("inputs"));
    REQUIRE(pos("inputs") < pos("results"));
    REQUIRE(pos("results") < pos("timing_ms"));
}

TEST_CASE("parse surfaces syntax errors with exit code 2", "[cli]") {
    const auto path = write_temp("mmk_cli_bad.mmk", "world w {\n  atoms: a a;\n}\n");
    const auto result = run_cli({"parse", path, "--json"});
    REQUIRE(result.code == 2);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["errors"] == 1);
    REQUIRE(report["results"]["diagnostics"][0]["code"] == "resolve.duplicate_name");
    REQUIRE(report["results"]["diagnostics"][0]["line"] == 2);

    REQUIRE(run_cli({"parse", "/nonexistent.mmk"}).code == 1);
}

TEST_CASE("classify lists every matching family", "[cli]") {
    const auto result = run_cli({"classify", fx("zoo.mmk"), "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["command"] == "classify");
    const auto& theories = report["results"]["theories"];
    REQUIRE(theories.size() == 10);

    const auto matches_of = [&](const std::string& name) {
        for (const auto& item : theories) {
            if (item["name"] == name) {
                return item["matches"];
            }
        }
        FAIL("theory not found: " + name);
        return json();
    };
    REQUIRE(matches_of("t_solipsism") == json({"solipsism", "idealism"}));
    REQUIRE(matches_of("t_illusionism") == json({"illusionism", "materialism"}));
    REQUIRE(matches_of("t_panpsychism") == json({"materialism", "panpsychism"}));
    REQUIRE(matches_of("t_iit") == json({"materialism"}));
    REQUIRE(matches_of("t_russellian") == json({"russellian", "neutral_monism"}));
}

TEST_CASE("classify rejects broken documents via stderr", "[cli]") {
    const auto path = write_temp("mmk_cli_bad2.mmk", "world w {\n  atoms: a a;\n}\n");
    const auto result = run_cli({"classify", path});
    REQUIRE(result.code == 2);
    REQUIRE_THAT(result.err, ContainsSubstring(path + ":2:12: error [resolve.duplicate_name]"));
}

TEST_CASE("equiv classifies the collapsing maps", "[cli]") {
    const auto result = run_cli({"equiv", fx("mutual.mmk"), "--map", "F", "G", "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["class"] == "mutual_non_equivalence");
    REQUIRE(report["results"]["mental_recovered"] == false);
    REQUIRE(report["results"]["material_recovered"] == false);
    REQUIRE(report["results"]["image_gf"] == json({"i1"}));
    REQUIRE(report["results"]["image_fg"] == json({"m1"}));
}

TEST_CASE("equiv checks theory compatibility", "[cli]") {
    const auto result = run_cli({"equiv", fx("mutual.mmk"), "--map", "F", "G",
                                 "--theory", "materialism_example", "--json"});
    REQUIRE(result.code == 1);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["class"] == "mutual_non_equivalence");
    REQUIRE(report["results"]["family"] == "materialism");
    REQUIRE(report["results"]["consistent"] == false);
}

TEST_CASE("equiv argument validation", "[cli]") {
    REQUIRE(run_cli({"equiv", fx("mutual.mmk")}).code == 2);
    REQUIRE(run_cli({"equiv", fx("mutual.mmk"), "--map", "F"}).code == 2);
    const auto unknown = run_cli({"equiv", fx("zoo.mmk"), "--map", "F", "G"});
    REQUIRE(unknown.code == 1);
    REQUIRE_THAT(unknown.err, ContainsSubstring("unknown map 'F'"));
    const auto bad_theory = run_cli({"equiv", fx("mutual.mmk"), "--map", "F", "G",
                                     "--theory", "nope"});
    REQUIRE(bad_theory.code == 1);
    REQUIRE_THAT(bad_theory.err, ContainsSubstring("unknown theory 'nope'"));
}

TEST_CASE("simulate echoes its seed and parameters", "[cli]") {
    const auto result = run_cli({"simulate", "--n", "100", "--alpha", "10", "--beta", "4",
                                 "--trials", "2000", "--seed", "9", "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["command"] == "simulate");
    REQUIRE(report["seed"] == 9);
    REQUIRE(report["inputs"]["n"] == 100);
    REQUIRE(report["inputs"]["workers"] == 1);
    REQUIRE(report["results"]["mean_result_size"] == 10.0);
    REQUIRE(report["results"]["neuron_freq"].size() == 100);
    REQUIRE(report["results"]["oversize_trials"] == 0);
}

TEST_CASE("simulate requires its parameters", "[cli]") {
    REQUIRE(run_cli({"simulate", "--n", "100", "--alpha", "10", "--beta", "4",
                     "--trials", "2000"}).code == 2);  // no seed
    REQUIRE(run_cli({"simulate", "--n", "100", "--alpha", "10", "--beta", "4",
                     "--trials", "0", "--seed", "1"}).code == 2);
    REQUIRE(run_cli({"simulate", "--n", "100", "--alpha", "10", "--beta", "4",
                     "--trials", "-5", "--seed", "1"}).code == 2);
    REQUIRE(run_cli({"simulate", "--n", "100", "--alpha", "10", "--beta", "4",
                     "--trials", "100", "--seed", "1", "--workers", "0"}).code == 2);
    // domain failure: beta > alpha is a model error, not a usage error
    REQUIRE(run_cli({"simulate", "--n", "100", "--alpha", "4", "--beta", "10",
                     "--trials", "100", "--seed", "1"}).code == 1);
}

TEST_CASE("simulate results do not depend on the worker count", "[cli]") {
    const std::vector<std::string> base = {"simulate", "--n", "100", "--alpha", "10",
                                           "--beta", "4", "--trials", "2000",
                                           "--seed", "9", "--json"};
    const json one = json::parse(run_cli(base).out);
    for (const char* workers : {"2", "5"}) {
        auto args = base;
        args.push_back("--workers");
        args.push_back(workers);
        const json many = json::parse(run_cli(args).out);
        REQUIRE(many["results"] == one["results"]);
        REQUIRE(many["inputs"]["workers"] == std::atoi(workers));
    }
}

TEST_CASE("the worker count can come from the environment", "[cli]") {
    setenv("MMK_WORKERS", "3", 1);
    const auto result = run_cli({"simulate", "--n", "50", "--alpha", "5", "--beta", "2",
                                 "--trials", "100", "--seed", "4", "--json"});
    unsetenv("MMK_WORKERS");
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["inputs"]["workers"] == 3);
}

TEST_CASE("verify passes at scale and reports every metric", "[cli]") {
    const auto result = run_cli({"verify", "--n", "1000", "--alpha", "50", "--beta", "20",
                                 "--trials", "100000", "--seed", "42", "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["ok"] == true);
    const auto& rows = report["results"]["rows"];
    REQUIRE(rows.size() == 4);
    REQUIRE(rows[0]["metric"] == "mean_union");
    REQUIRE(rows[1]["metric"] == "mean_shared");
    REQUIRE(rows[2]["metric"] == "freq_in_union");
    REQUIRE(rows[3]["metric"] == "freq_outside");
    for (const auto& row : rows) {
        REQUIRE(row["ok"] == true);
        REQUIRE(row["deviation"].get<double>() <= row["tolerance"].get<double>());
    }
}

TEST_CASE("verify fails loudly when the sample is too small", "[cli]") {
    const auto result = run_cli({"verify", "--n", "1000", "--alpha", "50", "--beta", "20",
                                 "--trials", "2", "--seed", "1", "--json"});
    REQUIRE(result.code == 1);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["ok"] == false);
}

TEST_CASE("verify output is byte-stable for a fixed seed", "[cli]") {
    const std::vector<std::string> args = {"verify", "--n", "200", "--alpha", "12",
                                           "--beta", "5", "--trials", "4000",
                                           "--seed", "11", "--workers", "2", "--json"};
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    REQUIRE(first.code == 0);
    REQUIRE(strip_timing(first.out) == strip_timing(second.out));
    REQUIRE(first.out.find("timing_ms") != std::string::npos);
}

TEST_CASE("detect reproduces the worked example", "[cli]") {
    const auto result = run_cli({"detect", "--data", fx("activations.csv"),
                                 "--triples", fx("triples.csv"), "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["neuron_count"] == 11);

    const auto& triples = report["results"]["triples"];
    REQUIRE(triples.size() == 3);
    REQUIRE(triples[0]["result"] == "red_square");
    REQUIRE(triples[0]["with_a"]["component"] == "red");
    REQUIRE(triples[0]["with_a"]["observed"] == 2);
    REQUIRE(triples[0]["with_a"]["null_mean"].get<double>() ==
            Catch::Approx(12.0 / 11.0).epsilon(1e-14));
    REQUIRE(triples[0]["with_a"]["p_value"].get<double>() ==
            Catch::Approx(92.0 / 330.0).epsilon(1e-12));

    const auto& aggregate = report["results"]["aggregate"];
    REQUIRE(aggregate["method"] == "fisher_gamma");
    REQUIRE(aggregate["statistic"].get<double>() ==
            Catch::Approx(15.327648928937826).epsilon(1e-12));
    REQUIRE(aggregate["p_value"].get<double>() ==
            Catch::Approx(0.019545474708723795).epsilon(1e-12));
    REQUIRE(aggregate["reject"] == true);

    const auto& estimate = report["results"]["estimate"];
    REQUIRE(estimate["alpha_hat"].get<double>() ==
            Catch::Approx(30.0 / 9.0).epsilon(1e-14));
    REQUIRE(estimate["beta_hat"].get<double>() == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("detect respects the significance level", "[cli]") {
    const auto result = run_cli({"detect", "--data", fx("activations.csv"),
                                 "--triples", fx("triples.csv"),
                                 "--significance", "0.01", "--json"});
    REQUIRE(result.code == 0);
    const json report = json::parse(result.out);
    REQUIRE(report["results"]["aggregate"]["reject"] == false);
    REQUIRE(report["results"]["aggregate"]["significance"] == 0.01);
}

TEST_CASE("detect propagates loader failures", "[cli]") {
    const auto missing = run_cli({"detect", "--data", "/nonexistent.csv",
                                  "--triples", fx("triples.csv")});
    REQUIRE(missing.code == 1);
    REQUIRE_THAT(missing.err, ContainsSubstring("cannot open"));

    const auto bad = write_temp("mmk_cli_bad.csv", "concept,neurons\nx,1;1\n");
    const auto dup = run_cli({"detect", "--data", bad, "--triples", fx("triples.csv")});
    REQUIRE(dup.code == 1);
    REQUIRE_THAT(dup.err, ContainsSubstring("duplicate neuron index"));
}

TEST_CASE("csv output matches each command's schema", "[cli]") {
    const auto sim = run_cli({"simulate", "--n", "20", "--alpha", "4", "--beta", "1",
                              "--trials", "50", "--seed", "2", "--format", "csv"});
    REQUIRE(sim.code == 0);
    REQUIRE_THAT(sim.out, ContainsSubstring("neuron,freq\n0,"));

    const auto ver = run_cli({"verify", "--n", "1000", "--alpha", "50", "--beta", "20",
                              "--trials", "100000", "--seed", "42", "--format", "csv"});
    REQUIRE(ver.code == 0);
    REQUIRE_THAT(ver.out,
                 ContainsSubstring("metric,analytic,empirical,deviation,tolerance,ok\n"));
    REQUIRE_THAT(ver.out, ContainsSubstring("mean_union,97.5,"));

    const auto det = run_cli({"detect", "--data", fx("activations.csv"),
                              "--triples", fx("triples.csv"), "--format", "csv"});
    REQUIRE(det.code == 0);
    REQUIRE_THAT(det.out, ContainsSubstring("result,component,observed,null_mean,p_value\n"));
    REQUIRE_THAT(det.out, ContainsSubstring("red_square,red,2,"));
    REQUIRE_THAT(det.out, ContainsSubstring("blue_ellipse,ellipse,"));

    // csv is undefined for the structural commands
    REQUIRE(run_cli({"parse", fx("zoo.mmk"), "--format", "csv"}).code == 2);
    REQUIRE(run_cli({"classify", fx("zoo.mmk"), "--format", "csv"}).code == 2);
}

TEST_CASE("the table format flattens the report", "[cli]") {
    const auto result = run_cli({"simulate", "--n", "100", "--alpha", "10", "--beta", "4",
                                 "--trials", "100", "--seed", "9"});
    REQUIRE(result.code == 0);
    REQUIRE_THAT(result.out, ContainsSubstring("command = simulate\n"));
    REQUIRE_THAT(result.out, ContainsSubstring("seed = 9\n"));
    REQUIRE_THAT(result.out, ContainsSubstring("inputs.n = 100\n"));
    REQUIRE_THAT(result.out, ContainsSubstring("results.mean_result_size = 10.0\n"));
    REQUIRE_THAT(result.out, ContainsSubstring("results.neuron_freq[0] = "));

    const auto parse_table = run_cli({"parse", fx("zoo.mmk")});
    REQUIRE(parse_table.code == 0);
    REQUIRE_THAT(parse_table.out, ContainsSubstring("seed = null\n"));
    REQUIRE_THAT(parse_table.out, ContainsSubstring("results.blocks.worlds = 2\n"));
}
