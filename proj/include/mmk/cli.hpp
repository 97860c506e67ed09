// Command-line front end. Every subcommand produces a RunReport rendered as
// a human table, stable JSON, or plot-ready CSV; identical arguments yield
// byte-identical JSON apart from the timing_ms field.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmk/cogmech.hpp"
#include "mmk/equivalence.hpp"
#include "mmk/speclang.hpp"
#include "mmk/stats.hpp"
#include "mmk/theoryzoo.hpp"

namespace mmk::cli {

inline constexpr const char* kVersion = "0.1.0";

// Acceptance bands for `verify`, fixed so a failing run explains itself.
inline constexpr double kTolMeanUnion = 0.5;
inline constexpr double kTolMeanShared = 0.1;
inline constexpr double kTolFreqInUnion = 0.01;
inline constexpr double kTolFreqOutside = 0.003;

enum class Format { Table, Json, Csv };

struct RunReport {
    std::string command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed;
    std::string version = kVersion;
    double timing_ms = 0;
};

// Flag combinations that only surface while running a subcommand body, e.g.
// a format that is undefined for the command. Mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::ordered_json report_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["command"] = report.command;
    j["version"] = report.version;
    if (report.seed) {
        j["seed"] = *report.seed;
    } else {
        j["seed"] = nullptr;
    }
    j["inputs"] = report.inputs;
    j["results"] = report.results;
    j["timing_ms"] = report.timing_ms;
    return j;
}

inline void flatten(const nlohmann::ordered_json& j, const std::string& prefix,
                    std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& value : j) {
            flatten(value, prefix + "[" + std::to_string(i++) + "]", out);
        }
        return;
    }
    out += prefix + " = ";
    out += j.is_string() ? j.get<std::string>() : j.dump();
    out += "\n";
}

inline std::string csv_cell(const nlohmann::ordered_json& value) {
    return value.is_string() ? value.get<std::string>() : value.dump();
}

inline std::string emit_csv(const RunReport& report) {
    std::string out;
    if (report.command == "simulate") {
        out += "neuron,freq\n";
        const auto& freq = report.results.at("neuron_freq");
        for (std::size_t i = 0; i < freq.size(); ++i) {
            out += std::to_string(i) + "," + csv_cell(freq[i]) + "\n";
        }
        return out;
    }
    if (report.command == "verify") {
        out += "metric,analytic,empirical,deviation,tolerance,ok\n";
        for (const auto& row : report.results.at("rows")) {
            out += csv_cell(row.at("metric")) + "," + csv_cell(row.at("analytic")) + "," +
                   csv_cell(row.at("empirical")) + "," + csv_cell(row.at("deviation")) + "," +
                   csv_cell(row.at("tolerance")) + "," + csv_cell(row.at("ok")) + "\n";
        }
        return out;
    }
    if (report.command == "detect") {
        out += "result,component,observed,null_mean,p_value\n";
        for (const auto& triple : report.results.at("triples")) {
            for (const char* side : {"with_a", "with_b"}) {
                const auto& component = triple.at(side);
                out += csv_cell(triple.at("result")) + "," + csv_cell(component.at("component")) +
                       "," + csv_cell(component.at("observed")) + "," +
                       csv_cell(component.at("null_mean")) + "," +
                       csv_cell(component.at("p_value")) + "\n";
            }
        }
        return out;
    }
    throw UsageError("csv output is only defined for simulate, verify, and detect");
}

} // namespace detail

inline std::string emit(const RunReport& report, Format format) {
    switch (format) {
    case Format::Json:
        return detail::report_json(report).dump(2) + "\n";
    case Format::Csv:
        return detail::emit_csv(report);
    case Format::Table: {
        std::string out;
        detail::flatten(detail::report_json(report), "", out);
        return out;
    }
    }
    return "";
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline const char* severity_name(speclang::Diagnostic::Severity severity) {
    return severity == speclang::Diagnostic::Severity::Error ? "error" : "warning";
}

inline std::vector<speclang::Diagnostic> sorted_diagnostics(
    std::vector<speclang::Diagnostic> diags) {
    std::sort(diags.begin(), diags.end(),
              [](const speclang::Diagnostic& a, const speclang::Diagnostic& b) {
                  return std::make_tuple(a.span.line, a.span.column, a.code, a.message) <
                         std::make_tuple(b.span.line, b.span.column, b.code, b.message);
              });
    return diags;
}

inline nlohmann::ordered_json diagnostics_json(const std::vector<speclang::Diagnostic>& diags) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& d : diags) {
        nlohmann::ordered_json item;
        item["severity"] = severity_name(d.severity);
        item["line"] = d.span.line;
        item["column"] = d.span.column;
        item["end_line"] = d.span.end_line;
        item["end_column"] = d.span.end_column;
        item["code"] = d.code;
        item["message"] = d.message;
        out.push_back(std::move(item));
    }
    return out;
}

inline void print_diagnostics(const std::string& path,
                              const std::vector<speclang::Diagnostic>& diags,
                              std::ostream& err) {
    for (const auto& d : sorted_diagnostics(diags)) {
        err << path << ":" << d.span.line << ":" << d.span.column << ": "
            << severity_name(d.severity) << " [" << d.code << "] " << d.message << "\n";
    }
}

// Parses the file and insists on an error-free document; exit code 2
// territory when it is not.
inline speclang::Document load_document(const std::string& path, std::ostream& err,
                                        bool* failed) {
    const speclang::ParseResult result = speclang::parse(read_file(path));
    if (!result.ok()) {
        print_diagnostics(path, result.diagnostics, err);
        *failed = true;
    }
    return result.document;
}

inline nlohmann::ordered_json string_array(const std::vector<std::string>& items) {
    return nlohmann::ordered_json(items);
}

} // namespace detail

// Runs one invocation. `args` is argv without the program name. Exit codes:
// 0 success, 1 domain error (bad inputs, failed verification, inconsistent
// theory), 2 usage or parse error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using nlohmann::ordered_json;
    const auto start_time = std::chrono::steady_clock::now();

    CLI::App app{"mind-matter toolkit: finite worlds, theory instances, and the concept composition model"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    const auto add_format = [](CLI::App* sub, std::string* format_name, bool* json_flag) {
        sub->add_option("--format", *format_name, "output format: table, json, or csv")
            ->check(CLI::IsMember({"table", "json", "csv"}));
        sub->add_flag("--json", *json_flag, "shorthand for --format json");
    };

    // parse
    std::string parse_file;
    bool parse_check = false;
    std::string parse_format = "table";
    bool parse_json = false;
    CLI::App* parse_cmd = app.add_subcommand("parse", "parse a .mmk file and report diagnostics");
    parse_cmd->add_option("file", parse_file, ".mmk input")->required();
    parse_cmd->add_flag("--check", parse_check, "run semantic checks as well");
    add_format(parse_cmd, &parse_format, &parse_json);

    // classify
    std::string classify_file;
    std::string classify_format = "table";
    bool classify_json = false;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "instantiate each declared theory and list every family its structure matches");
    classify_cmd->add_option("file", classify_file, ".mmk input")->required();
    add_format(classify_cmd, &classify_format, &classify_json);

    // equiv
    std::string equiv_file;
    std::vector<std::string> equiv_maps;
    std::string equiv_theory;
    std::string equiv_format = "table";
    bool equiv_json = false;
    CLI::App* equiv_cmd = app.add_subcommand(
        "equiv", "classify the round-trip equivalence of two declared maps");
    equiv_cmd->add_option("file", equiv_file, ".mmk input")->required();
    equiv_cmd->add_option("--map", equiv_maps, "map names: mental-to-material first, then its converse")
        ->expected(2)
        ->required();
    equiv_cmd->add_option("--theory", equiv_theory,
                          "check the class against this theory's compatibility row");
    add_format(equiv_cmd, &equiv_format, &equiv_json);

    // simulate
    int sim_n = 0;
    int sim_alpha = 0;
    int sim_beta = 0;
    long long sim_trials = 0;
    std::uint64_t sim_seed = 0;
    int sim_workers = 1;
    std::string sim_format = "table";
    bool sim_json = false;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "sample the composition model");
    sim_cmd->add_option("--n", sim_n, "neuron pool size")->required();
    sim_cmd->add_option("--alpha", sim_alpha, "base concept size")->required();
    sim_cmd->add_option("--beta", sim_beta, "correlates inherited from each component")->required();
    sim_cmd->add_option("--trials", sim_trials, "number of trials")->required()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_seed, "RNG seed (required: no silent entropy)")->required();
    sim_cmd->add_option("--workers", sim_workers, "worker threads; results do not depend on this")
        ->envname("MMK_WORKERS")
        ->check(CLI::PositiveNumber);
    add_format(sim_cmd, &sim_format, &sim_json);

    // verify
    int ver_n = 0;
    int ver_alpha = 0;
    int ver_beta = 0;
    long long ver_trials = 0;
    std::uint64_t ver_seed = 0;
    int ver_workers = 1;
    std::string ver_format = "table";
    bool ver_json = false;
    CLI::App* ver_cmd = app.add_subcommand(
        "verify",
        std::string("compare analytic and simulated statistics; tolerances: mean_union ") +
            "0.5, mean_shared 0.1, freq_in_union 0.01, freq_outside 0.003");
    ver_cmd->add_option("--n", ver_n, "neuron pool size")->required();
    ver_cmd->add_option("--alpha", ver_alpha, "base concept size")->required();
    ver_cmd->add_option("--beta", ver_beta, "correlates inherited from each component")->required();
    ver_cmd->add_option("--trials", ver_trials, "number of trials")->required()
        ->check(CLI::PositiveNumber);
    ver_cmd->add_option("--seed", ver_seed, "RNG seed (required: no silent entropy)")->required();
    ver_cmd->add_option("--workers", ver_workers, "worker threads; results do not depend on this")
        ->envname("MMK_WORKERS")
        ->check(CLI::PositiveNumber);
    add_format(ver_cmd, &ver_format, &ver_json);

    // detect
    std::string det_data;
    std::string det_triples;
    int det_n = 0;
    double det_significance = 0.05;
    std::string det_format = "table";
    bool det_json = false;
    CLI::App* det_cmd = app.add_subcommand(
        "detect", "test declared compositions for excess overlap with their components");
    det_cmd->add_option("--data", det_data, "activation CSV (header: concept,neurons)")
        ->required();
    det_cmd->add_option("--triples", det_triples,
                        "composition CSV (header: component_a,component_b,composed)")
        ->required();
    det_cmd->add_option("--n", det_n, "neuron pool size (default: inferred from the data)");
    det_cmd->add_option("--significance", det_significance, "rejection level, default 0.05");
    add_format(det_cmd, &det_format, &det_json);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    const auto pick_format = [](const std::string& name, bool json_flag) {
        if (json_flag) {
            return Format::Json;
        }
        if (name == "json") {
            return Format::Json;
        }
        if (name == "csv") {
            return Format::Csv;
        }
        return Format::Table;
    };

    RunReport report;
    Format format = Format::Table;
    int exit_code = 0;

    try {
        if (app.got_subcommand(parse_cmd)) {
            format = pick_format(parse_format, parse_json);
            report.command = "parse";
            report.inputs["file"] = parse_file;
            report.inputs["check"] = parse_check;
            const speclang::ParseResult result = speclang::parse(detail::read_file(parse_file));
            std::vector<speclang::Diagnostic> diags = result.diagnostics;
            if (parse_check && result.ok()) {
                const auto extra = speclang::check(result.document);
                diags.insert(diags.end(), extra.begin(), extra.end());
            }
            diags = detail::sorted_diagnostics(std::move(diags));
            int errors = 0;
            int warnings = 0;
            for (const auto& d : diags) {
                (d.severity == speclang::Diagnostic::Severity::Error ? errors : warnings) += 1;
            }
            report.results["diagnostics"] = detail::diagnostics_json(diags);
            report.results["errors"] = errors;
            report.results["warnings"] = warnings;
            nlohmann::ordered_json counts;
            counts["worlds"] = speclang::blocks_of<speclang::WorldDecl>(result.document).size();
            counts["theories"] = speclang::blocks_of<speclang::TheoryDecl>(result.document).size();
            counts["maps"] = speclang::blocks_of<speclang::MapDecl>(result.document).size();
            counts["experiments"] =
                speclang::blocks_of<speclang::ExperimentDecl>(result.document).size();
            counts["concept_blocks"] =
                speclang::blocks_of<speclang::ConceptsDecl>(result.document).size();
            report.results["blocks"] = counts;
            exit_code = errors > 0 ? 2 : 0;
        } else if (app.got_subcommand(classify_cmd)) {
            format = pick_format(classify_format, classify_json);
            report.command = "classify";
            report.inputs["file"] = classify_file;
            bool failed = false;
            const speclang::Document doc = detail::load_document(classify_file, err, &failed);
            if (failed) {
                return 2;
            }
            nlohmann::ordered_json theories = nlohmann::ordered_json::array();
            for (const auto* decl : speclang::blocks_of<speclang::TheoryDecl>(doc)) {
                const TheoryInstance instance = speclang::instantiate(doc, *decl);
                const Classification classification = classify_structure(instance);
                nlohmann::ordered_json item;
                item["name"] = decl->name.id;
                item["declared"] = to_string(decl->family);
                std::vector<std::string> matches;
                for (const auto family : classification.families) {
                    matches.push_back(to_string(family));
                }
                item["matches"] = detail::string_array(matches);
                item["notes"] = detail::string_array(classification.notes);
                theories.push_back(std::move(item));
            }
            report.results["theories"] = std::move(theories);
        } else if (app.got_subcommand(equiv_cmd)) {
            format = pick_format(equiv_format, equiv_json);
            report.command = "equiv";
            report.inputs["file"] = equiv_file;
            report.inputs["maps"] = detail::string_array(equiv_maps);
            if (!equiv_theory.empty()) {
                report.inputs["theory"] = equiv_theory;
            }
            bool failed = false;
            const speclang::Document doc = detail::load_document(equiv_file, err, &failed);
            if (failed) {
                return 2;
            }
            const auto* f_decl = speclang::find_block<speclang::MapDecl>(doc, equiv_maps[0]);
            const auto* g_decl = speclang::find_block<speclang::MapDecl>(doc, equiv_maps[1]);
            if (f_decl == nullptr || g_decl == nullptr) {
                throw std::runtime_error("unknown map '" +
                                         (f_decl == nullptr ? equiv_maps[0] : equiv_maps[1]) +
                                         "'");
            }
            const auto to_pairs = [](const speclang::MapDecl& decl) {
                std::vector<std::pair<std::string, std::string>> pairs;
                for (const auto& [from, to] : decl.entries) {
                    pairs.emplace_back(from.id, to.id);
                }
                return pairs;
            };
            const auto keys_of = [](const speclang::MapDecl& decl) {
                std::vector<std::string> keys;
                for (const auto& [from, to] : decl.entries) {
                    (void)to;
                    keys.push_back(from.id);
                }
                return keys;
            };
            FiniteMap f;
            FiniteMap g;
            std::optional<TheoryInstance> instance;
            if (!equiv_theory.empty()) {
                const auto* t_decl = speclang::find_block<speclang::TheoryDecl>(doc, equiv_theory);
                if (t_decl == nullptr) {
                    throw std::runtime_error("unknown theory '" + equiv_theory + "'");
                }
                instance = speclang::instantiate(doc, *t_decl);
                f = make_map(instance->mental, instance->material, to_pairs(*f_decl));
                g = make_map(instance->material, instance->mental, to_pairs(*g_decl));
            } else {
                f = make_map(keys_of(*f_decl), keys_of(*g_decl), to_pairs(*f_decl));
                g = make_map(keys_of(*g_decl), keys_of(*f_decl), to_pairs(*g_decl));
            }
            const EquivalenceReport eq = classify_equivalence(f, g);
            report.results["class"] = to_string(eq.cls);
            report.results["reading"] = reading(eq.cls);
            report.results["mental_recovered"] = eq.mental_recovered;
            report.results["material_recovered"] = eq.material_recovered;
            report.results["image_gf"] = detail::string_array(eq.image_gf);
            report.results["image_fg"] = detail::string_array(eq.image_fg);
            report.results["notes"] = detail::string_array(eq.notes);
            if (instance) {
                const bool consistent = compatibility_matrix().permits(instance->family, eq.cls);
                report.results["theory"] = equiv_theory;
                report.results["family"] = to_string(instance->family);
                report.results["consistent"] = consistent;
                if (!consistent) {
                    exit_code = 1;
                }
            }
        } else if (app.got_subcommand(sim_cmd)) {
            format = pick_format(sim_format, sim_json);
            report.command = "simulate";
            report.seed = sim_seed;
            report.inputs["n"] = sim_n;
            report.inputs["alpha"] = sim_alpha;
            report.inputs["beta"] = sim_beta;
            report.inputs["trials"] = sim_trials;
            report.inputs["workers"] = sim_workers;
            const ComposeParams params{sim_n, sim_alpha, sim_beta};
            const stats::MonteCarloSummary summary =
                stats::monte_carlo_compose(params, sim_trials, sim_seed, sim_workers);
            report.results["mean_union"] = summary.mean_union;
            report.results["mean_shared"] = summary.mean_shared;
            report.results["mean_result_size"] = summary.mean_result_size;
            report.results["freq_in_union"] = summary.freq_in_union;
            report.results["freq_outside"] = summary.freq_outside;
            report.results["oversize_trials"] = summary.oversize_trials;
            report.results["neuron_freq"] = nlohmann::ordered_json(summary.neuron_freq);
        } else if (app.got_subcommand(ver_cmd)) {
            format = pick_format(ver_format, ver_json);
            report.command = "verify";
            report.seed = ver_seed;
            report.inputs["n"] = ver_n;
            report.inputs["alpha"] = ver_alpha;
            report.inputs["beta"] = ver_beta;
            report.inputs["trials"] = ver_trials;
            report.inputs["workers"] = ver_workers;
            const ComposeParams params{ver_n, ver_alpha, ver_beta};
            const stats::AnalyticComposeStats analytic =
                stats::analytic_compose_stats(ver_alpha, ver_beta, ver_n);
            const stats::MonteCarloSummary summary =
                stats::monte_carlo_compose(params, ver_trials, ver_seed, ver_workers);
            nlohmann::ordered_json tolerances;
            tolerances["mean_union"] = kTolMeanUnion;
            tolerances["mean_shared"] = kTolMeanShared;
            tolerances["freq_in_union"] = kTolFreqInUnion;
            tolerances["freq_outside"] = kTolFreqOutside;
            report.results["tolerances"] = tolerances;
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            bool all_ok = true;
            const auto add_row = [&](const char* metric, double expected, double actual,
                                     double tolerance) {
                const double deviation = std::fabs(expected - actual);
                const bool ok = deviation <= tolerance;
                all_ok = all_ok && ok;
                nlohmann::ordered_json row;
                row["metric"] = metric;
                row["analytic"] = expected;
                row["empirical"] = actual;
                row["deviation"] = deviation;
                row["tolerance"] = tolerance;
                row["ok"] = ok;
                rows.push_back(std::move(row));
            };
            add_row("mean_union", analytic.n_union, summary.mean_union, kTolMeanUnion);
            add_row("mean_shared", analytic.s_shared, summary.mean_shared, kTolMeanShared);
            add_row("freq_in_union", analytic.p_in_union, summary.freq_in_union,
                    kTolFreqInUnion);
            add_row("freq_outside", analytic.p_outside, summary.freq_outside, kTolFreqOutside);
            report.results["rows"] = std::move(rows);
            report.results["ok"] = all_ok;
            if (!all_ok) {
                exit_code = 1;
            }
        } else if (app.got_subcommand(det_cmd)) {
            format = pick_format(det_format, det_json);
            report.command = "detect";
            report.inputs["data"] = det_data;
            report.inputs["triples"] = det_triples;
            report.inputs["n"] = det_n;
            report.inputs["significance"] = det_significance;
            stats::ActivationDataset dataset = stats::load_activations_csv(det_data, det_n);
            stats::load_triples_csv(dataset, det_triples);
            const stats::CompositionTest test =
                stats::test_composition(dataset, det_significance);
            const stats::ParamEstimate estimate = stats::estimate_params(dataset);
            report.results["neuron_count"] = dataset.neuron_count;
            nlohmann::ordered_json triples = nlohmann::ordered_json::array();
            for (const auto& t : test.triples) {
                nlohmann::ordered_json item;
                item["result"] = t.result;
                const auto component_json = [](const std::string& id,
                                               const stats::ComponentTest& ct) {
                    nlohmann::ordered_json c;
                    c["component"] = id;
                    c["observed"] = ct.observed;
                    c["null_mean"] = ct.null_mean;
                    c["p_value"] = ct.p_value;
                    return c;
                };
                item["with_a"] = component_json(t.a, t.with_a);
                item["with_b"] = component_json(t.b, t.with_b);
                item["p_value"] = t.p_value;
                item["reject"] = t.reject;
                triples.push_back(std::move(item));
            }
            report.results["triples"] = std::move(triples);
            nlohmann::ordered_json aggregate;
            aggregate["method"] = test.method;
            aggregate["statistic"] = test.statistic;
            aggregate["statistic_mean"] = test.statistic_mean;
            aggregate["statistic_var"] = test.statistic_var;
            aggregate["p_value"] = test.aggregate_p;
            aggregate["significance"] = test.significance;
            aggregate["reject"] = test.reject;
            report.results["aggregate"] = std::move(aggregate);
            nlohmann::ordered_json est;
            est["alpha_hat"] = estimate.alpha_hat;
            est["beta_hat"] = estimate.beta_hat;
            report.results["estimate"] = std::move(est);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const auto elapsed = std::chrono::steady_clock::now() - start_time;
    report.timing_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
    try {
        out << emit(report, format);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

} // namespace mmk::cli
