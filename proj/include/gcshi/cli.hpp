#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcshi/core.hpp"
#include "gcshi/pipeline.hpp"
#include "gcshi/report.hpp"

namespace gcshi {

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string token = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t b = token.find_first_not_of(" \t");
        std::size_t e = token.find_last_not_of(" \t");
        token = b == std::string::npos ? std::string() : token.substr(b, e - b + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw ValidationError("invalid number '" + token + "' in " + flag);
        }
        values.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

inline std::vector<CriterionKind> parse_kind_list(const std::string& text) {
    std::vector<CriterionKind> kinds;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string token = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t b = token.find_first_not_of(" \t");
        std::size_t e = token.find_last_not_of(" \t");
        token = b == std::string::npos ? std::string() : token.substr(b, e - b + 1);
        kinds.push_back(criterion_kind_from_string(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return kinds;
}

inline std::string ranking_line(const TopsisResult& t) {
    std::string line;
    for (std::size_t i = 0; i < t.ranking.size(); ++i) {
        if (i) line += " > ";
        line += t.ranking[i].code;
    }
    return line;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConsistencyError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace detail

struct ClusterOptions {
    std::optional<std::string> ratings;
    double eps = 0.5;
    int min_pts = 2;
    std::optional<std::string> out;
    std::string format = "json";
};

inline int cmd_cluster(const ClusterOptions& options, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (options.eps < 0.0) throw ValidationError("epsilon must be >= 0");
        if (options.min_pts < 1) throw ValidationError("min-pts must be >= 1");
        ReportFormat format = report_format_from_string(options.format);
        if (format == ReportFormat::plotdata) {
            throw ValidationError("cluster reports support json or markdown");
        }
        PipelineConfig config;
        if (options.ratings) {
            config.ratings = DataReference{*options.ratings, std::nullopt};
        } else {
            config.use_bundled_ratings = true;
        }
        config.dbscan.epsilon = options.eps;
        config.dbscan.min_pts = options.min_pts;
        PipelineReport report = run(config);
        out << report.clustering->categories.size() << " clusters, "
            << report.clustering->noise.size() << " noise\n";
        if (options.out) {
            detail::write_file(*options.out, emit_report(report, format));
        }
    });
}

struct WeightsOptions {
    std::optional<std::string> pairwise;  // file with a comparison matrix
    std::optional<std::string> weights;   // inline comma-separated list
    bool strict = false;
};

inline int cmd_weights(const WeightsOptions& options, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (options.pairwise && options.weights) {
            throw ValidationError("use either --pairwise or --weights, not both");
        }
        if (options.weights) {
            WeightVector w;
            w.weights = detail::parse_double_list(*options.weights, "--weights");
            require_valid(validate_weights(w), "--weights");
            double sum = 0.0;
            for (double v : w.weights) sum += v;
            if (std::abs(sum - 1.0) > 1e-6) {
                for (double& v : w.weights) v /= sum;
            }
            for (std::size_t i = 0; i < w.weights.size(); ++i) {
                out << "w" << (i + 1) << ": " << detail::fixed4(w.weights[i]) << "\n";
            }
            out << "consistency ratio: n/a (weights supplied directly)\n";
            return;
        }
        PairwiseMatrix matrix;
        if (options.pairwise) {
            WeightsInput loaded = load_weights(DataReference{*options.pairwise, std::nullopt});
            if (!std::holds_alternative<PairwiseMatrix>(loaded.value)) {
                throw ValidationError(*options.pairwise +
                                      " does not contain a square comparison matrix");
            }
            matrix = std::get<PairwiseMatrix>(loaded.value);
        } else {
            matrix = bundled_candidate_pairwise();
        }
        AhpResult result = derive_weights(matrix);
        if (options.strict && !result.consistency.acceptable) {
            throw ConsistencyError("consistency ratio " +
                                   detail::fixed4(result.consistency.consistency_ratio) +
                                   " exceeds the 0.10 acceptance threshold");
        }
        for (std::size_t i = 0; i < result.weights.weights.size(); ++i) {
            out << result.weights.criteria[i] << ": "
                << detail::fixed4(result.weights.weights[i]) << "\n";
        }
        out << "consistency ratio: " << detail::fixed4(result.consistency.consistency_ratio)
            << (result.consistency.acceptable ? " (acceptable)" : " (not acceptable)") << "\n";
    });
}

struct RankOptions {
    std::optional<std::string> decision;
    std::optional<std::string> weights;   // inline comma-separated list
    std::optional<std::string> pairwise;  // file with a comparison matrix
    std::optional<std::string> kinds;     // inline comma-separated list
    std::optional<std::string> out;
    std::string format = "json";
};

inline int cmd_rank(const RankOptions& options, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        ReportFormat format = report_format_from_string(options.format);
        if (options.weights && options.pairwise) {
            throw ValidationError("use either --weights or --pairwise, not both");
        }
        PipelineConfig config;
        if (options.kinds) config.kinds = detail::parse_kind_list(*options.kinds);
        if (options.decision) {
            config.decision = DataReference{*options.decision, std::nullopt};
        } else {
            config.use_bundled_decision = true;
        }
        if (options.weights) {
            config.explicit_weights = detail::parse_double_list(*options.weights, "--weights");
        } else if (options.pairwise) {
            DataReference ref{*options.pairwise, std::nullopt};
            WeightsInput probe = load_weights(ref);
            if (!std::holds_alternative<PairwiseMatrix>(probe.value)) {
                throw ValidationError(*options.pairwise +
                                      " does not contain a square comparison matrix");
            }
            config.weights_file = ref;
        } else {
            config.use_published_weights = true;
        }
        PipelineReport report = run(config);
        out << detail::ranking_line(report.prioritization->topsis) << "\n";
        if (options.out) {
            detail::write_file(*options.out, emit_report(report, format));
        }
    });
}

struct PipelineCliConfig {
    PipelineConfig config;
    std::optional<std::string> out;
    ReportFormat format = ReportFormat::json;
};

/// Flat JSON config mirroring the pipeline configuration. Input and output
/// paths are resolved relative to the config file's directory.
inline PipelineCliConfig load_pipeline_config(const std::string& path) {
    std::string text = detail::read_file(path);
    ordered_json j = detail::parse_json(text, path);
    if (!j.is_object()) throw ValidationError(path + ": config must be a JSON object");

    const std::vector<std::string> known = {
        "ratings", "decision", "weights", "weights_file", "pairwise_file", "epsilon",
        "min_pts", "kinds", "strict", "samples", "radius", "seed", "out", "format"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ValidationError(path + ": unknown config key '" + it.key() + "'");
        }
    }
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    auto resolve = [&dir](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (dir / fp).string();
    };
    auto require_string = [&path](const ordered_json& v, const std::string& key) {
        if (!v.is_string()) {
            throw ValidationError(path + ": key '" + key + "' must be a string");
        }
        return v.get<std::string>();
    };

    PipelineCliConfig cli;
    if (j.contains("ratings")) {
        std::string v = require_string(j["ratings"], "ratings");
        if (v == "bundled") {
            cli.config.use_bundled_ratings = true;
        } else {
            cli.config.ratings = DataReference{resolve(v), std::nullopt};
        }
    }
    if (j.contains("decision")) {
        std::string v = require_string(j["decision"], "decision");
        if (v == "bundled") {
            cli.config.use_bundled_decision = true;
        } else {
            cli.config.decision = DataReference{resolve(v), std::nullopt};
        }
    }
    if (j.contains("weights")) {
        const ordered_json& v = j["weights"];
        if (v.is_array()) {
            std::vector<double> weights;
            for (const ordered_json& x : v) {
                if (!x.is_number()) {
                    throw ValidationError(path + ": 'weights' must contain only numbers");
                }
                weights.push_back(x.get<double>());
            }
            cli.config.explicit_weights = std::move(weights);
        } else if (v.is_string() && v.get<std::string>() == "published") {
            cli.config.use_published_weights = true;
        } else {
            throw ValidationError(path + ": 'weights' must be an array of numbers or the "
                                         "string 'published'");
        }
    }
    if (j.contains("weights_file")) {
        cli.config.weights_file =
            DataReference{resolve(require_string(j["weights_file"], "weights_file")),
                          std::nullopt};
    }
    if (j.contains("pairwise_file")) {
        // A comparison matrix is just another weights-file shape.
        cli.config.weights_file =
            DataReference{resolve(require_string(j["pairwise_file"], "pairwise_file")),
                          std::nullopt};
    }
    if (j.contains("epsilon")) {
        if (!j["epsilon"].is_number()) {
            throw ValidationError(path + ": key 'epsilon' must be a number");
        }
        cli.config.dbscan.epsilon = j["epsilon"].get<double>();
    }
    if (j.contains("min_pts")) {
        if (!j["min_pts"].is_number_integer()) {
            throw ValidationError(path + ": key 'min_pts' must be an integer");
        }
        cli.config.dbscan.min_pts = j["min_pts"].get<int>();
    }
    if (j.contains("kinds")) {
        if (!j["kinds"].is_array()) {
            throw ValidationError(path + ": key 'kinds' must be an array of strings");
        }
        for (const ordered_json& v : j["kinds"]) {
            cli.config.kinds.push_back(
                criterion_kind_from_string(require_string(v, "kinds")));
        }
    }
    if (j.contains("strict")) {
        if (!j["strict"].is_boolean()) {
            throw ValidationError(path + ": key 'strict' must be a boolean");
        }
        cli.config.strict_consistency = j["strict"].get<bool>();
    }
    if (j.contains("samples") || j.contains("radius") || j.contains("seed")) {
        SensitivitySettings settings;
        if (j.contains("samples")) {
            if (!j["samples"].is_number_integer()) {
                throw ValidationError(path + ": key 'samples' must be an integer");
            }
            settings.samples = j["samples"].get<int>();
        }
        if (j.contains("radius")) {
            if (!j["radius"].is_number()) {
                throw ValidationError(path + ": key 'radius' must be a number");
            }
            settings.radius = j["radius"].get<double>();
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned()) {
                throw ValidationError(path + ": key 'seed' must be an integer");
            }
            settings.seed = j["seed"].get<std::uint64_t>();
        }
        cli.config.sensitivity = settings;
    }
    if (j.contains("out")) {
        cli.out = resolve(require_string(j["out"], "out"));
    }
    if (j.contains("format")) {
        cli.format = report_format_from_string(require_string(j["format"], "format"));
    }
    return cli;
}

inline int cmd_pipeline(const std::string& config_path, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        PipelineCliConfig cli = load_pipeline_config(config_path);
        PipelineReport report = run(cli.config);
        if (report.clustering) {
            out << "categorization: " << report.clustering->categories.size()
                << " categories, " << report.clustering->noise.size() << " noise\n";
        }
        if (report.weighting) {
            out << "weighting: source " << report.weighting->source << "\n";
        }
        if (report.prioritization) {
            out << "prioritization: " << detail::ranking_line(report.prioritization->topsis)
                << "\n";
            out << "errata: " << report.errata.size() << " cell(s) flagged\n";
        }
        if (report.sensitivity) {
            out << "sensitivity: " << report.sensitivity->settings.samples
                << " samples, radius " << detail::format_double(report.sensitivity->settings.radius)
                << ", seed " << report.sensitivity->settings.seed << "\n";
        }
        if (cli.out) {
            detail::write_file(*cli.out, emit_report(report, cli.format));
            out << "report written: " << *cli.out << "\n";
        }
    });
}

inline const char* reproduce_report_filename() { return "reproduce-report.json"; }

inline int cmd_reproduce(std::ostream& out, std::ostream& err) {
    int failures = 0;
    int rc = detail::guarded(err, [&] {
        PipelineReport report = reference_run();
        std::vector<ReferenceCheck> checks = verify_reference_run(report);
        for (const ReferenceCheck& check : checks) {
            out << (check.passed ? "ok - " : "FAIL - ") << check.name;
            if (!check.detail.empty()) out << " (" << check.detail << ")";
            out << "\n";
            if (!check.passed) ++failures;
        }
        if (failures == 0) {
            const PublishedResults& pub = published_results();
            const TopsisResult& t = report.prioritization->topsis;
            double max_delta = 0.0;
            for (std::size_t i = 1; i < pub.closeness.size(); ++i) {
                max_delta = std::max(max_delta, std::abs(t.closeness[i] - pub.closeness[i]));
            }
            out << "categorization: exact match; closeness (C2-C5): max |delta| "
                << detail::fixed4(max_delta) << " <= 0.01; documented errata: "
                << report.errata.size() << " cells\n";
        } else {
            out << "reproduction failed: " << failures << " of "
                << verify_reference_run(report).size() << " checks failed\n";
        }
        detail::write_file(reproduce_report_filename(),
                           emit_report(report, ReportFormat::json));
        out << "report written: " << reproduce_report_filename() << "\n";
    });
    if (rc != 0) return rc;
    return failures == 0 ? 0 : 1;
}

struct SensitivityOptions {
    std::optional<std::string> decision;
    std::optional<std::string> weights;  // inline comma-separated list
    double radius = 0.05;
    int samples = 200;
    std::uint64_t seed = 42;
};

inline int cmd_sensitivity(const SensitivityOptions& options, std::ostream& out,
                           std::ostream& err) {
    return detail::guarded(err, [&] {
        if (!(options.radius >= 0.0) || options.radius > 1.0) {
            throw ValidationError("radius must be in [0, 1]");
        }
        if (options.samples < 1) throw ValidationError("samples must be >= 1");
        PipelineConfig config;
        if (options.decision) {
            config.decision = DataReference{*options.decision, std::nullopt};
        } else {
            config.use_bundled_decision = true;
        }
        if (options.weights) {
            config.explicit_weights = detail::parse_double_list(*options.weights, "--weights");
        } else {
            config.use_published_weights = true;
        }
        config.sensitivity = SensitivitySettings{options.samples, options.radius, options.seed};
        PipelineReport report = run(config);
        const SensitivityResult& s = *report.sensitivity;
        out << "sensitivity: " << s.settings.samples << " samples, radius "
            << detail::format_double(s.settings.radius) << ", seed " << s.settings.seed << "\n";
        for (std::size_t i = 0; i < s.alternatives.size(); ++i) {
            out << s.alternatives[i] << ": base rank " << s.base_ranks[i]
                << ", top-rank frequency " << detail::fixed4(s.top_rank_frequency[i]) << "\n";
        }
    });
}

/// Builds the command-line application and dispatches. Returns the process
/// exit code (0 success, 1 validation, 2 I/O, 3 consistency, 4 numerical).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decision-analysis toolkit: density-based categorization, judgement-matrix "
                 "weighting, and ideal-solution ranking"};
    app.name("gcshi");
    app.require_subcommand(1);

    ClusterOptions cluster_options;
    CLI::App* cluster = app.add_subcommand(
        "cluster", "Categorize rated activities with a density scan");
    cluster->add_option("--ratings", cluster_options.ratings,
                        "Rating matrix file (csv or json); bundled data when omitted");
    cluster->add_option("--eps", cluster_options.eps, "Neighborhood radius (default 0.5)");
    cluster->add_option("--min-pts", cluster_options.min_pts,
                        "Minimum neighborhood size for a core point (default 2)");
    cluster->add_option("--out", cluster_options.out, "Write the full report to this file");
    cluster->add_option("--format", cluster_options.format, "Report format: json or markdown");

    WeightsOptions weights_options;
    CLI::App* weights = app.add_subcommand(
        "weights", "Derive criterion weights from a comparison matrix");
    weights->add_option("--pairwise", weights_options.pairwise,
                        "Comparison matrix file; bundled candidate matrix when omitted");
    weights->add_option("--weights", weights_options.weights,
                        "Inline comma-separated weights to validate and echo");
    weights->add_flag("--strict", weights_options.strict,
                      "Fail (exit 3) when the consistency ratio exceeds 0.10");

    RankOptions rank_options;
    CLI::App* rank = app.add_subcommand("rank", "Rank alternatives by relative closeness");
    rank->add_option("--decision", rank_options.decision,
                     "Decision matrix file (csv or json); bundled data when omitted");
    rank->add_option("--weights", rank_options.weights,
                     "Inline comma-separated weights; published weights when omitted");
    rank->add_option("--pairwise", rank_options.pairwise,
                     "Comparison matrix file to derive weights from");
    rank->add_option("--kinds", rank_options.kinds,
                     "Comma-separated criterion kinds (benefit or cost)");
    rank->add_option("--out", rank_options.out, "Write the full report to this file");
    rank->add_option("--format", rank_options.format,
                     "Report format: json, markdown, or plot-data");

    std::string pipeline_config_path;
    CLI::App* pipeline = app.add_subcommand("pipeline", "Run the configured analysis pipeline");
    pipeline->add_option("--config", pipeline_config_path, "Pipeline config file (json)")
        ->required();

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "Re-derive the published study results from bundled data");

    SensitivityOptions sensitivity_options;
    CLI::App* sensitivity_cmd = app.add_subcommand(
        "sensitivity", "Measure ranking stability under weight perturbation");
    sensitivity_cmd->add_option("--decision", sensitivity_options.decision,
                                "Decision matrix file; bundled data when omitted");
    sensitivity_cmd->add_option("--weights", sensitivity_options.weights,
                                "Inline comma-separated base weights; published when omitted");
    sensitivity_cmd->add_option("--radius", sensitivity_options.radius,
                                "L1 perturbation radius in [0, 1] (default 0.05)");
    sensitivity_cmd->add_option("--samples", sensitivity_options.samples,
                                "Number of Monte-Carlo samples (default 200)");
    sensitivity_cmd->add_option("--seed", sensitivity_options.seed,
                                "Random seed (default 42)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (cluster->parsed()) return cmd_cluster(cluster_options, out, err);
    if (weights->parsed()) return cmd_weights(weights_options, out, err);
    if (rank->parsed()) return cmd_rank(rank_options, out, err);
    if (pipeline->parsed()) return cmd_pipeline(pipeline_config_path, out, err);
    if (reproduce->parsed()) return cmd_reproduce(out, err);
    if (sensitivity_cmd->parsed()) return cmd_sensitivity(sensitivity_options, out, err);
    err << "error: no command given\n";
    return 1;
}

}  // namespace gcshi
