#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcshi/core.hpp"
#include "gcshi/io.hpp"
#include "gcshi/pipeline.hpp"

namespace gcshi {

enum class ReportFormat { json, markdown, plotdata };

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "markdown" || s == "md") return ReportFormat::markdown;
    if (s == "plot-data" || s == "plotdata") return ReportFormat::plotdata;
    throw ValidationError("unknown report format '" + s +
                          "' (expected json, markdown, or plot-data)");
}

inline const char* report_schema_id() { return "gcshi-report/1"; }

inline ordered_json to_json(const PipelineReport& report) {
    ordered_json j;
    j["schema"] = report_schema_id();
    j["notes"] = report.notes;
    if (report.clustering) {
        const ClusteringSection& c = *report.clustering;
        ordered_json section;
        section["params"] = {{"epsilon", c.params.epsilon}, {"min_pts", c.params.min_pts}};
        section["criteria"] = c.criteria;
        section["categories"] = ordered_json::array();
        for (const Category& cat : c.categories) {
            section["categories"].push_back(
                {{"code", cat.code}, {"name", cat.name}, {"members", cat.members}});
        }
        section["profiles"] = c.profiles;
        section["noise"] = c.noise;
        section["stats"] = {{"distance_evaluations", c.stats.distance_evaluations},
                            {"neighborhood_queries", c.stats.neighborhood_queries}};
        j["clustering"] = std::move(section);
    }
    if (report.weighting) {
        const WeightingSection& w = *report.weighting;
        ordered_json section;
        section["source"] = w.source;
        section["criteria"] = w.weights.criteria;
        section["weights"] = w.weights.weights;
        if (w.consistency) {
            section["consistency"] = {{"lambda_max", w.consistency->lambda_max},
                                      {"consistency_index", w.consistency->consistency_index},
                                      {"consistency_ratio", w.consistency->consistency_ratio},
                                      {"acceptable", w.consistency->acceptable}};
        }
        if (w.iterations) section["iterations"] = *w.iterations;
        if (!w.geometric_mean_weights.empty()) {
            section["geometric_mean_weights"] = w.geometric_mean_weights;
        }
        section["notes"] = w.notes;
        j["weighting"] = std::move(section);
    }
    if (report.prioritization) {
        const PrioritizationSection& p = *report.prioritization;
        const TopsisResult& t = p.topsis;
        ordered_json section;
        section["criteria"] = t.criteria;
        ordered_json kinds = ordered_json::array();
        for (CriterionKind kind : p.kinds) kinds.push_back(to_string(kind));
        section["kinds"] = std::move(kinds);
        section["alternatives"] = t.alternatives;
        section["normalized"] = t.normalized;
        section["weighted"] = t.weighted;
        section["ideal_best"] = t.ideal_best;
        section["ideal_worst"] = t.ideal_worst;
        section["dist_best"] = t.dist_best;
        section["dist_worst"] = t.dist_worst;
        section["closeness"] = t.closeness;
        section["ranking"] = ordered_json::array();
        for (const RankEntry& e : t.ranking) {
            section["ranking"].push_back(
                {{"code", e.code}, {"rank", e.rank}, {"tied", e.tied}});
        }
        section["warnings"] = t.warnings;
        j["prioritization"] = std::move(section);
    }
    j["errata"] = ordered_json::array();
    for (const ErrataEntry& e : report.errata) {
        j["errata"].push_back({{"artifact", e.artifact},
                               {"row", e.row},
                               {"column", e.column},
                               {"published", e.published},
                               {"recomputed", e.recomputed},
                               {"delta", e.delta}});
    }
    if (report.sensitivity) {
        const SensitivityResult& s = *report.sensitivity;
        ordered_json section;
        section["samples"] = s.settings.samples;
        section["radius"] = s.settings.radius;
        section["seed"] = s.settings.seed;
        section["alternatives"] = s.alternatives;
        section["base_weights"] = s.base_weights;
        section["base_ranks"] = s.base_ranks;
        section["top_rank_frequency"] = s.top_rank_frequency;
        section["reversal_frequency"] = s.reversal_frequency;
        j["sensitivity"] = std::move(section);
    }
    return j;
}

namespace detail {

inline std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

inline std::string markdown_report(const PipelineReport& report) {
    std::string md = "# Decision analysis report\n";

    if (!report.notes.empty()) {
        md += "\n## Notes\n\n";
        for (const std::string& note : report.notes) md += "- " + note + "\n";
    }

    if (report.clustering) {
        const ClusteringSection& c = *report.clustering;
        md += "\n## Categorization\n\n";
        md += "Density scan with epsilon " + format_double(c.params.epsilon) + ", min_pts " +
              std::to_string(c.params.min_pts) + "; " +
              std::to_string(c.stats.neighborhood_queries) + " neighborhood queries, " +
              std::to_string(c.stats.distance_evaluations) + " distance evaluations.\n\n";
        md += "| Category | Name | Size | Members |\n";
        md += "| --- | --- | --- | --- |\n";
        for (const Category& cat : c.categories) {
            md += "| " + cat.code + " | " + (cat.name.empty() ? "-" : cat.name) + " | " +
                  std::to_string(cat.members.size()) + " | " + join(cat.members, ", ") +
                  " |\n";
        }
        md += "\n| Category | " + join(c.criteria, " | ") + " |\n";
        md += "| --- |";
        for (std::size_t j = 0; j < c.criteria.size(); ++j) md += " --- |";
        md += "\n";
        for (std::size_t i = 0; i < c.categories.size(); ++i) {
            md += "| " + c.categories[i].code + " |";
            for (double v : c.profiles[i]) md += " " + fixed4(v) + " |";
            md += "\n";
        }
        if (!c.noise.empty()) {
            md += "\nNoise points: " + join(c.noise, ", ") + "\n";
        }
    }

    if (report.weighting) {
        const WeightingSection& w = *report.weighting;
        md += "\n## Weighting\n\n";
        md += "Source: " + w.source + "\n\n";
        md += "| Criterion | Weight |\n| --- | --- |\n";
        for (std::size_t i = 0; i < w.weights.weights.size(); ++i) {
            std::string id = i < w.weights.criteria.size() ? w.weights.criteria[i]
                                                           : ("#" + std::to_string(i + 1));
            md += "| " + id + " | " + fixed4(w.weights.weights[i]) + " |\n";
        }
        if (w.consistency) {
            md += "\nPrincipal eigenvalue " + fixed4(w.consistency->lambda_max) +
                  ", consistency index " + fixed4(w.consistency->consistency_index) +
                  ", consistency ratio " + fixed4(w.consistency->consistency_ratio) +
                  (w.consistency->acceptable ? " (acceptable)" : " (not acceptable)") + ".\n";
        }
        for (const std::string& note : w.notes) md += "\n> " + note + "\n";
    }

    if (report.prioritization) {
        const TopsisResult& t = report.prioritization->topsis;
        md += "\n## Prioritization\n\n";
        md += "| Alternative | " + join(t.criteria, " | ") + " | d+ | d- | Closeness | Rank |\n";
        md += "| --- |";
        for (std::size_t j = 0; j < t.criteria.size() + 4; ++j) md += " --- |";
        md += "\n";
        for (std::size_t i = 0; i < t.alternatives.size(); ++i) {
            int rank = 0;
            for (const RankEntry& e : t.ranking) {
                if (e.code == t.alternatives[i]) rank = e.rank;
            }
            md += "| " + t.alternatives[i] + " |";
            for (double v : t.weighted[i]) md += " " + fixed4(v) + " |";
            md += " " + fixed4(t.dist_best[i]) + " | " + fixed4(t.dist_worst[i]) + " | " +
                  fixed4(t.closeness[i]) + " | " + std::to_string(rank) + " |\n";
        }
        md += "\nIdeal best:";
        for (double v : t.ideal_best) md += " " + fixed4(v);
        md += "\nIdeal worst:";
        for (double v : t.ideal_worst) md += " " + fixed4(v);
        md += "\n\nPriority order: ";
        std::vector<std::string> codes;
        for (const RankEntry& e : t.ranking) codes.push_back(e.code);
        md += join(codes, " > ") + "\n";
        for (const std::string& warning : t.warnings) md += "\n> " + warning + "\n";
    }

    if (!report.errata.empty()) {
        md += "\n## Errata\n\n";
        md += "| Artifact | Row | Column | Published | Recomputed | Delta |\n";
        md += "| --- | --- | --- | --- | --- | --- |\n";
        for (const ErrataEntry& e : report.errata) {
            md += "| " + e.artifact + " | " + (e.row.empty() ? "-" : e.row) + " | " +
                  (e.column.empty() ? "-" : e.column) + " | " + fixed4(e.published) + " | " +
                  fixed4(e.recomputed) + " | " + fixed4(e.delta) + " |\n";
        }
    }

    if (report.sensitivity) {
        const SensitivityResult& s = *report.sensitivity;
        md += "\n## Sensitivity\n\n";
        md += std::to_string(s.settings.samples) + " samples, radius " +
              format_double(s.settings.radius) + ", seed " +
              std::to_string(s.settings.seed) + ".\n\n";
        md += "| Alternative | Base rank | Top-rank share |\n| --- | --- | --- |\n";
        for (std::size_t i = 0; i < s.alternatives.size(); ++i) {
            md += "| " + s.alternatives[i] + " | " + std::to_string(s.base_ranks[i]) + " | " +
                  fixed4(s.top_rank_frequency[i]) + " |\n";
        }
        md += "\n| Reversal | " + join(s.alternatives, " | ") + " |\n";
        md += "| --- |";
        for (std::size_t j = 0; j < s.alternatives.size(); ++j) md += " --- |";
        md += "\n";
        for (std::size_t i = 0; i < s.alternatives.size(); ++i) {
            md += "| " + s.alternatives[i] + " |";
            for (double v : s.reversal_frequency[i]) md += " " + fixed4(v) + " |";
            md += "\n";
        }
    }
    return md;
}

/// series,x,y rows: one series per category over the categorization
/// criteria (x is the 1-based criterion position) and one closeness series
/// over the alternatives.
inline std::string plotdata_report(const PipelineReport& report) {
    std::string out = "series,x,y\n";
    if (report.clustering) {
        const ClusteringSection& c = *report.clustering;
        for (std::size_t i = 0; i < c.categories.size(); ++i) {
            for (std::size_t j = 0; j < c.profiles[i].size(); ++j) {
                out += "profile:" + c.categories[i].code + "," + std::to_string(j + 1) + "," +
                       format_double(c.profiles[i][j]) + "\n";
            }
        }
    }
    if (report.prioritization) {
        const TopsisResult& t = report.prioritization->topsis;
        for (std::size_t i = 0; i < t.alternatives.size(); ++i) {
            out += "closeness," + std::to_string(i + 1) + "," + format_double(t.closeness[i]) +
                   "\n";
        }
    }
    return out;
}

}  // namespace detail

inline std::string emit_report(const PipelineReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json:
            return to_json(report).dump(2) + "\n";
        case ReportFormat::markdown:
            return detail::markdown_report(report);
        case ReportFormat::plotdata:
            return detail::plotdata_report(report);
    }
    throw ValidationError("unknown report format");
}

// Validator for the subset of JSON Schema used by the shipped report
// schema: type, properties, required, items, and enum.

namespace detail {

inline std::string json_type_name(const ordered_json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
    if (v.is_number()) return "number";
    return "null";
}

inline void validate_schema_node(const ordered_json& instance, const ordered_json& schema,
                                 const std::string& path, std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        std::string expected = schema["type"].get<std::string>();
        std::string actual = json_type_name(instance);
        bool ok = expected == actual || (expected == "number" && actual == "integer");
        if (!ok) {
            errors.push_back(path + ": expected " + expected + ", got " + actual);
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const ordered_json& allowed : schema["enum"]) {
            if (allowed == instance) found = true;
        }
        if (!found) {
            errors.push_back(path + ": value not in enum");
        }
    }
    if (instance.is_object()) {
        if (schema.contains("required")) {
            for (const ordered_json& key : schema["required"]) {
                if (!instance.contains(key.get<std::string>())) {
                    errors.push_back(path + ": missing required property '" +
                                     key.get<std::string>() + "'");
                }
            }
        }
        if (schema.contains("properties")) {
            for (auto it = schema["properties"].begin(); it != schema["properties"].end();
                 ++it) {
                if (instance.contains(it.key())) {
                    validate_schema_node(instance[it.key()], it.value(), path + "/" + it.key(),
                                         errors);
                }
            }
        }
    }
    if (instance.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < instance.size(); ++i) {
            validate_schema_node(instance[i], schema["items"],
                                 path + "/" + std::to_string(i), errors);
        }
    }
}

}  // namespace detail

/// Returns a list of violations; empty means the instance conforms to the
/// supported schema subset.
inline std::vector<std::string> validate_schema(const ordered_json& instance,
                                                const ordered_json& schema) {
    std::vector<std::string> errors;
    detail::validate_schema_node(instance, schema, "#", errors);
    return errors;
}

}  // namespace gcshi
