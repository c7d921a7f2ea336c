#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gcshi/ahp.hpp"
#include "gcshi/core.hpp"

namespace gcshi {

using ordered_json = nlohmann::ordered_json;

/// A file plus an optional explicit format. Without an explicit format the
/// extension decides (.csv or .json, case-insensitive).
struct DataReference {
    std::string path;
    std::optional<std::string> format;  // "csv" or "json"
};

inline std::string resolve_format(const DataReference& ref) {
    std::string fmt;
    if (ref.format) {
        fmt = *ref.format;
    } else {
        std::size_t dot = ref.path.find_last_of('.');
        if (dot != std::string::npos) fmt = ref.path.substr(dot + 1);
    }
    for (char& c : fmt) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (fmt != "csv" && fmt != "json") {
        throw IoError(ref.path + ": cannot determine format (expected a .csv or .json " +
                      "extension, or an explicit format)");
    }
    return fmt;
}

namespace csv {

struct Cell {
    std::string text;
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based character position of the cell start
};

/// Minimal CSV reader: comma separated, double-quoted fields with ""
/// escapes, LF or CRLF line endings. Unquoted cells are trimmed.
inline std::vector<std::vector<Cell>> parse(const std::string& text, const std::string& source) {
    std::vector<std::vector<Cell>> rows;
    std::vector<Cell> row;
    Cell cell;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    bool row_started = false;

    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        std::size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    auto flush_cell = [&](bool quoted) {
        if (!quoted) cell.text = trim(cell.text);
        row.push_back(std::move(cell));
        cell = Cell{};
    };
    auto flush_row = [&]() {
        // A line containing nothing at all is skipped, not an empty record.
        if (row.size() == 1 && row.front().text.empty()) {
            row.clear();
            return;
        }
        if (!row.empty()) rows.push_back(std::move(row));
        row.clear();
    };

    while (i < text.size()) {
        if (!row_started) {
            row_started = true;
            cell.line = line;
            cell.column = col;
        }
        char c = text[i];
        if (c == '"' && cell.text.empty() && cell.line == line) {
            // Quoted field.
            std::size_t open_line = line;
            std::size_t open_col = col;
            ++i;
            ++col;
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                char q = text[i];
                if (q == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        value.push_back('"');
                        i += 2;
                        col += 2;
                        continue;
                    }
                    ++i;
                    ++col;
                    closed = true;
                    break;
                }
                if (q == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
                value.push_back(q);
                ++i;
            }
            if (!closed) {
                throw IoError(source + ":" + std::to_string(open_line) + ":" +
                              std::to_string(open_col) + ": unterminated quoted field");
            }
            cell.text = value;
            // Consume up to the next separator.
            while (i < text.size() && text[i] != ',' && text[i] != '\n') {
                if (text[i] != '\r' && text[i] != ' ' && text[i] != '\t') {
                    throw IoError(source + ":" + std::to_string(line) + ":" +
                                  std::to_string(col) + ": unexpected character after " +
                                  "closing quote");
                }
                ++i;
                ++col;
            }
            if (i < text.size() && text[i] == ',') {
                flush_cell(true);
                ++i;
                ++col;
                cell.line = line;
                cell.column = col;
            } else if (i < text.size() && text[i] == '\n') {
                flush_cell(true);
                flush_row();
                row_started = false;
                ++i;
                ++line;
                col = 1;
            } else {
                flush_cell(true);
            }
            continue;
        }
        if (c == ',') {
            flush_cell(false);
            ++i;
            ++col;
            cell.line = line;
            cell.column = col;
            continue;
        }
        if (c == '\n') {
            flush_cell(false);
            flush_row();
            row_started = false;
            ++i;
            ++line;
            col = 1;
            continue;
        }
        cell.text.push_back(c);
        ++i;
        ++col;
    }
    if (row_started) {
        flush_cell(false);
        flush_row();
    }
    return rows;
}

}  // namespace csv

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("failed writing file: " + path);
}

inline std::string cell_position(const std::string& source, const csv::Cell& cell) {
    return source + ":" + std::to_string(cell.line) + ":" + std::to_string(cell.column);
}

inline double parse_double(const csv::Cell& cell, const std::string& source) {
    const std::string& s = cell.text;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(cell_position(source, cell) + ": expected a number, got '" + s + "'");
    }
    return value;
}

inline bool is_number(const std::string& s) {
    if (s.empty()) return false;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline int parse_int(const csv::Cell& cell, const std::string& source) {
    const std::string& s = cell.text;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(cell_position(source, cell) + ": expected an integer, got '" + s + "'");
    }
    return value;
}

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[64];
    // Integral values print as plain integers ("10", not the equally exact
    // but unreadable "1e+01").
    if (v == std::trunc(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        double back = 0.0;
        auto [ptr, ec] = std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        (void)ptr;
        if (ec == std::errc() && back == v) break;
    }
    return buf;
}

struct LabeledTable {
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    std::vector<std::vector<csv::Cell>> cells;
};

/// Shared shape for rating and decision CSV files: a header row whose
/// first cell labels the code column, then one row per entity.
inline LabeledTable parse_labeled_table(const std::string& text, const std::string& source) {
    std::vector<std::vector<csv::Cell>> raw = csv::parse(text, source);
    if (raw.empty()) throw IoError(source + ": no header row");
    LabeledTable table;
    const std::vector<csv::Cell>& header = raw.front();
    if (header.size() < 2) {
        throw IoError(source + ": header must name at least one data column");
    }
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j].text.empty()) {
            throw IoError(cell_position(source, header[j]) + ": empty column id in header");
        }
        table.columns.push_back(header[j].text);
    }
    for (std::size_t r = 1; r < raw.size(); ++r) {
        const std::vector<csv::Cell>& row = raw[r];
        if (row.front().text.empty()) {
            throw IoError(cell_position(source, row.front()) + ": empty row code");
        }
        std::string code = row.front().text;
        if (row.size() < header.size()) {
            std::string missing = table.columns[row.size() - 1];
            throw IoError(source + ":" + std::to_string(row.front().line) +
                          ": row " + code + " is missing a value for column " + missing);
        }
        if (row.size() > header.size()) {
            throw IoError(source + ":" + std::to_string(row.front().line) + ": row " + code +
                          " has more values than header columns");
        }
        table.rows.push_back(code);
        table.cells.emplace_back(row.begin() + 1, row.end());
    }
    if (table.rows.empty()) {
        throw IoError(source + ": no data rows");
    }
    return table;
}

inline ordered_json parse_json(const std::string& text, const std::string& source) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(source + ": " + e.what());
    }
}

inline void require_json_key(const ordered_json& j, const std::string& key,
                             const std::string& source) {
    if (!j.contains(key)) {
        throw IoError(source + ": missing required key '" + key + "'");
    }
}

}  // namespace detail

inline RatingMatrix load_rating_matrix(const DataReference& ref) {
    std::string fmt = resolve_format(ref);
    std::string text = detail::read_file(ref.path);
    RatingMatrix m;
    if (fmt == "csv") {
        detail::LabeledTable table = detail::parse_labeled_table(text, ref.path);
        m.rows = std::move(table.rows);
        m.columns = std::move(table.columns);
        m.values.resize(table.cells.size());
        for (std::size_t i = 0; i < table.cells.size(); ++i) {
            for (const csv::Cell& cell : table.cells[i]) {
                m.values[i].push_back(detail::parse_int(cell, ref.path));
            }
        }
    } else {
        ordered_json j = detail::parse_json(text, ref.path);
        for (const char* key : {"rows", "columns", "values"}) {
            detail::require_json_key(j, key, ref.path);
        }
        try {
            m.rows = j["rows"].get<std::vector<std::string>>();
            m.columns = j["columns"].get<std::vector<std::string>>();
            m.values = j["values"].get<std::vector<std::vector<int>>>();
        } catch (const nlohmann::json::exception& e) {
            throw IoError(ref.path + ": " + e.what());
        }
    }
    require_valid(validate_rating_matrix(m), ref.path);
    return m;
}

inline DecisionMatrix load_decision_matrix(const DataReference& ref) {
    std::string fmt = resolve_format(ref);
    std::string text = detail::read_file(ref.path);
    DecisionMatrix m;
    if (fmt == "csv") {
        detail::LabeledTable table = detail::parse_labeled_table(text, ref.path);
        m.rows = std::move(table.rows);
        m.columns = std::move(table.columns);
        m.values.resize(table.cells.size());
        for (std::size_t i = 0; i < table.cells.size(); ++i) {
            for (const csv::Cell& cell : table.cells[i]) {
                m.values[i].push_back(detail::parse_double(cell, ref.path));
            }
        }
    } else {
        ordered_json j = detail::parse_json(text, ref.path);
        for (const char* key : {"rows", "columns", "values"}) {
            detail::require_json_key(j, key, ref.path);
        }
        try {
            m.rows = j["rows"].get<std::vector<std::string>>();
            m.columns = j["columns"].get<std::vector<std::string>>();
            m.values = j["values"].get<std::vector<std::vector<double>>>();
        } catch (const nlohmann::json::exception& e) {
            throw IoError(ref.path + ": " + e.what());
        }
    }
    require_valid(validate_decision_matrix(m), ref.path);
    return m;
}

/// Result of loading a weights file: either a ready weight vector or a
/// comparison matrix still to be run through weight derivation. `labeled`
/// records whether criterion ids came from the file or were synthesized.
struct WeightsInput {
    std::variant<WeightVector, PairwiseMatrix> value;
    std::vector<std::string> notes;
    bool labeled = false;
};

namespace detail {

inline WeightsInput classify_weights(std::vector<std::string> labels,
                                     std::vector<std::vector<double>> numbers,
                                     const std::string& source) {
    const std::size_t rows = numbers.size();
    const std::size_t cols = rows > 0 ? numbers[0].size() : 0;
    for (const std::vector<double>& row : numbers) {
        if (row.size() != cols) {
            throw IoError(source + ": ragged rows; a weights file must be rectangular");
        }
    }
    WeightsInput input;
    input.labeled = !labels.empty();

    auto as_vector = [&](std::vector<double> w) {
        WeightVector v;
        v.weights = std::move(w);
        if (!labels.empty()) {
            if (labels.size() != v.weights.size()) {
                throw IoError(source + ": " + std::to_string(labels.size()) +
                              " criterion ids for " + std::to_string(v.weights.size()) +
                              " weights");
            }
            v.criteria = std::move(labels);
        }
        require_valid(validate_weights(v), source);
        double sum = 0.0;
        for (double x : v.weights) sum += x;
        if (std::abs(sum - 1.0) > 1e-6) {
            for (double& x : v.weights) x /= sum;
            input.notes.push_back("weights rescaled to sum 1 (input sum " +
                                  format_double(sum) + ")");
        }
        input.value = std::move(v);
    };

    if (rows == 1 && cols >= 1) {
        as_vector(numbers[0]);
    } else if (cols == 1 && rows >= 1) {
        std::vector<double> w(rows);
        for (std::size_t i = 0; i < rows; ++i) w[i] = numbers[i][0];
        as_vector(std::move(w));
    } else if (rows >= 2 && rows == cols) {
        PairwiseMatrix p;
        if (!labels.empty()) {
            if (labels.size() != rows) {
                throw IoError(source + ": " + std::to_string(labels.size()) +
                              " criterion ids for a " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " comparison matrix");
            }
            p.criteria = std::move(labels);
        } else {
            for (std::size_t i = 0; i < rows; ++i) {
                p.criteria.push_back("K" + std::to_string(i + 1));
            }
        }
        p.values = std::move(numbers);
        require_valid(validate_pairwise(p), source);
        input.value = std::move(p);
    } else {
        throw IoError(source + ": unsupported shape " + std::to_string(rows) + "x" +
                      std::to_string(cols) +
                      "; expected a 1xk or kx1 weight vector, or a kxk comparison matrix "
                      "(k >= 2)");
    }
    return input;
}

}  // namespace detail

/// CSV weights are numeric-only, optionally preceded by a header row of
/// criterion ids (detected when any first-row cell is non-numeric). JSON
/// weights use {"criteria"?, "weights"} or {"criteria"?, "matrix"}.
inline WeightsInput load_weights(const DataReference& ref) {
    std::string fmt = resolve_format(ref);
    std::string text = detail::read_file(ref.path);
    if (fmt == "csv") {
        std::vector<std::vector<csv::Cell>> raw = csv::parse(text, ref.path);
        if (raw.empty()) throw IoError(ref.path + ": empty weights file");
        std::vector<std::string> labels;
        std::size_t first_data_row = 0;
        bool header = false;
        for (const csv::Cell& cell : raw.front()) {
            if (!detail::is_number(cell.text)) {
                header = true;
                break;
            }
        }
        if (header) {
            for (const csv::Cell& cell : raw.front()) {
                if (cell.text.empty()) {
                    throw IoError(detail::cell_position(ref.path, cell) +
                                  ": empty criterion id in header");
                }
                labels.push_back(cell.text);
            }
            first_data_row = 1;
            if (raw.size() == 1) {
                throw IoError(ref.path + ": header row present but no numeric rows follow");
            }
        }
        std::vector<std::vector<double>> numbers;
        for (std::size_t r = first_data_row; r < raw.size(); ++r) {
            std::vector<double> row;
            for (const csv::Cell& cell : raw[r]) {
                row.push_back(detail::parse_double(cell, ref.path));
            }
            numbers.push_back(std::move(row));
        }
        return detail::classify_weights(std::move(labels), std::move(numbers), ref.path);
    }
    ordered_json j = detail::parse_json(text, ref.path);
    std::vector<std::string> labels;
    try {
        if (j.contains("criteria")) {
            labels = j["criteria"].get<std::vector<std::string>>();
        }
        if (j.contains("weights")) {
            std::vector<std::vector<double>> numbers;
            numbers.push_back(j["weights"].get<std::vector<double>>());
            return detail::classify_weights(std::move(labels), std::move(numbers), ref.path);
        }
        if (j.contains("matrix")) {
            auto numbers = j["matrix"].get<std::vector<std::vector<double>>>();
            return detail::classify_weights(std::move(labels), std::move(numbers), ref.path);
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(ref.path + ": " + e.what());
    }
    throw IoError(ref.path + ": expected a 'weights' array or a 'matrix' of pairwise " +
                  "comparisons");
}

namespace detail {

template <typename T, typename Format>
inline std::string table_to_csv(const std::vector<std::string>& rows,
                                const std::vector<std::string>& columns,
                                const std::vector<std::vector<T>>& values,
                                const std::string& corner, Format format) {
    auto quote_if_needed = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += "\"\"";
            else quoted.push_back(c);
        }
        quoted += "\"";
        return quoted;
    };
    std::string out = quote_if_needed(corner);
    for (const std::string& c : columns) out += "," + quote_if_needed(c);
    out += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += quote_if_needed(rows[i]);
        for (const T& v : values[i]) out += "," + format(v);
        out += "\n";
    }
    return out;
}

}  // namespace detail

inline void save_rating_matrix(const RatingMatrix& m, const DataReference& ref) {
    std::string fmt = resolve_format(ref);
    if (fmt == "csv") {
        detail::write_file(ref.path,
                           detail::table_to_csv(m.rows, m.columns, m.values, "activity",
                                                [](int v) { return std::to_string(v); }));
        return;
    }
    ordered_json j;
    j["rows"] = m.rows;
    j["columns"] = m.columns;
    j["values"] = m.values;
    detail::write_file(ref.path, j.dump(2) + "\n");
}

inline void save_decision_matrix(const DecisionMatrix& m, const DataReference& ref) {
    std::string fmt = resolve_format(ref);
    if (fmt == "csv") {
        detail::write_file(
            ref.path, detail::table_to_csv(m.rows, m.columns, m.values, "alternative",
                                           [](double v) { return detail::format_double(v); }));
        return;
    }
    ordered_json j;
    j["rows"] = m.rows;
    j["columns"] = m.columns;
    j["values"] = m.values;
    detail::write_file(ref.path, j.dump(2) + "\n");
}

inline void save_weights(const WeightVector& w, const DataReference& ref) {
    std::string fmt = resolve_format(ref);
    if (fmt == "csv") {
        std::string out;
        if (!w.criteria.empty()) {
            for (std::size_t i = 0; i < w.criteria.size(); ++i) {
                if (i) out += ",";
                out += w.criteria[i];
            }
            out += "\n";
        }
        for (std::size_t i = 0; i < w.weights.size(); ++i) {
            if (i) out += ",";
            out += detail::format_double(w.weights[i]);
        }
        out += "\n";
        detail::write_file(ref.path, out);
        return;
    }
    ordered_json j;
    if (!w.criteria.empty()) j["criteria"] = w.criteria;
    j["weights"] = w.weights;
    detail::write_file(ref.path, j.dump(2) + "\n");
}

inline ordered_json catalog_to_json(const Catalog& c) {
    ordered_json j;
    j["activities"] = ordered_json::array();
    for (const Activity& a : c.activities) {
        j["activities"].push_back(
            {{"code", a.code}, {"name", a.name}, {"description", a.description}});
    }
    auto criteria_json = [](const std::vector<Criterion>& list) {
        ordered_json arr = ordered_json::array();
        for (const Criterion& c : list) {
            arr.push_back({{"id", c.id},
                           {"name", c.name},
                           {"kind", to_string(c.kind)},
                           {"stage", c.stage == CriterionStage::categorization
                                         ? "categorization"
                                         : "prioritization"}});
        }
        return arr;
    };
    j["categorization_criteria"] = criteria_json(c.categorization_criteria);
    j["prioritization_criteria"] = criteria_json(c.prioritization_criteria);
    j["experts"] = ordered_json::array();
    for (const ExpertProfile& e : c.experts) {
        j["experts"].push_back({{"id", e.id},
                                {"profession", e.profession},
                                {"education", e.education},
                                {"experience_years", e.experience_years}});
    }
    j["ratings"] = {{"rows", c.ratings.rows},
                    {"columns", c.ratings.columns},
                    {"values", c.ratings.values}};
    j["decision"] = {{"rows", c.decision.rows},
                     {"columns", c.decision.columns},
                     {"values", c.decision.values}};
    j["consensus_rounds"] = {{"activities", c.rounds.activities},
                             {"categorization_criteria", c.rounds.categorization_criteria},
                             {"prioritization_criteria", c.rounds.prioritization_criteria}};
    return j;
}

inline Catalog catalog_from_json(const ordered_json& j, const std::string& source = "catalog") {
    Catalog c;
    try {
        for (const ordered_json& a : j.at("activities")) {
            c.activities.push_back({a.at("code").get<std::string>(),
                                    a.at("name").get<std::string>(),
                                    a.at("description").get<std::string>()});
        }
        auto criteria_from = [&](const ordered_json& arr, CriterionStage stage) {
            std::vector<Criterion> list;
            for (const ordered_json& e : arr) {
                list.push_back({e.at("id").get<std::string>(), e.at("name").get<std::string>(),
                                criterion_kind_from_string(e.at("kind").get<std::string>()),
                                stage});
            }
            return list;
        };
        c.categorization_criteria = criteria_from(j.at("categorization_criteria"),
                                                  CriterionStage::categorization);
        c.prioritization_criteria = criteria_from(j.at("prioritization_criteria"),
                                                  CriterionStage::prioritization);
        for (const ordered_json& e : j.at("experts")) {
            c.experts.push_back({e.at("id").get<std::string>(),
                                 e.at("profession").get<std::string>(),
                                 e.at("education").get<std::string>(),
                                 e.at("experience_years").get<int>()});
        }
        c.ratings.rows = j.at("ratings").at("rows").get<std::vector<std::string>>();
        c.ratings.columns = j.at("ratings").at("columns").get<std::vector<std::string>>();
        c.ratings.values = j.at("ratings").at("values").get<std::vector<std::vector<int>>>();
        c.decision.rows = j.at("decision").at("rows").get<std::vector<std::string>>();
        c.decision.columns = j.at("decision").at("columns").get<std::vector<std::string>>();
        c.decision.values = j.at("decision").at("values").get<std::vector<std::vector<double>>>();
        c.rounds.activities = j.at("consensus_rounds").at("activities").get<int>();
        c.rounds.categorization_criteria =
            j.at("consensus_rounds").at("categorization_criteria").get<int>();
        c.rounds.prioritization_criteria =
            j.at("consensus_rounds").at("prioritization_criteria").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(source + ": " + e.what());
    }
    require_valid(validate_rating_matrix(c.ratings), source + " ratings");
    require_valid(validate_decision_matrix(c.decision), source + " decision matrix");
    return c;
}

}  // namespace gcshi
