#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcshi {

// Error taxonomy. The CLI maps these onto its exit codes, so every engine
// reports failures through one of the four classes below.

/// Rejected input: a value or shape that violates a documented invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// File system or parse failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Consistency-ratio violation under strict mode.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (non-convergence, exhausted sampling budget).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

enum class CriterionKind { benefit, cost };
enum class CriterionStage { categorization, prioritization };

inline std::string to_string(CriterionKind k) {
    return k == CriterionKind::benefit ? "benefit" : "cost";
}

inline CriterionKind criterion_kind_from_string(const std::string& s) {
    if (s == "benefit") return CriterionKind::benefit;
    if (s == "cost") return CriterionKind::cost;
    throw ValidationError("unknown criterion kind '" + s + "' (expected benefit or cost)");
}

struct Activity {
    std::string code;
    std::string name;
    std::string description;

    friend bool operator==(const Activity&, const Activity&) = default;
};

struct Criterion {
    std::string id;
    std::string name;
    CriterionKind kind = CriterionKind::benefit;
    CriterionStage stage = CriterionStage::categorization;

    friend bool operator==(const Criterion&, const Criterion&) = default;
};

struct ExpertProfile {
    std::string id;
    std::string profession;
    std::string education;
    int experience_years = 0;

    friend bool operator==(const ExpertProfile&, const ExpertProfile&) = default;
};

/// A named group of activities. `members` holds activity codes in input
/// (row) order; member sets of distinct categories are disjoint.
struct Category {
    std::string code;
    std::string name;
    std::vector<std::string> members;

    friend bool operator==(const Category&, const Category&) = default;
};

/// Ordinal expert ratings, one row per activity, one column per
/// categorization criterion. Every entry is an integer on the 1..10 scale.
struct RatingMatrix {
    std::vector<std::string> rows;     // activity codes
    std::vector<std::string> columns;  // criterion ids
    std::vector<std::vector<int>> values;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }

    friend bool operator==(const RatingMatrix&, const RatingMatrix&) = default;
};

/// Real-valued decision matrix, one row per alternative, one column per
/// prioritization criterion. Entries are non-negative.
struct DecisionMatrix {
    std::vector<std::string> rows;     // alternative codes
    std::vector<std::string> columns;  // criterion ids
    std::vector<std::vector<double>> values;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }

    friend bool operator==(const DecisionMatrix&, const DecisionMatrix&) = default;
};

/// One broken rule. Violations are data, not failures: validators return
/// the full list and leave it to the caller to reject or report.
struct Violation {
    std::string row;
    std::string column;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

inline std::string to_string(const Violation& v) {
    std::string where;
    if (!v.row.empty() && !v.column.empty()) {
        where = "(" + v.row + ", " + v.column + "): ";
    } else if (!v.row.empty()) {
        where = "(" + v.row + "): ";
    }
    return where + v.rule;
}

namespace detail {

template <typename T>
inline void check_structure(const std::vector<std::string>& rows,
                            const std::vector<std::string>& columns,
                            const std::vector<std::vector<T>>& values,
                            ValidationReport& out) {
    if (values.size() != rows.size()) {
        out.push_back({"", "", "row count does not match number of row labels"});
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != columns.size()) {
            std::string row = i < rows.size() ? rows[i] : ("#" + std::to_string(i));
            out.push_back({row, "", "column count does not match number of column labels"});
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (rows[i] == rows[j]) {
                out.push_back({rows[i], "", "duplicate row code"});
            }
        }
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        for (std::size_t j = i + 1; j < columns.size(); ++j) {
            if (columns[i] == columns[j]) {
                out.push_back({"", columns[i], "duplicate column id"});
            }
        }
    }
}

}  // namespace detail

/// Empty report iff every entry is an integer in [1, 10] and the matrix is
/// rectangular with unique labels.
inline ValidationReport validate_rating_matrix(const RatingMatrix& m) {
    ValidationReport report;
    detail::check_structure(m.rows, m.columns, m.values, report);
    for (std::size_t i = 0; i < m.values.size() && i < m.rows.size(); ++i) {
        for (std::size_t j = 0; j < m.values[i].size() && j < m.columns.size(); ++j) {
            int v = m.values[i][j];
            if (v < 1 || v > 10) {
                report.push_back({m.rows[i], m.columns[j],
                                  "value " + std::to_string(v) + " out of range [1,10]"});
            }
        }
    }
    return report;
}

/// Empty report iff entries are non-negative and the matrix has at least
/// 2 rows and 1 column.
inline ValidationReport validate_decision_matrix(const DecisionMatrix& m) {
    ValidationReport report;
    detail::check_structure(m.rows, m.columns, m.values, report);
    if (m.rows.size() < 2) {
        report.push_back({"", "", "decision matrix needs at least 2 alternatives"});
    }
    if (m.columns.empty()) {
        report.push_back({"", "", "decision matrix needs at least 1 criterion"});
    }
    for (std::size_t i = 0; i < m.values.size() && i < m.rows.size(); ++i) {
        for (std::size_t j = 0; j < m.values[i].size() && j < m.columns.size(); ++j) {
            if (m.values[i][j] < 0.0) {
                report.push_back({m.rows[i], m.columns[j], "negative entry"});
            }
        }
    }
    return report;
}

/// Throws ValidationError listing every violation; no-op on a clean report.
inline void require_valid(const ValidationReport& report, const std::string& subject) {
    if (report.empty()) return;
    std::string msg = subject + ": " + std::to_string(report.size()) + " violation(s)";
    for (const Violation& v : report) {
        msg += "\n  " + to_string(v);
    }
    throw ValidationError(msg);
}

/// Rounds of expert elicitation behind the bundled catalog. Metadata only.
struct ConsensusRounds {
    int activities = 5;
    int categorization_criteria = 3;
    int prioritization_criteria = 2;

    friend bool operator==(const ConsensusRounds&, const ConsensusRounds&) = default;
};

/// The bundled reference dataset: 20 healthcare privacy/security activities
/// rated by a ten-member expert panel on three categorization criteria,
/// plus the category-level decision matrix for prioritization.
struct Catalog {
    std::vector<Activity> activities;
    std::vector<Criterion> categorization_criteria;  // G1..G3
    std::vector<Criterion> prioritization_criteria;  // E1..E3
    std::vector<ExpertProfile> experts;
    RatingMatrix ratings;
    DecisionMatrix decision;
    ConsensusRounds rounds;

    friend bool operator==(const Catalog&, const Catalog&) = default;
};

/// Results published by the source study for the bundled dataset, used by
/// the reproduction report to cross-check recomputed values. The printed
/// matrices carry the study's display rounding (2 decimals, one 3-decimal
/// distance entry).
struct PublishedResults {
    std::vector<Category> categories;              // memberships and names
    std::vector<std::vector<double>> profiles;     // per-category criterion means
    std::vector<double> weights;                   // E1..E3
    double consistency_ratio = 0.0;
    double epsilon = 0.0;
    int min_pts = 0;
    std::vector<std::vector<double>> weighted;     // printed weighted matrix
    std::vector<double> ideal_best;
    std::vector<double> ideal_worst;
    std::vector<double> dist_best;
    std::vector<double> dist_worst;
    std::vector<double> closeness;
};

namespace detail {

inline Catalog make_bundled_catalog() {
    Catalog c;
    c.activities = {
        {"L1", "Regular Risk Assessment",
         "Conduct frequent risk assessments to identify potential vulnerabilities in the "
         "healthcare system."},
        {"L2", "Employee Training",
         "Provide continuous training for employees on data privacy and security protocols."},
        {"L3", "Strong Access Controls",
         "Implement strict access controls to ensure only authorized personnel can access "
         "sensitive data."},
        {"L4", "Data Encryption",
         "Encrypt patient data in transit and at rest to protect against unauthorized access."},
        {"L5", "Audit Trails",
         "Maintain detailed audit trails to monitor access and changes to patient data."},
        {"L6", "Anti-Malware Software",
         "Install and regularly update anti-malware software to protect against cyber threats."},
        {"L7", "Secure Data Storage",
         "Use secure storage solutions, such as encrypted databases, for patient data."},
        {"L8", "Data Minimization",
         "Only collect and retain the minimum amount of patient data necessary for healthcare "
         "purposes."},
        {"L9", "Incident Response Plan",
         "Develop and regularly update an incident response plan for potential data breaches."},
        {"L10", "Regular Software Updates",
         "Keep all software and systems updated to protect against vulnerabilities."},
        {"L11", "Multi-Factor Authentication",
         "Implement multi-factor authentication for accessing patient data systems."},
        {"L12", "Secure Communication Channels",
         "Use secure communication channels, such as encrypted email, for transmitting patient "
         "data."},
        {"L13", "Patient Consent Management",
         "Regularly obtain and manage patient consent for data use and sharing."},
        {"L14", "Third-Party Vendor Assessment",
         "Conduct thorough assessments of third-party vendors who have access to patient data."},
        {"L15", "Data Anonymization Techniques",
         "Apply data anonymization techniques where appropriate for research and analysis."},
        {"L16", "Physical Security Measures",
         "Enhance physical security measures to protect data storage and access areas."},
        {"L17", "Mobile Device Management",
         "Implement policies for secure use of mobile devices in accessing patient data."},
        {"L18", "Cybersecurity Insurance",
         "Consider obtaining cybersecurity insurance to mitigate financial risks associated "
         "with data breaches."},
        {"L19", "Regular Compliance Audits",
         "Conduct audits to ensure ongoing compliance with healthcare data protection "
         "regulations."},
        {"L20", "Patient Education",
         "Educate patients about their data rights and how to protect their health information."},
    };
    c.categorization_criteria = {
        {"G1", "Functional Focus", CriterionKind::benefit, CriterionStage::categorization},
        {"G2", "Stakeholder Engagement", CriterionKind::benefit, CriterionStage::categorization},
        {"G3", "Strategic Objective", CriterionKind::benefit, CriterionStage::categorization},
    };
    c.prioritization_criteria = {
        {"E1", "Ease", CriterionKind::benefit, CriterionStage::prioritization},
        {"E2", "Effect", CriterionKind::benefit, CriterionStage::prioritization},
        {"E3", "Economics", CriterionKind::benefit, CriterionStage::prioritization},
    };
    c.experts = {
        {"X1", "Software Engineer", "Bachelor of Technology", 5},
        {"X2", "Software Engineer", "Bachelor of Technology", 6},
        {"X3", "Software Engineer", "Master of Technology", 5},
        {"X4", "Software Engineer", "Master of Computer Applications", 6},
        {"X5", "Web Analyst", "Master of Computer Applications", 8},
        {"X6", "Data Analyst", "Bachelor of Technology", 6},
        {"X7", "Healthcare Manager", "Bachelor of Technology", 6},
        {"X8", "Healthcare Manager", "Master of Business Administration", 8},
        {"X9", "Healthcare Manager", "Master of Business Administration", 9},
        {"X10", "Healthcare Manager", "Master of Business Administration", 8},
    };

    // Reconstructed ratings: each activity carries the published mean
    // profile of its category (the per-activity source ratings were never
    // published; see the provenance note emitted with every report).
    c.ratings.columns = {"G1", "G2", "G3"};
    const std::vector<std::vector<int>> rating_rows = {
        {5, 8, 9},  // L1
        {9, 9, 9},  // L2
        {4, 4, 8},  // L3
        {4, 4, 8},  // L4
        {8, 8, 8},  // L5
        {5, 4, 8},  // L6
        {4, 4, 8},  // L7
        {4, 4, 8},  // L8
        {5, 8, 9},  // L9
        {5, 4, 8},  // L10
        {9, 9, 9},  // L11
        {5, 4, 8},  // L12
        {5, 8, 9},  // L13
        {5, 8, 9},  // L14
        {4, 4, 8},  // L15
        {5, 4, 8},  // L16
        {5, 4, 8},  // L17
        {8, 8, 8},  // L18
        {5, 8, 9},  // L19
        {9, 9, 9},  // L20
    };
    for (const Activity& a : c.activities) c.ratings.rows.push_back(a.code);
    c.ratings.values = rating_rows;

    c.decision.rows = {"C1", "C2", "C3", "C4", "C5"};
    c.decision.columns = {"E1", "E2", "E3"};
    c.decision.values = {
        {4, 7, 5},
        {4, 8, 6},
        {5, 9, 6},
        {6, 7, 6},
        {7, 7, 5},
    };
    return c;
}

inline PublishedResults make_published_results() {
    PublishedResults p;
    p.categories = {
        {"C1", "Policy and Compliance Management", {"L1", "L9", "L13", "L14", "L19"}},
        {"C2", "Employee Training and Awareness", {"L2", "L11", "L20"}},
        {"C3", "Data Protection and Privacy Control", {"L3", "L4", "L7", "L8", "L15"}},
        {"C4", "Monitoring and Response", {"L5", "L18"}},
        {"C5", "Technology and Infrastructure Security", {"L6", "L10", "L12", "L16", "L17"}},
    };
    p.profiles = {
        {5, 8, 9},
        {9, 9, 9},
        {4, 4, 8},
        {8, 8, 8},
        {5, 4, 8},
    };
    p.weights = {0.11, 0.63, 0.26};
    p.consistency_ratio = 0.04;
    p.epsilon = 0.5;
    p.min_pts = 2;
    p.weighted = {
        {0.04, 0.29, 0.12},
        {0.04, 0.29, 0.12},
        {0.05, 0.32, 0.12},
        {0.06, 0.25, 0.12},
        {0.06, 0.25, 0.10},
    };
    p.ideal_best = {0.06, 0.32, 0.12};
    p.ideal_worst = {0.04, 0.25, 0.10};
    p.dist_best = {0.05, 0.05, 0.020, 0.07, 0.07};
    p.dist_worst = {0.04, 0.04, 0.08, 0.03, 0.03};
    p.closeness = {0.48, 0.48, 0.80, 0.27, 0.27};
    return p;
}

}  // namespace detail

inline const Catalog& bundled_catalog() {
    static const Catalog catalog = detail::make_bundled_catalog();
    return catalog;
}

inline const PublishedResults& published_results() {
    static const PublishedResults results = detail::make_published_results();
    return results;
}

/// Provenance note attached to every report produced from the bundled
/// ratings.
inline const char* reconstruction_note() {
    return "bundled ratings are reconstructed from the published category profiles and "
           "memberships; the per-activity source ratings were not published";
}

}  // namespace gcshi
