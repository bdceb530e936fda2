#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blicket/problem.hpp"

namespace blicket::eval {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Prediction {
    std::string problem_id;
    std::array<Label, kQueriesPerProblem> labels{};

    bool operator==(const Prediction&) const = default;
};

struct Metrics {
    double query_accuracy = 0.0;
    double problem_accuracy = 0.0; // all four queries correct
    std::map<QueryType, double> per_type_accuracy;
    // Row: true label, column: predicted label; both indexed
    // inactivated / undetermined / activated.
    std::array<std::array<std::int64_t, 3>, 3> confusion{};
    int n_problems = 0;
};

// Scores predictions against the ground-truth labels of `problems`. Exactly
// one prediction per problem is required; missing, duplicate or unmatched ids
// raise EvalError naming them.
Metrics evaluate(const std::vector<Prediction>& predictions, const std::vector<Problem>& problems);

enum class BaselineKind { AlwaysOn, UniformRandom };

std::vector<Prediction> baseline_predict(BaselineKind kind, const std::vector<SolverTask>& tasks,
                                         std::uint64_t seed);

// Prediction JSONL: {"problem_id": ..., "labels": [4 strings]} per line.
std::string encode_prediction(const Prediction& p);
Prediction decode_prediction(std::string_view line);
std::string predictions_to_string(const std::vector<Prediction>& predictions);
void write_predictions(const std::vector<Prediction>& predictions, const std::string& path);
std::vector<Prediction> read_predictions(const std::string& path);

struct ReportEntry {
    std::string solver;
    std::string split;
    Metrics metrics;
};

// Aligned text tables: one block per split with solvers as columns, accuracy
// rows Qry./Pro. followed by the four per-type rows.
std::string render_text_report(const std::vector<ReportEntry>& entries);

// Machine-readable summary of the same entries. from_json(to_json(e)) == e.
std::string report_to_json(const std::vector<ReportEntry>& entries);
std::vector<ReportEntry> report_from_json(std::string_view text);

bool operator==(const Metrics& a, const Metrics& b);
inline bool operator==(const ReportEntry& a, const ReportEntry& b) {
    return a.solver == b.solver && a.split == b.split && a.metrics == b.metrics;
}

} // namespace blicket::eval
