#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blicket/config.hpp"
#include "blicket/eval.hpp"
#include "blicket/problem.hpp"
#include "blicket/solver_opt.hpp"

namespace blicket {

enum class SolverKind { Rw, Pc, Opt, AlwaysOn, Random };

std::string_view to_token(SolverKind k);
std::optional<SolverKind> parse_solver(std::string_view t);

struct RunOptions {
    SolverKind solver = SolverKind::Rw;
    SolverConfig config{};
    std::optional<Fold> fold; // restrict to one fold; whole dataset when empty
    std::uint64_t baseline_seed = 0;
};

struct DiagnosticRecord {
    std::string problem_id;
    opt::FitDiagnostics fit;
};

// JSONL row: problem id, final h, loss, outer iterations, convergence flag
// and the weighted adjacency (row-major, machine last).
std::string encode_diagnostic(const DiagnosticRecord& d);

std::vector<Problem> select_fold(const Dataset& ds, std::optional<Fold> fold);

// Redacts the selected problems and dispatches to the chosen solver; solvers
// only ever see SolverTask. `diagnostics` is filled per problem by the opt
// solver and ignored by the others.
std::vector<eval::Prediction> run_solver(const Dataset& ds, const RunOptions& opts,
                                         std::vector<DiagnosticRecord>* diagnostics = nullptr);

// Grid search over the label-readout hyperparameters (rw theta, pc delta, the
// opt tau band) on the val fold; model fits are reused across grid points.
// Returns `base` with the tuned fields replaced; baselines are returned as-is.
SolverConfig calibrate(const Dataset& ds, SolverKind solver, const SolverConfig& base);

} // namespace blicket
