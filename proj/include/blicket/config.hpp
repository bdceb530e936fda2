#pragma once

#include <string>
#include <string_view>

#include "blicket/solver_opt.hpp"
#include "blicket/solver_pc.hpp"
#include "blicket/solver_rw.hpp"

namespace blicket {

// Hyperparameters for all solvers, loaded from one JSON file. Every field has
// the solver's default; a config file overrides only the keys it names.
struct SolverConfig {
    rw::RwConfig rw;
    pc::PcConfig pc;
    opt::OptConfig opt;
};

// Strict parse: unknown sections or keys are errors (they are invariably
// typos), wrong types likewise. Throws ParseError.
SolverConfig solver_config_from_json(std::string_view text);
SolverConfig load_solver_config(const std::string& path);

std::string solver_config_to_json(const SolverConfig& cfg);

} // namespace blicket
