#pragma once

#include <map>
#include <vector>

#include "blicket/problem.hpp"

namespace blicket::rw {

struct RwConfig {
    double theta = 0.5;
    // Iterative associative-update variant, for ablation. The default scoring
    // is the plain co-occurrence ratio.
    bool iterative = false;
    double learning_rate = 0.25;
    int epochs = 10;
};

// Per-object Blicketness score in [0, 1]; objects never observed score 0.
struct ScoreTable {
    std::map<int, double> score;

    double at(int id) const {
        auto it = score.find(id);
        return it == score.end() ? 0.0 : it->second;
    }
};

// score(o) = #activated trials containing o / #trials containing o.
ScoreTable fit_scores(const std::vector<ContextTrial>& context);

// Delta-rule weight updates over the trial sequence; weights clamped to [0, 1].
ScoreTable fit_scores_iterative(const std::vector<ContextTrial>& context, double learning_rate,
                                int epochs);

// max-score readout: activated iff the best config member reaches theta (ties
// go high); covariation has no epistemic third state, so never undetermined.
Label predict_rw(const ScoreTable& scores, const std::vector<int>& config, double theta);

std::vector<Label> solve(const SolverTask& task, const RwConfig& cfg);

} // namespace blicket::rw
