#include "blicket/solver_rw.hpp"

#include <algorithm>

namespace blicket::rw {

ScoreTable fit_scores(const std::vector<ContextTrial>& context) {
    std::map<int, std::pair<int, int>> counts; // id -> (on, total)
    for (const auto& t : context) {
        for (int o : t.objects) {
            auto& [on, total] = counts[o];
            on += t.light_on ? 1 : 0;
            ++total;
        }
    }
    ScoreTable table;
    for (const auto& [id, c] : counts) {
        table.score[id] = static_cast<double>(c.first) / static_cast<double>(c.second);
    }
    return table;
}

ScoreTable fit_scores_iterative(const std::vector<ContextTrial>& context, double learning_rate,
                                int epochs) {
    std::map<int, double> w;
    for (const auto& t : context) {
        for (int o : t.objects) w.emplace(o, 0.0);
    }
    for (int e = 0; e < epochs; ++e) {
        for (const auto& t : context) {
            double v = 0.0;
            for (int o : t.objects) v += w[o];
            const double err = (t.light_on ? 1.0 : 0.0) - v;
            for (int o : t.objects) w[o] += learning_rate * err;
        }
    }
    ScoreTable table;
    for (auto& [id, weight] : w) table.score[id] = std::clamp(weight, 0.0, 1.0);
    return table;
}

Label predict_rw(const ScoreTable& scores, const std::vector<int>& config, double theta) {
    double m = 0.0;
    for (int o : config) m = std::max(m, scores.at(o));
    return m >= theta ? Label::Activated : Label::Inactivated;
}

std::vector<Label> solve(const SolverTask& task, const RwConfig& cfg) {
    const ScoreTable table = cfg.iterative
                                 ? fit_scores_iterative(task.context, cfg.learning_rate, cfg.epochs)
                                 : fit_scores(task.context);
    std::vector<Label> out;
    out.reserve(task.queries.size());
    for (const auto& q : task.queries) out.push_back(predict_rw(table, q.objects, cfg.theta));
    return out;
}

} // namespace blicket::rw
