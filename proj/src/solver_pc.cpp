#include "blicket/solver_pc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace blicket::pc {

BinarySample build_sample(const std::vector<ContextTrial>& context, int n_objects) {
    BinarySample data;
    data.n_cols = n_objects + 1;
    data.rows.reserve(context.size());
    for (const auto& t : context) {
        std::vector<std::uint8_t> row(static_cast<std::size_t>(data.n_cols), 0);
        for (int o : t.objects) {
            if (o < 0 || o >= n_objects) {
                throw std::invalid_argument("build_sample: object id out of range");
            }
            row[o] = 1;
        }
        row[n_objects] = t.light_on ? 1 : 0;
        data.rows.push_back(std::move(row));
    }
    return data;
}

double conditional_mutual_information(const BinarySample& data, int i, int j,
                                      const std::vector<int>& cond) {
    if (i == j) throw std::invalid_argument("conditional_mutual_information: i == j");
    for (int s : cond) {
        if (s == i || s == j) {
            throw std::invalid_argument("conditional_mutual_information: conditioning on i or j");
        }
    }
    const auto n_rows = data.rows.size();
    if (n_rows == 0) return 0.0;

    // Stratify rows by the assignment of the conditioning set.
    std::map<std::uint32_t, std::array<std::array<int, 2>, 2>> strata;
    for (const auto& row : data.rows) {
        std::uint32_t key = 0;
        for (std::size_t b = 0; b < cond.size(); ++b) {
            key |= static_cast<std::uint32_t>(row[cond[b]]) << b;
        }
        strata[key][row[i]][row[j]] += 1;
    }

    double cmi = 0.0;
    for (const auto& [key, cells] : strata) {
        const int m = cells[0][0] + cells[0][1] + cells[1][0] + cells[1][1];
        const int ri[2] = {cells[0][0] + cells[0][1], cells[1][0] + cells[1][1]};
        const int cj[2] = {cells[0][0] + cells[1][0], cells[0][1] + cells[1][1]};
        double mi = 0.0;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const int c = cells[a][b];
                if (c == 0) continue;
                mi += (static_cast<double>(c) / m) *
                      std::log(static_cast<double>(c) * m /
                               (static_cast<double>(ri[a]) * static_cast<double>(cj[b])));
            }
        }
        cmi += (static_cast<double>(m) / static_cast<double>(n_rows)) * mi;
    }
    return cmi;
}

bool ci_test_dependent(const BinarySample& data, int i, int j, const std::vector<int>& cond,
                       double eps_ci) {
    if (cond.size() > 2) {
        throw std::invalid_argument("ci_test_dependent: conditioning sets are capped at size 2");
    }
    return conditional_mutual_information(data, i, j, cond) > eps_ci;
}

std::vector<int> learn_parents(const BinarySample& data, double eps_ci) {
    const int machine = data.machine_col();
    std::vector<int> parents;
    for (int o = 0; o < machine; ++o) {
        std::vector<int> others;
        for (int k = 0; k < machine; ++k) {
            if (k != o) others.push_back(k);
        }
        bool survives = ci_test_dependent(data, o, machine, {}, eps_ci);
        for (std::size_t a = 0; survives && a < others.size(); ++a) {
            if (!ci_test_dependent(data, o, machine, {others[a]}, eps_ci)) survives = false;
            for (std::size_t b = a + 1; survives && b < others.size(); ++b) {
                if (!ci_test_dependent(data, o, machine, {others[a], others[b]}, eps_ci)) {
                    survives = false;
                }
            }
        }
        if (survives) parents.push_back(o);
    }
    return parents;
}

Cpt estimate_cpt(const BinarySample& data, const std::vector<int>& parents) {
    Cpt cpt;
    cpt.parents = parents;
    std::map<std::uint32_t, std::pair<int, int>> counts; // key -> (on, total)
    for (const auto& row : data.rows) {
        std::uint32_t key = 0;
        for (std::size_t b = 0; b < parents.size(); ++b) {
            key |= static_cast<std::uint32_t>(row[parents[b]]) << b;
        }
        auto& [on, total] = counts[key];
        on += row[data.machine_col()];
        ++total;
    }
    for (const auto& [key, c] : counts) {
        cpt.table[key] = static_cast<double>(c.first) / static_cast<double>(c.second);
    }
    return cpt;
}

Label predict_pc(const Cpt& cpt, const std::vector<int>& config, double delta) {
    std::uint32_t key = 0;
    for (std::size_t b = 0; b < cpt.parents.size(); ++b) {
        const bool present =
            std::find(config.begin(), config.end(), cpt.parents[b]) != config.end();
        key |= static_cast<std::uint32_t>(present) << b;
    }
    const auto it = cpt.table.find(key);
    if (it == cpt.table.end()) return Label::Undetermined;
    if (it->second >= 0.5 + delta) return Label::Activated;
    if (it->second <= 0.5 - delta) return Label::Inactivated;
    return Label::Undetermined;
}

std::vector<Label> solve(const SolverTask& task, const PcConfig& cfg) {
    const BinarySample data = build_sample(task.context, task.n_objects);
    const Cpt cpt = estimate_cpt(data, learn_parents(data, cfg.eps_ci));
    std::vector<Label> out;
    out.reserve(task.queries.size());
    for (const auto& q : task.queries) out.push_back(predict_pc(cpt, q.objects, cfg.delta));
    return out;
}

} // namespace blicket::pc
