#include "blicket/driver.hpp"

#include <algorithm>

#include <json.hpp>

#include "blicket/rng.hpp"
#include "blicket/solver_pc.hpp"
#include "blicket/solver_rw.hpp"

namespace blicket {

using json = nlohmann::ordered_json;

std::string_view to_token(SolverKind k) {
    switch (k) {
        case SolverKind::Rw: return "rw";
        case SolverKind::Pc: return "pc";
        case SolverKind::Opt: return "opt";
        case SolverKind::AlwaysOn: return "always_on";
        case SolverKind::Random: return "random";
    }
    return "?";
}

std::optional<SolverKind> parse_solver(std::string_view t) {
    if (t == "rw") return SolverKind::Rw;
    if (t == "pc") return SolverKind::Pc;
    if (t == "opt") return SolverKind::Opt;
    if (t == "always_on") return SolverKind::AlwaysOn;
    if (t == "random") return SolverKind::Random;
    return std::nullopt;
}

std::string encode_diagnostic(const DiagnosticRecord& d) {
    json j;
    j["problem_id"] = d.problem_id;
    j["h"] = d.fit.h;
    j["loss"] = d.fit.loss;
    j["outer_iterations"] = d.fit.outer_iterations;
    j["h_converged"] = d.fit.h_converged;
    json w = json::array();
    for (int r = 0; r < d.fit.w.n; ++r) {
        json row = json::array();
        for (int c = 0; c < d.fit.w.n; ++c) row.push_back(d.fit.w.at(r, c));
        w.push_back(std::move(row));
    }
    j["w"] = std::move(w);
    return j.dump();
}

std::vector<Problem> select_fold(const Dataset& ds, std::optional<Fold> fold) {
    std::vector<Problem> out;
    for (const auto& p : ds.problems) {
        if (!fold || p.fold == *fold) out.push_back(p);
    }
    return out;
}

namespace {

eval::Prediction to_prediction(const SolverTask& task, const std::vector<Label>& labels) {
    eval::Prediction pred;
    pred.problem_id = task.problem_id;
    for (std::size_t i = 0; i < pred.labels.size() && i < labels.size(); ++i) {
        pred.labels[i] = labels[i];
    }
    return pred;
}

} // namespace

std::vector<eval::Prediction> run_solver(const Dataset& ds, const RunOptions& opts,
                                         std::vector<DiagnosticRecord>* diagnostics) {
    const std::vector<Problem> problems = select_fold(ds, opts.fold);
    const std::vector<SolverTask> tasks = redact(problems);

    if (opts.solver == SolverKind::AlwaysOn) {
        return eval::baseline_predict(eval::BaselineKind::AlwaysOn, tasks, opts.baseline_seed);
    }
    if (opts.solver == SolverKind::Random) {
        return eval::baseline_predict(eval::BaselineKind::UniformRandom, tasks,
                                      opts.baseline_seed);
    }

    std::vector<eval::Prediction> out;
    out.reserve(tasks.size());
    for (const auto& task : tasks) {
        switch (opts.solver) {
            case SolverKind::Rw:
                out.push_back(to_prediction(task, rw::solve(task, opts.config.rw)));
                break;
            case SolverKind::Pc:
                out.push_back(to_prediction(task, pc::solve(task, opts.config.pc)));
                break;
            case SolverKind::Opt: {
                opt::FitDiagnostics fit;
                out.push_back(to_prediction(
                    task, opt::solve(task, opts.config.opt,
                                     diagnostics != nullptr ? &fit : nullptr)));
                if (diagnostics != nullptr) {
                    diagnostics->push_back({task.problem_id, std::move(fit)});
                }
                break;
            }
            default: break;
        }
    }
    return out;
}

namespace {

double fold_query_accuracy(const std::vector<eval::Prediction>& preds,
                           const std::vector<Problem>& problems) {
    return eval::evaluate(preds, problems).query_accuracy;
}

SolverConfig calibrate_rw(const std::vector<Problem>& val, const SolverConfig& base) {
    SolverConfig best = base;
    double best_acc = -1.0;
    const std::vector<SolverTask> tasks = redact(val);
    for (int i = 1; i <= 19; ++i) {
        SolverConfig cand = base;
        cand.rw.theta = 0.05 * i;
        std::vector<eval::Prediction> preds;
        preds.reserve(tasks.size());
        for (const auto& task : tasks) {
            eval::Prediction p;
            p.problem_id = task.problem_id;
            const auto labels = rw::solve(task, cand.rw);
            std::copy_n(labels.begin(), p.labels.size(), p.labels.begin());
            preds.push_back(std::move(p));
        }
        const double acc = fold_query_accuracy(preds, val);
        if (acc > best_acc) {
            best_acc = acc;
            best = cand;
        }
    }
    return best;
}

SolverConfig calibrate_pc(const std::vector<Problem>& val, const SolverConfig& base) {
    SolverConfig best = base;
    double best_acc = -1.0;
    const std::vector<SolverTask> tasks = redact(val);
    for (double delta : {0.02, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30}) {
        SolverConfig cand = base;
        cand.pc.delta = delta;
        std::vector<eval::Prediction> preds;
        preds.reserve(tasks.size());
        for (const auto& task : tasks) {
            eval::Prediction p;
            p.problem_id = task.problem_id;
            const auto labels = pc::solve(task, cand.pc);
            std::copy_n(labels.begin(), p.labels.size(), p.labels.begin());
            preds.push_back(std::move(p));
        }
        const double acc = fold_query_accuracy(preds, val);
        if (acc > best_acc) {
            best_acc = acc;
            best = cand;
        }
    }
    return best;
}

SolverConfig calibrate_opt(const std::vector<Problem>& val, const SolverConfig& base) {
    // One fit per problem; only the tau readout is swept.
    const std::vector<SolverTask> tasks = redact(val);
    std::vector<std::array<double, kQueriesPerProblem>> probs;
    probs.reserve(tasks.size());
    for (const auto& task : tasks) {
        const opt::DataMatrix data = opt::build_data_matrix(task.context, task.n_objects);
        const opt::FitResult fit =
            opt::fit_sem(data, base.opt, mix64(task.seed ^ 0x6f707421ULL));
        std::array<double, kQueriesPerProblem> p{};
        for (std::size_t i = 0; i < task.queries.size() && i < p.size(); ++i) {
            p[i] = opt::infer_query(fit.sem, task.queries[i].objects);
        }
        probs.push_back(p);
    }

    SolverConfig best = base;
    double best_acc = -1.0;
    for (double width : {0.05, 0.10, 0.15, 0.20, 0.25, 0.30}) {
        SolverConfig cand = base;
        cand.opt.tau_lo = 0.5 - width;
        cand.opt.tau_hi = 0.5 + width;
        std::vector<eval::Prediction> preds;
        preds.reserve(tasks.size());
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            eval::Prediction p;
            p.problem_id = tasks[t].problem_id;
            for (std::size_t i = 0; i < p.labels.size(); ++i) {
                p.labels[i] =
                    opt::label_from_prob(probs[t][i], cand.opt.tau_lo, cand.opt.tau_hi);
            }
            preds.push_back(std::move(p));
        }
        const double acc = fold_query_accuracy(preds, val);
        if (acc > best_acc) {
            best_acc = acc;
            best = cand;
        }
    }
    return best;
}

} // namespace

SolverConfig calibrate(const Dataset& ds, SolverKind solver, const SolverConfig& base) {
    const std::vector<Problem> val = select_fold(ds, Fold::Val);
    if (val.empty()) throw std::runtime_error("calibrate: dataset has no val fold");
    switch (solver) {
        case SolverKind::Rw: return calibrate_rw(val, base);
        case SolverKind::Pc: return calibrate_pc(val, base);
        case SolverKind::Opt: return calibrate_opt(val, base);
        default: return base;
    }
}

} // namespace blicket
