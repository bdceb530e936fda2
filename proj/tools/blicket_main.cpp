#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blicket/config.hpp"
#include "blicket/driver.hpp"
#include "blicket/eval.hpp"
#include "blicket/generator.hpp"
#include "blicket/json_io.hpp"
#include "blicket/oracle.hpp"

namespace {

using namespace blicket;

SplitKind split_from_token(const std::string& token) {
    const auto split = parse_split(token);
    if (!split) throw CLI::ValidationError("--split", "unknown split \"" + token + "\"");
    return *split;
}

std::optional<Fold> fold_from_token(const std::string& token) {
    if (token.empty() || token == "all") return std::nullopt;
    const auto fold = parse_fold(token);
    if (!fold) throw CLI::ValidationError("--fold", "unknown fold \"" + token + "\"");
    return fold;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

int cmd_generate(const std::string& split_token, int count, std::uint64_t seed,
                 const std::string& out, const std::string& scene_out) {
    gen::GenConfig cfg;
    cfg.split = split_from_token(split_token);
    cfg.problems_per_split = count;
    const Dataset ds = gen::generate_split(cfg.split, cfg, seed);

    const auto violations = gen::validate_split_structure(ds);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid split: " << v << "\n";
        return 1;
    }

    write_dataset(ds, out);
    if (!scene_out.empty()) {
        std::string scenes;
        for (const auto& p : ds.problems) {
            scenes += gen::encode_scene(p);
            scenes += '\n';
        }
        write_text_file(scene_out, scenes);
    }
    std::cout << "wrote " << ds.problems.size() << " problems to " << out << " (train "
              << ds.fold_counts.train << ", val " << ds.fold_counts.val << ", test "
              << ds.fold_counts.test << ")\n";
    return 0;
}

int cmd_solve(const std::string& solver_token, const std::string& data,
              const std::string& out, const std::string& config_path,
              const std::string& fold_token, std::uint64_t seed,
              const std::string& diagnostics_path, bool run_calibration) {
    const auto solver = parse_solver(solver_token);
    if (!solver) {
        std::cerr << "unknown solver \"" << solver_token << "\"\n";
        return 1;
    }

    RunOptions opts;
    opts.solver = *solver;
    if (!config_path.empty()) opts.config = load_solver_config(config_path);
    opts.fold = fold_from_token(fold_token);
    opts.baseline_seed = seed;

    const Dataset ds = read_dataset(data);
    if (run_calibration) {
        opts.config = calibrate(ds, opts.solver, opts.config);
        std::cout << "calibrated on val fold:\n" << solver_config_to_json(opts.config) << "\n";
    }

    std::vector<DiagnosticRecord> diagnostics;
    const bool want_diagnostics = !diagnostics_path.empty() && opts.solver == SolverKind::Opt;
    const auto predictions =
        run_solver(ds, opts, want_diagnostics ? &diagnostics : nullptr);
    eval::write_predictions(predictions, out);

    if (want_diagnostics) {
        std::string rows;
        for (const auto& d : diagnostics) {
            rows += encode_diagnostic(d);
            rows += '\n';
        }
        write_text_file(diagnostics_path, rows);
    } else if (!diagnostics_path.empty()) {
        std::cerr << "--diagnostics applies to --solver opt only; ignored\n";
    }

    std::cout << "wrote " << predictions.size() << " predictions to " << out << "\n";
    return 0;
}

int cmd_evaluate(const std::string& data, const std::string& pred, const std::string& report,
                 const std::string& summary, const std::string& fold_token,
                 const std::string& name) {
    const Dataset ds = read_dataset(data);
    const auto fold = fold_from_token(fold_token);
    const std::vector<Problem> problems = select_fold(ds, fold);
    const auto predictions = eval::read_predictions(pred);

    eval::ReportEntry entry;
    entry.solver = name;
    entry.split = std::string(to_token(ds.split));
    if (fold) entry.split += ":" + std::string(to_token(*fold));
    entry.metrics = eval::evaluate(predictions, problems);

    const std::string text = eval::render_text_report({entry});
    write_text_file(report, text);
    write_text_file(summary.empty() ? report + ".json" : summary,
                    eval::report_to_json({entry}) + "\n");
    std::cout << text;
    return 0;
}

int cmd_inspect(const std::string& data, const std::string& problem_id) {
    const Dataset ds = read_dataset(data);
    const Problem* found = nullptr;
    for (const auto& p : ds.problems) {
        if (p.problem_id == problem_id) {
            found = &p;
            break;
        }
    }
    if (found == nullptr) {
        std::cerr << "no problem with id \"" << problem_id << "\" in " << data << "\n";
        return 1;
    }
    const Problem& p = *found;

    std::printf("problem %s  (split %s, fold %s, seed %llu)\n", p.problem_id.c_str(),
                std::string(to_token(p.split)).c_str(), std::string(to_token(p.fold)).c_str(),
                static_cast<unsigned long long>(p.seed));

    const auto hs = oracle::consistent_hypotheses(p.context, static_cast<int>(p.objects.size()));
    std::printf("\nobjects (%zu), %zu consistent hypotheses\n", p.objects.size(),
                hs.hypotheses.size());
    for (const auto& o : p.objects) {
        const auto b = oracle::blicketness(hs, o.id);
        const char* verdict = b == oracle::Blicketness::Blicket        ? "blicket"
                              : b == oracle::Blicketness::NonBlicket   ? "non-blicket"
                                                                       : "undetermined";
        std::printf("  %d: %-8s %-6s %-6s  truth=%-3s  evidence=%s\n", o.id,
                    std::string(to_token(o.shape)).c_str(),
                    std::string(to_token(o.material)).c_str(),
                    std::string(to_token(o.color)).c_str(), o.is_blicket ? "yes" : "no", verdict);
    }

    std::printf("\ncontext trials\n");
    for (std::size_t i = 0; i < p.context.size(); ++i) {
        std::string ids;
        for (int id : p.context[i].objects) {
            if (!ids.empty()) ids += ",";
            ids += std::to_string(id);
        }
        std::printf("  %zu: {%s} -> %s%s\n", i, ids.c_str(),
                    p.context[i].light_on ? "on" : "off", i < 3 ? "  (familiarization)" : "");
    }

    std::printf("\nqueries\n");
    for (std::size_t i = 0; i < p.queries.size(); ++i) {
        const auto& q = p.queries[i];
        std::string ids;
        for (int id : q.objects) {
            if (!ids.empty()) ids += ",";
            ids += std::to_string(id);
        }
        std::string base = q.base_trial ? " base_trial=" + std::to_string(*q.base_trial) : "";
        std::printf("  %zu: {%s} %s%s  label=%s  type=%s\n", i, ids.c_str(),
                    std::string(to_token(q.kind)).c_str(), base.c_str(),
                    std::string(to_token(q.label)).c_str(),
                    std::string(to_token(q.type)).c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blicket-detector causal induction benchmark"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "Generate a problem split as JSONL");
    std::string g_split = "iid";
    int g_count = 1000;
    std::uint64_t g_seed = 0;
    std::string g_out, g_scene_out;
    generate->add_option("--split", g_split, "Split kind: iid, comp or sys")
        ->default_val("iid");
    generate->add_option("--count", g_count, "Problems to generate")->default_val(1000);
    generate->add_option("--seed", g_seed, "Master seed")->required();
    generate->add_option("--out", g_out, "Output JSONL path")->required();
    generate->add_option("--scene-out", g_scene_out, "Optional scene descriptor JSONL path");

    auto* solve = app.add_subcommand("solve", "Run a solver over a dataset");
    std::string s_solver, s_data, s_out, s_config, s_fold = "all", s_diag;
    std::uint64_t s_seed = 0;
    bool s_calibrate = false;
    solve->add_option("--solver", s_solver, "rw, pc, opt, always_on or random")->required();
    solve->add_option("--data", s_data, "Dataset JSONL path")->required();
    solve->add_option("--out", s_out, "Predictions JSONL path")->required();
    solve->add_option("--config", s_config, "Solver hyperparameter JSON file");
    solve->add_option("--fold", s_fold, "Restrict to fold: train, val, test or all")
        ->default_val("all");
    solve->add_option("--seed", s_seed, "Baseline sampling seed")->default_val(0);
    solve->add_option("--diagnostics", s_diag, "Per-problem fit diagnostics JSONL (opt only)");
    solve->add_flag("--calibrate", s_calibrate,
                    "Tune readout hyperparameters on the val fold first");

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against a dataset");
    std::string e_data, e_pred, e_report, e_summary, e_fold = "all", e_name = "solver";
    evaluate->add_option("--data", e_data, "Dataset JSONL path")->required();
    evaluate->add_option("--pred", e_pred, "Predictions JSONL path")->required();
    evaluate->add_option("--report", e_report, "Text report output path")->required();
    evaluate->add_option("--summary", e_summary,
                         "JSON summary output path (default: report path + .json)");
    evaluate->add_option("--fold", e_fold, "Score against fold: train, val, test or all")
        ->default_val("all");
    evaluate->add_option("--name", e_name, "Solver name for the report")->default_val("solver");

    auto* inspect = app.add_subcommand("inspect", "Pretty-print one problem with oracle notes");
    std::string i_data, i_problem;
    inspect->add_option("--data", i_data, "Dataset JSONL path")->required();
    inspect->add_option("--problem", i_problem, "Problem id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(g_split, g_count, g_seed, g_out, g_scene_out);
        if (solve->parsed()) {
            return cmd_solve(s_solver, s_data, s_out, s_config, s_fold, s_seed, s_diag,
                             s_calibrate);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(e_data, e_pred, e_report, e_summary, e_fold, e_name);
        }
        if (inspect->parsed()) return cmd_inspect(i_data, i_problem);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
