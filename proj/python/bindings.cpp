#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blicket/config.hpp"
#include "blicket/driver.hpp"
#include "blicket/eval.hpp"
#include "blicket/generator.hpp"
#include "blicket/json_io.hpp"
#include "blicket/oracle.hpp"
#include "blicket/solver_opt.hpp"

namespace py = pybind11;

namespace {

using namespace blicket;

SplitKind require_split(const std::string& token) {
    const auto split = parse_split(token);
    if (!split) throw std::invalid_argument("unknown split \"" + token + "\"");
    return *split;
}

std::optional<Fold> require_fold(const std::string& token) {
    if (token == "all") return std::nullopt;
    const auto fold = parse_fold(token);
    if (!fold) throw std::invalid_argument("unknown fold \"" + token + "\"");
    return fold;
}

std::vector<ContextTrial> to_trials(
    const std::vector<std::pair<std::vector<int>, bool>>& context) {
    std::vector<ContextTrial> trials;
    trials.reserve(context.size());
    for (const auto& [objects, light_on] : context) trials.push_back({objects, light_on});
    return trials;
}

} // namespace

PYBIND11_MODULE(_blicket, m) {
    m.doc() = "Blicket-detector causal induction benchmark core";
    m.attr("__version__") = "0.1.0";

    m.def(
        "generate",
        [](const std::string& split, int count, std::uint64_t seed) {
            gen::GenConfig cfg;
            cfg.split = require_split(split);
            cfg.problems_per_split = count;
            return dataset_to_string(gen::generate_split(cfg.split, cfg, seed));
        },
        py::arg("split"), py::arg("count"), py::arg("seed"),
        "Generate a problem split; returns JSONL, one problem per line.");

    m.def(
        "solve",
        [](const std::string& data, const std::string& solver, const std::string& config,
           const std::string& fold, std::uint64_t seed) {
            RunOptions opts;
            const auto kind = parse_solver(solver);
            if (!kind) throw std::invalid_argument("unknown solver \"" + solver + "\"");
            opts.solver = *kind;
            if (!config.empty()) opts.config = solver_config_from_json(config);
            opts.fold = require_fold(fold);
            opts.baseline_seed = seed;
            return eval::predictions_to_string(run_solver(dataset_from_string(data), opts));
        },
        py::arg("data"), py::arg("solver"), py::arg("config") = "", py::arg("fold") = "all",
        py::arg("seed") = 0,
        "Run a solver over dataset JSONL; returns prediction JSONL.");

    m.def(
        "evaluate",
        [](const std::string& data, const std::string& predictions, const std::string& fold) {
            const Dataset ds = dataset_from_string(data);
            const std::vector<Problem> problems = select_fold(ds, require_fold(fold));
            std::vector<eval::Prediction> preds;
            std::size_t pos = 0;
            while (pos < predictions.size()) {
                std::size_t end = predictions.find('\n', pos);
                if (end == std::string::npos) end = predictions.size();
                const std::string_view line(predictions.data() + pos, end - pos);
                pos = end + 1;
                if (!line.empty()) preds.push_back(eval::decode_prediction(line));
            }
            const eval::Metrics metrics = eval::evaluate(preds, problems);

            py::dict out;
            out["query_accuracy"] = metrics.query_accuracy;
            out["problem_accuracy"] = metrics.problem_accuracy;
            py::dict per_type;
            for (const auto& [type, acc] : metrics.per_type_accuracy) {
                per_type[py::str(std::string(to_token(type)))] = acc;
            }
            out["per_type_accuracy"] = per_type;
            py::list confusion;
            for (const auto& row : metrics.confusion) {
                py::list r;
                for (std::int64_t v : row) r.append(v);
                confusion.append(r);
            }
            out["confusion"] = confusion;
            out["n_problems"] = metrics.n_problems;
            return out;
        },
        py::arg("data"), py::arg("predictions"), py::arg("fold") = "all",
        "Score prediction JSONL against dataset JSONL; returns a metrics dict.");

    m.def(
        "label_query",
        [](const std::vector<std::pair<std::vector<int>, bool>>& context, int n_objects,
           const std::vector<int>& config) {
            const auto hs = oracle::consistent_hypotheses(to_trials(context), n_objects);
            return std::string(to_token(oracle::label_query(hs, config)));
        },
        py::arg("context"), py::arg("n_objects"), py::arg("config"),
        "Oracle label for a configuration given context [(object_ids, light_on), ...].");

    m.def(
        "acyclicity",
        [](const std::vector<std::vector<double>>& w) {
            const int n = static_cast<int>(w.size());
            opt::SquareMatrix mat(n);
            for (int r = 0; r < n; ++r) {
                if (static_cast<int>(w[r].size()) != n) {
                    throw std::invalid_argument("acyclicity: matrix must be square");
                }
                for (int c = 0; c < n; ++c) mat.at(r, c) = w[r][c];
            }
            return opt::acyclicity(mat).h;
        },
        py::arg("w"), "h(W) = tr(exp(W o W)) - n; zero exactly on DAGs.");

    m.def("default_config", [] { return solver_config_to_json(SolverConfig{}); },
          "Default solver hyperparameters as a JSON string.");
}
