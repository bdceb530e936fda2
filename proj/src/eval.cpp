#include "blicket/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "blicket/json_io.hpp"
#include "blicket/rng.hpp"

namespace blicket::eval {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<QueryType, 4> kTypeOrder = {QueryType::Direct, QueryType::Indirect,
                                                 QueryType::ScreeningOff,
                                                 QueryType::BackwardBlocking};

int label_index(Label l) { return static_cast<int>(l); }

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ", ";
        out += id;
    }
    return out;
}

} // namespace

Metrics evaluate(const std::vector<Prediction>& predictions,
                 const std::vector<Problem>& problems) {
    std::map<std::string, const Prediction*> by_id;
    std::vector<std::string> duplicates;
    for (const auto& pred : predictions) {
        if (!by_id.emplace(pred.problem_id, &pred).second) duplicates.push_back(pred.problem_id);
    }
    if (!duplicates.empty()) {
        throw EvalError("duplicate predictions for: " + join_ids(duplicates));
    }

    std::vector<std::string> missing;
    for (const auto& p : problems) {
        if (!by_id.count(p.problem_id)) missing.push_back(p.problem_id);
    }
    if (!missing.empty()) throw EvalError("missing predictions for: " + join_ids(missing));
    if (by_id.size() > problems.size()) {
        std::set<std::string> known;
        for (const auto& p : problems) known.insert(p.problem_id);
        std::vector<std::string> extra;
        for (const auto& [id, pred] : by_id) {
            if (!known.count(id)) extra.push_back(id);
        }
        throw EvalError("predictions for unknown problems: " + join_ids(extra));
    }

    Metrics m;
    m.n_problems = static_cast<int>(problems.size());
    std::int64_t correct = 0, total = 0, perfect = 0;
    std::map<QueryType, std::pair<std::int64_t, std::int64_t>> per_type;
    for (const auto& p : problems) {
        const Prediction& pred = *by_id.at(p.problem_id);
        int hits = 0;
        for (int i = 0; i < kQueriesPerProblem; ++i) {
            const Query& q = p.queries[static_cast<std::size_t>(i)];
            const Label got = pred.labels[static_cast<std::size_t>(i)];
            const bool hit = got == q.label;
            hits += hit;
            ++total;
            correct += hit;
            auto& [type_hits, type_total] = per_type[q.type];
            type_hits += hit;
            ++type_total;
            ++m.confusion[static_cast<std::size_t>(label_index(q.label))]
                         [static_cast<std::size_t>(label_index(got))];
        }
        perfect += hits == kQueriesPerProblem;
    }
    if (total > 0) {
        m.query_accuracy = static_cast<double>(correct) / static_cast<double>(total);
        m.problem_accuracy =
            static_cast<double>(perfect) / static_cast<double>(m.n_problems);
    }
    for (const auto& [type, counts] : per_type) {
        m.per_type_accuracy[type] =
            static_cast<double>(counts.first) / static_cast<double>(counts.second);
    }
    return m;
}

std::vector<Prediction> baseline_predict(BaselineKind kind, const std::vector<SolverTask>& tasks,
                                         std::uint64_t seed) {
    Rng rng(mix64(seed));
    std::vector<Prediction> out;
    out.reserve(tasks.size());
    for (const auto& task : tasks) {
        Prediction pred;
        pred.problem_id = task.problem_id;
        for (std::size_t i = 0; i < pred.labels.size(); ++i) {
            pred.labels[i] = kind == BaselineKind::AlwaysOn
                                 ? Label::Activated
                                 : static_cast<Label>(rng.below(3));
        }
        out.push_back(std::move(pred));
    }
    return out;
}

std::string encode_prediction(const Prediction& p) {
    json j;
    j["problem_id"] = p.problem_id;
    json labels = json::array();
    for (Label l : p.labels) labels.push_back(to_token(l));
    j["labels"] = std::move(labels);
    return j.dump();
}

Prediction decode_prediction(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError("line", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("line", "prediction line must be a JSON object");
    const auto id_it = j.find("problem_id");
    if (id_it == j.end() || !id_it->is_string()) {
        throw ParseError("problem_id", "missing or non-string \"problem_id\"");
    }
    const auto labels_it = j.find("labels");
    if (labels_it == j.end() || !labels_it->is_array() ||
        labels_it->size() != kQueriesPerProblem) {
        throw ParseError("labels", "\"labels\" must be an array of 4 strings");
    }
    Prediction p;
    p.problem_id = id_it->get<std::string>();
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
        const json& v = (*labels_it)[i];
        if (!v.is_string()) throw ParseError("labels", "\"labels\" must contain strings");
        const auto l = parse_label(v.get<std::string>());
        if (!l) throw ParseError("labels", "unknown label \"" + v.get<std::string>() + "\"");
        p.labels[i] = *l;
    }
    return p;
}

std::string predictions_to_string(const std::vector<Prediction>& predictions) {
    std::string out;
    for (const auto& p : predictions) {
        out += encode_prediction(p);
        out += '\n';
    }
    return out;
}

void write_predictions(const std::vector<Prediction>& predictions, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << predictions_to_string(predictions);
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<Prediction> read_predictions(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<Prediction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(decode_prediction(line));
        } catch (const ParseError& e) {
            throw ParseError(e.field(), path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

namespace {

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
    return buf;
}

std::string type_row_label(QueryType t) {
    switch (t) {
        case QueryType::Direct: return "D.R.";
        case QueryType::Indirect: return "I.D.";
        case QueryType::ScreeningOff: return "S.O.";
        case QueryType::BackwardBlocking: return "B.B.";
    }
    return "?";
}

} // namespace

std::string render_text_report(const std::vector<ReportEntry>& entries) {
    std::vector<std::string> splits;
    for (const auto& e : entries) {
        if (std::find(splits.begin(), splits.end(), e.split) == splits.end()) {
            splits.push_back(e.split);
        }
    }

    std::string out;
    for (const auto& split : splits) {
        std::vector<const ReportEntry*> cols;
        for (const auto& e : entries) {
            if (e.split == split) cols.push_back(&e);
        }

        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> header = {"split " + split};
        for (const auto* e : cols) header.push_back(e->solver);
        rows.push_back(std::move(header));

        std::vector<std::string> n_row = {"n"};
        for (const auto* e : cols) n_row.push_back(std::to_string(e->metrics.n_problems));
        rows.push_back(std::move(n_row));

        std::vector<std::string> qry = {"Qry."};
        std::vector<std::string> pro = {"Pro."};
        for (const auto* e : cols) {
            qry.push_back(pct(e->metrics.query_accuracy));
            pro.push_back(pct(e->metrics.problem_accuracy));
        }
        rows.push_back(std::move(qry));
        rows.push_back(std::move(pro));

        for (QueryType t : kTypeOrder) {
            std::vector<std::string> row = {type_row_label(t)};
            for (const auto* e : cols) {
                const auto it = e->metrics.per_type_accuracy.find(t);
                row.push_back(it == e->metrics.per_type_accuracy.end() ? "-" : pct(it->second));
            }
            rows.push_back(std::move(row));
        }

        std::vector<std::size_t> widths(rows[0].size(), 0);
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                widths[c] = std::max(widths[c], row[c].size());
            }
        }
        for (const auto& row : rows) {
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c) {
                const std::size_t pad = widths[c] - row[c].size();
                if (c == 0) {
                    line += row[c];
                    line.append(pad, ' ');
                } else {
                    line += "  ";
                    line.append(pad, ' ');
                    line += row[c];
                }
            }
            out += line;
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

namespace {

json metrics_to_json_obj(const Metrics& m) {
    json j;
    j["query_accuracy"] = m.query_accuracy;
    j["problem_accuracy"] = m.problem_accuracy;
    json per_type;
    for (const auto& [type, acc] : m.per_type_accuracy) per_type[to_token(type)] = acc;
    j["per_type_accuracy"] = std::move(per_type);
    json confusion = json::array();
    for (const auto& row : m.confusion) confusion.push_back(json(row));
    j["confusion"] = std::move(confusion);
    j["n_problems"] = m.n_problems;
    return j;
}

Metrics metrics_from_json_obj(const json& j) {
    Metrics m;
    m.query_accuracy = j.at("query_accuracy").get<double>();
    m.problem_accuracy = j.at("problem_accuracy").get<double>();
    for (const auto& [key, value] : j.at("per_type_accuracy").items()) {
        const auto type = parse_query_type(key);
        if (!type) throw ParseError("per_type_accuracy", "unknown query type \"" + key + "\"");
        m.per_type_accuracy[*type] = value.get<double>();
    }
    const json& confusion = j.at("confusion");
    if (!confusion.is_array() || confusion.size() != 3) {
        throw ParseError("confusion", "\"confusion\" must be a 3x3 array");
    }
    for (std::size_t r = 0; r < 3; ++r) {
        if (!confusion[r].is_array() || confusion[r].size() != 3) {
            throw ParseError("confusion", "\"confusion\" must be a 3x3 array");
        }
        for (std::size_t c = 0; c < 3; ++c) m.confusion[r][c] = confusion[r][c].get<std::int64_t>();
    }
    m.n_problems = j.at("n_problems").get<int>();
    return m;
}

} // namespace

std::string report_to_json(const std::vector<ReportEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries) {
        json j;
        j["solver"] = e.solver;
        j["split"] = e.split;
        j["metrics"] = metrics_to_json_obj(e.metrics);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

std::vector<ReportEntry> report_from_json(std::string_view text) {
    json arr;
    try {
        arr = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("report", std::string("not valid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("report", "report summary must be a JSON array");
    std::vector<ReportEntry> out;
    for (const auto& j : arr) {
        ReportEntry e;
        e.solver = j.at("solver").get<std::string>();
        e.split = j.at("split").get<std::string>();
        e.metrics = metrics_from_json_obj(j.at("metrics"));
        out.push_back(std::move(e));
    }
    return out;
}

bool operator==(const Metrics& a, const Metrics& b) {
    return a.query_accuracy == b.query_accuracy && a.problem_accuracy == b.problem_accuracy &&
           a.per_type_accuracy == b.per_type_accuracy && a.confusion == b.confusion &&
           a.n_problems == b.n_problems;
}

} // namespace blicket::eval
