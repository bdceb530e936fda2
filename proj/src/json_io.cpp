#include "blicket/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace blicket {

using json = nlohmann::ordered_json;

namespace {

json ids_to_json(const std::vector<int>& ids) { return json(ids); }

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(key, std::string("missing key \"") + key + "\"");
    }
    return *it;
}

std::string require_string(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_string()) throw ParseError(key, std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::uint64_t require_u64(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ParseError(key, std::string("\"") + key + "\" must be an integer");
    }
    return v.get<std::uint64_t>();
}

int require_int(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ParseError(key, std::string("\"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

std::vector<int> require_id_array(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_array()) throw ParseError(key, std::string("\"") + key + "\" must be an array");
    std::vector<int> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number_integer() && !e.is_number_unsigned()) {
            throw ParseError(key, std::string("\"") + key + "\" must contain integers");
        }
        out.push_back(e.get<int>());
    }
    return out;
}

template <typename Enum, typename Parser>
Enum require_token(const json& obj, const char* key, Parser parse) {
    const std::string token = require_string(obj, key);
    const auto v = parse(token);
    if (!v) throw ParseError(key, "unknown " + std::string(key) + " token \"" + token + "\"");
    return *v;
}

} // namespace

std::string encode_problem(const Problem& p) {
    json j;
    j["problem_id"] = p.problem_id;
    j["seed"] = p.seed;
    j["split"] = to_token(p.split);
    j["fold"] = to_token(p.fold);

    json objects = json::array();
    for (const auto& o : p.objects) {
        json jo;
        jo["id"] = o.id;
        jo["shape"] = to_token(o.shape);
        jo["material"] = to_token(o.material);
        jo["color"] = to_token(o.color);
        objects.push_back(std::move(jo));
    }
    j["objects"] = std::move(objects);

    json context = json::array();
    for (const auto& t : p.context) {
        json jt;
        jt["objects"] = ids_to_json(t.objects);
        jt["light"] = t.light_on ? "on" : "off";
        context.push_back(std::move(jt));
    }
    j["context"] = std::move(context);

    json queries = json::array();
    for (const auto& q : p.queries) {
        json jq;
        jq["objects"] = ids_to_json(q.objects);
        jq["kind"] = to_token(q.kind);
        if (q.base_trial) jq["base_trial"] = *q.base_trial;
        jq["label"] = to_token(q.label);
        jq["type"] = to_token(q.type);
        queries.push_back(std::move(jq));
    }
    j["queries"] = std::move(queries);

    j["solution"] = json{{"blickets", ids_to_json(p.blicket_ids())}};

    return j.dump();
}

Problem decode_problem(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError("line", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("line", "problem line must be a JSON object");

    Problem p;
    p.problem_id = require_string(j, "problem_id");
    p.seed = require_u64(j, "seed");
    p.split = require_token<SplitKind>(j, "split", parse_split);
    p.fold = require_token<Fold>(j, "fold", parse_fold);

    const json& objects = require(j, "objects");
    if (!objects.is_array()) throw ParseError("objects", "\"objects\" must be an array");
    for (const auto& jo : objects) {
        ObjectSpec o;
        o.id = require_int(jo, "id");
        o.shape = require_token<Shape>(jo, "shape", parse_shape);
        o.material = require_token<Material>(jo, "material", parse_material);
        o.color = require_token<Color>(jo, "color", parse_color);
        p.objects.push_back(o);
    }

    const json& context = require(j, "context");
    if (!context.is_array()) throw ParseError("context", "\"context\" must be an array");
    for (const auto& jt : context) {
        ContextTrial t;
        t.objects = require_id_array(jt, "objects");
        const std::string light = require_string(jt, "light");
        if (light == "on") {
            t.light_on = true;
        } else if (light == "off") {
            t.light_on = false;
        } else {
            throw ParseError("light", "unknown light token \"" + light + "\"");
        }
        p.context.push_back(std::move(t));
    }

    const json& queries = require(j, "queries");
    if (!queries.is_array()) throw ParseError("queries", "\"queries\" must be an array");
    for (const auto& jq : queries) {
        Query q;
        q.objects = require_id_array(jq, "objects");
        q.kind = require_token<QueryKind>(jq, "kind", parse_query_kind);
        if (jq.contains("base_trial")) q.base_trial = require_int(jq, "base_trial");
        q.label = require_token<Label>(jq, "label", parse_label);
        q.type = require_token<QueryType>(jq, "type", parse_query_type);
        p.queries.push_back(std::move(q));
    }

    const json& solution = require(j, "solution");
    const std::vector<int> blickets = require_id_array(solution, "blickets");
    for (int id : blickets) {
        if (id < 0 || id >= static_cast<int>(p.objects.size())) {
            throw ParseError("blickets", "blicket id out of range: " + std::to_string(id));
        }
        p.objects[id].is_blicket = true;
    }

    return p;
}

FoldCounts count_folds(const std::vector<Problem>& problems) {
    FoldCounts c;
    for (const auto& p : problems) {
        switch (p.fold) {
            case Fold::Train: ++c.train; break;
            case Fold::Val: ++c.val; break;
            case Fold::Test: ++c.test; break;
        }
    }
    return c;
}

std::string dataset_to_string(const Dataset& ds) {
    std::string out;
    for (const auto& p : ds.problems) {
        out += encode_problem(p);
        out += '\n';
    }
    return out;
}

Dataset dataset_from_string(std::string_view text) {
    Dataset ds;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (line.empty()) continue;
        try {
            ds.problems.push_back(decode_problem(line));
        } catch (const ParseError& e) {
            throw ParseError(e.field(), "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!ds.problems.empty()) ds.split = ds.problems.front().split;
    ds.fold_counts = count_folds(ds.problems);
    return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << dataset_to_string(ds);
    if (!f) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            ds.problems.push_back(decode_problem(line));
        } catch (const ParseError& e) {
            throw ParseError(e.field(), path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!ds.problems.empty()) ds.split = ds.problems.front().split;
    ds.fold_counts = count_folds(ds.problems);
    return ds;
}

} // namespace blicket
