#include "blicket/problem.hpp"

#include <algorithm>
#include <set>

namespace blicket {

namespace {

template <typename T, std::size_t N>
std::optional<T> parse_enum(std::string_view t, const std::array<std::string_view, N>& tokens) {
    for (std::size_t i = 0; i < N; ++i) {
        if (tokens[i] == t) return static_cast<T>(i);
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 3> kShapeTokens{"cube", "sphere", "cylinder"};
constexpr std::array<std::string_view, 2> kMaterialTokens{"metal", "rubber"};
constexpr std::array<std::string_view, 8> kColorTokens{"gray",  "red",  "blue",   "green",
                                                       "brown", "cyan", "purple", "yellow"};
constexpr std::array<std::string_view, 3> kSplitTokens{"iid", "comp", "sys"};
constexpr std::array<std::string_view, 3> kFoldTokens{"train", "val", "test"};
constexpr std::array<std::string_view, 3> kLabelTokens{"inactivated", "undetermined", "activated"};
constexpr std::array<std::string_view, 2> kKindTokens{"independent", "interventional"};
constexpr std::array<std::string_view, 4> kTypeTokens{"direct", "indirect", "screening_off",
                                                      "backward_blocking"};

} // namespace

std::string_view to_token(Shape v) { return kShapeTokens[static_cast<int>(v)]; }
std::string_view to_token(Material v) { return kMaterialTokens[static_cast<int>(v)]; }
std::string_view to_token(Color v) { return kColorTokens[static_cast<int>(v)]; }
std::string_view to_token(SplitKind v) { return kSplitTokens[static_cast<int>(v)]; }
std::string_view to_token(Fold v) { return kFoldTokens[static_cast<int>(v)]; }
std::string_view to_token(Label v) { return kLabelTokens[static_cast<int>(v)]; }
std::string_view to_token(QueryKind v) { return kKindTokens[static_cast<int>(v)]; }
std::string_view to_token(QueryType v) { return kTypeTokens[static_cast<int>(v)]; }

std::optional<Shape> parse_shape(std::string_view t) { return parse_enum<Shape>(t, kShapeTokens); }
std::optional<Material> parse_material(std::string_view t) { return parse_enum<Material>(t, kMaterialTokens); }
std::optional<Color> parse_color(std::string_view t) { return parse_enum<Color>(t, kColorTokens); }
std::optional<SplitKind> parse_split(std::string_view t) { return parse_enum<SplitKind>(t, kSplitTokens); }
std::optional<Fold> parse_fold(std::string_view t) { return parse_enum<Fold>(t, kFoldTokens); }
std::optional<Label> parse_label(std::string_view t) { return parse_enum<Label>(t, kLabelTokens); }
std::optional<QueryKind> parse_query_kind(std::string_view t) { return parse_enum<QueryKind>(t, kKindTokens); }
std::optional<QueryType> parse_query_type(std::string_view t) { return parse_enum<QueryType>(t, kTypeTokens); }

std::vector<int> Problem::blicket_ids() const {
    std::vector<int> out;
    for (const auto& o : objects) {
        if (o.is_blicket) out.push_back(o.id);
    }
    return out;
}

bool operator==(const ObjectSpec& a, const ObjectSpec& b) {
    return a.id == b.id && a.shape == b.shape && a.material == b.material && a.color == b.color &&
           a.is_blicket == b.is_blicket;
}

bool operator==(const Problem& a, const Problem& b) {
    return a.problem_id == b.problem_id && a.seed == b.seed && a.split == b.split &&
           a.fold == b.fold && a.objects == b.objects && a.context == b.context &&
           a.queries == b.queries;
}

std::vector<AttributeTriple> attribute_space() {
    std::vector<AttributeTriple> out;
    out.reserve(kNumTriples);
    for (int s = 0; s < kNumShapes; ++s) {
        for (int m = 0; m < kNumMaterials; ++m) {
            for (int c = 0; c < kNumColors; ++c) {
                out.push_back({static_cast<Shape>(s), static_cast<Material>(m), static_cast<Color>(c)});
            }
        }
    }
    return out;
}

SolverTask redact(const Problem& p) {
    SolverTask t;
    t.problem_id = p.problem_id;
    t.seed = p.seed;
    t.n_objects = static_cast<int>(p.objects.size());
    t.context = p.context;
    t.queries.reserve(p.queries.size());
    for (const auto& q : p.queries) {
        t.queries.push_back({q.objects, q.kind, q.base_trial});
    }
    return t;
}

std::vector<SolverTask> redact(const std::vector<Problem>& problems) {
    std::vector<SolverTask> out;
    out.reserve(problems.size());
    for (const auto& p : problems) out.push_back(redact(p));
    return out;
}

namespace {

bool ids_exist(const std::vector<int>& ids, int n_objects) {
    return std::all_of(ids.begin(), ids.end(),
                       [n_objects](int id) { return id >= 0 && id < n_objects; });
}

bool contains_blicket(const std::vector<int>& ids, const std::vector<ObjectSpec>& objects) {
    return std::any_of(ids.begin(), ids.end(), [&](int id) {
        return id >= 0 && id < static_cast<int>(objects.size()) && objects[id].is_blicket;
    });
}

} // namespace

std::vector<std::string> validate_problem(const Problem& p) {
    std::vector<std::string> bad;
    const auto flag = [&bad](const char* name) {
        if (std::find(bad.begin(), bad.end(), name) == bad.end()) bad.emplace_back(name);
    };

    const int n = static_cast<int>(p.objects.size());
    if (n < kMinObjects || n > kMaxObjects) flag("object-count");

    // ids dense 0..n-1 in declaration order
    for (int i = 0; i < n; ++i) {
        if (p.objects[i].id != i) {
            flag("object-ids-dense");
            break;
        }
    }

    std::set<AttributeTriple> triples;
    for (const auto& o : p.objects) {
        if (!triples.insert(o.triple()).second) flag("attribute-unique");
    }

    if (p.context.size() != kContextTrials) flag("context-count");
    if (p.queries.size() != kQueriesPerProblem) flag("query-count");

    for (const auto& t : p.context) {
        if (t.objects.empty()) flag("trial-nonempty");
        if (!ids_exist(t.objects, n)) flag("reference-integrity");
        if (t.light_on != contains_blicket(t.objects, p.objects)) flag("mechanism-consistency");
    }

    std::set<int> independent_objects;
    std::set<std::pair<int, std::vector<int>>> interventions;
    for (const auto& q : p.queries) {
        if (q.objects.empty()) flag("query-structure");
        if (!ids_exist(q.objects, n)) flag("reference-integrity");
        if (q.kind == QueryKind::Independent) {
            if (q.objects.size() != 1 || q.base_trial.has_value()) flag("query-structure");
            if (q.objects.size() == 1 && !independent_objects.insert(q.objects[0]).second) {
                flag("query-independence");
            }
        } else {
            if (!q.base_trial.has_value()) {
                flag("query-structure");
                continue;
            }
            const int bt = *q.base_trial;
            if (bt < 0 || bt >= static_cast<int>(p.context.size())) {
                flag("query-structure");
                continue;
            }
            const auto& base = p.context[bt];
            if (base.light_on) flag("query-structure");
            const bool superset = std::includes(q.objects.begin(), q.objects.end(),
                                                base.objects.begin(), base.objects.end());
            if (!superset) flag("query-structure");
            std::vector<int> added;
            std::set_difference(q.objects.begin(), q.objects.end(), base.objects.begin(),
                                base.objects.end(), std::back_inserter(added));
            if (added.empty()) flag("query-structure");
            if (!interventions.insert({bt, added}).second) flag("query-independence");
        }
    }

    return bad;
}

} // namespace blicket
