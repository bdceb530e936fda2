#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blicket {

enum class Shape { Cube, Sphere, Cylinder };
enum class Material { Metal, Rubber };
enum class Color { Gray, Red, Blue, Green, Brown, Cyan, Purple, Yellow };

enum class SplitKind { Iid, Comp, Sys };
enum class Fold { Train, Val, Test };

enum class Label { Inactivated, Undetermined, Activated };
enum class QueryKind { Independent, Interventional };
enum class QueryType { Direct, Indirect, ScreeningOff, BackwardBlocking };

inline constexpr int kNumShapes = 3;
inline constexpr int kNumMaterials = 2;
inline constexpr int kNumColors = 8;
inline constexpr int kNumTriples = kNumShapes * kNumMaterials * kNumColors;
inline constexpr int kMinObjects = 5;
inline constexpr int kMaxObjects = 8;
inline constexpr int kContextTrials = 6;
inline constexpr int kQueriesPerProblem = 4;

struct AttributeTriple {
    Shape shape{};
    Material material{};
    Color color{};
    auto operator<=>(const AttributeTriple&) const = default;
};

struct ObjectSpec {
    int id = 0;
    Shape shape{};
    Material material{};
    Color color{};
    // Hidden ground truth. Serialized under the file's "solution" section so
    // solvers can be handed problems with it stripped.
    bool is_blicket = false;

    AttributeTriple triple() const { return {shape, material, color}; }
};

struct ContextTrial {
    std::vector<int> objects; // sorted ascending, non-empty
    bool light_on = false;

    bool operator==(const ContextTrial&) const = default;
};

struct Query {
    std::vector<int> objects; // sorted ascending, non-empty
    QueryKind kind = QueryKind::Independent;
    std::optional<int> base_trial; // interventional only; indexes an off-trial
    Label label = Label::Undetermined;
    QueryType type = QueryType::Indirect;

    bool operator==(const Query&) const = default;
};

struct Problem {
    std::string problem_id;
    std::uint64_t seed = 0;
    SplitKind split = SplitKind::Iid;
    Fold fold = Fold::Train;
    std::vector<ObjectSpec> objects;
    std::vector<ContextTrial> context; // exactly 6; [0..3) familiarization, [3..6) main
    std::vector<Query> queries;        // exactly 4

    std::vector<int> blicket_ids() const;
};

bool operator==(const ObjectSpec& a, const ObjectSpec& b);
bool operator==(const Problem& a, const Problem& b);

struct FoldCounts {
    int train = 0;
    int val = 0;
    int test = 0;
};

struct Dataset {
    SplitKind split = SplitKind::Iid;
    std::vector<Problem> problems;
    FoldCounts fold_counts;
};

// Solver-facing view of a problem: context and unlabeled query configurations.
// Labels, query types and the Blicket assignment are structurally absent.
struct QueryConfig {
    std::vector<int> objects;
    QueryKind kind = QueryKind::Independent;
    std::optional<int> base_trial;
};

struct SolverTask {
    std::string problem_id;
    std::uint64_t seed = 0;
    int n_objects = 0;
    std::vector<ContextTrial> context;
    std::vector<QueryConfig> queries;
};

SolverTask redact(const Problem& p);
std::vector<SolverTask> redact(const std::vector<Problem>& problems);

// All 48 attribute triples in canonical order: shape-major, then material,
// then color.
std::vector<AttributeTriple> attribute_space();

// Names of violated invariants; empty result means the problem is valid.
// Violations are data, not failures.
std::vector<std::string> validate_problem(const Problem& p);

std::string_view to_token(Shape v);
std::string_view to_token(Material v);
std::string_view to_token(Color v);
std::string_view to_token(SplitKind v);
std::string_view to_token(Fold v);
std::string_view to_token(Label v);
std::string_view to_token(QueryKind v);
std::string_view to_token(QueryType v);

std::optional<Shape> parse_shape(std::string_view t);
std::optional<Material> parse_material(std::string_view t);
std::optional<Color> parse_color(std::string_view t);
std::optional<SplitKind> parse_split(std::string_view t);
std::optional<Fold> parse_fold(std::string_view t);
std::optional<Label> parse_label(std::string_view t);
std::optional<QueryKind> parse_query_kind(std::string_view t);
std::optional<QueryType> parse_query_type(std::string_view t);

} // namespace blicket
