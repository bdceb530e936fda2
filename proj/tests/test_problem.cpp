#include <doctest.h>

#include <algorithm>
#include <set>

#include "blicket/json_io.hpp"
#include "blicket/problem.hpp"

using namespace blicket;

namespace {

Problem tiny_valid_problem() {
    Problem p;
    p.problem_id = "t-0";
    p.seed = 7;
    const auto space = attribute_space();
    for (int i = 0; i < 5; ++i) {
        ObjectSpec o;
        o.id = i;
        o.shape = space[static_cast<std::size_t>(i)].shape;
        o.material = space[static_cast<std::size_t>(i)].material;
        o.color = space[static_cast<std::size_t>(i)].color;
        o.is_blicket = i == 0 || i == 3;
        p.objects.push_back(o);
    }
    p.context = {{{0}, true}, {{1}, false}, {{0, 1}, true},
                 {{2, 3}, true}, {{2}, false}, {{4}, false}};
    p.queries = {
        {{0}, QueryKind::Independent, std::nullopt, Label::Activated, QueryType::Direct},
        {{2}, QueryKind::Independent, std::nullopt, Label::Inactivated, QueryType::ScreeningOff},
        {{0, 4}, QueryKind::Interventional, 5, Label::Activated, QueryType::Direct},
        {{1, 2}, QueryKind::Interventional, 4, Label::Inactivated, QueryType::Indirect},
    };
    return p;
}

} // namespace

TEST_CASE("attribute space is the 48 distinct triples in fixed order") {
    const auto space = attribute_space();
    REQUIRE(space.size() == 48);
    CHECK(space[0] == AttributeTriple{Shape::Cube, Material::Metal, Color::Gray});
    CHECK(space[1] == AttributeTriple{Shape::Cube, Material::Metal, Color::Red});
    CHECK(space[8] == AttributeTriple{Shape::Cube, Material::Rubber, Color::Gray});
    CHECK(space[16] == AttributeTriple{Shape::Sphere, Material::Metal, Color::Gray});
    CHECK(space[47] == AttributeTriple{Shape::Cylinder, Material::Rubber, Color::Yellow});
    std::set<AttributeTriple> distinct(space.begin(), space.end());
    CHECK(distinct.size() == 48);
}

TEST_CASE("enum tokens round-trip") {
    for (int i = 0; i < kNumColors; ++i) {
        const auto c = static_cast<Color>(i);
        CHECK(parse_color(to_token(c)) == c);
    }
    CHECK(parse_label("activated") == Label::Activated);
    CHECK(parse_label("inactivated") == Label::Inactivated);
    CHECK(parse_label("undetermined") == Label::Undetermined);
    CHECK(!parse_label("on").has_value());
    CHECK(parse_query_type("screening_off") == QueryType::ScreeningOff);
    CHECK(parse_query_type("backward_blocking") == QueryType::BackwardBlocking);
    CHECK(parse_split("comp") == SplitKind::Comp);
    CHECK(parse_fold("val") == Fold::Val);
    CHECK(parse_query_kind("interventional") == QueryKind::Interventional);
}

TEST_CASE("validate_problem accepts a well-formed problem") {
    CHECK(validate_problem(tiny_valid_problem()).empty());
}

TEST_CASE("validate_problem flags structural damage") {
    auto has = [](const std::vector<std::string>& v, const char* name) {
        return std::find(v.begin(), v.end(), name) != v.end();
    };

    SUBCASE("object count") {
        auto p = tiny_valid_problem();
        p.objects.pop_back();
        CHECK(has(validate_problem(p), "object-count"));
    }
    SUBCASE("mechanism consistency") {
        auto p = tiny_valid_problem();
        p.context[1].light_on = true;
        CHECK(has(validate_problem(p), "mechanism-consistency"));
    }
    SUBCASE("trial referencing unknown object") {
        auto p = tiny_valid_problem();
        p.context[0].objects = {9};
        CHECK(has(validate_problem(p), "reference-integrity"));
    }
    SUBCASE("independent query with two objects") {
        auto p = tiny_valid_problem();
        p.queries[0].objects = {0, 1};
        CHECK(has(validate_problem(p), "query-structure"));
    }
    SUBCASE("interventional query must extend an off trial") {
        auto p = tiny_valid_problem();
        p.queries[2].base_trial = 0; // an on-trial
        CHECK(has(validate_problem(p), "query-structure"));
    }
    SUBCASE("interventional query must contain its base trial") {
        auto p = tiny_valid_problem();
        p.queries[2].objects = {0}; // drops base object 4
        CHECK(has(validate_problem(p), "query-structure"));
    }
    SUBCASE("two independent queries on one object") {
        auto p = tiny_valid_problem();
        p.queries[1].objects = {0};
        p.queries[1].label = Label::Activated;
        CHECK(has(validate_problem(p), "query-independence"));
    }
    SUBCASE("duplicate attribute triples") {
        auto p = tiny_valid_problem();
        p.objects[1].shape = p.objects[0].shape;
        p.objects[1].material = p.objects[0].material;
        p.objects[1].color = p.objects[0].color;
        CHECK(has(validate_problem(p), "attribute-unique"));
    }
}

TEST_CASE("redact strips the solution and labels") {
    const auto p = tiny_valid_problem();
    const SolverTask task = redact(p);
    CHECK(task.problem_id == p.problem_id);
    CHECK(task.seed == p.seed);
    CHECK(task.n_objects == 5);
    CHECK(task.context == p.context);
    REQUIRE(task.queries.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(task.queries[i].objects == p.queries[i].objects);
        CHECK(task.queries[i].kind == p.queries[i].kind);
        CHECK(task.queries[i].base_trial == p.queries[i].base_trial);
    }
}

TEST_CASE("problem encode/decode round-trips") {
    const auto p = tiny_valid_problem();
    const std::string line = encode_problem(p);
    const Problem back = decode_problem(line);
    CHECK(back == p);
    CHECK(encode_problem(back) == line);
}

TEST_CASE("decode rejects malformed lines") {
    CHECK_THROWS_AS(decode_problem("not json"), ParseError);
    CHECK_THROWS_AS(decode_problem("{}"), ParseError);
    const auto p = tiny_valid_problem();
    std::string line = encode_problem(p);
    const auto pos = line.find("\"split\":\"iid\"");
    REQUIRE(pos != std::string::npos);
    line.replace(pos, 13, "\"split\":\"bad\"");
    CHECK_THROWS_AS(decode_problem(line), ParseError);
}

TEST_CASE("dataset string round-trip keeps order and folds") {
    Dataset ds;
    ds.split = SplitKind::Iid;
    auto a = tiny_valid_problem();
    auto b = tiny_valid_problem();
    b.problem_id = "t-1";
    b.fold = Fold::Test;
    ds.problems = {a, b};
    ds.fold_counts = count_folds(ds.problems);

    const auto text = dataset_to_string(ds);
    const Dataset back = dataset_from_string(text);
    REQUIRE(back.problems.size() == 2);
    CHECK(back.problems[0] == a);
    CHECK(back.problems[1] == b);
    CHECK(back.fold_counts.train == 1);
    CHECK(back.fold_counts.test == 1);
}
