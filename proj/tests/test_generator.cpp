#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "blicket/generator.hpp"
#include "blicket/json_io.hpp"
#include "blicket/oracle.hpp"

using namespace blicket;
using namespace blicket::gen;

TEST_CASE("fold assignment follows the 6/2/2 index pattern") {
    CHECK(fold_of_index(0) == Fold::Train);
    CHECK(fold_of_index(5) == Fold::Train);
    CHECK(fold_of_index(6) == Fold::Val);
    CHECK(fold_of_index(7) == Fold::Val);
    CHECK(fold_of_index(8) == Fold::Test);
    CHECK(fold_of_index(9) == Fold::Test);
    CHECK(fold_of_index(10) == Fold::Train);
}

TEST_CASE("partition splits 48 triples 36/12 with train covering all values") {
    Rng rng(mix64(5));
    const auto part = make_partition(rng);
    CHECK(part.train_pool.size() == 36);
    CHECK(part.test_pool.size() == 12);

    std::set<AttributeTriple> train(part.train_pool.begin(), part.train_pool.end());
    for (const auto& t : part.test_pool) CHECK(!train.count(t));

    std::set<Shape> shapes;
    std::set<Material> materials;
    std::set<Color> colors;
    for (const auto& t : part.train_pool) {
        shapes.insert(t.shape);
        materials.insert(t.material);
        colors.insert(t.color);
    }
    CHECK(shapes.size() == kNumShapes);
    CHECK(materials.size() == kNumMaterials);
    CHECK(colors.size() == kNumColors);
}

TEST_CASE("familiarization is the fixed three-trial pattern") {
    Rng rng(mix64(11));
    ObjectSpec a{0, Shape::Cube, Material::Metal, Color::Gray, true};
    ObjectSpec b{1, Shape::Cube, Material::Metal, Color::Red, false};
    for (int round = 0; round < 20; ++round) {
        const auto trials = gen_familiarization(rng, a, b);
        REQUIRE(trials.size() == 3);
        CHECK(trials[2] == ContextTrial{{0, 1}, true});
        const bool a_first = trials[0] == ContextTrial{{0}, true};
        if (a_first) {
            CHECK(trials[1] == ContextTrial{{1}, false});
        } else {
            CHECK(trials[0] == ContextTrial{{1}, false});
            CHECK(trials[1] == ContextTrial{{0}, true});
        }
    }
}

TEST_CASE("generated problems are valid and oracle-labeled") {
    GenConfig cfg;
    cfg.problems_per_split = 60;
    const Dataset ds = generate_split(SplitKind::Iid, cfg, 90210);
    REQUIRE(ds.problems.size() == 60);
    for (const auto& p : ds.problems) {
        CHECK(validate_problem(p).empty());

        int independent = 0, interventional = 0;
        for (const auto& q : p.queries) {
            (q.kind == QueryKind::Independent ? independent : interventional)++;
        }
        CHECK(independent == 2);
        CHECK(interventional == 2);

        const auto hs =
            oracle::consistent_hypotheses(p.context, static_cast<int>(p.objects.size()));
        CHECK(std::find(hs.hypotheses.begin(), hs.hypotheses.end(),
                        oracle::mask_of(p.blicket_ids())) != hs.hypotheses.end());
        for (const auto& q : p.queries) {
            CHECK(oracle::label_query(hs, q.objects) == q.label);
            CHECK(oracle::classify_query_type(p.context, hs, q) == q.type);
        }
    }
}

TEST_CASE("split generation is deterministic") {
    GenConfig cfg;
    cfg.problems_per_split = 40;
    const auto a = dataset_to_string(generate_split(SplitKind::Comp, cfg, 1234));
    const auto b = dataset_to_string(generate_split(SplitKind::Comp, cfg, 1234));
    const auto c = dataset_to_string(generate_split(SplitKind::Comp, cfg, 1235));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("split structure validates for every kind") {
    for (SplitKind kind : {SplitKind::Iid, SplitKind::Comp, SplitKind::Sys}) {
        GenConfig cfg;
        cfg.split = kind;
        cfg.problems_per_split = 80;
        const Dataset ds = generate_split(kind, cfg, 777);
        CHECK(validate_split_structure(ds).empty());
    }
}

TEST_CASE("sys split pins on-trial counts per fold") {
    GenConfig cfg;
    cfg.split = SplitKind::Sys;
    cfg.problems_per_split = 50;
    const Dataset ds = generate_split(SplitKind::Sys, cfg, 31);
    for (const auto& p : ds.problems) {
        int on = 0;
        for (const auto& t : p.context) on += t.light_on;
        if (p.fold == Fold::Test) {
            CHECK(on == 4);
        } else {
            CHECK(on == 3);
        }
    }
}

TEST_CASE("label shares track the target mix") {
    GenConfig cfg;
    cfg.problems_per_split = 2000;
    const Dataset ds = generate_split(SplitKind::Iid, cfg, 20240817);
    std::array<int, 3> counts{};
    for (const auto& p : ds.problems) {
        for (const auto& q : p.queries) counts[static_cast<int>(q.label)]++;
    }
    const double total = 4.0 * static_cast<double>(ds.problems.size());
    CHECK(counts[static_cast<int>(Label::Activated)] / total ==
          doctest::Approx(0.373).epsilon(0.1));
    CHECK(counts[static_cast<int>(Label::Inactivated)] / total ==
          doctest::Approx(0.3135).epsilon(0.12));
    CHECK(counts[static_cast<int>(Label::Undetermined)] / total ==
          doctest::Approx(0.3135).epsilon(0.12));
}

TEST_CASE("scene positions are deterministic, in bounds and separated") {
    GenConfig cfg;
    cfg.problems_per_split = 5;
    const Dataset ds = generate_split(SplitKind::Iid, cfg, 4242);
    for (const auto& p : ds.problems) {
        const auto pts = scene_positions(p);
        REQUIRE(pts.size() == p.objects.size());
        for (const auto& pt : pts) {
            CHECK(pt.x >= 0.05);
            CHECK(pt.x <= 0.95);
            CHECK(pt.y >= 0.05);
            CHECK(pt.y <= 0.95);
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
                CHECK(d > 0.0);
            }
        }
        const auto again = scene_positions(p);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(pts[i].x == again[i].x);
            CHECK(pts[i].y == again[i].y);
        }
        CHECK(encode_scene(p).find(p.problem_id) != std::string::npos);
    }
}
