#include <doctest.h>

#include <cmath>

#include "blicket/generator.hpp"
#include "blicket/solver_pc.hpp"
#include "canonical.hpp"

using namespace blicket;
using namespace blicket::pc;

TEST_CASE("sample matrix layout: objects in id order, machine last") {
    const auto data = build_sample(canon::direct(), 2);
    REQUIRE(data.n_cols == 3);
    REQUIRE(data.rows.size() == 3);
    CHECK(data.rows[0] == std::vector<std::uint8_t>{1, 0, 1});
    CHECK(data.rows[1] == std::vector<std::uint8_t>{0, 1, 0});
    CHECK(data.rows[2] == std::vector<std::uint8_t>{1, 1, 1});
    CHECK(data.machine_col() == 2);
}

TEST_CASE("conditional mutual information matches hand-computed values") {
    // Six-row doubled direct pattern; frequencies are exact thirds.
    const auto data = build_sample(canon::direct_doubled(), 2);
    const double unconditional = 2.0 / 3.0 * std::log(1.5) + std::log(3.0) / 3.0;
    CHECK(conditional_mutual_information(data, 0, data.machine_col(), {}) ==
          doctest::Approx(unconditional).epsilon(1e-12));
    const double given_b = 2.0 / 3.0 * std::log(2.0);
    CHECK(conditional_mutual_information(data, 0, data.machine_col(), {1}) ==
          doctest::Approx(given_b).epsilon(1e-12));
}

TEST_CASE("independence verdicts follow the threshold") {
    const auto data = build_sample(canon::direct_doubled(), 2);
    CHECK(ci_test_dependent(data, 0, 2, {}, 0.01));
    CHECK(!ci_test_dependent(data, 0, 2, {}, 1.0)); // absurd threshold kills everything
}

TEST_CASE("parent recovery on duplicated canonical patterns") {
    const double eps = 0.01;
    CHECK(learn_parents(build_sample(canon::duplicated(canon::direct(), 20), 2), eps) ==
          std::vector<int>{0});
    CHECK(learn_parents(build_sample(canon::duplicated(canon::indirect(), 20), 5), eps) ==
          std::vector<int>{0, 3});
    CHECK(learn_parents(build_sample(canon::duplicated(canon::screening(), 20), 3), eps) ==
          std::vector<int>{0});
    CHECK(learn_parents(build_sample(canon::duplicated(canon::backward(), 20), 4), eps) ==
          std::vector<int>{0});
}

TEST_CASE("cpt readout: seen configurations get probabilities, unseen stay open") {
    const auto data = build_sample(canon::duplicated(canon::indirect(), 20), 5);
    const auto parents = learn_parents(data, 0.01);
    REQUIRE(parents == std::vector<int>{0, 3});
    const auto cpt = estimate_cpt(data, parents);

    CHECK(predict_pc(cpt, {0}, 0.1) == Label::Activated);
    CHECK(predict_pc(cpt, {1}, 0.1) == Label::Inactivated);  // parent config (0,0)
    CHECK(predict_pc(cpt, {3}, 0.1) == Label::Activated);    // seen via the CD trial
    CHECK(predict_pc(cpt, {0, 3}, 0.1) == Label::Undetermined); // (1,1) never observed
}

TEST_CASE("dead zone maps mid probabilities to undetermined") {
    Cpt cpt;
    cpt.parents = {0};
    cpt.table[0] = 0.45;
    cpt.table[1] = 0.97;
    CHECK(predict_pc(cpt, {0}, 0.1) == Label::Activated);
    CHECK(predict_pc(cpt, {5}, 0.1) == Label::Undetermined); // config 0 sits in the zone
    CHECK(predict_pc(cpt, {5}, 0.02) == Label::Inactivated);
}

TEST_CASE("solve answers every query deterministically") {
    gen::GenConfig cfg_gen;
    cfg_gen.problems_per_split = 30;
    const auto ds = gen::generate_split(SplitKind::Iid, cfg_gen, 515);
    PcConfig cfg;
    for (const auto& task : redact(ds.problems)) {
        const auto a = solve(task, cfg);
        const auto b = solve(task, cfg);
        CHECK(a.size() == task.queries.size());
        CHECK(a == b);
    }
}
