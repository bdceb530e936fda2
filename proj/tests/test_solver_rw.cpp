#include <doctest.h>

#include "blicket/generator.hpp"
#include "blicket/solver_rw.hpp"
#include "canonical.hpp"

using namespace blicket;
using namespace blicket::rw;

TEST_CASE("covariation scores on the direct pattern") {
    const auto scores = fit_scores(canon::direct());
    CHECK(scores.at(0) == doctest::Approx(1.0));
    CHECK(scores.at(1) == doctest::Approx(0.5));
    CHECK(scores.at(7) == 0.0); // never observed
}

TEST_CASE("screening-off inflates the tag-along score") {
    // C rides along on an activated trial, so covariation cannot screen it off.
    const auto scores = fit_scores(canon::screening());
    CHECK(scores.at(0) == doctest::Approx(1.0));
    CHECK(scores.at(2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("readout thresholds the best member, ties high") {
    const auto scores = fit_scores(canon::direct());
    CHECK(predict_rw(scores, {0}, 0.5) == Label::Activated);
    CHECK(predict_rw(scores, {1}, 0.5) == Label::Activated); // 0.5 reaches theta
    CHECK(predict_rw(scores, {1}, 0.6) == Label::Inactivated);
    CHECK(predict_rw(scores, {0, 1}, 0.9) == Label::Activated);
}

TEST_CASE("covariation never answers undetermined") {
    gen::GenConfig cfg_gen;
    cfg_gen.problems_per_split = 40;
    const auto ds = gen::generate_split(SplitKind::Iid, cfg_gen, 60601);
    RwConfig cfg;
    for (const auto& task : redact(ds.problems)) {
        for (Label l : solve(task, cfg)) CHECK(l != Label::Undetermined);
    }
}

TEST_CASE("iterative variant stays in range and ranks the blicket higher") {
    const auto scores = fit_scores_iterative(canon::direct_doubled(), 0.25, 10);
    CHECK(scores.at(0) >= 0.0);
    CHECK(scores.at(0) <= 1.0);
    CHECK(scores.at(1) >= 0.0);
    CHECK(scores.at(1) <= 1.0);
    CHECK(scores.at(0) > scores.at(1));
}

TEST_CASE("solve answers every query") {
    gen::GenConfig cfg_gen;
    cfg_gen.problems_per_split = 10;
    const auto ds = gen::generate_split(SplitKind::Iid, cfg_gen, 8);
    RwConfig cfg;
    for (const auto& task : redact(ds.problems)) {
        CHECK(solve(task, cfg).size() == task.queries.size());
    }
}
