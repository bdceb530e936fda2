#include <doctest.h>

#include <cmath>
#include <limits>

#include "blicket/generator.hpp"
#include "blicket/rng.hpp"
#include "blicket/solver_opt.hpp"
#include "canonical.hpp"

using namespace blicket;
using namespace blicket::opt;

namespace {

SquareMatrix random_weights(int n, Rng& rng) {
    SquareMatrix w(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (r != c) w.at(r, c) = rng.uniform(0.0, 1.2);
        }
    }
    return w;
}

} // namespace

TEST_CASE("acyclicity identities") {
    SquareMatrix zero(4);
    CHECK(acyclicity(zero).h == 0.0);

    SquareMatrix nilpotent(2);
    nilpotent.at(0, 1) = 1.0;
    CHECK(acyclicity(nilpotent).h == doctest::Approx(0.0).epsilon(1e-12));

    SquareMatrix upper(5);
    Rng rng(mix64(3));
    for (int r = 0; r < 5; ++r) {
        for (int c = r + 1; c < 5; ++c) upper.at(r, c) = rng.uniform(0.0, 2.0);
    }
    CHECK(acyclicity(upper).h == doctest::Approx(0.0).epsilon(1e-12));

    SquareMatrix swap(2);
    swap.at(0, 1) = 1.0;
    swap.at(1, 0) = 1.0;
    CHECK(acyclicity(swap).h ==
          doctest::Approx(2.0 * std::cosh(1.0) - 2.0).epsilon(1e-10));

    SquareMatrix cyc(3);
    cyc.at(0, 1) = 0.5;
    cyc.at(1, 2) = 0.5;
    cyc.at(2, 0) = 0.5;
    CHECK(acyclicity(cyc).h > 0.0);

    SquareMatrix bad(2);
    bad.at(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(acyclicity(bad));
}

TEST_CASE("acyclicity gradient matches central differences") {
    Rng rng(mix64(17));
    for (int n = 2; n <= 9; ++n) {
        SquareMatrix w = random_weights(n, rng);
        const auto res = acyclicity(w);
        const double eps = 1e-6;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                if (r == c) continue;
                const double kept = w.at(r, c);
                w.at(r, c) = kept + eps;
                const double hp = acyclicity(w).h;
                w.at(r, c) = kept - eps;
                const double hm = acyclicity(w).h;
                w.at(r, c) = kept;
                const double fd = (hp - hm) / (2.0 * eps);
                const double scale = std::max({1.0, std::fabs(fd), std::fabs(res.grad.at(r, c))});
                CHECK(std::fabs(res.grad.at(r, c) - fd) / scale < 1e-5);
            }
        }
    }
}

TEST_CASE("data matrix encodes trials with the machine last") {
    const auto data = build_data_matrix(canon::direct(), 2);
    REQUIRE(data.rows == 3);
    REQUIRE(data.cols == 3);
    CHECK(data.at(0, 0) == 1.0);
    CHECK(data.at(0, 1) == 0.0);
    CHECK(data.at(0, 2) == 1.0);
    CHECK(data.at(1, 0) == 0.0);
    CHECK(data.at(1, 1) == 1.0);
    CHECK(data.at(1, 2) == 0.0);
    CHECK(data.at(2, 0) == 1.0);
    CHECK(data.at(2, 1) == 1.0);
    CHECK(data.at(2, 2) == 1.0);

    std::vector<ContextTrial> rogue = {{{5}, true}};
    CHECK_THROWS_AS(build_data_matrix(rogue, 2), std::invalid_argument);
}

TEST_CASE("zero-initialized SEM is the maximum-entropy predictor") {
    const auto data = build_data_matrix(canon::direct(), 2);
    GeneralizedSem sem(3, 8, 0.0, mix64(1));
    CHECK(reconstruction_loss(sem, data) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("weighted adjacency is the first-layer column norm with zero diagonal") {
    GeneralizedSem sem(3, 2, 0.1, mix64(2));
    auto& params = sem.params();
    std::fill(params.begin(), params.end(), 0.0);
    params[static_cast<std::size_t>(sem.w1_index(2, 0, 0))] = 3.0;
    params[static_cast<std::size_t>(sem.w1_index(2, 1, 0))] = 4.0;
    params[static_cast<std::size_t>(sem.w1_index(1, 0, 0))] = 2.0;
    const auto w = sem.weighted_adjacency();
    CHECK(w.at(0, 2) == doctest::Approx(5.0));
    CHECK(w.at(0, 1) == doctest::Approx(2.0));
    CHECK(w.at(1, 2) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(w.at(i, i) == 0.0);
}

TEST_CASE("objective gradient matches central differences") {
    const auto data = build_data_matrix(canon::backward(), 4);
    GeneralizedSem sem(5, 4, 0.1, mix64(77));
    std::vector<double> grad;
    objective_and_gradient(sem, data, 0.7, 2.0, 0.01, grad);
    REQUIRE(grad.size() == sem.params().size());

    const double eps = 1e-6;
    auto& params = sem.params();
    for (std::size_t i = 0; i < params.size(); i += 7) {
        const double kept = params[i];
        std::vector<double> scratch;
        params[i] = kept + eps;
        const double fp = objective_and_gradient(sem, data, 0.7, 2.0, 0.01, scratch);
        params[i] = kept - eps;
        const double fm = objective_and_gradient(sem, data, 0.7, 2.0, 0.01, scratch);
        params[i] = kept;
        const double fd = (fp - fm) / (2.0 * eps);
        const double scale = std::max({1.0, std::fabs(fd), std::fabs(grad[i])});
        CHECK(std::fabs(grad[i] - fd) / scale < 1e-4);
    }
}

TEST_CASE("fitting is deterministic in the seed") {
    const auto data = build_data_matrix(canon::direct_doubled(), 2);
    OptConfig cfg;
    const auto a = fit_sem(data, cfg, mix64(9));
    const auto b = fit_sem(data, cfg, mix64(9));
    const auto c = fit_sem(data, cfg, mix64(10));
    CHECK(a.sem.params() == b.sem.params());
    CHECK(a.final_h == b.final_h);
    CHECK(a.sem.params() != c.sem.params());
}

TEST_CASE("canonical direct fit recovers the blicket edge") {
    const auto data = build_data_matrix(canon::direct_doubled(), 2);
    OptConfig cfg;
    const auto fit = fit_sem(data, cfg, mix64(999));
    CHECK(fit.h_converged);
    CHECK(fit.final_h < cfg.h_tol);
    const auto w = fit.sem.weighted_adjacency();
    CHECK(w.at(0, 2) > cfg.prune_threshold);
    CHECK(w.at(1, 2) < cfg.prune_threshold);
}

TEST_CASE("canonical queries read out through the fitted SEM") {
    const auto data = build_data_matrix(canon::direct_doubled(), 2);
    OptConfig cfg;
    // The solo-query probabilities hold across seeds even when the fit picks
    // an anticausal orientation; a few seeds guard against cherry-picking.
    for (std::uint64_t seed : {1ULL, 42ULL, 999ULL}) {
        const auto fit = fit_sem(data, cfg, mix64(seed));
        CHECK(infer_query(fit.sem, {0}) > 0.65);
        CHECK(infer_query(fit.sem, {1}) < 0.35);
        // pg and grid may settle at slightly different points on a flat
        // valley floor; the objectives have to agree, not the argmins
        for (int id : {0, 1}) {
            const double gap = query_objective(fit.sem, {id}, infer_query_pg(fit.sem, {id})) -
                               query_objective(fit.sem, {id}, infer_query_grid(fit.sem, {id}));
            CHECK(gap <= 1e-3);
        }
    }
}

TEST_CASE("infer_query rejects objects outside the fitted order") {
    const auto data = build_data_matrix(canon::direct(), 2);
    OptConfig cfg;
    const auto fit = fit_sem(data, cfg, mix64(4));
    CHECK_THROWS_AS(infer_query(fit.sem, {6}), std::invalid_argument);
}

TEST_CASE("label thresholds") {
    CHECK(label_from_prob(0.98, 0.35, 0.65) == Label::Activated);
    CHECK(label_from_prob(0.50, 0.35, 0.65) == Label::Undetermined);
    CHECK(label_from_prob(0.10, 0.35, 0.65) == Label::Inactivated);
    CHECK(label_from_prob(0.35, 0.35, 0.65) == Label::Undetermined);
    CHECK(label_from_prob(0.65, 0.35, 0.65) == Label::Undetermined);
}

TEST_CASE("solve is bit-stable and fills diagnostics") {
    gen::GenConfig cfg_gen;
    cfg_gen.problems_per_split = 6;
    const auto ds = gen::generate_split(SplitKind::Iid, cfg_gen, 112233);
    OptConfig cfg;
    for (const auto& task : redact(ds.problems)) {
        FitDiagnostics diag;
        const auto a = solve(task, cfg, &diag);
        const auto b = solve(task, cfg);
        CHECK(a.size() == task.queries.size());
        CHECK(a == b);
        CHECK(diag.w.n == task.n_objects + 1);
        CHECK(diag.outer_iterations >= 1);
        CHECK(diag.loss >= 0.0);
        if (diag.h_converged) CHECK(diag.h < cfg.h_tol);
    }
}

TEST_CASE("projected-gradient inference matches the grid oracle") {
    gen::GenConfig cfg_gen;
    cfg_gen.problems_per_split = 100;
    const auto ds = gen::generate_split(SplitKind::Iid, cfg_gen, 446688);
    OptConfig cfg;
    for (const auto& task : redact(ds.problems)) {
        const auto data = build_data_matrix(task.context, task.n_objects);
        const auto fit = fit_sem(data, cfg, mix64(task.seed ^ 0x6f707421ULL));
        for (const auto& q : task.queries) {
            const double p = infer_query(fit.sem, q.objects);
            const double grid = infer_query_grid(fit.sem, q.objects);
            const double gap = query_objective(fit.sem, q.objects, p) -
                               query_objective(fit.sem, q.objects, grid);
            CHECK(gap <= 1e-2);
        }
    }
}
