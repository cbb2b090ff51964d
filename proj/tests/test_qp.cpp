#include <doctest.h>

#include <cmath>

#include "core/rng.hpp"
#include "filter/bound.hpp"
#include "filter/qp.hpp"
#include "support/oracles.hpp"

using namespace stlshield;
using namespace stlshield::filter;

namespace {

}  // namespace

TEST_CASE("solve_qp: inactive constraint returns zero correction") {
    QpProblem p;
    p.a = {1.0, 0.0};
    p.r = -1.0;  // satisfied at u = 0
    p.u_rl = {0.3, 0.1};
    p.u_max = 1.0;
    p.k_eps = 1e4;
    QpSolution sol = solve_qp(p);
    CHECK(norm(sol.u_cbf) == doctest::Approx(0.0));
    CHECK(sol.eps == doctest::Approx(0.0));
    CHECK(sol.active_set == "none");
}

TEST_CASE("solve_qp: saturated input ball with slack (hand KKT)") {
    // a=(1,0), u_rl=0, u_max=1, needs a.v >= 5, k=1000 -> v=(1,0), eps=4
    QpProblem p;
    p.a = {1.0, 0.0};
    p.r = 5.0;
    p.u_rl = {0.0, 0.0};
    p.u_max = 1.0;
    p.k_eps = 1000.0;
    QpSolution sol = solve_qp(p);
    CHECK(sol.u_cbf.x == doctest::Approx(1.0));
    CHECK(sol.u_cbf.y == doctest::Approx(0.0));
    CHECK(sol.eps == doctest::Approx(4.0));
}

TEST_CASE("solve_qp: zero gradient takes the full violation as slack") {
    QpProblem p;
    p.a = {0.0, 0.0};
    p.r = 2.5;
    p.u_rl = {0.4, 0.0};
    p.u_max = 1.0;
    p.k_eps = 1e4;
    QpSolution sol = solve_qp(p);
    CHECK(norm(sol.u_cbf) == doctest::Approx(0.0));
    CHECK(sol.eps == doctest::Approx(2.5));
}

TEST_CASE("compose: identity and vector sum at the bound") {
    QpSolution zero;
    Vec2 u_rl{0.4, -0.2};
    CHECK(compose(u_rl, zero) == u_rl);

    QpSolution sol;
    sol.u_cbf = {0.4, 0.0};
    Vec2 c = compose({0.6, 0.0}, sol);
    CHECK(c.x == doctest::Approx(1.0));
    CHECK(c.y == doctest::Approx(0.0));
}

TEST_CASE("solve_qp: constraints hold and objective matches the grid oracle") {
    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        QpProblem p = oracles::random_qp(rng);
        QpSolution sol = solve_qp(p);
        Vec2 v = p.u_rl + sol.u_cbf;
        CHECK(norm(v) <= p.u_max + 1e-8);
        CHECK(sol.eps >= -1e-12);
        CHECK(dot(p.a, v) + sol.eps >= p.r - 1e-8);
        double oracle = oracles::qp_grid_oracle(p, v);
        CHECK(sol.objective <= oracle + 1e-3);
    }
}

TEST_CASE("solve_qp: slack stays tiny whenever a zero-slack point exists") {
    Rng rng(888);
    int cases = 0;
    while (cases < 300) {
        QpProblem p = oracles::random_qp(rng);
        if (norm(p.a) < 0.3) continue;
        // feasible with eps == 0 iff r <= max_{||v||<=u_max} a.v
        if (p.r > norm(p.a) * p.u_max - 1e-6) continue;
        QpSolution sol = solve_qp(p);
        CHECK(sol.eps <= 1e-6);
        ++cases;
    }
}

TEST_CASE("composed control stays inside the input ball") {
    Rng rng(999);
    for (int trial = 0; trial < 100000; ++trial) {
        QpProblem p = oracles::random_qp(rng);
        QpSolution sol = solve_qp(p);
        CHECK(norm(compose(p.u_rl, sol)) <= p.u_max + 1e-8);
    }
}

TEST_CASE("bound tracker: threshold arithmetic") {
    BoundTracker tracker;
    tracker.gamma = 1.0;
    tracker.tol_disc = BoundTracker::discretization_tolerance(1.0, 0.2, 0.1);
    CHECK(tracker.tol_disc == doctest::Approx(1.2 * 0.1 * (1.0 / 0.8 + 1.0)));

    // eps_max = 0: requires b >= -tol_disc
    CHECK(tracker.update(-tracker.tol_disc + 1e-9, 0.0));
    CHECK_FALSE(tracker.update(-tracker.tol_disc - 1e-6, 0.0));

    BoundTracker t2;
    t2.gamma = 1.0;
    t2.tol_disc = 0.27;
    t2.update(0.5, 0.8);
    CHECK(t2.update(-0.8 - 0.27 + 1e-9, 0.0));   // threshold -eps_max/gamma - tol
    CHECK_FALSE(t2.update(-1.08, 0.0));
    // segment reset clears the slack budget
    t2.start_segment();
    CHECK(t2.eps_max == 0.0);
}
