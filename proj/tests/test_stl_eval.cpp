#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "stl/eval.hpp"
#include "support/oracles.hpp"

using namespace stlshield;
using namespace stlshield::stl;

namespace {

Trajectory scalar_traj(std::initializer_list<double> xs, double dt = 1.0) {
    Trajectory t;
    t.dt = dt;
    for (double v : xs) t.samples.push_back({v, 0.0});
    return t;
}

FormulaPtr x_ge(double c) { return make_affine(1.0, 0.0, -c, Relation::Ge); }
FormulaPtr x_le(double c) { return make_affine(1.0, 0.0, -c, Relation::Le); }

int agreement_run(int cases, std::uint64_t seed) {
    Rng rng(seed);
    int disagreements = 0;
    for (int i = 0; i < cases; ++i) {
        FormulaPtr f = oracles::random_formula(rng, 3);
        double h = horizon(*f);
        if (h > 14.0) continue;
        Trajectory tr = oracles::random_trajectory(rng, h);
        bool a = satisfies(tr, *f, 0.0);
        bool b = oracles::brute_force_holds(tr, *f, 0);
        if (a != b) {
            ++disagreements;
            CAPTURE(print(*f));
            CHECK(a == b);
        }
    }
    return disagreements;
}

}  // namespace

TEST_CASE("satisfies: spec examples") {
    Trajectory tr = scalar_traj({-1.0, 0.5, 2.0, -3.0});
    CHECK(satisfies(tr, *make_finally(0, 2, x_ge(0)), 0.0));
    CHECK_FALSE(satisfies(tr, *make_globally(0, 3, x_ge(0)), 0.0));

    Trajectory tr2 = scalar_traj({0.0, 1.0, 2.0});
    CHECK(satisfies(tr2, *make_until(0, 2, x_le(2), x_ge(2)), 0.0));
}

TEST_CASE("satisfies: until prefix starts at the evaluation time") {
    // x = [1, -1, 5]: witness for x>=5 at t=2 but the prefix x>=0 breaks at t=1
    Trajectory tr = scalar_traj({1.0, -1.0, 5.0});
    CHECK_FALSE(satisfies(tr, *make_until(0, 2, x_ge(0), x_ge(5)), 0.0));
    // with lower bound 2 the prefix still includes t=1
    CHECK_FALSE(satisfies(tr, *make_until(2, 2, x_ge(0), x_ge(5)), 0.0));
}

TEST_CASE("satisfies: trajectory-too-short error") {
    Trajectory tr = scalar_traj({1.0, 1.0});
    CHECK_THROWS_AS(satisfies(tr, *make_finally(0, 5, x_ge(0)), 0.0), Error);
    try {
        satisfies(tr, *make_finally(0, 5, x_ge(0)), 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ShortTrajectory);
    }
}

TEST_CASE("satisfies: missing region snapshots raise missing-signal") {
    Trajectory tr = scalar_traj({0.0, 0.0});
    CHECK_THROWS_AS(satisfies(tr, *make_finally(0, 1, make_region("ghost")), 0.0), Error);
}

TEST_CASE("satisfies: empty conjunction is vacuously true") {
    Trajectory tr = scalar_traj({0.0});
    CHECK(satisfies(tr, *make_empty(), 0.0));
}

TEST_CASE("satisfies: fractional interval bounds land on the enclosing sample grid") {
    // x >= 0 only at t = 1; F[0.4,0.9] at t=0 covers no grid point -> false,
    // F[0.4,1.2] covers index 1 -> true.
    Trajectory tr = scalar_traj({-1.0, 1.0, -1.0});
    CHECK_FALSE(satisfies(tr, *make_finally(0.4, 0.9, x_ge(0)), 0.0));
    CHECK(satisfies(tr, *make_finally(0.4, 1.2, x_ge(0)), 0.0));
}

TEST_CASE("satisfies agrees with the brute-force oracle") {
    CHECK(agreement_run(2000, 99) == 0);
}

TEST_CASE("monitor: per-task verdicts and witnesses") {
    Trajectory tr = scalar_traj({-1.0, 0.5, 2.0, -3.0});
    auto f = parse("F[0,2](x1 >= 0) & G[0,3](x1 >= -5)");
    MonitorReport rep = monitor(tr, *f, 0.0);
    CHECK(rep.satisfied);
    REQUIRE(rep.tasks.size() == 2);
    CHECK(rep.tasks[0].satisfied);
    CHECK(rep.tasks[0].has_witness);
    CHECK(rep.tasks[0].witness_time == doctest::Approx(1.0));

    auto g = parse("G[0,3](x1 >= 0)");
    MonitorReport rep2 = monitor(tr, *g, 0.0);
    CHECK_FALSE(rep2.satisfied);
    REQUIRE(rep2.tasks.size() == 1);
    CHECK(rep2.tasks[0].has_witness);
    CHECK(rep2.tasks[0].witness_time == doctest::Approx(0.0));
}

TEST_CASE("recurring charger task: window-coverage hand check") {
    // charger static at the origin; agent visits at the given times
    auto build = [](std::initializer_list<double> hit_times) {
        Trajectory tr;
        tr.dt = 1.0;
        long len = 301;
        auto& track = tr.regions["c1"];
        track.shape = world::Shape::disk(1.0);
        track.centers.assign(static_cast<std::size_t>(len), Vec2{0.0, 0.0});
        auto& track2 = tr.regions["c2"];
        track2.shape = world::Shape::disk(1.0);
        track2.centers.assign(static_cast<std::size_t>(len), Vec2{50.0, 50.0});
        for (long i = 0; i < len; ++i) {
            bool inside = false;
            for (double t : hit_times) {
                if (std::fabs(static_cast<double>(i) - t) < 0.5) inside = true;
            }
            tr.samples.push_back(inside ? Vec2{0.0, 0.0} : Vec2{10.0, 10.0});
        }
        return tr;
    };
    auto phi1 = parse("G[0,210] F[0,90] (in(c1) | in(c2))");
    CHECK(satisfies(build({40.0, 130.0, 215.0}), *phi1, 0.0));
    // a 95-unit gap inside [0,210] exceeds the 90-unit window
    CHECK_FALSE(satisfies(build({40.0, 135.0, 300.0}), *phi1, 0.0));
}

TEST_CASE("satisfies: nonzero start time shifts the evaluation window") {
    // x >= 0 holds only at t = 3
    Trajectory tr = scalar_traj({-1.0, -1.0, -1.0, 4.0, -1.0});
    auto f = make_finally(0, 1, x_ge(0));
    CHECK_FALSE(satisfies(tr, *f, 0.0));
    CHECK(satisfies(tr, *f, 2.0));
    CHECK(satisfies(tr, *f, 3.0));
    CHECK_THROWS_AS(satisfies(tr, *f, 4.0), Error);  // needs samples past the end
}
