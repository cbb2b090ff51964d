#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "stl/eval.hpp"
#include "stl/obligation.hpp"

using namespace stlshield;
using namespace stlshield::stl;

namespace {

constexpr double kEps = 1e-9;

// Test-side obligation checker implementing the documented discrete rules:
// entry within [release, deadline], dwell = entry sample plus ceil(w/dt)
// consecutive in-set samples, recurring hits with rolling deadlines (first by
// a+c, next by t_hit + c, done once a hit lands at or past the coverage
// time). Avoidance windows use strict exteriority.
bool inside_any(const Trajectory& tr, const std::vector<std::string>& regions, long i) {
    for (const auto& name : regions) {
        const auto& track = tr.regions.at(name);
        if (world::signed_distance(tr.samples[static_cast<std::size_t>(i)], track.shape,
                                   track.centers[static_cast<std::size_t>(i)]) <= 0.0) {
            return true;
        }
    }
    return false;
}

bool obligation_met(const Trajectory& tr, const Obligation& ob) {
    long n = static_cast<long>(tr.samples.size());
    double dt = tr.dt;
    if (!ob.recurrence) {
        long dwell_extra = ob.dwell > 0.0
                               ? static_cast<long>(std::ceil(ob.dwell / dt - kEps))
                               : 0;
        for (long i = 0; i < n; ++i) {
            double t = static_cast<double>(i) * dt;
            if (t < ob.release - kEps || t > ob.deadline + kEps) continue;
            bool ok = true;
            for (long j = i; j <= i + dwell_extra; ++j) {
                if (j >= n || !inside_any(tr, ob.alternatives, j)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
        return false;
    }
    double next_deadline = ob.release + *ob.recurrence;
    for (long i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        if (t < ob.release - kEps) continue;
        if (t > next_deadline + kEps) return false;  // a window elapsed without a hit
        if (inside_any(tr, ob.alternatives, i)) {
            if (t >= ob.coverage - kEps) return true;
            next_deadline = t + *ob.recurrence;
        }
    }
    return false;
}

bool avoidance_met(const Trajectory& tr, const Avoidance& av) {
    const auto& track = tr.regions.at(av.region);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        double t = static_cast<double>(i) * tr.dt;
        if (t < av.from - kEps || t > av.until + kEps) continue;
        if (world::signed_distance(tr.samples[i], track.shape, track.centers[i]) <= 0.0) {
            return false;
        }
    }
    return true;
}

bool task_set_met(const Trajectory& tr, const TaskSet& tasks) {
    for (const auto& ob : tasks.obligations) {
        if (!obligation_met(tr, ob)) return false;
    }
    for (const auto& av : tasks.avoidances) {
        if (!avoidance_met(tr, av)) return false;
    }
    return true;
}

FormulaPtr region_disj(Rng& rng, int max_regions) {
    int count = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_regions)));
    FormulaPtr f = make_region("r0");
    for (int i = 1; i < count; ++i) f = make_or(f, make_region("r" + std::to_string(i)));
    return f;
}

}  // namespace

TEST_CASE("normalize: recurring charger task") {
    auto f = parse("G[0,210] F[0,90] (in(c1) | in(c2))");
    TaskSet tasks = normalize_tasks(*f);
    REQUIRE(tasks.obligations.size() == 1);
    const Obligation& ob = tasks.obligations[0];
    CHECK(ob.alternatives == std::vector<std::string>{"c1", "c2"});
    CHECK(ob.release == 0.0);
    CHECK(ob.deadline == doctest::Approx(90.0));
    REQUIRE(ob.recurrence.has_value());
    CHECK(*ob.recurrence == doctest::Approx(90.0));
    CHECK(ob.coverage == doctest::Approx(210.0));
    CHECK(ob.dwell == 0.0);
}

TEST_CASE("normalize: dwell task") {
    auto f = parse("F[150,180] G[0,10] in(t2)");
    TaskSet tasks = normalize_tasks(*f);
    REQUIRE(tasks.obligations.size() == 1);
    const Obligation& ob = tasks.obligations[0];
    CHECK(ob.release == doctest::Approx(150.0));
    CHECK(ob.deadline == doctest::Approx(180.0));
    CHECK(ob.dwell == doctest::Approx(10.0));
    CHECK_FALSE(ob.recurrence.has_value());
}

TEST_CASE("normalize: plain reach task") {
    auto f = parse("F[0,60] in(t1)");
    TaskSet tasks = normalize_tasks(*f);
    REQUIRE(tasks.obligations.size() == 1);
    CHECK(tasks.obligations[0].release == 0.0);
    CHECK(tasks.obligations[0].deadline == doctest::Approx(60.0));
    CHECK(tasks.obligations[0].dwell == 0.0);
}

TEST_CASE("normalize: full case-2 specification") {
    auto f = parse("F[0,60] G[0,10] in(t1) & F[150,180] G[0,10] in(t2) & "
                   "G[0,190] F[0,110] in(charger)");
    TaskSet tasks = normalize_tasks(*f);
    REQUIRE(tasks.obligations.size() == 3);
    CHECK(tasks.obligations[0].task_index == 0);
    CHECK(tasks.obligations[2].recurrence.has_value());
    CHECK(tasks.obligations[2].deadline == doctest::Approx(110.0));
    CHECK(tasks.obligations[2].coverage == doctest::Approx(190.0));
}

TEST_CASE("normalize: avoidance constraints are exported, not encoded") {
    auto f = parse("F[0,10] in(a) & G[0,300] (!in(obs1) & !in(obs2))");
    TaskSet tasks = normalize_tasks(*f);
    CHECK(tasks.obligations.size() == 1);
    REQUIRE(tasks.avoidances.size() == 2);
    CHECK(tasks.avoidances[0].region == "obs1");
    CHECK(tasks.avoidances[1].region == "obs2");
    CHECK(tasks.avoidances[0].until == doctest::Approx(300.0));
}

TEST_CASE("normalize: unsupported shapes are rejected with the subformula named") {
    auto check_unsupported = [](const char* text) {
        auto f = parse(text);
        try {
            normalize_tasks(*f);
            FAIL_CHECK((std::string("expected unsupported-shape for ") + text));
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnsupportedShape);
        }
    };
    check_unsupported("U[0,5](in(a), in(b))");
    check_unsupported("G[0,10] in(a)");                 // containment is not encoded
    check_unsupported("G[0,10] (!in(a) | !in(b))");     // disjunction under G
    check_unsupported("F[0,10] (x1 >= 0)");             // affine reach target
    check_unsupported("F[0,10] G[2,5] in(a)");          // dwell window must start at 0
    check_unsupported("G[0,50] F[1,9] in(a)");          // recurrence window must start at 0
    check_unsupported("F[0,10] in(a) | F[0,10] in(b)"); // top-level disjunction of tasks
}

TEST_CASE("normalize: empty specification yields no obligations") {
    TaskSet tasks = normalize_tasks(*parse(""));
    CHECK(tasks.obligations.empty());
    CHECK(tasks.avoidances.empty());
}

TEST_CASE("obligation soundness: met obligations imply satisfaction") {
    Rng rng(4242);
    int met_cases = 0;
    for (int trial = 0; trial < 400; ++trial) {
        // random supported-shape spec over regions r0..r2
        FormulaPtr spec;
        int tasks_count = 1 + static_cast<int>(rng.uniform_index(3));
        for (int k = 0; k < tasks_count; ++k) {
            double a = std::floor(rng.uniform(0.0, 4.0));
            double b = a + 2.0 + std::floor(rng.uniform(0.0, 8.0));
            FormulaPtr task;
            double roll = rng.uniform();
            if (roll < 0.35) {
                task = make_finally(a, b, region_disj(rng, 3));
            } else if (roll < 0.6) {
                double c = 1.0 + std::floor(rng.uniform(0.0, 3.0));
                task = make_finally(a, b, make_globally(0.0, c, region_disj(rng, 2)));
            } else if (roll < 0.85) {
                double c = 2.0 + std::floor(rng.uniform(0.0, 4.0));
                task = make_globally(a, b, make_finally(0.0, c, region_disj(rng, 2)));
            } else {
                task = make_globally(a, b, make_not(make_region("r2")));
            }
            spec = spec ? make_and(spec, task) : task;
        }
        TaskSet tasks = normalize_tasks(*spec);

        double h = horizon(*spec);
        Trajectory tr;
        tr.dt = 1.0;
        long len = static_cast<long>(h) + 2 + static_cast<long>(rng.uniform_index(4));
        for (long i = 0; i < len; ++i) {
            tr.samples.push_back({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)});
        }
        for (int r = 0; r < 3; ++r) {
            auto& track = tr.regions["r" + std::to_string(r)];
            track.shape = world::Shape::disk(rng.uniform(1.0, 3.0));
            Vec2 c{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            for (long i = 0; i < len; ++i) {
                c += rng.uniform_disk(0.1);
                track.centers.push_back(c);
            }
        }
        if (task_set_met(tr, tasks)) {
            ++met_cases;
            CAPTURE(print(*spec));
            CHECK(satisfies(tr, *spec, 0.0));
        }
    }
    // the co-test must not be vacuous
    CHECK(met_cases > 30);
}
