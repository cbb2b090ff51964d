#include <doctest.h>

#include <cmath>

#include "seq/sequence.hpp"

using namespace stlshield;
using namespace stlshield::seq;

namespace {

world::WorldConfig charger_world(double charger_speed = 0.0) {
    world::WorldConfig cfg;
    cfg.arena = {{0.0, 0.0}, {20.0, 20.0}};
    cfg.dt = 0.1;
    cfg.u_max = 1.0;
    cfg.d_max = 0.2;
    cfg.goal.name = "goal";
    cfg.goal.shape = world::Shape::disk(1.0);
    cfg.goal.center0 = {15.0, 15.0};
    world::RegionSpec charger;
    charger.name = "charger";
    charger.shape = world::Shape::disk(1.0);
    charger.center0 = {0.0, 0.0};
    charger.speed_max = charger_speed;
    cfg.regions.push_back(charger);
    return cfg;
}

stl::TaskSet single_reach(double release, double deadline) {
    stl::TaskSet tasks;
    stl::Obligation ob;
    ob.alternatives = {"charger"};
    ob.release = release;
    ob.deadline = deadline;
    tasks.obligations.push_back(ob);
    return tasks;
}

Params params_for(const world::WorldConfig& cfg) {
    Params p;
    p.u_max = cfg.u_max;
    p.d_max = cfg.d_max;
    p.dt = cfg.dt;
    return p;
}

}  // namespace

TEST_CASE("generate_sequence: single static charger feasibility value") {
    world::WorldConfig cfg = charger_world();
    world::World w(cfg, 1);
    w.reset({10.0, 0.0}, 1);
    auto unrolled = unroll(single_reach(0.0, 90.0), cfg);
    Params p = params_for(cfg);
    auto seq = generate_sequence({10.0, 0.0}, 0.0, unrolled, w, p);
    REQUIRE(seq.has_value());
    REQUIRE(seq->pending.size() == 1);
    // b = 90 - 9/0.8 = 78.75
    auto chain = build_chain(*seq, w, 0.0, p);
    auto values = cbf::candidates({10.0, 0.0}, chain, p.cbf(), false);
    CHECK(values[0] == doctest::Approx(78.75));
}

TEST_CASE("generate_sequence: infeasible single task") {
    world::WorldConfig cfg = charger_world();
    world::World w(cfg, 1);
    w.reset({10.0, 0.0}, 1);
    // Dist/(u_max - d_max) = 9/0.8 = 11.25 > deadline 10
    auto unrolled = unroll(single_reach(0.0, 10.0), cfg);
    auto seq = generate_sequence({10.0, 0.0}, 0.0, unrolled, w, params_for(cfg));
    CHECK_FALSE(seq.has_value());
}

TEST_CASE("generate_sequence: earliest-deadline-first order wins") {
    world::WorldConfig cfg = charger_world();
    world::RegionSpec far;
    far.name = "far";
    far.shape = world::Shape::disk(1.0);
    far.center0 = {18.0, 0.0};
    cfg.regions.push_back(far);
    world::World w(cfg, 1);
    w.reset({10.0, 0.0}, 1);

    stl::TaskSet tasks = single_reach(0.0, 60.0);
    stl::Obligation second;
    second.alternatives = {"far"};
    second.release = 0.0;
    second.deadline = 180.0;
    second.task_index = 1;
    tasks.obligations.push_back(second);

    auto unrolled = unroll(tasks, cfg);
    std::vector<std::vector<PlannedHit>> order_log;
    auto seq = generate_sequence({10.0, 0.0}, 0.0, unrolled, w, params_for(cfg),
                                 [&](const std::vector<PlannedHit>& cand) {
                                     order_log.push_back(cand);
                                 });
    REQUIRE(seq.has_value());
    CHECK(seq->pending[0].obligation_id == 0);  // deadline 60 first
    CHECK(seq->pending[1].obligation_id == 1);
    // the first enumerated candidate is already the EDF order
    REQUIRE(!order_log.empty());
    CHECK(order_log[0][0].deadline == doctest::Approx(60.0));
}

TEST_CASE("unroll: recurring obligations get ceil((b-a)/c)+1 hits with capped deadlines") {
    world::WorldConfig cfg = charger_world();
    stl::TaskSet tasks;
    stl::Obligation ob;
    ob.alternatives = {"charger"};
    ob.release = 0.0;
    ob.deadline = 90.0;
    ob.recurrence = 90.0;
    ob.coverage = 210.0;
    tasks.obligations.push_back(ob);
    auto unrolled = unroll(tasks, cfg);
    REQUIRE(unrolled.size() == 1);
    REQUIRE(unrolled[0].size() == 4);  // ceil(210/90) + 1
    CHECK(unrolled[0][0].deadline == doctest::Approx(90.0));
    CHECK(unrolled[0][1].deadline == doctest::Approx(180.0));
    CHECK(unrolled[0][2].deadline == doctest::Approx(270.0));
    CHECK(unrolled[0][3].deadline == doctest::Approx(300.0));  // capped at coverage + c
}

TEST_CASE("enumeration visits lower-hit-count candidates first") {
    // candidates all carry the minimal unrolled hit count; the instrumented
    // order must be non-decreasing in length and start at the minimum
    world::WorldConfig cfg = charger_world();
    world::RegionSpec other = cfg.regions[0];
    other.name = "other";
    other.center0 = {4.0, 0.0};
    cfg.regions.push_back(other);
    world::World w(cfg, 1);
    w.reset({2.0, 0.0}, 1);

    stl::TaskSet tasks;
    stl::Obligation rec;
    rec.alternatives = {"charger"};
    rec.release = 0.0;
    rec.deadline = 50.0;
    rec.recurrence = 50.0;
    rec.coverage = 100.0;
    tasks.obligations.push_back(rec);
    stl::Obligation reach;
    reach.alternatives = {"other"};
    reach.release = 0.0;
    reach.deadline = 0.5;  // infeasible: forces full enumeration
    reach.task_index = 1;
    tasks.obligations.push_back(reach);

    auto unrolled = unroll(tasks, cfg);
    std::size_t minimal = 0;
    for (const auto& hits : unrolled) minimal += hits.size();
    std::vector<std::size_t> lengths;
    auto seq = generate_sequence({2.0, 0.0}, 0.0, unrolled, w, params_for(cfg),
                                 [&](const std::vector<PlannedHit>& cand) {
                                     lengths.push_back(cand.size());
                                 });
    CHECK_FALSE(seq.has_value());
    REQUIRE(!lengths.empty());
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        CHECK(lengths[i] == minimal);
        if (i > 0) CHECK(lengths[i] >= lengths[i - 1]);
    }
}

TEST_CASE("sample_feasible_state: outputs respect the necessity bound") {
    world::WorldConfig cfg = charger_world();
    world::World w(cfg, 9);
    w.reset({0.0, 0.0}, 9);
    auto unrolled = unroll(single_reach(0.0, 90.0), cfg);
    Params p = params_for(cfg);
    Rng rng(1234);
    for (int i = 0; i < 200; ++i) {
        Vec2 x0 = sample_feasible_state(unrolled, w, p, rng);
        double dist = world::signed_distance(x0, cfg.regions[0].shape, cfg.regions[0].center0);
        CHECK(dist <= 72.0 + 1e-9);  // (u_max - d_max) * deadline
        auto seq = generate_sequence(x0, 0.0, unrolled, w, p);
        CHECK(seq.has_value());
        if (seq) {
            CHECK(min_candidate(*seq, w, 0.0, p) >= -1e-9);
        }
    }
}

TEST_CASE("sample_feasible_state: trivially feasible and budget-exhausted cases") {
    world::WorldConfig cfg = charger_world();
    cfg.arena = {{-0.5, -0.5}, {0.5, 0.5}};  // entirely inside the charger disk
    world::World w(cfg, 2);
    w.reset({0.0, 0.0}, 2);
    auto unrolled = unroll(single_reach(0.0, 5.0), cfg);
    Params p = params_for(cfg);
    Rng rng(5);
    CHECK_NOTHROW(sample_feasible_state(unrolled, w, p, rng));

    // impossible deadline from outside the region
    world::WorldConfig cfg2 = charger_world();
    cfg2.arena = {{10.0, 10.0}, {20.0, 20.0}};
    world::World w2(cfg2, 3);
    w2.reset({15.0, 15.0}, 3);
    auto unrolled2 = unroll(single_reach(0.0, 0.0), cfg2);
    Params p2 = params_for(cfg2);
    p2.sample_budget = 100;
    Rng rng2(6);
    CHECK_THROWS_AS(sample_feasible_state(unrolled2, w2, p2, rng2), Error);
}

TEST_CASE("on_hit: rolling deadline for recurring hits") {
    SequenceState seq;
    PlannedHit h;
    h.obligation_id = 0;
    h.alt_regions = {0};
    h.recurring = true;
    h.recurrence = 90.0;
    h.coverage = 210.0;
    h.deadline = 90.0;
    seq.pending = {h, h, h, h};
    seq.pending[1].deadline = 180.0;
    seq.pending[2].deadline = 270.0;
    seq.pending[3].deadline = 300.0;

    on_hit(seq, 40.0);
    REQUIRE(seq.pending.size() == 3);
    CHECK(seq.pending[0].deadline == doctest::Approx(130.0));  // t_hit + c
    CHECK(seq.pending[1].deadline == doctest::Approx(220.0));
    CHECK(seq.pending[2].deadline == doctest::Approx(300.0));  // capped at coverage + c

    // hit at or past the coverage time terminates the obligation
    on_hit(seq, 215.0);
    CHECK(seq.pending.empty());
}

TEST_CASE("on_hit: plan exhaustion appends a rolled hit") {
    SequenceState seq;
    PlannedHit h;
    h.obligation_id = 0;
    h.alt_regions = {0};
    h.recurring = true;
    h.recurrence = 50.0;
    h.coverage = 100.0;
    h.deadline = 50.0;
    seq.pending = {h};
    on_hit(seq, 10.0);  // early hit, plan exhausted, coverage not reached
    REQUIRE(seq.pending.size() == 1);
    CHECK(seq.pending[0].deadline == doctest::Approx(60.0));
}

TEST_CASE("on_hit: non-recurring front removal") {
    SequenceState seq;
    PlannedHit h;
    h.obligation_id = 3;
    h.alt_regions = {0};
    h.deadline = 60.0;
    seq.pending = {h};
    on_hit(seq, 12.0);
    CHECK(seq.pending.empty());
}

TEST_CASE("on_hit: never raises remaining effective times except by re-rolls") {
    SequenceState seq;
    PlannedHit a;
    a.obligation_id = 0;
    a.alt_regions = {0};
    a.deadline = 30.0;
    PlannedHit b = a;
    b.obligation_id = 1;
    b.deadline = 80.0;
    PlannedHit c = a;
    c.obligation_id = 2;
    c.deadline = 50.0;
    seq.pending = {a, c, b};
    // tau-bar of the survivors before and after the front hit
    double before_c = std::min(50.0, 80.0);
    double before_b = 80.0;
    on_hit(seq, 5.0);
    REQUIRE(seq.pending.size() == 2);
    CHECK(std::min(seq.pending[0].deadline, seq.pending[1].deadline) ==
          doctest::Approx(before_c));
    CHECK(seq.pending[1].deadline == doctest::Approx(before_b));
}

TEST_CASE("maybe_swap_alternative: adjacent alternative wins, ties keep incumbent") {
    world::WorldConfig cfg = charger_world();
    world::RegionSpec c2 = cfg.regions[0];
    c2.name = "c2";
    c2.center0 = {10.0, 4.0};
    cfg.regions.push_back(c2);
    world::World w(cfg, 1);
    Vec2 x{10.0, 3.0};  // adjacent to c2
    w.reset(x, 1);

    SequenceState seq;
    PlannedHit h;
    h.obligation_id = 0;
    h.alt_regions = {0, 1};  // charger at origin, c2 near the agent
    h.chosen_alt = 0;
    h.deadline = 90.0;
    seq.pending = {h};
    Params p = params_for(cfg);
    maybe_swap_alternative(seq, w, x, 0.0, p);
    CHECK(seq.pending[0].chosen_alt == 1);

    // single alternative: unchanged
    seq.pending[0].alt_regions = {0};
    seq.pending[0].chosen_alt = 0;
    maybe_swap_alternative(seq, w, x, 0.0, p);
    CHECK(seq.pending[0].chosen_alt == 0);

    // exact tie keeps the incumbent: duplicate region as both alternatives
    seq.pending[0].alt_regions = {1, 1};
    seq.pending[0].chosen_alt = 0;
    maybe_swap_alternative(seq, w, x, 0.0, p);
    CHECK(seq.pending[0].chosen_alt == 0);
}

TEST_CASE("dwell sample accounting") {
    CHECK(dwell_samples_needed(0.0, 0.1) == 1);
    CHECK(dwell_samples_needed(10.0, 0.1) == 101);  // entry + 100 further samples
    CHECK(dwell_samples_needed(0.25, 0.1) == 4);    // entry + ceil(2.5)
}

TEST_CASE("maybe_swap_alternative: argmax invariant under consistent scaling") {
    for (double s : {1.0, 3.0}) {
        world::WorldConfig cfg;
        cfg.arena = {{0.0, 0.0}, {20.0 * s, 20.0 * s}};
        cfg.dt = 0.1;
        cfg.u_max = 1.0;
        cfg.d_max = 0.2;
        cfg.goal.name = "goal";
        cfg.goal.shape = world::Shape::disk(1.0 * s);
        cfg.goal.center0 = {15.0 * s, 15.0 * s};
        for (int k = 0; k < 2; ++k) {
            world::RegionSpec r;
            r.name = "alt" + std::to_string(k);
            r.shape = world::Shape::disk(1.0 * s);
            r.center0 = k == 0 ? Vec2{2.0 * s, 9.0 * s} : Vec2{9.0 * s, 3.0 * s};
            cfg.regions.push_back(r);
        }
        world::World w(cfg, 1);
        Vec2 x{8.0 * s, 3.5 * s};
        w.reset(x, 1);
        SequenceState seq;
        PlannedHit h;
        h.obligation_id = 0;
        h.alt_regions = {0, 1};
        h.chosen_alt = 0;
        h.deadline = 70.0 * s;
        seq.pending = {h};
        Params p;
        p.u_max = cfg.u_max;
        p.d_max = cfg.d_max;
        p.dt = cfg.dt;
        maybe_swap_alternative(seq, w, x, 0.0, p);
        CHECK(seq.pending[0].chosen_alt == 1);  // the nearby alternative, at every scale
    }
}
