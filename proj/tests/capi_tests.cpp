// Exercises the shared library's C surface the way an external consumer
// would: only stlshield.h, no core headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "stlshield/stlshield.h"

namespace fs = std::filesystem;

namespace {

struct Str {
    char* v = nullptr;
    ~Str() { ss_string_free(v); }
};

const char* kTinyConfig = R"json({
  "seed": 5,
  "world": {
    "arena": {"min": [0,0], "max": [10,10]},
    "dt": 0.1,
    "agent": {"u_max": 1.0, "d_max": 0.2},
    "goal": {"name": "goal", "shape": "disk", "center": [8,8], "radius": 1.5},
    "regions": [
      {"name": "c1", "shape": "disk", "center": [3,2], "radius": 1.0, "speed_max": 0.1,
       "script": {"type": "patrol", "a": [1.5,2], "b": [8.5,2], "speed": 0.1}}
    ]
  },
  "spec": "G[0,30] F[0,20] in(c1)",
  "horizon": 50.0,
  "eval": {"episodes": 3, "policy": "random", "mode": "shielded", "save_logs": 1, "workers": 1},
  "output": {"dir": "/tmp/stlshield_capi_run", "plots": true}
})json";

}  // namespace

TEST_CASE("formula parse / print / horizon round trip") {
    ss_formula* f = nullptr;
    REQUIRE(ss_formula_parse("G[0,210] F[0,90] (in(c1)|in(c2))", &f) == SS_OK);
    Str printed;
    REQUIRE(ss_formula_print(f, &printed.v) == SS_OK);
    CHECK(std::string(printed.v) == "G[0,210] F[0,90] (in(c1) | in(c2))");
    double h = 0.0;
    REQUIRE(ss_formula_horizon(f, &h) == SS_OK);
    CHECK(h == doctest::Approx(300.0));
    Str obligations;
    REQUIRE(ss_formula_obligations(f, &obligations.v) == SS_OK);
    CHECK(std::string(obligations.v).find("every=90") != std::string::npos);
    ss_formula_free(f);
}

TEST_CASE("error codes and messages surface through the C API") {
    ss_formula* f = nullptr;
    CHECK(ss_formula_parse("G[2,1] in(c1)", &f) == SS_ERR_INTERVAL);
    CHECK(std::string(ss_last_error()).find("bound") != std::string::npos);
    CHECK(ss_formula_parse("!in(c1)", &f) == SS_ERR_STRATIFICATION);
    CHECK(ss_formula_parse("F[0,2] (in(c1) &", &f) == SS_ERR_PARSE);
    CHECK(ss_formula_parse(nullptr, &f) == SS_ERR_ARGUMENT);

    ss_formula* u = nullptr;
    REQUIRE(ss_formula_parse("U[0,5](in(a), in(b))", &u) == SS_OK);
    Str obligations;
    CHECK(ss_formula_obligations(u, &obligations.v) == SS_ERR_UNSUPPORTED);
    ss_formula_free(u);
}

TEST_CASE("csv monitoring through the C API") {
    const char* csv = "/tmp/stlshield_capi_traj.csv";
    {
        std::ofstream out(csv);
        out << "t,x1,x2\n0,-1,0\n1,0.5,0\n2,2,0\n3,-3,0\n";
    }
    int verdict = -1;
    Str report;
    REQUIRE(ss_monitor_csv("F[0,2](x1 >= 0)", csv, nullptr, &verdict, &report.v) == SS_OK);
    CHECK(verdict == 1);
    CHECK(std::string(report.v).rfind("true", 0) == 0);

    REQUIRE(ss_monitor_csv("G[0,3](x1 >= 0)", csv, nullptr, &verdict, nullptr) == SS_OK);
    CHECK(verdict == 0);

    CHECK(ss_monitor_csv("F[0,99](x1 >= 0)", csv, nullptr, &verdict, nullptr) ==
          SS_ERR_SHORT_TRAJECTORY);
    CHECK(ss_monitor_csv("F[0,2] in(c1)", csv, nullptr, &verdict, nullptr) ==
          SS_ERR_MISSING_SIGNAL);
}

TEST_CASE("experiment lifecycle: load, override, validate, run, plot") {
    fs::remove_all("/tmp/stlshield_capi_run");
    ss_experiment* e = nullptr;
    REQUIRE(ss_experiment_load_json(kTinyConfig, &e) == SS_OK);
    REQUIRE(ss_experiment_set(e, "eval.episodes", "2") == SS_OK);
    Str summary;
    REQUIRE(ss_experiment_validate(e, &summary.v) == SS_OK);
    CHECK(std::string(summary.v).find("spec:") != std::string::npos);

    Str report;
    int asserts_ok = 0;
    REQUIRE(ss_experiment_run(e, nullptr, &report.v, &asserts_ok) == SS_OK);
    CHECK(asserts_ok == 1);
    std::string rep(report.v);
    CHECK(rep.find("\"satisfaction_rate\"") != std::string::npos);
    CHECK(fs::exists("/tmp/stlshield_capi_run/report.json"));
    CHECK(fs::exists("/tmp/stlshield_capi_run/episode_0000.csv"));
    CHECK(fs::exists("/tmp/stlshield_capi_run/trajectory.svg"));

    REQUIRE(ss_plot_render("/tmp/stlshield_capi_run") == SS_OK);
    ss_experiment_free(e);

    // config errors carry field paths
    ss_experiment* bad = nullptr;
    REQUIRE(ss_experiment_load_json(kTinyConfig, &bad) == SS_OK);
    REQUIRE(ss_experiment_set(bad, "eval.mode", "\"sideways\"") == SS_OK);
    CHECK(ss_experiment_validate(bad, nullptr) == SS_ERR_CONFIG);
    CHECK(std::string(ss_last_error()).find("eval.mode") != std::string::npos);
    ss_experiment_free(bad);
}

TEST_CASE("status names are stable") {
    CHECK(std::string(ss_status_name(SS_OK)) == "ok");
    CHECK(std::string(ss_status_name(SS_ERR_INFEASIBLE)) == "infeasible");
    CHECK(std::string(ss_version()).find("stlshield") != std::string::npos);
}
