#include "stlshield/stlshield.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "exp/config.hpp"
#include "exp/monitor.hpp"
#include "exp/plot.hpp"
#include "exp/runner.hpp"
#include "stl/eval.hpp"
#include "stl/obligation.hpp"

using namespace stlshield;

namespace {

thread_local std::string g_last_error;

ss_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse: return SS_ERR_PARSE;
        case ErrorCode::Interval: return SS_ERR_INTERVAL;
        case ErrorCode::Stratification: return SS_ERR_STRATIFICATION;
        case ErrorCode::UnsupportedShape: return SS_ERR_UNSUPPORTED;
        case ErrorCode::ShortTrajectory: return SS_ERR_SHORT_TRAJECTORY;
        case ErrorCode::MissingSignal: return SS_ERR_MISSING_SIGNAL;
        case ErrorCode::Argument: return SS_ERR_ARGUMENT;
        case ErrorCode::Config: return SS_ERR_CONFIG;
        case ErrorCode::Io: return SS_ERR_IO;
        case ErrorCode::Infeasible: return SS_ERR_INFEASIBLE;
        case ErrorCode::Runtime: return SS_ERR_RUNTIME;
    }
    return SS_ERR_RUNTIME;
}

template <typename Fn>
ss_status guarded(Fn&& fn) {
    try {
        fn();
        return SS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SS_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return SS_ERR_RUNTIME;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ss_status require(bool cond, const char* what) {
    if (cond) return SS_OK;
    g_last_error = what;
    return SS_ERR_ARGUMENT;
}

}  // namespace

struct ss_formula {
    stl::FormulaPtr f;
};

struct ss_experiment {
    nlohmann::json raw;
};

extern "C" {

const char* ss_status_name(ss_status status) {
    switch (status) {
        case SS_OK: return "ok";
        case SS_ERR_PARSE: return "parse-error";
        case SS_ERR_INTERVAL: return "interval-error";
        case SS_ERR_STRATIFICATION: return "stratification-error";
        case SS_ERR_UNSUPPORTED: return "unsupported-shape";
        case SS_ERR_SHORT_TRAJECTORY: return "trajectory-too-short";
        case SS_ERR_MISSING_SIGNAL: return "missing-signal";
        case SS_ERR_ARGUMENT: return "argument-error";
        case SS_ERR_CONFIG: return "config-error";
        case SS_ERR_IO: return "io-error";
        case SS_ERR_INFEASIBLE: return "infeasible";
        case SS_ERR_RUNTIME: return "runtime-error";
    }
    return "unknown";
}

const char* ss_last_error(void) { return g_last_error.c_str(); }

void ss_string_free(char* s) { std::free(s); }

const char* ss_version(void) { return "stlshield 1.0.0"; }

ss_status ss_formula_parse(const char* text, ss_formula** out) {
    if (ss_status s = require(text && out, "ss_formula_parse: null argument")) return s;
    return guarded([&] {
        auto handle = new ss_formula{stl::parse(text)};
        *out = handle;
    });
}

void ss_formula_free(ss_formula* f) { delete f; }

ss_status ss_formula_print(const ss_formula* f, char** out) {
    if (ss_status s = require(f && out, "ss_formula_print: null argument")) return s;
    return guarded([&] { *out = dup_string(stl::print(*f->f)); });
}

ss_status ss_formula_horizon(const ss_formula* f, double* out) {
    if (ss_status s = require(f && out, "ss_formula_horizon: null argument")) return s;
    return guarded([&] { *out = stl::horizon(*f->f); });
}

ss_status ss_formula_obligations(const ss_formula* f, char** out) {
    if (ss_status s = require(f && out, "ss_formula_obligations: null argument")) return s;
    return guarded([&] {
        stl::TaskSet tasks = stl::normalize_tasks(*f->f);
        std::ostringstream os;
        os << "obligations: " << tasks.obligations.size() << "\n";
        for (const auto& ob : tasks.obligations) {
            os << "  task " << ob.task_index << ": visit {";
            for (std::size_t i = 0; i < ob.alternatives.size(); ++i) {
                os << (i ? "," : "") << ob.alternatives[i];
            }
            os << "} release=" << ob.release << " deadline=" << ob.deadline;
            if (ob.dwell > 0.0) os << " dwell=" << ob.dwell;
            if (ob.recurrence) {
                os << " every=" << *ob.recurrence << " until=" << ob.coverage;
            }
            os << "\n";
        }
        os << "avoidances: " << tasks.avoidances.size() << "\n";
        for (const auto& av : tasks.avoidances) {
            os << "  task " << av.task_index << ": stay outside " << av.region << " on ["
               << av.from << "," << av.until << "] (reported only, not enforced)\n";
        }
        *out = dup_string(os.str());
    });
}

ss_status ss_monitor_csv(const char* spec_text, const char* csv_path, const char* config_path,
                         int* verdict, char** report) {
    if (ss_status s = require(spec_text && csv_path && verdict, "ss_monitor_csv: null argument")) {
        return s;
    }
    return guarded([&] {
        exp::MonitorOutcome outcome =
            exp::monitor_csv(spec_text, csv_path, config_path ? config_path : "");
        *verdict = outcome.satisfied ? 1 : 0;
        if (report) *report = dup_string(outcome.report);
    });
}

ss_status ss_experiment_load_file(const char* path, ss_experiment** out) {
    if (ss_status s = require(path && out, "ss_experiment_load_file: null argument")) return s;
    return guarded([&] { *out = new ss_experiment{exp::load_json_file(path)}; });
}

ss_status ss_experiment_load_json(const char* json_text, ss_experiment** out) {
    if (ss_status s = require(json_text && out, "ss_experiment_load_json: null argument")) return s;
    return guarded([&] {
        auto parsed = nlohmann::json::parse(json_text, nullptr, false);
        if (parsed.is_discarded()) throw Error(ErrorCode::Config, "invalid JSON text");
        *out = new ss_experiment{std::move(parsed)};
    });
}

void ss_experiment_free(ss_experiment* e) { delete e; }

ss_status ss_experiment_set(ss_experiment* e, const char* dot_key, const char* value) {
    if (ss_status s = require(e && dot_key && value, "ss_experiment_set: null argument")) return s;
    return guarded([&] { exp::apply_override(e->raw, dot_key, value); });
}

ss_status ss_experiment_validate(ss_experiment* e, char** summary) {
    if (ss_status s = require(e != nullptr, "ss_experiment_validate: null argument")) return s;
    return guarded([&] {
        exp::ExperimentConfig cfg = exp::parse_config(e->raw);
        if (summary) {
            std::ostringstream os;
            os << "spec: " << stl::print(*cfg.spec) << "\n";
            os << "horizon: " << stl::horizon(*cfg.spec) << " (episode " << cfg.horizon << ")\n";
            os << "regions: " << cfg.world.regions.size() << ", dt=" << cfg.world.dt
               << ", u_max=" << cfg.world.u_max << ", d_max=" << cfg.world.d_max << "\n";
            os << "obligations: " << cfg.tasks.obligations.size()
               << ", avoidances: " << cfg.tasks.avoidances.size();
            if (!cfg.tasks.avoidances.empty()) os << " (reported only, not enforced)";
            os << "\n";
            *summary = dup_string(os.str());
        }
    });
}

ss_status ss_experiment_run(ss_experiment* e, const char* out_dir, char** report_json,
                            int* asserts_ok) {
    if (ss_status s = require(e != nullptr, "ss_experiment_run: null argument")) return s;
    return guarded([&] {
        exp::ExperimentConfig cfg = exp::parse_config(e->raw);
        exp::RunResult res = exp::run_experiment(cfg, out_dir ? out_dir : "");
        if (report_json) *report_json = dup_string(res.report_json.dump(2));
        if (asserts_ok) *asserts_ok = res.asserts_passed ? 1 : 0;
    });
}

ss_status ss_plot_render(const char* run_dir) {
    if (ss_status s = require(run_dir != nullptr, "ss_plot_render: null argument")) return s;
    return guarded([&] { exp::render_run_plots(run_dir); });
}

}  // extern "C"
