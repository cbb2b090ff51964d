#include "cbf/cbf.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace stlshield::cbf {

namespace {

struct TauBars {
    std::vector<double> value;
    std::vector<int> active;
};

// Suffix minimum of tau; on ties the later index is the active branch.
TauBars tau_bars(const std::vector<ChainTask>& chain) {
    TauBars tb;
    std::size_t n = chain.size();
    tb.value.resize(n);
    tb.active.resize(n);
    double best = chain[n - 1].tau;
    int best_idx = static_cast<int>(n - 1);
    for (std::size_t k = n; k-- > 0;) {
        if (chain[k].tau < best) {
            best = chain[k].tau;
            best_idx = static_cast<int>(k);
        }
        tb.value[k] = best;
        tb.active[k] = best_idx;
    }
    return tb;
}

void check_inputs(const std::vector<ChainTask>& chain, const Params& params) {
    if (chain.empty()) {
        throw Error(ErrorCode::Argument, "sequential CBF needs a non-empty task chain");
    }
    if (params.u_max <= params.d_max) {
        throw Error(ErrorCode::Argument,
                    "sequential CBF needs u_max > d_max (disturbance-adjusted speed budget)");
    }
}

// Motion inflation uses max(tau, 0): a target cannot move for negative time.
double pos(double tau) { return std::max(tau, 0.0); }

}  // namespace

std::vector<double> candidates(const Vec2& x, const std::vector<ChainTask>& chain,
                               const Params& params, bool dwell_front) {
    check_inputs(chain, params);
    const double kappa = params.u_max - params.d_max;
    TauBars tb = tau_bars(chain);

    std::vector<double> b(chain.size());
    const auto& front = chain[0].target;
    double acc = world::signed_distance(x, front.shape, front.center) +
                 front.speed_max * pos(tb.value[0]);
    double dwell_sum = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i > 0) {
            const auto& prev = chain[i - 1].target;
            const auto& cur = chain[i].target;
            acc += world::sup_inf_distance(prev.shape, prev.center, cur.shape, cur.center) +
                   prev.speed_max * pos(tb.value[i - 1]) + cur.speed_max * pos(tb.value[i]);
            dwell_sum += chain[i - 1].dwell_remaining;
        }
        b[i] = tb.value[i] - acc / kappa - dwell_sum;
    }
    if (dwell_front) {
        b[0] = -world::signed_distance(x, front.shape, front.center) -
               front.speed_max * params.dwell_margin_time;
    }
    return b;
}

Critical critical(const std::vector<double>& values) {
    if (values.empty()) {
        throw Error(ErrorCode::Argument, "critical: empty candidate list");
    }
    Critical c{0, values[0]};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < c.value) {
            c.index = static_cast<int>(i);
            c.value = values[i];
        }
    }
    return c;
}

Evaluation evaluate(const Vec2& x, const std::vector<ChainTask>& chain, const Params& params,
                    bool dwell_front) {
    Evaluation ev;
    ev.values = candidates(x, chain, params, dwell_front);
    ev.active_tau = tau_bars(chain).active;
    ev.dwell_mode = dwell_front;
    ev.db_dcenter.assign(chain.size(), Vec2{0.0, 0.0});

    // While a dwell is in progress the containment barrier is the enforced
    // constraint regardless of downstream candidate values.
    if (dwell_front) {
        ev.critical_index = 0;
        ev.value = ev.values[0];
        ev.enforced_value = ev.value - params.dwell_depth_margin;
        const auto& front = chain[0].target;
        auto g = world::signed_distance_grad(x, front.shape, front.center);
        ev.singular = g.singular;
        ev.db_dx = -g.grad;
        ev.db_dcenter[0] = g.grad;
        ev.db_dt = 0.0;
        return ev;
    }

    Critical c = critical(ev.values);
    ev.critical_index = c.index;
    ev.value = c.value;
    ev.enforced_value = c.value;

    const double kappa = params.u_max - params.d_max;
    TauBars tb = tau_bars(chain);
    const auto& front = chain[0].target;

    auto g0 = world::signed_distance_grad(x, front.shape, front.center);
    ev.singular = g0.singular;
    ev.db_dx = -(g0.grad / kappa);
    ev.db_dcenter[0] += g0.grad / kappa;

    double speed_terms = front.speed_max * (tb.value[0] > 0.0 ? 1.0 : 0.0);
    for (int l = 1; l <= c.index; ++l) {
        const auto& prev = chain[static_cast<std::size_t>(l - 1)].target;
        const auto& cur = chain[static_cast<std::size_t>(l)].target;
        auto pg = world::sup_inf_distance_grad(prev.shape, prev.center, cur.shape, cur.center);
        ev.singular = ev.singular || pg.singular;
        ev.db_dcenter[static_cast<std::size_t>(l - 1)] -= pg.d_ca / kappa;
        ev.db_dcenter[static_cast<std::size_t>(l)] -= pg.d_cb / kappa;
        speed_terms += prev.speed_max * (tb.value[static_cast<std::size_t>(l - 1)] > 0.0 ? 1.0 : 0.0) +
                       cur.speed_max * (tb.value[static_cast<std::size_t>(l)] > 0.0 ? 1.0 : 0.0);
    }
    ev.db_dt = -1.0 + speed_terms / kappa;
    return ev;
}

}  // namespace stlshield::cbf
