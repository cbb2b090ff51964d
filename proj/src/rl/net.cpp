#include "rl/net.hpp"

#include <cmath>

#include "core/error.hpp"

namespace stlshield::rl {

Mlp::Mlp(std::vector<int> layer_sizes, Rng& init_rng) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw Error(ErrorCode::Argument, "Mlp needs at least two layer sizes");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        w_offset_.push_back(total);
        total += static_cast<std::size_t>(sizes_[l] * sizes_[l + 1]);
        b_offset_.push_back(total);
        total += static_cast<std::size_t>(sizes_[l + 1]);
    }
    params.assign(total, 0.0);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        double bound = std::sqrt(6.0 / static_cast<double>(sizes_[l] + sizes_[l + 1]));
        double* w = params.data() + w_offset_[l];
        for (int i = 0; i < sizes_[l] * sizes_[l + 1]; ++i) {
            w[i] = init_rng.uniform(-bound, bound);
        }
        // biases start at zero
    }
}

void Mlp::forward(const double* in, Workspace& ws) const {
    std::size_t layers = sizes_.size();
    ws.acts.resize(layers);
    ws.acts[0].assign(in, in + sizes_[0]);
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        int nin = sizes_[l];
        int nout = sizes_[l + 1];
        const double* w = params.data() + w_offset_[l];
        const double* b = params.data() + b_offset_[l];
        const std::vector<double>& h = ws.acts[l];
        std::vector<double>& out = ws.acts[l + 1];
        out.assign(static_cast<std::size_t>(nout), 0.0);
        for (int o = 0; o < nout; ++o) {
            double z = b[o];
            const double* row = w + static_cast<std::size_t>(o) * nin;
            for (int i = 0; i < nin; ++i) z += row[i] * h[static_cast<std::size_t>(i)];
            bool last = (l + 2 == layers);
            out[static_cast<std::size_t>(o)] = last ? z : std::tanh(z);
        }
    }
}

void Mlp::backward(const Workspace& ws, const double* dout, std::vector<double>& grad,
                   std::vector<double>* din) const {
    std::size_t layers = sizes_.size();
    std::vector<double> dh(ws.acts.back().size());
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] = dout[i];

    for (std::size_t l = layers - 1; l-- > 0;) {
        int nin = sizes_[l];
        int nout = sizes_[l + 1];
        const double* w = params.data() + w_offset_[l];
        double* gw = grad.data() + w_offset_[l];
        double* gb = grad.data() + b_offset_[l];
        const std::vector<double>& h_prev = ws.acts[l];
        const std::vector<double>& h_cur = ws.acts[l + 1];

        // dz: through tanh for hidden layers, identity for the output layer.
        std::vector<double> dz(static_cast<std::size_t>(nout));
        bool last = (l + 2 == layers);
        for (int o = 0; o < nout; ++o) {
            double g = dh[static_cast<std::size_t>(o)];
            if (!last) {
                double hv = h_cur[static_cast<std::size_t>(o)];
                g *= (1.0 - hv * hv);
            }
            dz[static_cast<std::size_t>(o)] = g;
        }
        std::vector<double> dprev(static_cast<std::size_t>(nin), 0.0);
        for (int o = 0; o < nout; ++o) {
            double g = dz[static_cast<std::size_t>(o)];
            const double* row = w + static_cast<std::size_t>(o) * nin;
            double* grow = gw + static_cast<std::size_t>(o) * nin;
            for (int i = 0; i < nin; ++i) {
                grow[i] += g * h_prev[static_cast<std::size_t>(i)];
                dprev[static_cast<std::size_t>(i)] += g * row[i];
            }
            gb[o] += g;
        }
        dh = std::move(dprev);
    }
    if (din) *din = dh;
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw Error(ErrorCode::Argument, "Adam: size mismatch");
    }
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        double mhat = m_[i] / bc1;
        double vhat = v_[i] / bc2;
        params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
}

}  // namespace stlshield::rl
