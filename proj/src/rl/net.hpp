#pragma once

#include <cstddef>
#include <vector>

#include "core/rng.hpp"

namespace stlshield::rl {

// Fully connected network with tanh hidden activations and a linear output
// layer. Parameters live in one flat vector so optimizers, checkpoints, and
// finite-difference checks stay trivial. tanh keeps the loss smooth, which the
// gradient checks rely on.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> layer_sizes, Rng& init_rng);

    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    std::size_t param_count() const { return params.size(); }

    struct Workspace {
        std::vector<std::vector<double>> acts;  // acts[0] = input, acts.back() = output
    };

    void forward(const double* in, Workspace& ws) const;
    const std::vector<double>& output(const Workspace& ws) const { return ws.acts.back(); }

    // Accumulates dL/dparams into `grad` given dL/doutput; optionally returns
    // dL/dinput. `grad` must be param_count() long.
    void backward(const Workspace& ws, const double* dout, std::vector<double>& grad,
                  std::vector<double>* din) const;

    std::vector<double> params;

private:
    std::vector<int> sizes_;
    std::vector<std::size_t> w_offset_;  // per layer: weights, then biases
    std::vector<std::size_t> b_offset_;

    friend struct MlpSerializer;

public:
    const std::vector<int>& sizes() const { return sizes_; }
};

// Adam with bias correction.
class Adam {
public:
    Adam() = default;
    Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad);
    double lr() const { return lr_; }

private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

}  // namespace stlshield::rl
