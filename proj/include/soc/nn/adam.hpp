#pragma once

#include <cstdint>
#include <vector>

#include "soc/nn/tape.hpp"

namespace soc::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip_norm = 5.0;  // global gradient norm cap; <= 0 disables
};

/// Adam with bias correction over every tensor in a ParamStore. Gradients
/// are read from the store's accumulators and are rescaled in place when
/// the global norm exceeds clip_norm.
class Adam {
public:
    Adam(ParamStore& params, AdamConfig cfg = {});

    void step();

    std::int64_t step_count() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    ParamStore* params_;
    AdamConfig cfg_;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    std::int64_t t_ = 0;
};

}  // namespace soc::nn
