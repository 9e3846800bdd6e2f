#include "soc/nn/adam.hpp"

#include <cmath>

namespace soc::nn {

Adam::Adam(ParamStore& params, AdamConfig cfg) : params_(&params), cfg_(cfg) {
    m_.reserve(params.count());
    v_.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        m_.emplace_back(params.value(static_cast<int>(i)).shape);
        v_.emplace_back(params.value(static_cast<int>(i)).shape);
    }
}

void Adam::step() {
    auto& grads = params_->grads();
    if (cfg_.clip_norm > 0.0) {
        double sq = 0.0;
        for (const auto& g : grads) {
            for (double x : g.data) sq += x * x;
        }
        const double norm = std::sqrt(sq);
        if (norm > cfg_.clip_norm) {
            const double s = cfg_.clip_norm / norm;
            for (auto& g : grads) {
                for (double& x : g.data) x *= s;
            }
        }
    }

    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t p = 0; p < grads.size(); ++p) {
        auto& theta = params_->value(static_cast<int>(p)).data;
        const auto& g = grads[p].data;
        auto& m = m_[p].data;
        auto& v = v_[p].data;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            theta[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

}  // namespace soc::nn
