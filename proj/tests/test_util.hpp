#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "soc/nn/tape.hpp"

namespace testutil {

/// Central finite difference of `loss` with respect to params[id].data[k].
inline double central_fd(soc::nn::ParamStore& params, int id, std::size_t k,
                         const std::function<double()>& loss, double h) {
    double& w = params.value(id).data[k];
    const double keep = w;
    w = keep + h;
    const double up = loss();
    w = keep - h;
    const double dn = loss();
    w = keep;
    return (up - dn) / (2.0 * h);
}

inline double rel_err(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

/// Largest relative error between every analytic parameter gradient and its
/// central finite difference, over all parameters in the store. Entries where
/// both sides are below `floor` are skipped (FD noise dominates there).
inline double max_grad_rel_err(soc::nn::ParamStore& params,
                               const std::function<double()>& loss,
                               const std::function<void()>& run_backward, double h,
                               double floor = 1e-10) {
    params.zero_grads();
    run_backward();
    double worst = 0.0;
    for (std::size_t id = 0; id < params.count(); ++id) {
        const soc::nn::Tensor& g = params.grad(static_cast<int>(id));
        for (std::size_t k = 0; k < g.numel(); ++k) {
            const double fd = central_fd(params, static_cast<int>(id), k, loss, h);
            if (std::abs(fd) < floor && std::abs(g.data[k]) < floor) continue;
            worst = std::max(worst, rel_err(g.data[k], fd));
        }
    }
    return worst;
}

}  // namespace testutil
