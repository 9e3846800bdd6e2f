#include "soc/doppler.hpp"

#include <cmath>
#include <stdexcept>

#include "soc/angular_delay.hpp"
#include "soc/common.hpp"

namespace soc {

namespace {

void validate(double v_u, const DopplerConfig& cfg) {
    if (v_u < 0.0) throw std::invalid_argument("doppler: speed must be >= 0");
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("doppler: lambda must be > 0");
    if (cfg.n_t < 1 || cfg.n_c < 1) throw std::invalid_argument("doppler: grid dims must be >= 1");
    if (!(cfg.bandwidth > 0.0)) throw std::invalid_argument("doppler: bandwidth must be > 0");
}

}  // namespace

CMat compensation_matrix(double v_u, double theta_v, const DopplerConfig& cfg) {
    validate(v_u, cfg);
    CMat d(static_cast<std::size_t>(cfg.n_t), static_cast<std::size_t>(cfg.n_c));
    for (int z = 0; z < cfg.n_t; ++z) {
        const double angle = grid_angle(z, cfg.n_t);
        const double radial = v_u / cfg.lambda * std::cos(theta_v - angle + cfg.phi);
        for (int q = 0; q < cfg.n_c; ++q) {
            const double ph = -2.0 * kPi * radial * grid_delay(q, cfg.bandwidth);
            d.set(static_cast<std::size_t>(z), static_cast<std::size_t>(q), std::cos(ph),
                  std::sin(ph));
        }
    }
    return d;
}

CMat elimination_matrix(double v_u, double theta_v, const DopplerConfig& cfg) {
    CMat e = compensation_matrix(v_u, theta_v, cfg);
    for (double& v : e.im.data) v = -v;
    return e;
}

CMat apply_doppler(const CMat& g, const CMat& d) { return hadamard(g, d); }

CMat remove_doppler(const CMat& g_mobile, const CMat& e) { return hadamard(g_mobile, e); }

}  // namespace soc
