#include "soc/angular_delay.hpp"

#include <cmath>
#include <stdexcept>

#include "soc/common.hpp"

namespace soc {

DftPair dft_matrices(int n_t, int n_c) {
    if (n_t < 1 || n_c < 1) throw std::invalid_argument("dft_matrices: dims must be >= 1");
    DftPair dft{CMat(static_cast<std::size_t>(n_t), static_cast<std::size_t>(n_t)),
                CMat(static_cast<std::size_t>(n_c), static_cast<std::size_t>(n_c))};
    const double sv = 1.0 / std::sqrt(static_cast<double>(n_t));
    for (int z = 0; z < n_t; ++z) {
        for (int q = 0; q < n_t; ++q) {
            const double ph = -2.0 * kPi * static_cast<double>(z) *
                              (static_cast<double>(q) - static_cast<double>(n_t) / 2.0) /
                              static_cast<double>(n_t);
            dft.v.set(static_cast<std::size_t>(z), static_cast<std::size_t>(q),
                      sv * std::cos(ph), sv * std::sin(ph));
        }
    }
    const double sf = 1.0 / std::sqrt(static_cast<double>(n_c));
    for (int z = 0; z < n_c; ++z) {
        for (int q = 0; q < n_c; ++q) {
            const double ph = -2.0 * kPi * static_cast<double>(z) * static_cast<double>(q) /
                              static_cast<double>(n_c);
            dft.f.set(static_cast<std::size_t>(z), static_cast<std::size_t>(q),
                      sf * std::cos(ph), sf * std::sin(ph));
        }
    }
    return dft;
}

CMat to_angular_delay(const CMat& h, const DftPair& dft) {
    if (h.rows() != dft.v.rows() || h.cols() != dft.f.rows()) {
        throw std::invalid_argument("to_angular_delay: dimension mismatch");
    }
    return cmul(cmul_herm_left(dft.v, h), dft.f);
}

CMat from_angular_delay(const CMat& g, const DftPair& dft) {
    if (g.rows() != dft.v.rows() || g.cols() != dft.f.rows()) {
        throw std::invalid_argument("from_angular_delay: dimension mismatch");
    }
    return cmul_herm_right(cmul(dft.v, g), dft.f);
}

CMat to_angular_delay(const CMat& h) {
    return to_angular_delay(h, dft_matrices(static_cast<int>(h.rows()),
                                            static_cast<int>(h.cols())));
}

CMat from_angular_delay(const CMat& g) {
    return from_angular_delay(g, dft_matrices(static_cast<int>(g.rows()),
                                              static_cast<int>(g.cols())));
}

double grid_angle(int z, int n_t) {
    if (z < 0 || z >= n_t) throw std::invalid_argument("grid_angle: index out of range");
    double arg = (2.0 / static_cast<double>(n_t)) *
                 (static_cast<double>(z) - static_cast<double>((n_t - 1) / 2));
    if (arg > 1.0) arg = 1.0;
    if (arg < -1.0) arg = -1.0;
    return std::acos(arg);
}

double grid_delay(int q, double bandwidth) {
    if (q < 0) throw std::invalid_argument("grid_delay: index out of range");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("grid_delay: bandwidth must be > 0");
    return static_cast<double>(q) / bandwidth;
}

}  // namespace soc
