#pragma once

#include "soc/mat.hpp"

namespace soc {

/// Paired square DFT matrices: V is n_t×n_t with entries
/// (1/√n_t)·e^{-j2πz(q - n_t/2)/n_t}; F is n_c×n_c with entries
/// (1/√n_c)·e^{-j2πzq/n_c}. Both are unitary.
struct DftPair {
    CMat v;
    CMat f;
};

DftPair dft_matrices(int n_t, int n_c);

/// G = V^H H F.
CMat to_angular_delay(const CMat& h, const DftPair& dft);

/// H = V G F^H; exact inverse of to_angular_delay up to rounding.
CMat from_angular_delay(const CMat& g, const DftPair& dft);

/// Convenience overloads that build the DFT pair from the matrix shape.
CMat to_angular_delay(const CMat& h);
CMat from_angular_delay(const CMat& g);

/// θ̃_z = arccos(clamp((2/n_t)·(z - ⌊(n_t-1)/2⌋))).
double grid_angle(int z, int n_t);

/// τ̃_q = q / bandwidth.
double grid_delay(int q, double bandwidth);

}  // namespace soc
