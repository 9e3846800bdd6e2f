#pragma once

#include "soc/mat.hpp"

namespace soc {

struct DopplerConfig {
    double lambda = 0.0;         // center wavelength, meters
    double phi = 0.0;            // angular frame offset, radians
    int n_t = 0;                 // angle grid size
    int n_c = 0;                 // delay grid size
    double bandwidth = 0.0;      // Hz, defines the delay grid
};

/// D(z,q) = e^{-j2π (v/λ) cos(θ_v - θ̃_z + φ) τ̃_q}; unit modulus everywhere.
CMat compensation_matrix(double v_u, double theta_v, const DopplerConfig& cfg);

/// Entrywise conjugate of the compensation matrix.
CMat elimination_matrix(double v_u, double theta_v, const DopplerConfig& cfg);

/// Entrywise complex products G ∘ D and G_mobile ∘ E.
CMat apply_doppler(const CMat& g, const CMat& d);
CMat remove_doppler(const CMat& g_mobile, const CMat& e);

}  // namespace soc
