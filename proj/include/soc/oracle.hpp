#pragma once

#include <complex>
#include <vector>

#include "soc/mat.hpp"
#include "soc/scene.hpp"

namespace soc {

/// One propagation path as seen at the base station.
struct Path {
    double aoa = 0.0;     // θ_p, radians from the array axis, in [0, π]
    double length = 0.0;  // d_p meters
    double delay = 0.0;   // τ_p = d_p / c seconds
    double gain = 0.0;    // α_p = ξ_p / d_p
    bool is_los = false;
};

struct PathSet {
    std::vector<Path> paths;
};

/// User terminal kinematic state.
struct UeState {
    Vec3 position;
    double speed = 0.0;      // v_u, m/s
    double direction = 0.0;  // θ_v, radians
};

/// LOS path first (when enabled), then one single-bounce path per scatterer
/// in scene order. Throws std::invalid_argument if x_u is outside the UE
/// area or coincides with the BS or a scatterer.
PathSet compute_paths(const ScattererScene& scene, const Vec3& x_u);

/// ULA response: entries e^{-j 2π k d cosθ / λ}, k = 0..n_t-1.
std::vector<std::complex<double>> array_response(double theta, int n_t, double lambda,
                                                 double spacing);

/// Subcarrier wavelengths λ_l for l = 0..N_c-1, with subcarrier frequencies
/// f_l = f_c - B/2 + l·B/N_c.
std::vector<double> subcarrier_wavelengths(const ScattererScene& scene);

/// Static CFR H (N_t × N_c): column l is Σ_p α_p e(θ_p) e^{-j 2π d_p / λ_l}.
/// The array response is evaluated at the center wavelength.
CMat static_cfr(const PathSet& paths, const ScattererScene& scene);

/// Mobile CFR: per path, the length d_p is displaced by v_u cos(θ_v - θ_p) τ_p.
CMat mobile_cfr(const PathSet& paths, const UeState& ue, const ScattererScene& scene);

/// Entrywise derivative of the static CFR with respect to displacement of
/// x_u along the in-plane unit direction (cos θ_m, sin θ_m, 0). Total
/// derivative of the closed form: covers the gain term α_p(d_p), the
/// propagation phase, and (for LOS) the drift of the arrival angle.
CMat analytic_spatial_gradient(const ScattererScene& scene, const Vec3& x_u, double theta_m);

}  // namespace soc
