#include "soc/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace soc {

namespace {

constexpr double kCoincidenceEps = 1e-9;  // meters

double aoa_from_direction(const Vec3& toward_source, const Vec3& axis) {
    const Vec3 u = toward_source.normalized();
    double c = u.dot(axis);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return std::acos(c);
}

}  // namespace

PathSet compute_paths(const ScattererScene& scene, const Vec3& x_u) {
    if (!scene.ue_area.contains_xy(x_u)) {
        throw std::invalid_argument("compute_paths: position outside the UE area");
    }
    const Vec3 to_ue = x_u - scene.bs_position;
    const double d_los = to_ue.norm();
    if (d_los < kCoincidenceEps) {
        throw std::invalid_argument("compute_paths: position coincides with the BS");
    }
    PathSet out;
    out.paths.reserve(scene.scatterers.size() + 1);
    if (scene.include_los) {
        Path p;
        p.is_los = true;
        p.aoa = aoa_from_direction(to_ue, scene.array_axis);
        p.length = d_los;
        p.delay = d_los / kSpeedOfLight;
        p.gain = 1.0 / d_los;  // ξ_LOS = 1 by convention
        out.paths.push_back(p);
    }
    for (const auto& sc : scene.scatterers) {
        const Vec3 to_sc = sc.position - scene.bs_position;
        const double d_bs_sc = to_sc.norm();
        if (d_bs_sc < kCoincidenceEps) {
            throw std::invalid_argument("compute_paths: scatterer coincides with the BS");
        }
        const double d_sc_ue = (x_u - sc.position).norm();
        if (d_sc_ue < kCoincidenceEps) {
            throw std::invalid_argument("compute_paths: position coincides with a scatterer");
        }
        Path p;
        p.aoa = aoa_from_direction(to_sc, scene.array_axis);
        p.length = d_bs_sc + d_sc_ue;
        p.delay = p.length / kSpeedOfLight;
        p.gain = sc.reflectivity / p.length;
        out.paths.push_back(p);
    }
    return out;
}

std::vector<std::complex<double>> array_response(double theta, int n_t, double lambda,
                                                 double spacing) {
    if (n_t < 1) throw std::invalid_argument("array_response: n_t must be >= 1");
    std::vector<std::complex<double>> e(static_cast<std::size_t>(n_t));
    const double phase_step = -2.0 * kPi * spacing * std::cos(theta) / lambda;
    for (int k = 0; k < n_t; ++k) {
        const double ph = phase_step * static_cast<double>(k);
        e[static_cast<std::size_t>(k)] = {std::cos(ph), std::sin(ph)};
    }
    return e;
}

std::vector<double> subcarrier_wavelengths(const ScattererScene& scene) {
    std::vector<double> lambda(static_cast<std::size_t>(scene.n_subcarriers));
    for (int l = 0; l < scene.n_subcarriers; ++l) {
        const double f = scene.center_frequency - scene.bandwidth / 2.0 +
                         static_cast<double>(l) * scene.bandwidth /
                             static_cast<double>(scene.n_subcarriers);
        lambda[static_cast<std::size_t>(l)] = kSpeedOfLight / f;
    }
    return lambda;
}

namespace {

/// Shared accumulation for static/mobile CFR: per path, an optional extra
/// length offset (Doppler displacement) added to d_p in the phase only.
CMat accumulate_cfr(const PathSet& paths, const ScattererScene& scene,
                    const std::vector<double>& extra_length) {
    if (paths.paths.empty()) throw std::invalid_argument("cfr: empty path set");
    const auto n_t = static_cast<std::size_t>(scene.n_antennas);
    const auto n_c = static_cast<std::size_t>(scene.n_subcarriers);
    const std::vector<double> lambda = subcarrier_wavelengths(scene);
    const double lambda_c = scene.wavelength();
    CMat h(n_t, n_c);
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        const Path& path = paths.paths[p];
        const auto e = array_response(path.aoa, scene.n_antennas, lambda_c,
                                      scene.antenna_spacing);
        const double d_eff = path.length + extra_length[p];
        for (std::size_t l = 0; l < n_c; ++l) {
            const double ph = -2.0 * kPi * d_eff / lambda[l];
            const std::complex<double> prop =
                path.gain * std::complex<double>(std::cos(ph), std::sin(ph));
            for (std::size_t k = 0; k < n_t; ++k) {
                const std::complex<double> v = e[k] * prop;
                h.add(k, l, v.real(), v.imag());
            }
        }
    }
    return h;
}

}  // namespace

CMat static_cfr(const PathSet& paths, const ScattererScene& scene) {
    return accumulate_cfr(paths, scene, std::vector<double>(paths.paths.size(), 0.0));
}

CMat mobile_cfr(const PathSet& paths, const UeState& ue, const ScattererScene& scene) {
    if (ue.speed < 0.0) throw std::invalid_argument("mobile_cfr: speed must be >= 0");
    std::vector<double> extra(paths.paths.size());
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        const Path& path = paths.paths[p];
        extra[p] = ue.speed * std::cos(ue.direction - path.aoa) * path.delay;
    }
    return accumulate_cfr(paths, scene, extra);
}

CMat analytic_spatial_gradient(const ScattererScene& scene, const Vec3& x_u, double theta_m) {
    const PathSet paths = compute_paths(scene, x_u);
    const Vec3 m{std::cos(theta_m), std::sin(theta_m), 0.0};
    const auto n_t = static_cast<std::size_t>(scene.n_antennas);
    const auto n_c = static_cast<std::size_t>(scene.n_subcarriers);
    const std::vector<double> lambda = subcarrier_wavelengths(scene);
    const double lambda_c = scene.wavelength();
    CMat g(n_t, n_c);

    std::size_t scatterer_idx = 0;
    for (const Path& path : paths.paths) {
        double dlen_dm = 0.0;   // ∂d_p/∂m
        double dcos_dm = 0.0;   // ∂cosθ_p/∂m (nonzero only for LOS)
        if (path.is_los) {
            const Vec3 to_ue = x_u - scene.bs_position;
            const Vec3 u = to_ue.normalized();
            dlen_dm = u.dot(m);
            const double au = scene.array_axis.dot(u);
            dcos_dm = (scene.array_axis.dot(m) - au * u.dot(m)) / path.length;
        } else {
            const Vec3& s = scene.scatterers[scatterer_idx].position;
            ++scatterer_idx;
            const Vec3 from_sc = x_u - s;
            dlen_dm = from_sc.normalized().dot(m);
        }

        const auto e = array_response(path.aoa, scene.n_antennas, lambda_c,
                                      scene.antenna_spacing);
        for (std::size_t l = 0; l < n_c; ++l) {
            const double ph = -2.0 * kPi * path.length / lambda[l];
            const std::complex<double> prop =
                path.gain * std::complex<double>(std::cos(ph), std::sin(ph));
            // d/dm of log(term): gain decay, propagation phase, AoA drift.
            const double re_factor = -dlen_dm / path.length;
            const double im_prop = -2.0 * kPi * dlen_dm / lambda[l];
            for (std::size_t k = 0; k < n_t; ++k) {
                const double im_aoa = -2.0 * kPi * static_cast<double>(k) *
                                      scene.antenna_spacing * dcos_dm / lambda_c;
                const std::complex<double> factor(re_factor, im_prop + im_aoa);
                const std::complex<double> v = e[k] * prop * factor;
                g.add(k, l, v.real(), v.imag());
            }
        }
    }
    return g;
}

}  // namespace soc
