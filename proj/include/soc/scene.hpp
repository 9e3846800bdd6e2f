#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/common.hpp"

namespace soc {

struct Scatterer {
    Vec3 position;
    double reflectivity = 1.0;  // ξ_p > 0
};

/// Rectangle in the z = height plane where the user terminal may be.
struct UeArea {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double height = 0.0;

    bool contains_xy(const Vec3& p, double eps = 1e-9) const {
        return p.x >= x_min - eps && p.x <= x_max + eps && p.y >= y_min - eps &&
               p.y <= y_max + eps;
    }
};

/// Geometric single-bounce multipath scene: a base-station ULA plus point
/// scatterers with per-scatterer reflectivity. All channel quantities are
/// pure functions of this description.
struct ScattererScene {
    Vec3 bs_position;
    Vec3 array_axis{1.0, 0.0, 0.0};
    int n_antennas = 0;       // N_t
    double antenna_spacing = 0.0;  // meters; pinned to λ_c/2
    bool include_los = true;
    double center_frequency = 0.0;  // Hz
    double bandwidth = 0.0;         // Hz
    int n_subcarriers = 0;          // N_c
    UeArea ue_area;
    std::vector<Scatterer> scatterers;

    double wavelength() const;  // λ_c = c / f_c

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Text format "socscene v1": key-value lines plus a scatterer table.
ScattererScene load_scene(const std::string& path);
void save_scene(const std::string& path, const ScattererScene& scene);

/// Parse from already-loaded text (used by load_scene and tests).
ScattererScene parse_scene(const std::string& text);
std::string format_scene(const ScattererScene& scene);

/// FNV-1a over the canonical text serialization; stored in dataset headers
/// so mismatched scene/db pairs are detectable.
std::uint64_t scene_hash(const ScattererScene& scene);

}  // namespace soc
