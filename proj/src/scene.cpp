#include "soc/scene.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace soc {

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("scene field '" + field + "': " + why);
}

}  // namespace

double ScattererScene::wavelength() const { return kSpeedOfLight / center_frequency; }

void ScattererScene::validate() const {
    if (n_antennas < 2) bad_field("n_antennas", "must be >= 2");
    if (n_subcarriers < 1) bad_field("n_subcarriers", "must be >= 1");
    if (!(center_frequency > 0.0)) bad_field("center_frequency", "must be > 0");
    if (!(bandwidth > 0.0)) bad_field("bandwidth", "must be > 0");
    if (!(std::abs(array_axis.norm() - 1.0) < 1e-9)) bad_field("array_axis", "must be a unit vector");
    const double half_lambda = 0.5 * wavelength();
    if (!(std::abs(antenna_spacing - half_lambda) <= 1e-9 * half_lambda)) {
        bad_field("antenna_spacing", "must equal half the center wavelength");
    }
    if (!(ue_area.x_min < ue_area.x_max) || !(ue_area.y_min < ue_area.y_max)) {
        bad_field("ue_area", "must have positive extent");
    }
    if (!include_los && scatterers.empty()) {
        bad_field("scatterers", "at least one required when line of sight is disabled");
    }
    for (std::size_t i = 0; i < scatterers.size(); ++i) {
        if (!(scatterers[i].reflectivity > 0.0)) {
            bad_field("scatterers[" + std::to_string(i) + "].reflectivity", "must be > 0");
        }
    }
}

std::string format_scene(const ScattererScene& s) {
    std::ostringstream os;
    os << "socscene v1\n";
    os << "bs_position " << fmt_g(s.bs_position.x) << ' ' << fmt_g(s.bs_position.y) << ' '
       << fmt_g(s.bs_position.z) << '\n';
    os << "array_axis " << fmt_g(s.array_axis.x) << ' ' << fmt_g(s.array_axis.y) << ' '
       << fmt_g(s.array_axis.z) << '\n';
    os << "n_antennas " << s.n_antennas << '\n';
    os << "antenna_spacing " << fmt_g(s.antenna_spacing) << '\n';
    os << "include_los " << (s.include_los ? 1 : 0) << '\n';
    os << "center_frequency " << fmt_g(s.center_frequency) << '\n';
    os << "bandwidth " << fmt_g(s.bandwidth) << '\n';
    os << "n_subcarriers " << s.n_subcarriers << '\n';
    os << "ue_area " << fmt_g(s.ue_area.x_min) << ' ' << fmt_g(s.ue_area.x_max) << ' '
       << fmt_g(s.ue_area.y_min) << ' ' << fmt_g(s.ue_area.y_max) << ' '
       << fmt_g(s.ue_area.height) << '\n';
    os << "scatterers " << s.scatterers.size() << '\n';
    for (const auto& sc : s.scatterers) {
        os << "s " << fmt_g(sc.position.x) << ' ' << fmt_g(sc.position.y) << ' '
           << fmt_g(sc.position.z) << ' ' << fmt_g(sc.reflectivity) << '\n';
    }
    return os.str();
}

ScattererScene parse_scene(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "socscene v1") {
        throw std::invalid_argument("scene: missing 'socscene v1' header line");
    }
    ScattererScene s;
    bool spacing_given = false;
    long scatterers_expected = -1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto need = [&](auto&... vals) {
            (ls >> ... >> vals);
            if (ls.fail()) bad_field(key, "malformed value");
        };
        if (key == "bs_position") {
            need(s.bs_position.x, s.bs_position.y, s.bs_position.z);
        } else if (key == "array_axis") {
            need(s.array_axis.x, s.array_axis.y, s.array_axis.z);
        } else if (key == "n_antennas") {
            need(s.n_antennas);
        } else if (key == "antenna_spacing") {
            need(s.antenna_spacing);
            spacing_given = true;
        } else if (key == "include_los") {
            int v = 0;
            need(v);
            s.include_los = v != 0;
        } else if (key == "center_frequency") {
            need(s.center_frequency);
        } else if (key == "bandwidth") {
            need(s.bandwidth);
        } else if (key == "n_subcarriers") {
            need(s.n_subcarriers);
        } else if (key == "ue_area") {
            need(s.ue_area.x_min, s.ue_area.x_max, s.ue_area.y_min, s.ue_area.y_max,
                 s.ue_area.height);
        } else if (key == "scatterers") {
            need(scatterers_expected);
        } else if (key == "s") {
            Scatterer sc;
            need(sc.position.x, sc.position.y, sc.position.z, sc.reflectivity);
            s.scatterers.push_back(sc);
        } else {
            throw std::invalid_argument("scene: unknown key '" + key + "'");
        }
    }
    if (scatterers_expected >= 0 &&
        scatterers_expected != static_cast<long>(s.scatterers.size())) {
        bad_field("scatterers", "declared count does not match table rows");
    }
    if (!spacing_given && s.center_frequency > 0.0) {
        s.antenna_spacing = 0.5 * s.wavelength();
    }
    s.validate();
    return s;
}

ScattererScene load_scene(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw MissingFileError("cannot open scene file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_scene(buf.str());
}

void save_scene(const std::string& path, const ScattererScene& scene) {
    scene.validate();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open scene file for writing: " + path);
    os << format_scene(scene);
    if (!os) throw std::runtime_error("short write to scene file: " + path);
}

std::uint64_t scene_hash(const ScattererScene& scene) {
    const std::string canon = format_scene(scene);
    return fnv1a(canon);
}

}  // namespace soc
