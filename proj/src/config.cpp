#include "soc/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "soc/common.hpp"

namespace soc {

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

std::string join_path(const std::string& dir, const char* name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

const char* solver_name(Solver s) { return s == Solver::kEuler ? "euler" : "rk4"; }

const char* combine_name(CombineMode m) {
    return m == CombineMode::kSumDifference ? "sum_difference" : "corrected_analytic";
}

const char* input_mode_name(PositionerInputMode m) {
    return m == PositionerInputMode::kColumnPerCell ? "column_per_cell" : "full_matrix_per_cell";
}

}  // namespace

std::string RunConfig::db_path() const { return db.empty() ? join_path(out_dir, "db.socdb") : db; }
std::string RunConfig::sequences_path() const {
    return sequences.empty() ? join_path(out_dir, "sequences.soctrj") : sequences;
}
std::string RunConfig::scgnet_model_path() const {
    return scgnet_model.empty() ? join_path(out_dir, "scgnet.socnn") : scgnet_model;
}
std::string RunConfig::positioner_model_path() const {
    return positioner_model.empty() ? join_path(out_dir, "positioner.socnn") : positioner_model;
}
std::string RunConfig::lstm_model_path() const {
    return lstm_model.empty() ? join_path(out_dir, "lstm.socnn") : lstm_model;
}

void RunConfig::validate() const {
    if (scene.empty()) bad_field("scene", "must not be empty");
    if (out_dir.empty()) bad_field("out_dir", "must not be empty");
    if (!(density > 0.0)) bad_field("density", "must be > 0");
    if (gen_n_t < 2) bad_field("gen_n_t", "must be >= 2");
    if (gen_n_c < 1) bad_field("gen_n_c", "must be >= 1");
    if (!(gen_center_frequency > 0.0)) bad_field("gen_center_frequency", "must be > 0");
    if (!(gen_bandwidth > 0.0)) bad_field("gen_bandwidth", "must be > 0");
    if (!(gen_area_x > 0.0) || !(gen_area_y > 0.0)) bad_field("gen_area_x/gen_area_y", "must be > 0");
    if (gen_n_scatterers < 0) bad_field("gen_n_scatterers", "must be >= 0");
    if (gen_n_scatterers == 0 && !gen_include_los) {
        bad_field("gen_n_scatterers", "must be >= 1 when line of sight is disabled");
    }
    if (!(gen_scatter_zmax >= gen_scatter_zmin)) bad_field("gen_scatter_zmax", "must be >= gen_scatter_zmin");
    if (!(gen_reflectivity_min > 0.0) || !(gen_reflectivity_max >= gen_reflectivity_min)) {
        bad_field("gen_reflectivity_min/max", "must satisfy 0 < min <= max");
    }
    if (ode_step < 0.0) bad_field("ode_step", "must be >= 0 (0 selects λ/10)");
    if (ode_max_steps < 1) bad_field("ode_max_steps", "must be >= 1");
    for (int h : scg_scattering_hidden) {
        if (h < 1) bad_field("scg_scattering_hidden", "widths must be >= 1");
    }
    for (int h : scg_direction_hidden) {
        if (h < 1) bad_field("scg_direction_hidden", "widths must be >= 1");
    }
    if (scg_steps < 0) bad_field("scg_steps", "must be >= 0");
    if (scg_batch < 1) bad_field("scg_batch", "must be >= 1");
    if (scg_z < 1) bad_field("scg_z", "must be >= 1");
    if (!(scg_lr > 0.0)) bad_field("scg_lr", "must be > 0");
    if (pos_hidden1 < 1 || pos_hidden2 < 1) bad_field("pos_hidden1/pos_hidden2", "must be >= 1");
    if (pos_steps < 0) bad_field("pos_steps", "must be >= 0");
    if (pos_batch < 1) bad_field("pos_batch", "must be >= 1");
    if (!(pos_lr > 0.0)) bad_field("pos_lr", "must be > 0");
    if (!(train_fraction > 0.0) || !(train_fraction <= 1.0)) {
        bad_field("train_fraction", "must be in (0, 1]");
    }
    if (!(eta > 0.0)) bad_field("eta", "must be > 0");
    if (max_iterations < 1) bad_field("max_iterations", "must be >= 1");
    if (lstm_hidden < 1) bad_field("lstm_hidden", "must be >= 1");
    if (lstm_seq_len < 1) bad_field("lstm_seq_len", "must be >= 1");
    if (lstm_steps < 0) bad_field("lstm_steps", "must be >= 0");
    if (lstm_batch < 1) bad_field("lstm_batch", "must be >= 1");
    if (!(lstm_lr > 0.0)) bad_field("lstm_lr", "must be > 0");
    if (traj_count < 1) bad_field("traj_count", "must be >= 1");
    if (traj_length < 2) bad_field("traj_length", "must be >= 2");
    if (!(traj_interval > 0.0)) bad_field("traj_interval", "must be > 0");
    if (traj_speed_min < 0.0 || traj_speed_max < traj_speed_min) {
        bad_field("traj_speed_min/max", "must satisfy 0 <= min <= max");
    }
    if (ar_order < 1) bad_field("ar_order", "must be >= 1");
}

std::string format_config(const RunConfig& c) {
    std::ostringstream os;
    os << "socconf v1\n";
    os << "scene " << c.scene << '\n';
    os << "out_dir " << c.out_dir << '\n';
    if (!c.db.empty()) os << "db " << c.db << '\n';
    if (!c.sequences.empty()) os << "sequences " << c.sequences << '\n';
    if (!c.scgnet_model.empty()) os << "scgnet_model " << c.scgnet_model << '\n';
    if (!c.positioner_model.empty()) os << "positioner_model " << c.positioner_model << '\n';
    if (!c.lstm_model.empty()) os << "lstm_model " << c.lstm_model << '\n';
    os << "seed " << c.seed << '\n';
    os << "density " << fmt_g(c.density) << '\n';
    os << "gen_n_t " << c.gen_n_t << '\n';
    os << "gen_n_c " << c.gen_n_c << '\n';
    os << "gen_center_frequency " << fmt_g(c.gen_center_frequency) << '\n';
    os << "gen_bandwidth " << fmt_g(c.gen_bandwidth) << '\n';
    os << "gen_area_x " << fmt_g(c.gen_area_x) << '\n';
    os << "gen_area_y " << fmt_g(c.gen_area_y) << '\n';
    os << "gen_height " << fmt_g(c.gen_height) << '\n';
    os << "gen_bs " << fmt_g(c.gen_bs.x) << ' ' << fmt_g(c.gen_bs.y) << ' ' << fmt_g(c.gen_bs.z)
       << '\n';
    os << "gen_n_scatterers " << c.gen_n_scatterers << '\n';
    os << "gen_include_los " << (c.gen_include_los ? 1 : 0) << '\n';
    os << "gen_scatter_margin " << fmt_g(c.gen_scatter_margin) << '\n';
    os << "gen_scatter_zmin " << fmt_g(c.gen_scatter_zmin) << '\n';
    os << "gen_scatter_zmax " << fmt_g(c.gen_scatter_zmax) << '\n';
    os << "gen_reflectivity_min " << fmt_g(c.gen_reflectivity_min) << '\n';
    os << "gen_reflectivity_max " << fmt_g(c.gen_reflectivity_max) << '\n';
    os << "solver " << solver_name(c.solver) << '\n';
    os << "ode_step " << fmt_g(c.ode_step) << '\n';
    os << "ode_max_steps " << c.ode_max_steps << '\n';
    os << "scg_scattering_hidden";
    for (int h : c.scg_scattering_hidden) os << ' ' << h;
    os << '\n';
    os << "scg_direction_hidden";
    for (int h : c.scg_direction_hidden) os << ' ' << h;
    os << '\n';
    os << "combine_mode " << combine_name(c.combine_mode) << '\n';
    os << "scg_steps " << c.scg_steps << '\n';
    os << "scg_batch " << c.scg_batch << '\n';
    os << "scg_z " << c.scg_z << '\n';
    os << "scg_lr " << fmt_g(c.scg_lr) << '\n';
    os << "pos_hidden1 " << c.pos_hidden1 << '\n';
    os << "pos_hidden2 " << c.pos_hidden2 << '\n';
    os << "pos_input_mode " << input_mode_name(c.pos_input_mode) << '\n';
    os << "pos_steps " << c.pos_steps << '\n';
    os << "pos_batch " << c.pos_batch << '\n';
    os << "pos_lr " << fmt_g(c.pos_lr) << '\n';
    os << "train_fraction " << fmt_g(c.train_fraction) << '\n';
    os << "eta " << fmt_g(c.eta) << '\n';
    os << "max_iterations " << c.max_iterations << '\n';
    os << "doppler_phi " << fmt_g(c.doppler_phi) << '\n';
    os << "lstm_hidden " << c.lstm_hidden << '\n';
    os << "lstm_seq_len " << c.lstm_seq_len << '\n';
    os << "lstm_steps " << c.lstm_steps << '\n';
    os << "lstm_batch " << c.lstm_batch << '\n';
    os << "lstm_lr " << fmt_g(c.lstm_lr) << '\n';
    os << "traj_count " << c.traj_count << '\n';
    os << "traj_length " << c.traj_length << '\n';
    os << "traj_interval " << fmt_g(c.traj_interval) << '\n';
    os << "traj_speed_min " << fmt_g(c.traj_speed_min) << '\n';
    os << "traj_speed_max " << fmt_g(c.traj_speed_max) << '\n';
    os << "ar_order " << c.ar_order << '\n';
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "socconf v1") {
        throw std::invalid_argument("config: missing 'socconf v1' header line");
    }
    RunConfig c;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto need = [&](auto&... vals) {
            (ls >> ... >> vals);
            if (ls.fail()) bad_field(key, "malformed value");
        };
        auto need_int_list = [&](std::vector<int>& dst) {
            dst.clear();
            int v;
            while (ls >> v) dst.push_back(v);
            if (dst.empty()) bad_field(key, "needs at least one integer");
        };
        if (key == "scene") {
            need(c.scene);
        } else if (key == "out_dir") {
            need(c.out_dir);
        } else if (key == "db") {
            need(c.db);
        } else if (key == "sequences") {
            need(c.sequences);
        } else if (key == "scgnet_model") {
            need(c.scgnet_model);
        } else if (key == "positioner_model") {
            need(c.positioner_model);
        } else if (key == "lstm_model") {
            need(c.lstm_model);
        } else if (key == "seed") {
            need(c.seed);
        } else if (key == "density") {
            need(c.density);
        } else if (key == "gen_n_t") {
            need(c.gen_n_t);
        } else if (key == "gen_n_c") {
            need(c.gen_n_c);
        } else if (key == "gen_center_frequency") {
            need(c.gen_center_frequency);
        } else if (key == "gen_bandwidth") {
            need(c.gen_bandwidth);
        } else if (key == "gen_area_x") {
            need(c.gen_area_x);
        } else if (key == "gen_area_y") {
            need(c.gen_area_y);
        } else if (key == "gen_height") {
            need(c.gen_height);
        } else if (key == "gen_bs") {
            need(c.gen_bs.x, c.gen_bs.y, c.gen_bs.z);
        } else if (key == "gen_n_scatterers") {
            need(c.gen_n_scatterers);
        } else if (key == "gen_include_los") {
            int v = 0;
            need(v);
            c.gen_include_los = v != 0;
        } else if (key == "gen_scatter_margin") {
            need(c.gen_scatter_margin);
        } else if (key == "gen_scatter_zmin") {
            need(c.gen_scatter_zmin);
        } else if (key == "gen_scatter_zmax") {
            need(c.gen_scatter_zmax);
        } else if (key == "gen_reflectivity_min") {
            need(c.gen_reflectivity_min);
        } else if (key == "gen_reflectivity_max") {
            need(c.gen_reflectivity_max);
        } else if (key == "solver") {
            std::string v;
            need(v);
            if (v == "euler") {
                c.solver = Solver::kEuler;
            } else if (v == "rk4") {
                c.solver = Solver::kRk4;
            } else {
                bad_field(key, "must be euler or rk4");
            }
        } else if (key == "ode_step") {
            need(c.ode_step);
        } else if (key == "ode_max_steps") {
            need(c.ode_max_steps);
        } else if (key == "scg_scattering_hidden") {
            need_int_list(c.scg_scattering_hidden);
        } else if (key == "scg_direction_hidden") {
            need_int_list(c.scg_direction_hidden);
        } else if (key == "combine_mode") {
            std::string v;
            need(v);
            if (v == "sum_difference") {
                c.combine_mode = CombineMode::kSumDifference;
            } else if (v == "corrected_analytic") {
                c.combine_mode = CombineMode::kCorrectedAnalytic;
            } else {
                bad_field(key, "must be sum_difference or corrected_analytic");
            }
        } else if (key == "scg_steps") {
            need(c.scg_steps);
        } else if (key == "scg_batch") {
            need(c.scg_batch);
        } else if (key == "scg_z") {
            need(c.scg_z);
        } else if (key == "scg_lr") {
            need(c.scg_lr);
        } else if (key == "pos_hidden1") {
            need(c.pos_hidden1);
        } else if (key == "pos_hidden2") {
            need(c.pos_hidden2);
        } else if (key == "pos_input_mode") {
            std::string v;
            need(v);
            if (v == "column_per_cell") {
                c.pos_input_mode = PositionerInputMode::kColumnPerCell;
            } else if (v == "full_matrix_per_cell") {
                c.pos_input_mode = PositionerInputMode::kFullMatrixPerCell;
            } else {
                bad_field(key, "must be column_per_cell or full_matrix_per_cell");
            }
        } else if (key == "pos_steps") {
            need(c.pos_steps);
        } else if (key == "pos_batch") {
            need(c.pos_batch);
        } else if (key == "pos_lr") {
            need(c.pos_lr);
        } else if (key == "train_fraction") {
            need(c.train_fraction);
        } else if (key == "eta") {
            need(c.eta);
        } else if (key == "max_iterations") {
            need(c.max_iterations);
        } else if (key == "doppler_phi") {
            need(c.doppler_phi);
        } else if (key == "lstm_hidden") {
            need(c.lstm_hidden);
        } else if (key == "lstm_seq_len") {
            need(c.lstm_seq_len);
        } else if (key == "lstm_steps") {
            need(c.lstm_steps);
        } else if (key == "lstm_batch") {
            need(c.lstm_batch);
        } else if (key == "lstm_lr") {
            need(c.lstm_lr);
        } else if (key == "traj_count") {
            need(c.traj_count);
        } else if (key == "traj_length") {
            need(c.traj_length);
        } else if (key == "traj_interval") {
            need(c.traj_interval);
        } else if (key == "traj_speed_min") {
            need(c.traj_speed_min);
        } else if (key == "traj_speed_max") {
            need(c.traj_speed_max);
        } else if (key == "ar_order") {
            need(c.ar_order);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw MissingFileError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

void save_config(const std::string& path, const RunConfig& cfg) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open config file for writing: " + path);
    os << format_config(cfg);
    if (!os) throw std::runtime_error("short write to config file: " + path);
}

}  // namespace soc
