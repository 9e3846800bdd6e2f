#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/ode.hpp"
#include "soc/positioning.hpp"

namespace soc {

/// Flat key-value run configuration ("socconf v1"). Every field has a
/// default; the resolved config is echoed next to outputs so any run can
/// be reproduced from its artifacts.
struct RunConfig {
    // Artifact paths. Relative paths are taken as given (relative to cwd).
    std::string scene = "scene.socscene";
    std::string out_dir = "out";
    std::string db = "";          // default: <out_dir>/db.socdb
    std::string sequences = "";   // default: <out_dir>/sequences.soctrj
    std::string scgnet_model = "";      // default: <out_dir>/scgnet.socnn
    std::string positioner_model = "";  // default: <out_dir>/positioner.socnn
    std::string lstm_model = "";        // default: <out_dir>/lstm.socnn

    std::uint64_t seed = 1;
    double density = 100.0;  // samples per m²

    // Scene synthesis (cmd_generate).
    int gen_n_t = 64;
    int gen_n_c = 64;
    double gen_center_frequency = 3.5e9;
    double gen_bandwidth = 1e8;
    double gen_area_x = 120.0;
    double gen_area_y = 60.0;
    double gen_height = 1.5;
    Vec3 gen_bs{0.0, -40.0, 10.0};
    int gen_n_scatterers = 24;
    bool gen_include_los = true;
    double gen_scatter_margin = 20.0;
    double gen_scatter_zmin = 2.0;
    double gen_scatter_zmax = 25.0;
    double gen_reflectivity_min = 0.5;
    double gen_reflectivity_max = 1.5;

    // ODE solver.
    Solver solver = Solver::kRk4;
    double ode_step = 0.0;  // meters; 0 resolves to λ_c/10 at use
    int ode_max_steps = 100000;

    // Gradient-network training.
    std::vector<int> scg_scattering_hidden{256, 768, 512, 256};
    std::vector<int> scg_direction_hidden{512, 256};
    CombineMode combine_mode = CombineMode::kCorrectedAnalytic;
    int scg_steps = 2000;
    int scg_batch = 20;
    int scg_z = 4;
    double scg_lr = 1e-3;

    // Positioner training.
    int pos_hidden1 = 256;
    int pos_hidden2 = 128;
    PositionerInputMode pos_input_mode = PositionerInputMode::kColumnPerCell;
    int pos_steps = 2000;
    int pos_batch = 20;
    double pos_lr = 1e-3;
    double train_fraction = 0.8;

    // Motion-extraction iteration.
    double eta = 0.1;
    int max_iterations = 20;

    // Doppler frame offset.
    double doppler_phi = 0.0;

    // LSTM baseline.
    int lstm_hidden = 384;
    int lstm_seq_len = 5;
    int lstm_steps = 1500;
    int lstm_batch = 20;
    double lstm_lr = 1e-3;

    // Trajectory generation.
    int traj_count = 100;
    int traj_length = 11;
    double traj_interval = 1e-3;  // seconds
    double traj_speed_min = 10.0;
    double traj_speed_max = 40.0;

    // AR baseline.
    int ar_order = 7;

    std::string db_path() const;
    std::string sequences_path() const;
    std::string scgnet_model_path() const;
    std::string positioner_model_path() const;
    std::string lstm_model_path() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string format_config(const RunConfig& cfg);
void save_config(const std::string& path, const RunConfig& cfg);

}  // namespace soc
