#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soc/angular_delay.hpp"
#include "soc/baselines.hpp"
#include "soc/common.hpp"
#include "soc/config.hpp"
#include "soc/dataset.hpp"
#include "soc/ode.hpp"
#include "soc/pipeline.hpp"
#include "soc/positioning.hpp"
#include "soc/scene.hpp"
#include "soc/scgnet.hpp"

namespace {

using soc::RunConfig;

// Flag values shared across subcommands; only the parsed subcommand's
// bindings are ever set.
struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> scene;
    std::optional<std::string> out_dir;
    std::optional<std::string> db;
    std::optional<std::string> sequences;
    std::optional<std::string> scgnet_model;
    std::optional<std::string> positioner_model;
    std::optional<std::string> lstm_model;
    std::optional<std::uint64_t> seed;
    std::optional<double> density;
    std::optional<int> steps;
    std::optional<int> batch;
    std::optional<double> lr;
    std::optional<int> count;
    std::optional<int> length;
    std::optional<double> interval;
    std::optional<double> speed_min;
    std::optional<double> speed_max;
    std::optional<int> seq_len;
    std::optional<int> z;
    std::optional<double> eta;
    std::optional<int> max_iterations;
    std::optional<int> ar_order;
    std::optional<double> ode_step;
    std::optional<std::string> solver;
    std::optional<std::string> combine;
    std::optional<std::string> input_mode;
    std::optional<std::string> methods;
    std::optional<std::string> out_file;
    std::optional<int> traj_index;
};

soc::Solver parse_solver(const std::string& v) {
    if (v == "euler") return soc::Solver::kEuler;
    if (v == "rk4") return soc::Solver::kRk4;
    throw std::invalid_argument("solver must be euler or rk4, got '" + v + "'");
}

soc::CombineMode parse_combine(const std::string& v) {
    if (v == "sum_difference") return soc::CombineMode::kSumDifference;
    if (v == "corrected_analytic") return soc::CombineMode::kCorrectedAnalytic;
    throw std::invalid_argument("combine mode must be sum_difference or corrected_analytic, got '" +
                                v + "'");
}

soc::PositionerInputMode parse_input_mode(const std::string& v) {
    if (v == "column_per_cell") return soc::PositionerInputMode::kColumnPerCell;
    if (v == "full_matrix_per_cell") return soc::PositionerInputMode::kFullMatrixPerCell;
    throw std::invalid_argument(
        "input mode must be column_per_cell or full_matrix_per_cell, got '" + v + "'");
}

// Base config plus the overrides that mean the same thing in every command.
RunConfig resolve_config(const Overrides& o) {
    RunConfig cfg = o.config_path ? soc::load_config(*o.config_path) : RunConfig{};
    if (o.scene) cfg.scene = *o.scene;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.db) cfg.db = *o.db;
    if (o.sequences) cfg.sequences = *o.sequences;
    if (o.scgnet_model) cfg.scgnet_model = *o.scgnet_model;
    if (o.positioner_model) cfg.positioner_model = *o.positioner_model;
    if (o.lstm_model) cfg.lstm_model = *o.lstm_model;
    if (o.seed) cfg.seed = *o.seed;
    if (o.density) cfg.density = *o.density;
    if (o.eta) cfg.eta = *o.eta;
    if (o.max_iterations) cfg.max_iterations = *o.max_iterations;
    if (o.ar_order) cfg.ar_order = *o.ar_order;
    if (o.ode_step) cfg.ode_step = *o.ode_step;
    if (o.solver) cfg.solver = parse_solver(*o.solver);
    if (o.combine) cfg.combine_mode = parse_combine(*o.combine);
    if (o.input_mode) cfg.pos_input_mode = parse_input_mode(*o.input_mode);
    return cfg;
}

void ensure_parent_dir(const std::string& path) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

// Every command materializes its output directory and echoes the fully
// resolved configuration next to its artifacts for reproducibility.
void prepare_out(const RunConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    soc::save_config(cfg.out_dir + "/resolved_config.socconf", cfg);
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_prediction_csv(const std::string& path, const soc::CMat& g) {
    ensure_parent_dir(path);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write prediction csv: " + path);
    os << "z,q,re,im\n";
    for (std::size_t z = 0; z < g.rows(); ++z)
        for (std::size_t q = 0; q < g.cols(); ++q)
            os << z << "," << q << "," << fmt_g(g.re(z, q)) << "," << fmt_g(g.im(z, q)) << "\n";
    if (!os) throw std::runtime_error("failed writing prediction csv: " + path);
}

std::vector<std::string> split_methods(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    if (out.empty()) throw std::invalid_argument("methods list is empty");
    return out;
}

int cmd_generate(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    prepare_out(cfg);
    soc::ScattererScene scene = soc::synthesize_scene(cfg);
    ensure_parent_dir(cfg.scene);
    soc::save_scene(cfg.scene, scene);
    std::cout << "wrote scene " << cfg.scene << "\n"
              << "  antennas " << scene.n_antennas << ", subcarriers " << scene.n_subcarriers
              << ", scatterers " << scene.scatterers.size() << "\n"
              << "  area " << (scene.ue_area.x_max - scene.ue_area.x_min) << " x "
              << (scene.ue_area.y_max - scene.ue_area.y_min) << " m, fingerprint "
              << soc::scene_hash(scene) << "\n";
    return 0;
}

int cmd_sample(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    prepare_out(cfg);
    soc::ScattererScene scene = soc::load_scene(cfg.scene);
    soc::StaticSampleDb db = soc::sample_static_db(scene, cfg.density, cfg.seed);
    ensure_parent_dir(cfg.db_path());
    db.save(cfg.db_path());
    std::cout << "wrote database " << cfg.db_path() << " (" << db.size() << " samples, density "
              << cfg.density << "/m^2, seed " << cfg.seed << ")\n";
    return 0;
}

int cmd_trajectories(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    if (o.count) cfg.traj_count = *o.count;
    if (o.length) cfg.traj_length = *o.length;
    if (o.interval) cfg.traj_interval = *o.interval;
    if (o.speed_min) cfg.traj_speed_min = *o.speed_min;
    if (o.speed_max) cfg.traj_speed_max = *o.speed_max;
    prepare_out(cfg);
    soc::ScattererScene scene = soc::load_scene(cfg.scene);
    soc::TrajectoryDataset data =
        soc::generate_trajectories(scene, cfg.traj_count, cfg.traj_length, cfg.traj_interval,
                                   cfg.traj_speed_min, cfg.traj_speed_max, cfg.seed);
    ensure_parent_dir(cfg.sequences_path());
    data.save(cfg.sequences_path());
    std::cout << "wrote " << data.trajectories.size() << " sequences of " << cfg.traj_length
              << " steps (" << cfg.traj_interval << " s apart) to " << cfg.sequences_path()
              << "\n";
    return 0;
}

int cmd_train_scgnet(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    if (o.steps) cfg.scg_steps = *o.steps;
    if (o.batch) cfg.scg_batch = *o.batch;
    if (o.lr) cfg.scg_lr = *o.lr;
    if (o.z) cfg.scg_z = *o.z;
    prepare_out(cfg);
    soc::StaticSampleDb db = soc::StaticSampleDb::load(cfg.db_path());
    const double lambda_c = soc::kSpeedOfLight / db.header().center_frequency;

    soc::ScgnetConfig net_cfg;
    net_cfg.n_t = static_cast<int>(db.header().n_t);
    net_cfg.n_c = static_cast<int>(db.header().n_c);
    net_cfg.scattering_hiddens = cfg.scg_scattering_hidden;
    net_cfg.direction_hiddens = cfg.scg_direction_hidden;
    net_cfg.combine_mode = cfg.combine_mode;
    net_cfg.rho = -2.0 * soc::kPi / lambda_c;
    soc::Scgnet net(net_cfg, cfg.seed);

    soc::ScgnetTrainConfig tc;
    tc.steps = cfg.scg_steps;
    tc.batch = cfg.scg_batch;
    tc.z = cfg.scg_z;
    tc.lr = cfg.scg_lr;
    tc.seed = cfg.seed;
    tc.ode = soc::make_ode_config(cfg, lambda_c);

    std::cout << "training gradient network (" << soc::scgnet_param_count(net_cfg)
              << " parameters, " << tc.steps << " steps, batch " << tc.batch << ")\n";
    soc::LossTrace trace = soc::train_scgnet(db, net, tc);
    ensure_parent_dir(cfg.scgnet_model_path());
    net.save(cfg.scgnet_model_path());
    soc::write_loss_csv(cfg.out_dir + "/scgnet_loss.csv", trace.mse);
    std::cout << "wrote model " << cfg.scgnet_model_path() << "\n"
              << "  mse first " << trace.mse.front() << ", last " << trace.mse.back() << "\n";
    return 0;
}

int cmd_train_positioner(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    if (o.steps) cfg.pos_steps = *o.steps;
    if (o.batch) cfg.pos_batch = *o.batch;
    if (o.lr) cfg.pos_lr = *o.lr;
    prepare_out(cfg);
    soc::StaticSampleDb db = soc::StaticSampleDb::load(cfg.db_path());

    soc::PositionerConfig net_cfg;
    net_cfg.n_t = static_cast<int>(db.header().n_t);
    net_cfg.n_c = static_cast<int>(db.header().n_c);
    net_cfg.hidden1 = cfg.pos_hidden1;
    net_cfg.hidden2 = cfg.pos_hidden2;
    net_cfg.input_mode = cfg.pos_input_mode;
    soc::Positioner net(net_cfg, cfg.seed);

    soc::PositionerTrainConfig tc;
    tc.steps = cfg.pos_steps;
    tc.batch = cfg.pos_batch;
    tc.lr = cfg.pos_lr;
    tc.seed = cfg.seed;
    tc.train_fraction = cfg.train_fraction;

    std::cout << "training positioner (" << soc::positioner_param_count(net_cfg)
              << " parameters, " << tc.steps << " steps, batch " << tc.batch << ")\n";
    soc::PositionerTrainResult res = soc::train_positioner(db, net, tc);
    ensure_parent_dir(cfg.positioner_model_path());
    net.save(cfg.positioner_model_path());
    soc::write_loss_csv(cfg.out_dir + "/positioner_loss.csv", res.mse);

    std::vector<double> errors;
    errors.reserve(res.split.holdout.size());
    for (std::size_t i : res.split.holdout) {
        const soc::DbRecord& rec = db.record(i);
        errors.push_back((net.position(rec.g) - rec.position).norm());
    }
    std::cout << "wrote model " << cfg.positioner_model_path() << "\n"
              << "  mse first " << res.mse.front() << ", last " << res.mse.back() << "\n";
    if (!errors.empty())
        std::cout << "  holdout median position error " << soc::median(errors) << " m ("
                  << errors.size() << " samples)\n";
    return 0;
}

int cmd_train_lstm(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    if (o.steps) cfg.lstm_steps = *o.steps;
    if (o.batch) cfg.lstm_batch = *o.batch;
    if (o.lr) cfg.lstm_lr = *o.lr;
    if (o.seq_len) cfg.lstm_seq_len = *o.seq_len;
    prepare_out(cfg);
    soc::TrajectoryDataset data = soc::TrajectoryDataset::load(cfg.sequences_path());

    soc::LstmBaselineConfig net_cfg;
    net_cfg.n_t = static_cast<int>(data.n_t);
    net_cfg.n_c = static_cast<int>(data.n_c);
    net_cfg.hidden = cfg.lstm_hidden;
    soc::LstmBaseline net(net_cfg, cfg.seed);

    soc::LstmBaselineTrainConfig tc;
    tc.steps = cfg.lstm_steps;
    tc.batch = cfg.lstm_batch;
    tc.lr = cfg.lstm_lr;
    tc.seed = cfg.seed;
    tc.seq_len = cfg.lstm_seq_len;

    std::cout << "training sequence baseline (" << soc::lstm_baseline_param_count(net_cfg)
              << " parameters, " << tc.steps << " steps, batch " << tc.batch << ")\n";
    std::vector<double> mse = soc::train_lstm_baseline(data, net, tc);
    ensure_parent_dir(cfg.lstm_model_path());
    net.save(cfg.lstm_model_path());
    soc::write_loss_csv(cfg.out_dir + "/lstm_loss.csv", mse);
    std::cout << "wrote model " << cfg.lstm_model_path() << "\n"
              << "  mse first " << mse.front() << ", last " << mse.back() << "\n";
    return 0;
}

int cmd_predict(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    prepare_out(cfg);
    soc::StaticSampleDb db = soc::StaticSampleDb::load(cfg.db_path());
    soc::Scgnet scgnet = soc::Scgnet::load(cfg.scgnet_model_path());
    soc::Positioner positioner = soc::Positioner::load(cfg.positioner_model_path());
    soc::TrajectoryDataset data = soc::TrajectoryDataset::load(cfg.sequences_path());

    const int index = o.traj_index.value_or(0);
    if (index < 0 || static_cast<std::size_t>(index) >= data.trajectories.size())
        throw std::invalid_argument("sequence index " + std::to_string(index) +
                                    " out of range (dataset has " +
                                    std::to_string(data.trajectories.size()) + ")");
    const soc::Trajectory& traj = data.trajectories[static_cast<std::size_t>(index)];
    if (traj.steps.size() < 3)
        throw std::invalid_argument("sequence must have at least 3 steps to predict the last");

    std::vector<soc::CMat> measured;
    std::vector<double> times;
    for (std::size_t i = 0; i + 1 < traj.steps.size(); ++i) {
        measured.push_back(traj.steps[i].channel);
        times.push_back(traj.steps[i].time);
    }
    const soc::TrajectoryStep& target = traj.steps.back();

    soc::IterationConfig it_cfg{cfg.eta, cfg.max_iterations};
    soc::DopplerConfig dop_cfg = soc::make_doppler_config(cfg, db.header());
    soc::OdeConfig ode_cfg =
        soc::make_ode_config(cfg, soc::kSpeedOfLight / db.header().center_frequency);
    soc::PipelineResult res =
        soc::predict_mobile(db, scgnet, positioner, measured, times, target.time, it_cfg,
                            dop_cfg, ode_cfg);

    soc::CMat truth = soc::to_angular_delay(target.channel);
    const soc::Vec3& v = res.iteration.fit.v;
    std::cout << "sequence " << index << ": " << measured.size()
              << " measured steps, predicting t=" << target.time << " s\n"
              << "  estimated position (" << res.iteration.predicted_position.x << ", "
              << res.iteration.predicted_position.y << ", " << res.iteration.predicted_position.z
              << "), true (" << target.position.x << ", " << target.position.y << ", "
              << target.position.z << ")\n"
              << "  position error "
              << (res.iteration.predicted_position - target.position).norm() << " m\n"
              << "  estimated speed " << std::hypot(v.x, v.y) << " m/s (true " << traj.speed
              << "), direction " << std::atan2(v.y, v.x) << " rad (true " << traj.direction
              << ")\n"
              << "  refinements " << res.iteration.iterations
              << (res.iteration.converged ? " (converged)" : " (iteration cap hit)")
              << ", integration length " << res.integration_length << " m\n"
              << "  nmse vs truth " << soc::nmse(res.g_mobile, truth) << "\n";

    const std::string out_csv = o.out_file.value_or(cfg.out_dir + "/prediction.csv");
    write_prediction_csv(out_csv, res.g_mobile);
    std::cout << "wrote prediction " << out_csv << "\n";
    return 0;
}

int cmd_evaluate(const Overrides& o) {
    RunConfig cfg = resolve_config(o);
    if (o.seq_len) cfg.lstm_seq_len = *o.seq_len;
    prepare_out(cfg);
    const std::vector<std::string> methods =
        split_methods(o.methods.value_or("pipeline,nn_db,lstm,ar"));

    bool need_db = false, need_scgnet = false, need_positioner = false, need_lstm = false;
    for (const std::string& m : methods) {
        if (m == "pipeline") need_db = need_scgnet = need_positioner = true;
        if (m == "nn_db") need_db = true;
        if (m == "lstm") need_lstm = true;
    }

    soc::TrajectoryDataset data = soc::TrajectoryDataset::load(cfg.sequences_path());
    std::optional<soc::StaticSampleDb> db;
    std::optional<soc::Scgnet> scgnet;
    std::optional<soc::Positioner> positioner;
    std::optional<soc::LstmBaseline> lstm;
    if (need_db) db = soc::StaticSampleDb::load(cfg.db_path());
    if (need_scgnet) scgnet = soc::Scgnet::load(cfg.scgnet_model_path());
    if (need_positioner) positioner = soc::Positioner::load(cfg.positioner_model_path());
    if (need_lstm) lstm = soc::LstmBaseline::load(cfg.lstm_model_path());

    soc::BenchmarkInputs in;
    in.sequences = &data;
    in.db = db ? &*db : nullptr;
    in.scgnet = scgnet ? &*scgnet : nullptr;
    in.positioner = positioner ? &*positioner : nullptr;
    in.lstm = lstm ? &*lstm : nullptr;
    in.it_cfg = soc::IterationConfig{cfg.eta, cfg.max_iterations};
    in.ar_order = cfg.ar_order;
    in.lstm_seq_len = cfg.lstm_seq_len;
    in.density = db ? db->header().density : cfg.density;
    if (db) {
        in.dop_cfg = soc::make_doppler_config(cfg, db->header());
        in.ode_cfg =
            soc::make_ode_config(cfg, soc::kSpeedOfLight / db->header().center_frequency);
    }

    std::vector<soc::BenchmarkRow> rows = soc::run_benchmark(in, methods);
    const std::string out_csv = o.out_file.value_or(cfg.out_dir + "/benchmark.csv");
    ensure_parent_dir(out_csv);
    soc::write_benchmark_csv(out_csv, rows);

    std::map<std::string, std::vector<double>> by_method;
    for (const soc::BenchmarkRow& r : rows) by_method[r.method].push_back(r.nmse);
    std::cout << "evaluated " << data.trajectories.size() << " sequences, wrote " << out_csv
              << "\n";
    for (const auto& [name, errs] : by_method)
        std::cout << "  " << name << ": mean nmse " << soc::mean(errs) << " over " << errs.size()
                  << " sequences\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobile MIMO channel prediction from a static channel database"};
    app.require_subcommand(1);
    Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "Run configuration file (socconf)");
        sub->add_option("--out-dir", o.out_dir, "Output directory");
        sub->add_option("--seed", o.seed, "Master seed");
    };

    CLI::App* generate = app.add_subcommand("generate", "Synthesize a scatterer scene");
    add_common(generate);
    generate->add_option("--scene", o.scene, "Scene output path");

    CLI::App* sample = app.add_subcommand("sample", "Sample a static channel database");
    add_common(sample);
    sample->add_option("--scene", o.scene, "Scene path");
    sample->add_option("--density", o.density, "Samples per square meter");
    sample->add_option("--out", o.db, "Database output path");

    CLI::App* traj = app.add_subcommand("trajectories", "Generate mobile channel sequences");
    add_common(traj);
    traj->add_option("--scene", o.scene, "Scene path");
    traj->add_option("--out", o.sequences, "Sequence dataset output path");
    traj->add_option("--count", o.count, "Number of sequences");
    traj->add_option("--length", o.length, "Steps per sequence");
    traj->add_option("--interval", o.interval, "Seconds between steps");
    traj->add_option("--speed-min", o.speed_min, "Minimum speed, m/s");
    traj->add_option("--speed-max", o.speed_max, "Maximum speed, m/s");

    CLI::App* tscg = app.add_subcommand("train-scgnet", "Train the spatial gradient network");
    add_common(tscg);
    tscg->add_option("--db", o.db, "Static database path");
    tscg->add_option("--out", o.scgnet_model, "Model output path");
    tscg->add_option("--steps", o.steps, "Optimizer steps");
    tscg->add_option("--batch", o.batch, "Batch size");
    tscg->add_option("--lr", o.lr, "Learning rate");
    tscg->add_option("--z", o.z, "Neighbors per sample for training pairs");
    tscg->add_option("--solver", o.solver, "ODE solver: euler or rk4");
    tscg->add_option("--ode-step", o.ode_step, "ODE step in meters (0 = wavelength/10)");
    tscg->add_option("--combine", o.combine,
                     "Coupling: sum_difference or corrected_analytic");

    CLI::App* tpos = app.add_subcommand("train-positioner", "Train the channel positioner");
    add_common(tpos);
    tpos->add_option("--db", o.db, "Static database path");
    tpos->add_option("--out", o.positioner_model, "Model output path");
    tpos->add_option("--steps", o.steps, "Optimizer steps");
    tpos->add_option("--batch", o.batch, "Batch size");
    tpos->add_option("--lr", o.lr, "Learning rate");
    tpos->add_option("--input-mode", o.input_mode,
                     "column_per_cell or full_matrix_per_cell");

    CLI::App* tlstm = app.add_subcommand("train-lstm", "Train the sequence baseline");
    add_common(tlstm);
    tlstm->add_option("--sequences", o.sequences, "Sequence dataset path");
    tlstm->add_option("--out", o.lstm_model, "Model output path");
    tlstm->add_option("--steps", o.steps, "Optimizer steps");
    tlstm->add_option("--batch", o.batch, "Batch size");
    tlstm->add_option("--lr", o.lr, "Learning rate");
    tlstm->add_option("--seq-len", o.seq_len, "Input window length");

    CLI::App* predict = app.add_subcommand("predict", "Predict one sequence's next channel");
    add_common(predict);
    predict->add_option("--db", o.db, "Static database path");
    predict->add_option("--scgnet", o.scgnet_model, "Gradient network model path");
    predict->add_option("--positioner", o.positioner_model, "Positioner model path");
    predict->add_option("--sequences", o.sequences, "Sequence dataset path");
    predict->add_option("--index", o.traj_index, "Sequence index (default 0)");
    predict->add_option("--out", o.out_file, "Prediction CSV path");
    predict->add_option("--eta", o.eta, "Velocity convergence threshold, m/s");
    predict->add_option("--max-iterations", o.max_iterations, "Refinement cap");
    predict->add_option("--solver", o.solver, "ODE solver: euler or rk4");
    predict->add_option("--ode-step", o.ode_step, "ODE step in meters (0 = wavelength/10)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Benchmark methods on sequences");
    add_common(evaluate);
    evaluate->add_option("--methods", o.methods,
                         "Comma list from: pipeline, nn_db, lstm, ar");
    evaluate->add_option("--db", o.db, "Static database path");
    evaluate->add_option("--scgnet", o.scgnet_model, "Gradient network model path");
    evaluate->add_option("--positioner", o.positioner_model, "Positioner model path");
    evaluate->add_option("--lstm", o.lstm_model, "Sequence baseline model path");
    evaluate->add_option("--sequences", o.sequences, "Sequence dataset path");
    evaluate->add_option("--out", o.out_file, "Benchmark CSV path");
    evaluate->add_option("--seq-len", o.seq_len, "Baseline input window length");
    evaluate->add_option("--eta", o.eta, "Velocity convergence threshold, m/s");
    evaluate->add_option("--max-iterations", o.max_iterations, "Refinement cap");
    evaluate->add_option("--solver", o.solver, "ODE solver: euler or rk4");
    evaluate->add_option("--ode-step", o.ode_step, "ODE step in meters (0 = wavelength/10)");
    evaluate->add_option("--ar-order", o.ar_order, "Autoregressive baseline order");

    try {
        app.parse(argc, argv);
        if (generate->parsed()) return cmd_generate(o);
        if (sample->parsed()) return cmd_sample(o);
        if (traj->parsed()) return cmd_trajectories(o);
        if (tscg->parsed()) return cmd_train_scgnet(o);
        if (tpos->parsed()) return cmd_train_positioner(o);
        if (tlstm->parsed()) return cmd_train_lstm(o);
        if (predict->parsed()) return cmd_predict(o);
        if (evaluate->parsed()) return cmd_evaluate(o);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const soc::MissingFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
