#include "soc/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "soc/angular_delay.hpp"

namespace soc {

ScattererScene synthesize_scene(const RunConfig& cfg) {
    cfg.validate();
    ScattererScene scene;
    scene.bs_position = cfg.gen_bs;
    scene.array_axis = {1.0, 0.0, 0.0};
    scene.n_antennas = cfg.gen_n_t;
    scene.include_los = cfg.gen_include_los;
    scene.center_frequency = cfg.gen_center_frequency;
    scene.bandwidth = cfg.gen_bandwidth;
    scene.n_subcarriers = cfg.gen_n_c;
    scene.antenna_spacing = 0.5 * scene.wavelength();
    scene.ue_area.x_min = -cfg.gen_area_x / 2.0;
    scene.ue_area.x_max = cfg.gen_area_x / 2.0;
    scene.ue_area.y_min = -cfg.gen_area_y / 2.0;
    scene.ue_area.y_max = cfg.gen_area_y / 2.0;
    scene.ue_area.height = cfg.gen_height;

    Rng rng = Rng::substream(cfg.seed, "scene-gen");
    const double m = cfg.gen_scatter_margin;
    for (int i = 0; i < cfg.gen_n_scatterers; ++i) {
        Scatterer sc;
        sc.position = {rng.uniform(scene.ue_area.x_min - m, scene.ue_area.x_max + m),
                       rng.uniform(scene.ue_area.y_min - m, scene.ue_area.y_max + m),
                       rng.uniform(cfg.gen_scatter_zmin, cfg.gen_scatter_zmax)};
        sc.reflectivity = rng.uniform(cfg.gen_reflectivity_min, cfg.gen_reflectivity_max);
        scene.scatterers.push_back(sc);
    }
    scene.validate();
    return scene;
}

OdeConfig make_ode_config(const RunConfig& cfg, double lambda_c) {
    OdeConfig ode;
    ode.solver = cfg.solver;
    ode.step = cfg.ode_step > 0.0 ? cfg.ode_step : lambda_c / 10.0;
    ode.max_steps = cfg.ode_max_steps;
    return ode;
}

DopplerConfig make_doppler_config(const RunConfig& cfg, const DbHeader& header) {
    DopplerConfig dop;
    dop.lambda = kSpeedOfLight / header.center_frequency;
    dop.phi = cfg.doppler_phi;
    dop.n_t = static_cast<int>(header.n_t);
    dop.n_c = static_cast<int>(header.n_c);
    dop.bandwidth = header.bandwidth;
    return dop;
}

PipelineResult predict_mobile(const StaticSampleDb& db, const Scgnet& scgnet,
                              const Positioner& positioner, const std::vector<CMat>& measured,
                              const std::vector<double>& times, double t_next,
                              const IterationConfig& it_cfg, const DopplerConfig& dop_cfg,
                              const OdeConfig& ode_cfg) {
    PipelineResult result;
    result.iteration =
        iterate_position(positioner, measured, times, t_next, it_cfg, dop_cfg);
    const Vec3 target = result.iteration.predicted_position;
    result.integration_length = (target - db.nearest(target).position).norm();
    result.g_static = predict_static(db, scgnet, target, ode_cfg);
    const Vec3& v = result.iteration.fit.v;
    const double v_u = std::hypot(v.x, v.y);
    const double theta_v = std::atan2(v.y, v.x);
    const CMat d = compensation_matrix(v_u, theta_v, dop_cfg);
    result.g_mobile = apply_doppler(result.g_static, d);
    return result;
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkInputs& in,
                                        const std::vector<std::string>& methods) {
    if (in.sequences == nullptr) {
        throw std::invalid_argument("run_benchmark: missing trajectory dataset");
    }
    std::vector<std::string> missing;
    auto want = [&](const std::string& m) {
        for (const auto& s : methods) {
            if (s == m) return true;
        }
        return false;
    };
    const bool do_pipeline = want("pipeline");
    const bool do_nn_db = want("nn_db");
    const bool do_lstm = want("lstm");
    const bool do_ar = want("ar");
    for (const auto& m : methods) {
        if (m != "pipeline" && m != "nn_db" && m != "lstm" && m != "ar") {
            throw std::invalid_argument("run_benchmark: unknown method '" + m + "'");
        }
    }
    if ((do_pipeline || do_nn_db) && in.db == nullptr) missing.push_back("static database");
    if (do_pipeline && in.scgnet == nullptr) missing.push_back("gradient network model");
    if (do_pipeline && in.positioner == nullptr) missing.push_back("positioner model");
    if (do_lstm && in.lstm == nullptr) missing.push_back("lstm baseline model");
    if (!missing.empty()) {
        std::string what = "run_benchmark: missing artifacts:";
        for (const auto& m : missing) what += " " + m + ",";
        what.pop_back();
        throw std::invalid_argument(what);
    }

    const auto& ds = *in.sequences;
    std::vector<BenchmarkRow> rows;
    const DftPair dft = dft_matrices(static_cast<int>(ds.n_t), static_cast<int>(ds.n_c));
    for (std::size_t ti = 0; ti < ds.trajectories.size(); ++ti) {
        const auto& trj = ds.trajectories[ti];
        if (trj.steps.size() < 3) {
            throw std::invalid_argument("run_benchmark: trajectories need >= 3 steps");
        }
        const std::size_t last = trj.steps.size() - 1;
        const CMat truth = to_angular_delay(trj.steps[last].channel, dft);

        auto emit = [&](const char* method, double value) {
            BenchmarkRow row;
            row.method = method;
            row.density = in.density;
            row.speed = trj.speed;
            row.seq_len = static_cast<int>(last);
            row.sample_id = static_cast<int>(ti);
            row.nmse = value;
            rows.push_back(std::move(row));
        };

        if (do_pipeline) {
            std::vector<CMat> measured;
            std::vector<double> times;
            measured.reserve(last);
            times.reserve(last);
            for (std::size_t k = 0; k < last; ++k) {
                measured.push_back(trj.steps[k].channel);
                times.push_back(trj.steps[k].time);
            }
            const PipelineResult pr =
                predict_mobile(*in.db, *in.scgnet, *in.positioner, measured, times,
                               trj.steps[last].time, in.it_cfg, in.dop_cfg, in.ode_cfg);
            emit("pipeline", nmse(pr.g_mobile, truth));
        }
        if (do_nn_db) {
            emit("nn_db", nmse(nn_db_baseline(*in.db, trj.steps[last].position), truth));
        }
        if (do_lstm) {
            const auto seq_len = static_cast<std::size_t>(in.lstm_seq_len);
            if (last < seq_len) {
                throw std::invalid_argument(
                    "run_benchmark: trajectory too short for the lstm sequence length");
            }
            std::vector<CMat> input;
            input.reserve(seq_len);
            for (std::size_t k = last - seq_len; k < last; ++k) {
                input.push_back(to_angular_delay(trj.steps[k].channel, dft));
            }
            emit("lstm", nmse(in.lstm->predict(input), truth));
        }
        if (do_ar) {
            if (last < static_cast<std::size_t>(in.ar_order) + 1) {
                throw std::invalid_argument(
                    "run_benchmark: trajectory too short for the AR order");
            }
            std::vector<CMat> history;
            history.reserve(last);
            for (std::size_t k = 0; k < last; ++k) {
                history.push_back(to_angular_delay(trj.steps[k].channel, dft));
            }
            emit("ar", nmse(ar_baseline(history, in.ar_order).prediction, truth));
        }
    }
    return rows;
}

}  // namespace soc
