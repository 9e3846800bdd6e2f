#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "soc/dataset.hpp"
#include "soc/scgnet.hpp"

namespace soc {

enum class Solver : std::uint8_t { kEuler = 0, kRk4 = 1 };

struct OdeConfig {
    Solver solver = Solver::kRk4;
    double step = 0.0;      // Δs, meters
    int max_steps = 100000;  // hard bound on ⌈s/Δs⌉
};

/// Autonomous vector field: (state, θ_m) → d(state)/ds.
using FieldFn =
    std::function<std::vector<double>(const std::vector<double>&, double)>;

/// Integrates the field from g0 along direction θ_m for length s: full steps
/// of Δs plus one final partial step of s mod Δs. Throws std::runtime_error
/// when ⌈s/Δs⌉ exceeds max_steps or the state goes non-finite.
std::vector<double> ode_solve(const FieldFn& field, std::vector<double> g0, double theta_m,
                              double s, const OdeConfig& cfg);

/// Same integration recorded on a tape, with the gradient network as the
/// field; gradients flow through every solver stage.
nn::Var ode_solve_tape(const Scgnet& net, nn::Tape& t, nn::Var g0, double theta_m, double s,
                       const OdeConfig& cfg);

/// One source→target supervision edge between database samples.
struct TrainingPair {
    std::size_t source = 0;
    std::size_t target = 0;
    double theta_m = 0.0;  // planar bearing source → target
    double s = 0.0;        // |target − source|
};

/// For every sample, one pair to each of its z nearest neighbors
/// (ties by index). Throws when the database has ≤ z samples.
std::vector<TrainingPair> build_training_pairs(const StaticSampleDb& db, int z);

struct ScgnetTrainConfig {
    int steps = 2000;
    int batch = 20;
    int z = 4;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    OdeConfig ode;
    bool calibrate_input_scale = true;
};

struct LossTrace {
    std::vector<double> mse;  // one entry per optimizer step
};

/// Trains the network as the ODE vector field: integrate source → target,
/// MSE over all channel reals, reverse-mode through the unrolled solver,
/// Adam update. Throws std::runtime_error on divergence.
LossTrace train_scgnet(const StaticSampleDb& db, Scgnet& net, const ScgnetTrainConfig& cfg);

/// Inference: nearest database sample as the initial value, integrate along
/// the bearing toward target_pos for the separation distance.
CMat predict_static(const StaticSampleDb& db, const Scgnet& net, const Vec3& target_pos,
                    const OdeConfig& cfg);

/// Dataset-wide inverse RMS of channel entries; the scattering net's input
/// normalization constant.
double calibrate_input_scale(const StaticSampleDb& db);

}  // namespace soc
