#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/dataset.hpp"
#include "soc/doppler.hpp"
#include "soc/mat.hpp"
#include "soc/nn/adam.hpp"
#include "soc/nn/checkpoint.hpp"
#include "soc/nn/layers.hpp"

namespace soc {

/// What each LSTM cell consumes: one subcarrier column of the channel, or
/// the whole flattened matrix repeated at every step. The column variant is
/// the primary design; the full-matrix variant reproduces an alternative
/// parameter budget and is kept selectable.
enum class PositionerInputMode : std::uint8_t { kColumnPerCell = 0, kFullMatrixPerCell = 1 };

struct PositionerConfig {
    int n_t = 64;
    int n_c = 64;
    int hidden1 = 256;
    int hidden2 = 128;
    PositionerInputMode input_mode = PositionerInputMode::kColumnPerCell;
    double input_scale = 1.0;

    int step_input_size() const {
        return input_mode == PositionerInputMode::kColumnPerCell ? 2 * n_t : 2 * n_t * n_c;
    }
};

std::size_t positioner_param_count(const PositionerConfig& cfg);

/// Two stacked LSTM layers stepped once per subcarrier, with a dense head
/// on the final hidden state producing a 3-d position in meters.
class Positioner {
public:
    Positioner(PositionerConfig cfg, std::uint64_t seed);

    const PositionerConfig& config() const { return cfg_; }
    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }

    /// Tape forward for training; g is the angular-delay channel.
    nn::Var forward(nn::Tape& t, const CMat& g) const;

    /// Numeric forward for inference.
    Vec3 position(const CMat& g) const;

    void set_input_scale(double s);
    void set_head_bias(const Vec3& b);

    void save(const std::string& path) const;
    static Positioner load(const std::string& path);
    static Positioner from_checkpoint(const nn::Checkpoint& ckpt);

private:
    PositionerConfig cfg_;
    nn::ParamStore params_;
    nn::LstmCell layer1_;
    nn::LstmCell layer2_;
    int head_w_ = -1;
    int head_b_ = -1;
};

struct PositionerTrainConfig {
    int steps = 2000;
    int batch = 20;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    bool calibrate_input_scale = true;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> holdout;
};

/// Seeded shuffle split; the training loop and evaluations recompute the
/// identical split from (n, fraction, seed).
SplitIndices split_db(std::size_t n, double train_fraction, std::uint64_t seed);

struct PositionerTrainResult {
    std::vector<double> mse;  // per optimizer step
    SplitIndices split;
};

PositionerTrainResult train_positioner(const StaticSampleDb& db, Positioner& net,
                                       const PositionerTrainConfig& cfg);

/// Ordinary least squares x(t) = v t + σ, fit per coordinate.
struct LinearFit {
    Vec3 v;      // m/s
    Vec3 sigma;  // meters
};

LinearFit least_squares_velocity(const std::vector<Vec3>& positions,
                                 const std::vector<double>& times);

struct IterationConfig {
    double eta = 0.1;         // m/s; velocity-change convergence threshold
    int max_iterations = 20;  // refinement cap; exceeded → warning flag
};

struct IterationResult {
    Vec3 predicted_position;        // extrapolated to t_next
    LinearFit fit;                  // final velocity fit
    std::vector<double> delta_v;    // |v^i − v^{i−1}| per refinement
    std::vector<Vec3> positions;    // per-sample positions from the last pass
    int iterations = 0;             // refinements performed (≥ 1)
    bool converged = false;
};

/// Iterative Doppler elimination + motion extraction over a measured
/// channel sequence (antenna-frequency domain). Positions every sample,
/// fits a velocity, then repeatedly eliminates the fitted Doppler from the
/// current channel iterates and re-fits until the velocity stabilizes
/// below η or max_iterations is hit. Always performs at least one
/// refinement. The returned position extrapolates the fit to t_next.
IterationResult iterate_position(const Positioner& net, const std::vector<CMat>& channels,
                                 const std::vector<double>& times, double t_next,
                                 const IterationConfig& cfg, const DopplerConfig& doppler_cfg);

}  // namespace soc
