#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/dataset.hpp"
#include "soc/mat.hpp"
#include "soc/nn/checkpoint.hpp"
#include "soc/nn/layers.hpp"

namespace soc {

/// Per-sample normalized error Σ|y−ŷ|² / Σ|y|². Throws when the truth has
/// zero norm. Invariant to scaling both arguments by the same factor.
double nmse(const CMat& pred, const CMat& truth);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);

/// The relaxed static-database benchmark: the nearest stored channel.
const CMat& nn_db_baseline(const StaticSampleDb& db, const Vec3& target_pos);

struct LstmBaselineConfig {
    int n_t = 64;
    int n_c = 64;
    int hidden = 384;
    double input_scale = 1.0;
};

/// 4·[(2·N_t·N_c + hidden)·hidden + hidden] + hidden·2·N_t·N_c + 2·N_t·N_c.
std::size_t lstm_baseline_param_count(const LstmBaselineConfig& cfg);

/// Sequence-to-next-step channel predictor: one LSTM layer over flattened
/// angular-delay channels, linear head with bias on the final hidden state.
class LstmBaseline {
public:
    LstmBaseline(LstmBaselineConfig cfg, std::uint64_t seed);

    const LstmBaselineConfig& config() const { return cfg_; }
    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }

    nn::Var forward(nn::Tape& t, const std::vector<const CMat*>& sequence) const;
    CMat predict(const std::vector<CMat>& sequence) const;

    void set_input_scale(double s);

    void save(const std::string& path) const;
    static LstmBaseline load(const std::string& path);
    static LstmBaseline from_checkpoint(const nn::Checkpoint& ckpt);

private:
    LstmBaselineConfig cfg_;
    nn::ParamStore params_;
    nn::LstmCell cell_;
    int head_w_ = -1;
    int head_b_ = -1;
};

struct LstmBaselineTrainConfig {
    int steps = 1500;
    int batch = 20;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    int seq_len = 5;  // input steps; the window target is step seq_len
    bool calibrate_input_scale = true;
};

/// Trains on sliding windows over the trajectories (channels converted to
/// the angular-delay domain). Returns the per-step MSE trace.
std::vector<double> train_lstm_baseline(const TrajectoryDataset& data, LstmBaseline& net,
                                        const LstmBaselineTrainConfig& cfg);

struct ArResult {
    CMat prediction;
    bool used_fallback = false;  // some entry fell back to persistence
};

/// Per-entry least-squares AR(order) one-step extrapolation. Entries whose
/// normal equations are singular fall back to their last value.
ArResult ar_baseline(const std::vector<CMat>& sequence, int order);

struct BenchmarkRow {
    std::string method;
    double density = 0.0;
    double speed = 0.0;
    int seq_len = 0;
    int sample_id = 0;
    double nmse = 0.0;
};

/// CSV with the fixed header row; deterministic %.17g number formatting.
void write_benchmark_csv(const std::string& path, const std::vector<BenchmarkRow>& rows);
std::string format_benchmark_csv(const std::vector<BenchmarkRow>& rows);

/// Loss-trace CSV (step, mse).
void write_loss_csv(const std::string& path, const std::vector<double>& mse);

}  // namespace soc
