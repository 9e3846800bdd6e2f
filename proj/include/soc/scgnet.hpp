#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/mat.hpp"
#include "soc/nn/checkpoint.hpp"
#include "soc/nn/layers.hpp"

namespace soc {

/// How the two scattering-net coefficient maps couple the channel planes.
/// kCorrectedAnalytic treats (C1 + j C2) as a complex multiplier, matching
/// direct differentiation of the closed-form channel (validated by finite
/// differences); kSumDifference instead weights the planes independently
/// and returns their sum and difference, kept for coupling experiments.
enum class CombineMode : std::uint8_t { kSumDifference = 0, kCorrectedAnalytic = 1 };

struct ScgnetConfig {
    int n_t = 64;
    int n_c = 64;
    std::vector<int> scattering_hiddens{256, 768, 512, 256};
    std::vector<int> direction_hiddens{512, 256};
    CombineMode combine_mode = CombineMode::kCorrectedAnalytic;
    double rho = 0.0;          // -2π/λ_c, per meter
    double input_scale = 1.0;  // applied to G before the scattering net

    int map_size() const { return n_t * n_c; }
    std::vector<int> scattering_widths() const;  // in N_t·N_c·2, out N_t·N_c·2
    std::vector<int> direction_widths() const;   // in N_t·2, out N_t·N_c
};

std::size_t scgnet_param_count(const ScgnetConfig& cfg);

/// (sin θ, cos θ) duplicated n_t times, interleaved.
std::vector<double> direction_embedding(double theta_m, int n_t);

/// The fixed combination algebra applied to explicit coefficient maps;
/// exposed so tests can drive it with oracle-computed maps directly.
CMat combine_maps(const CMat& c1, const CMat& c2, const CMat& dm, const CMat& g,
                  CombineMode mode);

/// Spatial channel gradient network: scattering MLP over the flattened
/// channel plus direction MLP over the angle embedding, fused by
/// combine_maps. Predicts ∂G/∂m for a displacement direction θ_m.
class Scgnet {
public:
    Scgnet(ScgnetConfig cfg, std::uint64_t seed);

    const ScgnetConfig& config() const { return cfg_; }
    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }

    /// Tape forward for training through solver steps. g_flat holds the
    /// channel planes [re..., im...] unscaled; output has the same layout.
    nn::Var forward(nn::Tape& t, nn::Var g_flat, double theta_m) const;

    /// Numeric forward for inference.
    CMat forward(const CMat& g, double theta_m) const;

    void set_input_scale(double s);

    void save(const std::string& path) const;
    static Scgnet load(const std::string& path);
    static Scgnet from_checkpoint(const nn::Checkpoint& ckpt);

private:
    ScgnetConfig cfg_;
    nn::ParamStore params_;
    nn::Mlp scattering_;
    nn::Mlp direction_;
};

/// Flatten/unflatten between CMat and the [re..., im...] layout.
std::vector<double> flatten_planes(const CMat& g);
CMat unflatten_planes(const std::vector<double>& v, int n_t, int n_c);

}  // namespace soc
