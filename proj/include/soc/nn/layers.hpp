#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "soc/common.hpp"
#include "soc/nn/tape.hpp"

namespace soc::nn {

enum class Activation : std::uint8_t { kTanh, kIdentity };

/// Fills a tensor uniformly in ±sqrt(6 / (fan_in + fan_out)).
void glorot_fill(Tensor& t, int fan_in, int fan_out, Rng& rng);

/// Stack of dense layers. widths = {in, h1, ..., out}; hidden layers use
/// `hidden_act`, the last layer uses `final_act`. Parameters register in
/// declaration order: (W1, b1, W2, b2, ...).
class Mlp {
public:
    Mlp() = default;
    Mlp(ParamStore& params, std::vector<int> widths, Activation hidden_act,
        Activation final_act, Rng& rng);

    Var forward(Tape& t, Var x) const;

    const std::vector<int>& widths() const { return widths_; }
    int layer_count() const { return static_cast<int>(w_ids_.size()); }
    int weight_id(int layer) const { return w_ids_[static_cast<std::size_t>(layer)]; }
    int bias_id(int layer) const { return b_ids_[static_cast<std::size_t>(layer)]; }

private:
    std::vector<int> widths_;
    std::vector<int> w_ids_;
    std::vector<int> b_ids_;
    Activation hidden_act_ = Activation::kTanh;
    Activation final_act_ = Activation::kIdentity;
};

/// Single LSTM cell. The four gates are fused into one weight matrix
/// [4·hidden × (input+hidden)] and one bias [4·hidden], rows ordered
/// input, forget, candidate, output.
class LstmCell {
public:
    LstmCell() = default;
    LstmCell(ParamStore& params, int input, int hidden, Rng& rng);

    /// One step of the standard gate equations; returns {h', c'}.
    std::pair<Var, Var> step(Tape& t, Var x, Var h, Var c) const;

    int input_size() const { return in_; }
    int hidden_size() const { return hidden_; }
    int weight_id() const { return w_id_; }
    int bias_id() const { return b_id_; }

private:
    int in_ = 0;
    int hidden_ = 0;
    int w_id_ = -1;
    int b_id_ = -1;
};

/// out·in + out summed over consecutive width pairs.
std::size_t dense_stack_params(const std::vector<int>& widths);

/// 4·[(input+hidden)·hidden + hidden].
std::size_t lstm_params(int input, int hidden);

}  // namespace soc::nn
