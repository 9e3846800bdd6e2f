#include "soc/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace soc::nn {

void glorot_fill(Tensor& t, int fan_in, int fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (auto& v : t.data) v = rng.uniform(-limit, limit);
}

Mlp::Mlp(ParamStore& params, std::vector<int> widths, Activation hidden_act,
         Activation final_act, Rng& rng)
    : widths_(std::move(widths)), hidden_act_(hidden_act), final_act_(final_act) {
    if (widths_.size() < 2) throw std::invalid_argument("Mlp: need at least in/out widths");
    for (int w : widths_) {
        if (w <= 0) throw std::invalid_argument("Mlp: widths must be positive");
    }
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
        const int in = widths_[l];
        const int out = widths_[l + 1];
        Tensor W({static_cast<std::size_t>(out), static_cast<std::size_t>(in)});
        glorot_fill(W, in, out, rng);
        Tensor B({static_cast<std::size_t>(out)});
        w_ids_.push_back(params.add(std::move(W)));
        b_ids_.push_back(params.add(std::move(B)));
    }
}

Var Mlp::forward(Tape& t, Var x) const {
    if (x.size != widths_.front()) throw std::invalid_argument("Mlp::forward: input size mismatch");
    Var h = x;
    for (std::size_t l = 0; l < w_ids_.size(); ++l) {
        h = t.dense_affine(w_ids_[l], b_ids_[l], h);
        const bool last = (l + 1 == w_ids_.size());
        const Activation act = last ? final_act_ : hidden_act_;
        if (act == Activation::kTanh) h = t.tanh(h);
    }
    return h;
}

LstmCell::LstmCell(ParamStore& params, int input, int hidden, Rng& rng)
    : in_(input), hidden_(hidden) {
    if (input <= 0 || hidden <= 0) throw std::invalid_argument("LstmCell: sizes must be positive");
    Tensor W({static_cast<std::size_t>(4 * hidden), static_cast<std::size_t>(input + hidden)});
    glorot_fill(W, input + hidden, 4 * hidden, rng);
    Tensor B({static_cast<std::size_t>(4 * hidden)});
    w_id_ = params.add(std::move(W));
    b_id_ = params.add(std::move(B));
}

std::pair<Var, Var> LstmCell::step(Tape& t, Var x, Var h, Var c) const {
    if (x.size != in_ || h.size != hidden_ || c.size != hidden_) {
        throw std::invalid_argument("LstmCell::step: state size mismatch");
    }
    Var xh = t.concat(x, h);
    Var z = t.dense_affine(w_id_, b_id_, xh);
    Var i = t.sigmoid(t.slice(z, 0, hidden_));
    Var f = t.sigmoid(t.slice(z, hidden_, hidden_));
    Var g = t.tanh(t.slice(z, 2 * hidden_, hidden_));
    Var o = t.sigmoid(t.slice(z, 3 * hidden_, hidden_));
    Var c_next = t.add(t.mul(f, c), t.mul(i, g));
    Var h_next = t.mul(o, t.tanh(c_next));
    return {h_next, c_next};
}

std::size_t dense_stack_params(const std::vector<int>& widths) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const auto in = static_cast<std::size_t>(widths[l]);
        const auto out = static_cast<std::size_t>(widths[l + 1]);
        n += out * in + out;
    }
    return n;
}

std::size_t lstm_params(int input, int hidden) {
    const auto in = static_cast<std::size_t>(input);
    const auto h = static_cast<std::size_t>(hidden);
    return 4 * ((in + h) * h + h);
}

}  // namespace soc::nn
