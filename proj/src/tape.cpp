#include "soc/nn/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace soc::nn {

void Tape::reset() {
    nodes_.clear();
    vals_.clear();
    adj_.clear();
    aux_.clear();
    ran_backward_ = false;
}

Var Tape::push(Op op, int size, int a, int b) {
    Node n;
    n.op = op;
    n.a = a;
    n.b = b;
    n.off = vals_.size();
    n.size = size;
    vals_.resize(vals_.size() + static_cast<std::size_t>(size), 0.0);
    nodes_.push_back(n);
    return Var{static_cast<int>(nodes_.size()) - 1, size};
}

Var Tape::leaf(std::span<const double> v) {
    Var out = push(Op::kLeaf, static_cast<int>(v.size()));
    double* y = out_ptr(nodes_.back());
    for (std::size_t i = 0; i < v.size(); ++i) y[i] = v[i];
    return out;
}

Var Tape::leaf_zeros(int size) { return push(Op::kLeaf, size); }

Var Tape::dense_affine(int w_id, int b_id, Var x) {
    const Tensor& W = params_->value(w_id);
    const Tensor& B = params_->value(b_id);
    if (W.shape.size() != 2 || W.shape[1] != static_cast<std::size_t>(x.size)) {
        throw std::invalid_argument("dense_affine: weight/input shape mismatch");
    }
    const int out_n = static_cast<int>(W.shape[0]);
    if (B.numel() != static_cast<std::size_t>(out_n)) {
        throw std::invalid_argument("dense_affine: bias shape mismatch");
    }
    Var out = push(Op::kDense, out_n, x.id);
    Node& n = nodes_.back();
    n.w = w_id;
    n.bias = b_id;
    const double* xv = vals_.data() + nodes_[static_cast<std::size_t>(x.id)].off;
    double* y = out_ptr(n);
    const std::size_t in_n = W.shape[1];
    for (int o = 0; o < out_n; ++o) {
        const double* wrow = W.data.data() + static_cast<std::size_t>(o) * in_n;
        double acc = B.data[static_cast<std::size_t>(o)];
        for (std::size_t i = 0; i < in_n; ++i) acc += wrow[i] * xv[i];
        y[o] = acc;
    }
    return out;
}

Var Tape::tanh(Var x) {
    Var out = push(Op::kTanh, x.size, x.id);
    const double* xv = vals_.data() + nodes_[static_cast<std::size_t>(x.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < x.size; ++i) y[i] = std::tanh(xv[i]);
    return out;
}

Var Tape::sigmoid(Var x) {
    Var out = push(Op::kSigmoid, x.size, x.id);
    const double* xv = vals_.data() + nodes_[static_cast<std::size_t>(x.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < x.size; ++i) y[i] = 1.0 / (1.0 + std::exp(-xv[i]));
    return out;
}

Var Tape::add(Var a, Var b) {
    if (a.size != b.size) throw std::invalid_argument("add: size mismatch");
    Var out = push(Op::kAdd, a.size, a.id, b.id);
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    const double* bv = vals_.data() + nodes_[static_cast<std::size_t>(b.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < a.size; ++i) y[i] = av[i] + bv[i];
    return out;
}

Var Tape::sub(Var a, Var b) {
    if (a.size != b.size) throw std::invalid_argument("sub: size mismatch");
    Var out = push(Op::kSub, a.size, a.id, b.id);
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    const double* bv = vals_.data() + nodes_[static_cast<std::size_t>(b.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < a.size; ++i) y[i] = av[i] - bv[i];
    return out;
}

Var Tape::mul(Var a, Var b) {
    if (a.size != b.size) throw std::invalid_argument("mul: size mismatch");
    Var out = push(Op::kMul, a.size, a.id, b.id);
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    const double* bv = vals_.data() + nodes_[static_cast<std::size_t>(b.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < a.size; ++i) y[i] = av[i] * bv[i];
    return out;
}

Var Tape::scale(Var a, double c) {
    Var out = push(Op::kScale, a.size, a.id);
    nodes_.back().c = c;
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < a.size; ++i) y[i] = c * av[i];
    return out;
}

Var Tape::add_scaled(Var a, Var b, double c) {
    if (a.size != b.size) throw std::invalid_argument("add_scaled: size mismatch");
    Var out = push(Op::kAddScaled, a.size, a.id, b.id);
    nodes_.back().c = c;
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    const double* bv = vals_.data() + nodes_[static_cast<std::size_t>(b.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < a.size; ++i) y[i] = av[i] + c * bv[i];
    return out;
}

Var Tape::concat(Var a, Var b) {
    Var out = push(Op::kConcat, a.size + b.size, a.id, b.id);
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    const double* bv = vals_.data() + nodes_[static_cast<std::size_t>(b.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < a.size; ++i) y[i] = av[i];
    for (int i = 0; i < b.size; ++i) y[a.size + i] = bv[i];
    return out;
}

Var Tape::slice(Var a, int offset, int len) {
    if (offset < 0 || len < 0 || offset + len > a.size) {
        throw std::invalid_argument("slice: range out of bounds");
    }
    Var out = push(Op::kSlice, len, a.id);
    nodes_.back().aux = offset;
    const double* av = vals_.data() + nodes_[static_cast<std::size_t>(a.id)].off;
    double* y = out_ptr(nodes_.back());
    for (int i = 0; i < len; ++i) y[i] = av[offset + i];
    return out;
}

Var Tape::mse_against(Var x, std::span<const double> target) {
    if (static_cast<std::size_t>(x.size) != target.size()) {
        throw std::invalid_argument("mse_against: target size mismatch");
    }
    Var out = push(Op::kMse, 1, x.id);
    Node& n = nodes_.back();
    n.aux = static_cast<int>(aux_.size());
    aux_.insert(aux_.end(), target.begin(), target.end());
    const double* xv = vals_.data() + nodes_[static_cast<std::size_t>(x.id)].off;
    const double* tv = aux_.data() + n.aux;
    double s = 0.0;
    for (int i = 0; i < x.size; ++i) {
        const double d = xv[i] - tv[i];
        s += d * d;
    }
    *out_ptr(n) = s / static_cast<double>(x.size);
    return out;
}

std::span<const double> Tape::value(Var v) const {
    const Node& n = nodes_.at(static_cast<std::size_t>(v.id));
    return {vals_.data() + n.off, static_cast<std::size_t>(n.size)};
}

std::span<const double> Tape::adjoint(Var v) const {
    if (!ran_backward_) throw std::logic_error("adjoint requested before backward");
    const Node& n = nodes_.at(static_cast<std::size_t>(v.id));
    return {adj_.data() + n.off, static_cast<std::size_t>(n.size)};
}

void Tape::backward(Var loss, double seed) {
    if (nodes_.empty()) throw std::logic_error("backward called before any forward op");
    if (loss.id < 0 || static_cast<std::size_t>(loss.id) >= nodes_.size()) {
        throw std::logic_error("backward: loss var not on this tape");
    }
    adj_.assign(vals_.size(), 0.0);
    adj_[nodes_[static_cast<std::size_t>(loss.id)].off] = seed;

    for (std::size_t ni = nodes_.size(); ni-- > 0;) {
        const Node& n = nodes_[ni];
        const double* dy = adj_.data() + n.off;
        switch (n.op) {
            case Op::kLeaf:
                break;
            case Op::kDense: {
                const Node& na = nodes_[static_cast<std::size_t>(n.a)];
                const double* xv = vals_.data() + na.off;
                double* dx = adj_.data() + na.off;
                Tensor& W = params_->value(n.w);
                Tensor& dW = params_->grad(n.w);
                Tensor& dB = params_->grad(n.bias);
                const std::size_t in_n = W.shape[1];
                for (int o = 0; o < n.size; ++o) {
                    const double g = dy[o];
                    if (g == 0.0) continue;
                    const double* wrow = W.data.data() + static_cast<std::size_t>(o) * in_n;
                    double* dwrow = dW.data.data() + static_cast<std::size_t>(o) * in_n;
                    for (std::size_t i = 0; i < in_n; ++i) {
                        dx[i] += g * wrow[i];
                        dwrow[i] += g * xv[i];
                    }
                    dB.data[static_cast<std::size_t>(o)] += g;
                }
                break;
            }
            case Op::kTanh: {
                const Node& na = nodes_[static_cast<std::size_t>(n.a)];
                double* dx = adj_.data() + na.off;
                const double* y = out_ptr(n);
                for (int i = 0; i < n.size; ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
                break;
            }
            case Op::kSigmoid: {
                const Node& na = nodes_[static_cast<std::size_t>(n.a)];
                double* dx = adj_.data() + na.off;
                const double* y = out_ptr(n);
                for (int i = 0; i < n.size; ++i) dx[i] += dy[i] * y[i] * (1.0 - y[i]);
                break;
            }
            case Op::kAdd: {
                double* da = adj_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                double* db = adj_.data() + nodes_[static_cast<std::size_t>(n.b)].off;
                for (int i = 0; i < n.size; ++i) {
                    da[i] += dy[i];
                    db[i] += dy[i];
                }
                break;
            }
            case Op::kSub: {
                double* da = adj_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                double* db = adj_.data() + nodes_[static_cast<std::size_t>(n.b)].off;
                for (int i = 0; i < n.size; ++i) {
                    da[i] += dy[i];
                    db[i] -= dy[i];
                }
                break;
            }
            case Op::kMul: {
                const Node& na = nodes_[static_cast<std::size_t>(n.a)];
                const Node& nb = nodes_[static_cast<std::size_t>(n.b)];
                double* da = adj_.data() + na.off;
                double* db = adj_.data() + nb.off;
                const double* av = vals_.data() + na.off;
                const double* bv = vals_.data() + nb.off;
                for (int i = 0; i < n.size; ++i) {
                    da[i] += dy[i] * bv[i];
                    db[i] += dy[i] * av[i];
                }
                break;
            }
            case Op::kScale: {
                double* da = adj_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                for (int i = 0; i < n.size; ++i) da[i] += n.c * dy[i];
                break;
            }
            case Op::kAddScaled: {
                double* da = adj_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                double* db = adj_.data() + nodes_[static_cast<std::size_t>(n.b)].off;
                for (int i = 0; i < n.size; ++i) {
                    da[i] += dy[i];
                    db[i] += n.c * dy[i];
                }
                break;
            }
            case Op::kConcat: {
                const Node& na = nodes_[static_cast<std::size_t>(n.a)];
                const Node& nb = nodes_[static_cast<std::size_t>(n.b)];
                double* da = adj_.data() + na.off;
                double* db = adj_.data() + nb.off;
                for (int i = 0; i < na.size; ++i) da[i] += dy[i];
                for (int i = 0; i < nb.size; ++i) db[i] += dy[na.size + i];
                break;
            }
            case Op::kSlice: {
                double* da = adj_.data() + nodes_[static_cast<std::size_t>(n.a)].off;
                for (int i = 0; i < n.size; ++i) da[n.aux + i] += dy[i];
                break;
            }
            case Op::kMse: {
                const Node& na = nodes_[static_cast<std::size_t>(n.a)];
                double* dx = adj_.data() + na.off;
                const double* xv = vals_.data() + na.off;
                const double* tv = aux_.data() + n.aux;
                const double g = dy[0] * 2.0 / static_cast<double>(na.size);
                for (int i = 0; i < na.size; ++i) dx[i] += g * (xv[i] - tv[i]);
                break;
            }
        }
    }
    ran_backward_ = true;
}

}  // namespace soc::nn
