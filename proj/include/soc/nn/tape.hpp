#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "soc/nn/tensor.hpp"

namespace soc::nn {

/// Registry of trainable tensors and their gradient accumulators. Parameter
/// ids are stable and ordered; checkpoints serialize tensors in id order.
class ParamStore {
public:
    int add(Tensor t) {
        grads_.emplace_back(t.shape);
        values_.push_back(std::move(t));
        return static_cast<int>(values_.size()) - 1;
    }

    Tensor& value(int id) { return values_[static_cast<std::size_t>(id)]; }
    const Tensor& value(int id) const { return values_[static_cast<std::size_t>(id)]; }
    Tensor& grad(int id) { return grads_[static_cast<std::size_t>(id)]; }
    const Tensor& grad(int id) const { return grads_[static_cast<std::size_t>(id)]; }

    std::size_t count() const { return values_.size(); }

    std::size_t total_scalars() const {
        std::size_t n = 0;
        for (const auto& t : values_) n += t.numel();
        return n;
    }

    void zero_grads() {
        for (auto& g : grads_) g.fill(0.0);
    }

    std::vector<Tensor>& values() { return values_; }
    std::vector<Tensor>& grads() { return grads_; }
    const std::vector<Tensor>& values() const { return values_; }
    const std::vector<Tensor>& grads() const { return grads_; }

private:
    std::vector<Tensor> values_;
    std::vector<Tensor> grads_;
};

/// Handle to a tape variable (a flat vector of doubles).
struct Var {
    int id = -1;
    int size = 0;
    bool valid() const { return id >= 0; }
};

/// Reverse-mode tape over the op set the project actually trains through:
/// dense affine maps, tanh/sigmoid, elementwise add/sub/mul, scalar scaling,
/// axpy, concat/slice and an MSE loss against a constant target. Values and
/// adjoints live in arenas that are reused across Tape::reset() calls, so a
/// training loop does not reallocate.
class Tape {
public:
    explicit Tape(ParamStore* params) : params_(params) {}

    /// Drops all nodes and values, keeping allocated capacity.
    void reset();

    /// Constant input (no gradient flows into it, but its adjoint is tracked).
    Var leaf(std::span<const double> v);
    Var leaf_zeros(int size);

    /// y = W x + b. w_id/b_id index the ParamStore; W is {out, in}, b is {out}.
    Var dense_affine(int w_id, int b_id, Var x);

    Var tanh(Var x);
    Var sigmoid(Var x);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);               // elementwise (Hadamard)
    Var scale(Var a, double c);          // c * a
    Var add_scaled(Var a, Var b, double c);  // a + c * b
    Var concat(Var a, Var b);
    Var slice(Var a, int offset, int len);

    /// Mean squared error against a constant target: (1/n) Σ (x_i - t_i)^2.
    Var mse_against(Var x, std::span<const double> target);

    /// Reverse pass from `loss` (size-1 var) with the given upstream seed.
    /// Parameter gradients accumulate into the ParamStore (+=), so callers
    /// zero them when starting a new batch. Throws if called with no
    /// recorded forward or a foreign var.
    void backward(Var loss, double seed = 1.0);

    std::span<const double> value(Var v) const;
    std::span<const double> adjoint(Var v) const;
    double scalar(Var v) const { return value(v)[0]; }

    std::size_t node_count() const { return nodes_.size(); }

private:
    enum class Op : std::uint8_t {
        kLeaf,
        kDense,
        kTanh,
        kSigmoid,
        kAdd,
        kSub,
        kMul,
        kScale,
        kAddScaled,
        kConcat,
        kSlice,
        kMse,
    };

    struct Node {
        Op op;
        int a = -1, b = -1;
        int w = -1, bias = -1;
        double c = 0.0;
        int aux = 0;               // slice offset / aux arena offset for MSE
        std::size_t off = 0;       // output offset in value arena
        int size = 0;              // output length
    };

    Var push(Op op, int size, int a = -1, int b = -1);
    double* out_ptr(const Node& n) { return vals_.data() + n.off; }
    const double* out_ptr(const Node& n) const { return vals_.data() + n.off; }

    ParamStore* params_;
    std::vector<Node> nodes_;
    std::vector<double> vals_;
    std::vector<double> adj_;
    std::vector<double> aux_;      // constant targets for MSE nodes
    bool ran_backward_ = false;
};

}  // namespace soc::nn
