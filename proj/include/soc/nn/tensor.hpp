#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace soc::nn {

/// Contiguous row-major f64 tensor. Invariant: data.size() == product(shape).
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(numel_of(shape), 0.0);
    }

    static std::size_t numel_of(const std::vector<std::size_t>& s) {
        std::size_t n = 1;
        for (std::size_t d : s) n *= d;
        return n;
    }

    std::size_t numel() const { return data.size(); }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    /// 2-D accessor; shape must be {rows, cols}.
    double& at(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

}  // namespace soc::nn
