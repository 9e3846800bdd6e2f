#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace soc {

/// Dense row-major matrix of doubles.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
};

/// Complex matrix stored as separate real/imaginary planes. Complex values
/// never cross a serialization or network boundary as a language-level
/// complex type; the planes are the representation everywhere.
struct CMat {
    Mat re, im;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : re(r, c), im(r, c) {}

    std::size_t rows() const { return re.rows; }
    std::size_t cols() const { return re.cols; }

    void set(std::size_t r, std::size_t c, double vr, double vi) {
        re(r, c) = vr;
        im(r, c) = vi;
    }
    void add(std::size_t r, std::size_t c, double vr, double vi) {
        re(r, c) += vr;
        im(r, c) += vi;
    }
};

inline void require_same_shape(const CMat& a, const CMat& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

/// c = a * b (complex). No aliasing allowed.
inline CMat cmul(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("cmul: dimension mismatch");
    CMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double ar = a.re(i, k), ai = a.im(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c.re(i, j) += ar * b.re(k, j) - ai * b.im(k, j);
                c.im(i, j) += ar * b.im(k, j) + ai * b.re(k, j);
            }
        }
    }
    return c;
}

/// c = a^H * b (conjugate transpose of a times b).
inline CMat cmul_herm_left(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("cmul_herm_left: dimension mismatch");
    CMat c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double ar = a.re(k, i), ai = -a.im(k, i);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c.re(i, j) += ar * b.re(k, j) - ai * b.im(k, j);
                c.im(i, j) += ar * b.im(k, j) + ai * b.re(k, j);
            }
        }
    }
    return c;
}

/// c = a * b^H (a times conjugate transpose of b).
inline CMat cmul_herm_right(const CMat& a, const CMat& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("cmul_herm_right: dimension mismatch");
    CMat c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double ar = a.re(i, k), ai = a.im(i, k);
            for (std::size_t j = 0; j < b.rows(); ++j) {
                c.re(i, j) += ar * b.re(j, k) + ai * b.im(j, k);
                c.im(i, j) += ai * b.re(j, k) - ar * b.im(j, k);
            }
        }
    }
    return c;
}

/// Entrywise complex product a ∘ b.
inline CMat hadamard(const CMat& a, const CMat& b) {
    require_same_shape(a, b, "hadamard");
    CMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.re.size(); ++i) {
        c.re.data[i] = a.re.data[i] * b.re.data[i] - a.im.data[i] * b.im.data[i];
        c.im.data[i] = a.re.data[i] * b.im.data[i] + a.im.data[i] * b.re.data[i];
    }
    return c;
}

inline double frobenius_norm(const CMat& a) {
    double s = 0.0;
    for (double v : a.re.data) s += v * v;
    for (double v : a.im.data) s += v * v;
    return std::sqrt(s);
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.re.size(); ++i) {
        m = std::max(m, std::abs(a.re.data[i] - b.re.data[i]));
        m = std::max(m, std::abs(a.im.data[i] - b.im.data[i]));
    }
    return m;
}

/// Squared error summed over both planes.
inline double sq_error(const CMat& a, const CMat& b) {
    require_same_shape(a, b, "sq_error");
    double s = 0.0;
    for (std::size_t i = 0; i < a.re.size(); ++i) {
        const double dr = a.re.data[i] - b.re.data[i];
        const double di = a.im.data[i] - b.im.data[i];
        s += dr * dr + di * di;
    }
    return s;
}

inline double sq_norm(const CMat& a) {
    double s = 0.0;
    for (double v : a.re.data) s += v * v;
    for (double v : a.im.data) s += v * v;
    return s;
}

}  // namespace soc
