#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "soc/common.hpp"
#include "soc/nn/adam.hpp"
#include "soc/nn/layers.hpp"
#include "soc/nn/tape.hpp"
#include "test_util.hpp"

using soc::nn::Activation;
using soc::nn::Adam;
using soc::nn::AdamConfig;
using soc::nn::LstmCell;
using soc::nn::Mlp;
using soc::nn::ParamStore;
using soc::nn::Tape;
using soc::nn::Tensor;
using soc::nn::Var;

namespace {

int add_matrix(ParamStore& p, std::size_t rows, std::size_t cols,
               const std::vector<double>& vals) {
    Tensor t({rows, cols});
    t.data = vals;
    return p.add(std::move(t));
}

int add_vector(ParamStore& p, const std::vector<double>& vals) {
    Tensor t({vals.size()});
    t.data = vals;
    return p.add(std::move(t));
}

}  // namespace

TEST_CASE("dense identity map passes input through") {
    ParamStore p;
    int w = add_matrix(p, 2, 2, {1, 0, 0, 1});
    int b = add_vector(p, {0, 0});
    Tape t(&p);
    std::vector<double> x{1, 2};
    Var y = t.dense_affine(w, b, t.leaf(x));
    CHECK(t.value(y)[0] == doctest::Approx(1.0));
    CHECK(t.value(y)[1] == doctest::Approx(2.0));
}

TEST_CASE("dense zero weight with bias is a constant map through tanh") {
    ParamStore p;
    int w = add_matrix(p, 1, 2, {0, 0});
    int b = add_vector(p, {0.5});
    Tape t(&p);
    for (std::vector<double> x : {std::vector<double>{1, 2}, std::vector<double>{-7, 3}}) {
        Var y = t.tanh(t.dense_affine(w, b, t.leaf(x)));
        CHECK(t.value(y)[0] == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
    }
}

TEST_CASE("dense forward matches brute-force dot products") {
    soc::Rng rng(7);
    ParamStore p;
    const std::size_t out = 5, in = 4;
    std::vector<double> wv(out * in), bv(out), xv(in);
    for (auto& v : wv) v = rng.uniform(-1, 1);
    for (auto& v : bv) v = rng.uniform(-1, 1);
    for (auto& v : xv) v = rng.uniform(-1, 1);
    int w = add_matrix(p, out, in, wv);
    int b = add_vector(p, bv);
    Tape t(&p);
    Var y = t.dense_affine(w, b, t.leaf(xv));
    for (std::size_t r = 0; r < out; ++r) {
        double want = bv[r];
        for (std::size_t c = 0; c < in; ++c) want += wv[r * in + c] * xv[c];
        CHECK(t.value(y)[r] == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("dense rejects mismatched input size") {
    ParamStore p;
    int w = add_matrix(p, 2, 3, {1, 2, 3, 4, 5, 6});
    int b = add_vector(p, {0, 0});
    Tape t(&p);
    std::vector<double> x{1, 2};
    CHECK_THROWS_AS(t.dense_affine(w, b, t.leaf(x)), std::invalid_argument);
}

TEST_CASE("elementwise ops reject mismatched sizes") {
    ParamStore p;
    Tape t(&p);
    std::vector<double> a{1, 2}, b{1, 2, 3};
    Var va = t.leaf(a), vb = t.leaf(b);
    CHECK_THROWS_AS(t.add(va, vb), std::invalid_argument);
    CHECK_THROWS_AS(t.mul(va, vb), std::invalid_argument);
}

TEST_CASE("lstm step at zero params is a zero fixed point") {
    ParamStore p;
    soc::Rng rng(1);
    LstmCell cell(p, 3, 4, rng);
    p.value(cell.weight_id()).fill(0.0);
    p.value(cell.bias_id()).fill(0.0);
    Tape t(&p);
    std::vector<double> x{0.3, -0.2, 0.9};
    auto [h, c] = cell.step(t, t.leaf(x), t.leaf_zeros(4), t.leaf_zeros(4));
    for (int i = 0; i < 4; ++i) {
        CHECK(t.value(h)[i] == doctest::Approx(0.0));
        CHECK(t.value(c)[i] == doctest::Approx(0.0));
    }
}

namespace {

// Independent scalar-loop LSTM step, gate rows ordered (input, forget,
// candidate, output) in the fused weight.
void scalar_lstm(const std::vector<double>& w, const std::vector<double>& b, int in, int hid,
                 const std::vector<double>& x, const std::vector<double>& h,
                 const std::vector<double>& c, std::vector<double>& h2,
                 std::vector<double>& c2) {
    auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const int cols = in + hid;
    std::vector<double> xh(x);
    xh.insert(xh.end(), h.begin(), h.end());
    h2.assign(hid, 0.0);
    c2.assign(hid, 0.0);
    for (int r = 0; r < hid; ++r) {
        double zi = b[r], zf = b[hid + r], zg = b[2 * hid + r], zo = b[3 * hid + r];
        for (int k = 0; k < cols; ++k) {
            zi += w[static_cast<std::size_t>(r) * cols + k] * xh[k];
            zf += w[static_cast<std::size_t>(hid + r) * cols + k] * xh[k];
            zg += w[static_cast<std::size_t>(2 * hid + r) * cols + k] * xh[k];
            zo += w[static_cast<std::size_t>(3 * hid + r) * cols + k] * xh[k];
        }
        c2[r] = sigmoid(zf) * c[r] + sigmoid(zi) * std::tanh(zg);
        h2[r] = sigmoid(zo) * std::tanh(c2[r]);
    }
}

}  // namespace

TEST_CASE("lstm step matches an independent scalar implementation") {
    ParamStore p;
    soc::Rng rng(42);
    const int in = 3, hid = 5;
    LstmCell cell(p, in, hid, rng);
    std::vector<double> x{0.1, -0.4, 0.7}, h(hid), c(hid);
    for (auto& v : h) v = rng.uniform(-1, 1);
    for (auto& v : c) v = rng.uniform(-1, 1);
    Tape t(&p);
    auto [hv, cv] = cell.step(t, t.leaf(x), t.leaf(h), t.leaf(c));
    std::vector<double> h2, c2;
    scalar_lstm(p.value(cell.weight_id()).data, p.value(cell.bias_id()).data, in, hid, x, h, c,
                h2, c2);
    for (int i = 0; i < hid; ++i) {
        CHECK(std::abs(t.value(hv)[i] - h2[i]) < 1e-12);
        CHECK(std::abs(t.value(cv)[i] - c2[i]) < 1e-12);
    }
}

TEST_CASE("lstm with saturated forget gate keeps the cell state") {
    ParamStore p;
    soc::Rng rng(5);
    const int in = 2, hid = 3;
    LstmCell cell(p, in, hid, rng);
    // Saturate the forget gate: sigmoid(40) is 1 to double precision.
    for (int r = 0; r < hid; ++r) p.value(cell.bias_id()).data[static_cast<std::size_t>(hid + r)] = 40.0;
    for (int r = 0; r < hid; ++r)
        for (int k = 0; k < in + hid; ++k)
            p.value(cell.weight_id()).data[static_cast<std::size_t>(hid + r) * (in + hid) + k] = 0.0;
    std::vector<double> x{0.2, -0.6}, h(hid), c{0.4, -0.3, 0.8};
    for (auto& v : h) v = rng.uniform(-1, 1);
    Tape t(&p);
    auto [hv, cv] = cell.step(t, t.leaf(x), t.leaf(h), t.leaf(c));
    (void)hv;
    // c' = c + i∘g exactly when the forget gate saturates to 1.
    std::vector<double> h2, c2;
    scalar_lstm(p.value(cell.weight_id()).data, p.value(cell.bias_id()).data, in, hid, x, h, c,
                h2, c2);
    for (int i = 0; i < hid; ++i) {
        const double ig = c2[i] - c[i];  // scalar oracle's i∘g term
        CHECK(t.value(cv)[i] == doctest::Approx(c[i] + ig).epsilon(1e-12));
    }
}

TEST_CASE("backward of a summed linear map gives outer-product gradient") {
    ParamStore p;
    int w = add_matrix(p, 3, 2, {0.5, -1, 2, 0.25, -0.75, 1.5});
    int b = add_vector(p, {0, 0, 0});
    int ones = add_matrix(p, 1, 3, {1, 1, 1});
    int zero = add_vector(p, {0});
    Tape t(&p);
    std::vector<double> x{1.5, -2.0};
    Var y = t.dense_affine(w, b, t.leaf(x));
    Var loss = t.dense_affine(ones, zero, y);  // sum of components
    p.zero_grads();
    t.backward(loss);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            CHECK(p.grad(w).at(r, c) == doctest::Approx(x[c]).epsilon(1e-14));
    for (std::size_t r = 0; r < 3; ++r) CHECK(p.grad(b)[r] == doctest::Approx(1.0));
}

TEST_CASE("backward matches finite differences on a small tanh network") {
    ParamStore p;
    soc::Rng rng(11);
    Mlp net(p, {3, 4, 2}, Activation::kTanh, Activation::kIdentity, rng);
    std::vector<double> x{0.3, -0.8, 0.5}, target{0.25, -0.5};
    Tape t(&p);
    auto loss_value = [&]() {
        Tape tt(&p);
        Var out = net.forward(tt, tt.leaf(x));
        return tt.scalar(tt.mse_against(out, target));
    };
    auto run_backward = [&]() {
        t.reset();
        Var out = net.forward(t, t.leaf(x));
        t.backward(t.mse_against(out, target));
    };
    CHECK(testutil::max_grad_rel_err(p, loss_value, run_backward, 1e-6) < 1e-5);
}

TEST_CASE("backward matches finite differences through an lstm step") {
    ParamStore p;
    soc::Rng rng(13);
    const int in = 3, hid = 4;
    LstmCell cell(p, in, hid, rng);
    std::vector<double> x{0.4, -0.1, 0.9}, target{0.2, 0.1, -0.3, 0.5};
    Tape t(&p);
    auto loss_value = [&]() {
        Tape tt(&p);
        auto [h, c] = cell.step(tt, tt.leaf(x), tt.leaf_zeros(hid), tt.leaf_zeros(hid));
        (void)c;
        return tt.scalar(tt.mse_against(h, target));
    };
    auto run_backward = [&]() {
        t.reset();
        auto [h, c] = cell.step(t, t.leaf(x), t.leaf_zeros(hid), t.leaf_zeros(hid));
        (void)c;
        t.backward(t.mse_against(h, target));
    };
    CHECK(testutil::max_grad_rel_err(p, loss_value, run_backward, 1e-6) < 1e-5);
}

TEST_CASE("zero upstream seed produces zero parameter gradients") {
    ParamStore p;
    soc::Rng rng(3);
    Mlp net(p, {2, 3, 1}, Activation::kTanh, Activation::kIdentity, rng);
    Tape t(&p);
    std::vector<double> x{1.0, -1.0}, target{0.0};
    Var out = net.forward(t, t.leaf(x));
    Var loss = t.mse_against(out, target);
    p.zero_grads();
    t.backward(loss, 0.0);
    for (std::size_t id = 0; id < p.count(); ++id)
        for (double g : p.grad(static_cast<int>(id)).data) CHECK(g == 0.0);
}

TEST_CASE("backward before any forward throws") {
    ParamStore p;
    Tape t(&p);
    CHECK_THROWS_AS(t.backward(Var{0, 1}), std::logic_error);
}

TEST_CASE("adam leaves params unchanged under zero gradient") {
    ParamStore p;
    int w = add_vector(p, {1.0, -2.0, 3.0});
    Adam opt(p, AdamConfig{});
    p.zero_grads();
    opt.step();
    CHECK(p.value(w).data == std::vector<double>{1.0, -2.0, 3.0});
}

TEST_CASE("adam first step from zeroed moments is -lr*g/(|g|+eps)") {
    ParamStore p;
    int w = add_vector(p, {1.0, 1.0});
    AdamConfig cfg;
    cfg.lr = 0.01;
    cfg.clip_norm = 0.0;  // disabled
    Adam opt(p, cfg);
    p.zero_grads();
    p.grad(w).data = {0.3, -4.0};
    opt.step();
    CHECK(p.value(w)[0] ==
          doctest::Approx(1.0 - 0.01 * 0.3 / (0.3 + cfg.eps)).epsilon(1e-12));
    CHECK(p.value(w)[1] ==
          doctest::Approx(1.0 + 0.01 * 4.0 / (4.0 + cfg.eps)).epsilon(1e-12));
}

TEST_CASE("adam with constant gradient approaches lr*sign(g) steps") {
    ParamStore p;
    int w = add_vector(p, {0.0});
    AdamConfig cfg;
    cfg.lr = 1e-3;
    cfg.clip_norm = 0.0;
    Adam opt(p, cfg);
    double prev = 0.0;
    double last_step = 0.0;
    for (int i = 0; i < 300; ++i) {
        p.zero_grads();
        p.grad(w).data = {0.7};
        opt.step();
        last_step = p.value(w)[0] - prev;
        prev = p.value(w)[0];
    }
    CHECK(last_step == doctest::Approx(-cfg.lr).epsilon(1e-6));
}

TEST_CASE("adam clips the global gradient norm in place") {
    ParamStore p;
    int a = add_vector(p, {0.0, 0.0});
    int b = add_vector(p, {0.0});
    AdamConfig cfg;
    cfg.clip_norm = 5.0;
    Adam opt(p, cfg);
    p.zero_grads();
    p.grad(a).data = {30.0, 40.0};  // norm 50 with b's 0
    p.grad(b).data = {0.0};
    opt.step();
    double norm = 0.0;
    for (std::size_t id = 0; id < p.count(); ++id)
        for (double g : p.grad(static_cast<int>(id)).data) norm += g * g;
    CHECK(std::sqrt(norm) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(p.grad(a)[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(p.grad(a)[1] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("parameter count helpers match hand arithmetic") {
    CHECK(soc::nn::dense_stack_params({2, 3}) == 9);  // 3*2 + 3
    CHECK(soc::nn::dense_stack_params({4, 5, 6}) == 4 * 5 + 5 + 5 * 6 + 6);
    CHECK(soc::nn::lstm_params(3, 4) == 4 * ((3 + 4) * 4 + 4));
}

TEST_CASE("glorot init stays inside its bound and is seed-deterministic") {
    Tensor a({6, 4}), b({6, 4});
    const double bound = std::sqrt(6.0 / (6 + 4));
    {
        soc::Rng rng(9);
        soc::nn::glorot_fill(a, 4, 6, rng);
    }
    {
        soc::Rng rng(9);
        soc::nn::glorot_fill(b, 4, 6, rng);
    }
    for (std::size_t i = 0; i < a.numel(); ++i) {
        CHECK(std::abs(a[i]) <= bound);
        CHECK(a[i] == b[i]);
    }
}

TEST_CASE("forward is deterministic: identical runs give identical bits") {
    ParamStore p;
    soc::Rng rng(21);
    Mlp net(p, {4, 8, 3}, Activation::kTanh, Activation::kIdentity, rng);
    std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    Tape t1(&p), t2(&p);
    Var y1 = net.forward(t1, t1.leaf(x));
    Var y2 = net.forward(t2, t2.leaf(x));
    for (int i = 0; i < y1.size; ++i) CHECK(t1.value(y1)[i] == t2.value(y2)[i]);
}

TEST_CASE("concat and slice round trip and mse value is exact") {
    ParamStore p;
    Tape t(&p);
    std::vector<double> a{1, 2}, b{3, 4, 5};
    Var cat = t.concat(t.leaf(a), t.leaf(b));
    CHECK(cat.size == 5);
    Var back = t.slice(cat, 2, 3);
    CHECK(t.value(back)[0] == 3.0);
    CHECK(t.value(back)[2] == 5.0);
    std::vector<double> target{2, 3, 4, 5, 6};
    Var loss = t.mse_against(cat, target);
    CHECK(t.scalar(loss) == doctest::Approx(1.0));  // every term off by 1
}
