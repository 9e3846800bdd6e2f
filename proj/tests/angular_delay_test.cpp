#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "soc/angular_delay.hpp"
#include "soc/common.hpp"
#include "soc/oracle.hpp"
#include "soc/scene.hpp"

using soc::CMat;
using soc::DftPair;
using soc::kPi;
using soc::kSpeedOfLight;
using soc::Vec3;

namespace {

CMat random_cmat(int rows, int cols, soc::Rng& rng) {
    CMat m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            m.set(r, c, rng.uniform(-1, 1), rng.uniform(-1, 1));
    return m;
}

// a^H b for the column pair (matrix product helper for unitarity checks).
void check_unitary(const CMat& u, double tol) {
    CMat prod = soc::cmul_herm_left(u, u);
    for (std::size_t r = 0; r < prod.rows(); ++r)
        for (std::size_t c = 0; c < prod.cols(); ++c) {
            CHECK(std::abs(prod.re(r, c) - (r == c ? 1.0 : 0.0)) < tol);
            CHECK(std::abs(prod.im(r, c)) < tol);
        }
}

}  // namespace

TEST_CASE("dft matrices: F at size one is [[1]] and row zero is flat") {
    DftPair d = soc::dft_matrices(4, 1);
    CHECK(d.f.rows() == 1);
    CHECK(d.f.re(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.f.im(0, 0) == doctest::Approx(0.0));

    DftPair d2 = soc::dft_matrices(4, 8);
    for (std::size_t q = 0; q < 8; ++q) {
        CHECK(d2.f.re(0, q) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));
        CHECK(std::abs(d2.f.im(0, q)) < 1e-14);
    }
}

TEST_CASE("dft matrices are unitary at 64") {
    DftPair d = soc::dft_matrices(64, 64);
    check_unitary(d.v, 1e-12);
    check_unitary(d.f, 1e-12);
}

TEST_CASE("angular-delay transform: zero maps to zero both ways") {
    CMat zero(8, 4);
    CHECK(soc::frobenius_norm(soc::to_angular_delay(zero)) == 0.0);
    CHECK(soc::frobenius_norm(soc::from_angular_delay(zero)) == 0.0);
}

TEST_CASE("transform preserves Frobenius norm and round trips at 64x64") {
    soc::Rng rng(3);
    CMat h = random_cmat(64, 64, rng);
    DftPair d = soc::dft_matrices(64, 64);
    CMat g = soc::to_angular_delay(h, d);
    CHECK(soc::frobenius_norm(g) == doctest::Approx(soc::frobenius_norm(h)).epsilon(1e-10));
    CMat back = soc::from_angular_delay(g, d);
    CHECK(soc::max_abs_diff(back, h) < 1e-10);
}

TEST_CASE("norm preservation holds over 100 random shapes") {
    soc::Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n_t = 2 + static_cast<int>(rng.index(15));
        const int n_c = 1 + static_cast<int>(rng.index(16));
        CMat h = random_cmat(n_t, n_c, rng);
        CMat g = soc::to_angular_delay(h);
        CHECK(soc::frobenius_norm(g) ==
              doctest::Approx(soc::frobenius_norm(h)).epsilon(1e-10));
        CHECK(soc::max_abs_diff(soc::from_angular_delay(g), h) < 1e-10);
    }
}

TEST_CASE("single nonzero angular-delay entry maps to a rank-1 product") {
    DftPair d = soc::dft_matrices(4, 4);
    CMat g(4, 4);
    g.set(2, 1, 1.0, 0.0);
    CMat h = soc::from_angular_delay(g, d);
    // H = V g F^H = outer(V column 2, conj(F column 1)).
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const double vr = d.v.re(r, 2), vi = d.v.im(r, 2);
            const double fr = d.f.re(c, 1), fi = -d.f.im(c, 1);
            CHECK(h.re(r, c) == doctest::Approx(vr * fr - vi * fi).epsilon(1e-12));
            CHECK(h.im(r, c) == doctest::Approx(vr * fi + vi * fr).epsilon(1e-12));
        }
}

TEST_CASE("grid angle closed form and monotonicity") {
    CHECK(soc::grid_angle(31, 64) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK(soc::grid_angle(63, 64) == doctest::Approx(0.0));
    CHECK_THROWS_AS(soc::grid_angle(-1, 64), std::invalid_argument);
    CHECK_THROWS_AS(soc::grid_angle(64, 64), std::invalid_argument);
    for (int z = 1; z < 64; ++z) CHECK(soc::grid_angle(z, 64) <= soc::grid_angle(z - 1, 64));
}

TEST_CASE("grid delay: 10 ns at q = 1 for 100 MHz") {
    CHECK(soc::grid_delay(1, 1e8) == doctest::Approx(1e-8).epsilon(1e-15));
    CHECK(soc::grid_delay(0, 1e8) == 0.0);
    CHECK_THROWS_AS(soc::grid_delay(-1, 1e8), std::invalid_argument);
    CHECK_THROWS_AS(soc::grid_delay(1, 0.0), std::invalid_argument);
}

TEST_CASE("an on-grid path concentrates energy near its grid cell") {
    // Build a single-path scene whose AoA and delay sit exactly on grid nodes.
    const int n_t = 16, n_c = 16;
    const double f_c = 3.5e9, bw = 1e8;
    const int z_star = 12, q_star = 3;
    const double theta = soc::grid_angle(z_star, n_t);
    const double delay = soc::grid_delay(q_star, bw);
    const double d_p = delay * kSpeedOfLight;

    soc::ScattererScene s;
    s.bs_position = {0.0, 0.0, 1.5};
    s.array_axis = {1.0, 0.0, 0.0};
    s.n_antennas = n_t;
    s.center_frequency = f_c;
    s.bandwidth = bw;
    s.n_subcarriers = n_c;
    s.antenna_spacing = kSpeedOfLight / f_c / 2.0;
    s.include_los = true;
    s.ue_area = {-100.0, 100.0, -100.0, 100.0, 1.5};
    Vec3 ue = s.bs_position + Vec3{std::cos(theta) * d_p, std::sin(theta) * d_p, 0.0};
    s.ue_area.x_min = std::min(s.ue_area.x_min, ue.x - 1.0);
    s.ue_area.x_max = std::max(s.ue_area.x_max, ue.x + 1.0);
    s.ue_area.y_min = std::min(s.ue_area.y_min, ue.y - 1.0);
    s.ue_area.y_max = std::max(s.ue_area.y_max, ue.y + 1.0);
    s.validate();

    soc::PathSet ps = soc::compute_paths(s, ue);
    REQUIRE(ps.paths.size() == 1);
    CHECK(ps.paths[0].aoa == doctest::Approx(theta).epsilon(1e-9));
    CHECK(ps.paths[0].delay == doctest::Approx(delay).epsilon(1e-9));

    CMat g = soc::to_angular_delay(soc::static_cfr(ps, s));

    // Under the fixed transform sign conventions, a path at angle bin z* and
    // delay bin q* concentrates at row z*+1 (even n_t half-shift) and column
    // (n_c - q*) mod n_c (the CFR phase decreases with frequency).
    int z_peak = 0, q_peak = 0;
    double best = -1.0, total = 0.0;
    for (int z = 0; z < n_t; ++z)
        for (int q = 0; q < n_c; ++q) {
            const std::size_t zz = static_cast<std::size_t>(z), qq = static_cast<std::size_t>(q);
            const double e = g.re(zz, qq) * g.re(zz, qq) + g.im(zz, qq) * g.im(zz, qq);
            total += e;
            if (e > best) {
                best = e;
                z_peak = z;
                q_peak = q;
            }
        }
    CHECK(z_peak == z_star + 1);
    CHECK(q_peak == (n_c - q_star) % n_c);
    double near = 0.0;
    for (int z = 0; z < n_t; ++z)
        for (int q = 0; q < n_c; ++q) {
            const std::size_t zz = static_cast<std::size_t>(z), qq = static_cast<std::size_t>(q);
            if (std::abs(z - z_peak) <= 1 && std::abs(q - q_peak) <= 1)
                near += g.re(zz, qq) * g.re(zz, qq) + g.im(zz, qq) * g.im(zz, qq);
        }
    CHECK(near / total > 0.9);
}
