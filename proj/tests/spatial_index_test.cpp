#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "soc/common.hpp"
#include "soc/spatial_index.hpp"

using soc::KdTree3;
using soc::Rng;
using soc::Vec3;

namespace {

std::vector<Vec3> random_points(std::size_t n, std::uint64_t seed) {
    Rng rng = Rng::substream(seed, "kdtree-test");
    std::vector<Vec3> pts(n);
    for (auto& p : pts) {
        p.x = rng.uniform(-50.0, 50.0);
        p.y = rng.uniform(-50.0, 50.0);
        p.z = rng.uniform(0.0, 3.0);
    }
    return pts;
}

double dist_sq(const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return d.dot(d);
}

std::size_t linear_nearest(const std::vector<Vec3>& pts, const Vec3& q) {
    std::size_t best = 0;
    double best_d = dist_sq(pts[0], q);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = dist_sq(pts[i], q);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<std::size_t> linear_k_nearest(const std::vector<Vec3>& pts, const Vec3& q,
                                          std::size_t k) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order.push_back({dist_sq(pts[i], q), i});
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) out.push_back(order[i].second);
    return out;
}

}  // namespace

TEST_CASE("empty index rejects queries") {
    KdTree3 t;
    CHECK(t.size() == 0);
    CHECK_THROWS_AS(t.nearest(Vec3{0, 0, 0}), std::invalid_argument);
}

TEST_CASE("single point is always nearest") {
    KdTree3 t(std::vector<Vec3>{Vec3{1.0, 2.0, 3.0}});
    CHECK(t.nearest(Vec3{100.0, -5.0, 0.0}) == 0);
    CHECK(t.k_nearest(Vec3{0, 0, 0}, 5) == std::vector<std::size_t>{0});
}

TEST_CASE("nearest matches a linear scan on random queries") {
    const auto pts = random_points(1000, 21);
    KdTree3 t(pts);
    Rng rng = Rng::substream(22, "kdtree-query");
    for (int i = 0; i < 1000; ++i) {
        Vec3 q{rng.uniform(-60.0, 60.0), rng.uniform(-60.0, 60.0), rng.uniform(-1.0, 4.0)};
        CHECK(t.nearest(q) == linear_nearest(pts, q));
    }
}

TEST_CASE("k-nearest matches a linear scan with ordered output") {
    const auto pts = random_points(300, 33);
    KdTree3 t(pts);
    Rng rng = Rng::substream(34, "kdtree-query");
    for (int i = 0; i < 200; ++i) {
        Vec3 q{rng.uniform(-60.0, 60.0), rng.uniform(-60.0, 60.0), rng.uniform(-1.0, 4.0)};
        const std::size_t k = 1 + rng.index(8);
        CHECK(t.k_nearest(q, k) == linear_k_nearest(pts, q, k));
    }
}

TEST_CASE("k larger than the point count is clamped") {
    const auto pts = random_points(5, 44);
    KdTree3 t(pts);
    const auto got = t.k_nearest(Vec3{0, 0, 0}, 50);
    CHECK(got.size() == 5);
    CHECK(got == linear_k_nearest(pts, Vec3{0, 0, 0}, 5));
}

TEST_CASE("exact distance ties resolve to the lowest index") {
    // Four corners of a square, query dead center: all distances equal.
    std::vector<Vec3> pts{Vec3{1, 1, 0}, Vec3{-1, 1, 0}, Vec3{-1, -1, 0}, Vec3{1, -1, 0}};
    KdTree3 t(pts);
    CHECK(t.nearest(Vec3{0, 0, 0}) == 0);
    CHECK(t.k_nearest(Vec3{0, 0, 0}, 4) == std::vector<std::size_t>{0, 1, 2, 3});

    // Duplicate points: the earliest duplicate wins.
    std::vector<Vec3> dup{Vec3{5, 5, 5}, Vec3{2, 2, 2}, Vec3{2, 2, 2}};
    KdTree3 td(dup);
    CHECK(td.nearest(Vec3{2, 2, 2}) == 1);
    CHECK(td.k_nearest(Vec3{2, 2, 2}, 2) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("query at a stored point returns that point") {
    const auto pts = random_points(200, 55);
    KdTree3 t(pts);
    for (std::size_t i = 0; i < pts.size(); i += 17) CHECK(t.nearest(pts[i]) == i);
}
