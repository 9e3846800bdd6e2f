#pragma once

#include <cstddef>
#include <vector>

#include "soc/common.hpp"

namespace soc {

/// Exact nearest-neighbor index over 3-D points. Ties on distance are
/// broken toward the lowest point index, matching a linear scan.
class KdTree3 {
public:
    KdTree3() = default;
    explicit KdTree3(const std::vector<Vec3>& points);

    std::size_t size() const { return points_.size(); }

    /// Index of the nearest point; throws std::invalid_argument when empty.
    std::size_t nearest(const Vec3& q) const;

    /// k nearest indices ordered by (squared distance, index) ascending.
    /// k is clamped to size().
    std::vector<std::size_t> k_nearest(const Vec3& q, std::size_t k) const;

private:
    struct Node {
        std::size_t point = 0;
        int axis = 0;
        int left = -1;
        int right = -1;
    };

    int build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth);

    std::vector<Vec3> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace soc
