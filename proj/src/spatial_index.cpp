#include "soc/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace soc {

namespace {

double coord(const Vec3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

double dist_sq(const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return d.dot(d);
}

using Cand = std::pair<double, std::size_t>;  // (squared distance, index)

}  // namespace

KdTree3::KdTree3(const std::vector<Vec3>& points) : points_(points) {
    if (points_.empty()) return;
    std::vector<std::size_t> idx(points_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    nodes_.reserve(points_.size());
    root_ = build(idx, 0, idx.size(), 0);
}

int KdTree3::build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth) {
    if (lo >= hi) return -1;
    const int axis = depth % 3;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(idx.begin() + static_cast<std::ptrdiff_t>(lo),
                     idx.begin() + static_cast<std::ptrdiff_t>(mid),
                     idx.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](std::size_t a, std::size_t b) {
                         const double ca = coord(points_[a], axis);
                         const double cb = coord(points_[b], axis);
                         return ca < cb || (ca == cb && a < b);
                     });
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{idx[mid], axis, -1, -1});
    const int left = build(idx, lo, mid, depth + 1);
    const int right = build(idx, mid + 1, hi, depth + 1);
    nodes_[static_cast<std::size_t>(node_id)].left = left;
    nodes_[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
}

std::size_t KdTree3::nearest(const Vec3& q) const {
    if (points_.empty()) throw std::invalid_argument("KdTree3::nearest: empty index");
    Cand best{std::numeric_limits<double>::infinity(), 0};
    // Iterative descent with an explicit stack; visits the far side whenever
    // an equal-distance, lower-index point could hide there.
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id < 0) continue;
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        const Cand cand{dist_sq(q, points_[n.point]), n.point};
        if (cand < best) best = cand;
        const double diff = coord(q, n.axis) - coord(points_[n.point], n.axis);
        const int near_side = diff < 0.0 ? n.left : n.right;
        const int far_side = diff < 0.0 ? n.right : n.left;
        if (diff * diff <= best.first) stack.push_back(far_side);
        stack.push_back(near_side);
    }
    return best.second;
}

std::vector<std::size_t> KdTree3::k_nearest(const Vec3& q, std::size_t k) const {
    if (points_.empty()) throw std::invalid_argument("KdTree3::k_nearest: empty index");
    k = std::min(k, points_.size());
    std::vector<Cand> heap;  // max-heap on (dist², index)
    heap.reserve(k + 1);
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id < 0) continue;
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        const Cand cand{dist_sq(q, points_[n.point]), n.point};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end());
        } else if (cand < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end());
        }
        const double diff = coord(q, n.axis) - coord(points_[n.point], n.axis);
        const int near_side = diff < 0.0 ? n.left : n.right;
        const int far_side = diff < 0.0 ? n.right : n.left;
        if (heap.size() < k || diff * diff <= heap.front().first) stack.push_back(far_side);
        stack.push_back(near_side);
    }
    std::sort(heap.begin(), heap.end());
    std::vector<std::size_t> out(heap.size());
    for (std::size_t i = 0; i < heap.size(); ++i) out[i] = heap[i].second;
    return out;
}

}  // namespace soc
