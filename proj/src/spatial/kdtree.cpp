#include "panoblock/spatial/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "panoblock/error.hpp"

namespace panoblock {

namespace {
constexpr std::size_t kLeafSize = 16;
}

KdTree3::KdTree3(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
    if (points_.empty()) throw ArgumentError("kd-tree needs at least one point");
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t(0));
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, points_.size());
}

int KdTree3::build(std::size_t begin, std::size_t end) {
    const int id = int(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }

    // split on the widest axis at the median
    Eigen::Vector3d lo = points_[order_[begin]];
    Eigen::Vector3d hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);

    const std::size_t mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                         return points_[a][axis] < points_[b][axis];
                     });

    nodes_[id].axis = axis;
    nodes_[id].split = points_[order_[mid]][axis];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree3::search(int node, const Eigen::Vector3d& q, std::size_t& best,
                     double& best_d2) const {
    const Node& n = nodes_[node];
    if (n.axis < 0) {
        for (std::size_t i = n.begin; i < n.end; ++i) {
            const double d2 = (points_[order_[i]] - q).squaredNorm();
            if (d2 < best_d2 || (d2 == best_d2 && order_[i] < best)) {
                best_d2 = d2;
                best = order_[i];
            }
        }
        return;
    }
    const double delta = q[n.axis] - n.split;
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search(near, q, best, best_d2);
    if (delta * delta <= best_d2) search(far, q, best, best_d2);
}

std::pair<std::size_t, double> KdTree3::nearest(const Eigen::Vector3d& query) const {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    search(root_, query, best, best_d2);
    return {best, best_d2};
}

}  // namespace panoblock
