#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <utility>
#include <vector>

namespace panoblock {

// Static 3-d kd-tree over a point set; built once, queried concurrently.
class KdTree3 {
public:
    explicit KdTree3(std::vector<Eigen::Vector3d> points);

    std::size_t size() const { return points_.size(); }

    // index into the original point list and squared distance
    std::pair<std::size_t, double> nearest(const Eigen::Vector3d& query) const;

private:
    struct Node {
        int axis = -1;        // -1 marks a leaf
        double split = 0.0;
        std::size_t begin = 0, end = 0;  // leaf payload range in order_
        int left = -1, right = -1;
    };

    int build(std::size_t begin, std::size_t end);
    void search(int node, const Eigen::Vector3d& q, std::size_t& best, double& best_d2) const;

    std::vector<Eigen::Vector3d> points_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace panoblock
