#pragma once

#include <Eigen/Core>
#include <vector>

namespace panoblock {

// Natural cubic spline through camera centers, parameterized by cumulative
// chord length. C2 at interior knots, zero second derivative at the ends.
class SplinePath {
public:
    static SplinePath fit(const std::vector<Eigen::Vector3d>& centers);

    Eigen::Vector3d position(double u) const;
    Eigen::Vector3d derivative(double u) const;
    Eigen::Vector3d second_derivative(double u) const;

    double max_param() const { return u_.back(); }
    const std::vector<double>& knot_params() const { return u_; }
    const std::vector<Eigen::Vector3d>& knots() const { return knots_; }

private:
    int segment_of(double u) const;

    std::vector<double> u_;
    std::vector<Eigen::Vector3d> knots_;
    std::vector<Eigen::Vector3d> m_;  // second derivatives at knots
};

struct SplineDistance {
    double distance = 0.0;
    double u = 0.0;
};

// Closest point on the spline by bounded quasi-Newton from multiple seeds
// (equispaced plus the nearest knot), golden-section fallback.
SplineDistance distance_to_spline(const SplinePath& path, const Eigen::Vector3d& p,
                                  int starts = 8, int max_iterations = 20);

}  // namespace panoblock
