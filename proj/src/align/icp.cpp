#include "panoblock/align/icp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "panoblock/error.hpp"
#include "panoblock/spatial/kdtree.hpp"

namespace panoblock {

Sim3 umeyama_similarity(const std::vector<Eigen::Vector3d>& src,
                        const std::vector<Eigen::Vector3d>& dst, bool with_scale) {
    if (src.size() != dst.size()) throw ArgumentError("point lists differ in size");
    if (src.size() < 3) throw DataError("similarity fit needs at least 3 correspondences");
    const double n = double(src.size());

    Eigen::Vector3d mu_s = Eigen::Vector3d::Zero();
    Eigen::Vector3d mu_d = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) {
        mu_s += src[i];
        mu_d += dst[i];
    }
    mu_s /= n;
    mu_d /= n;

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    double var_s = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Eigen::Vector3d ds = src[i] - mu_s;
        cov += (dst[i] - mu_d) * ds.transpose();
        var_s += ds.squaredNorm();
    }
    cov /= n;
    var_s /= n;

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d sgn = Eigen::Matrix3d::Identity();
    if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0) sgn(2, 2) = -1;
    const Eigen::Matrix3d r = svd.matrixU() * sgn * svd.matrixV().transpose();

    double s = 1.0;
    if (with_scale) {
        if (var_s < 1e-24) throw NumericalError("degenerate source points: zero spread");
        s = (svd.singularValues().asDiagonal().toDenseMatrix() * sgn).trace() / var_s;
        if (!(s > 0) || !std::isfinite(s)) throw NumericalError("non-positive scale estimate");
    }

    Sim3 g;
    g.s = s;
    g.q = Eigen::Quaterniond(r).normalized();
    g.t = mu_d - s * (r * mu_s);
    return g;
}

namespace {

struct Trimmed {
    std::vector<Eigen::Vector3d> src;  // original source points kept
    std::vector<Eigen::Vector3d> dst;  // matched target points
    double rmse = 0.0;
};

Trimmed match_and_trim(const std::vector<Eigen::Vector3d>& source, const KdTree3& tree,
                       const std::vector<Eigen::Vector3d>& target, const Sim3& g,
                       double keep_fraction) {
    const std::size_t n = source.size();
    std::vector<std::size_t> match(n);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [j, dist2] = tree.nearest(g.apply(source[i]));
        match[i] = j;
        d2[i] = dist2;
    }

    std::size_t keep = std::size_t(std::floor(keep_fraction * double(n)));
    keep = std::clamp<std::size_t>(keep, std::min<std::size_t>(n, 3), n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });

    Trimmed out;
    out.src.reserve(keep);
    out.dst.reserve(keep);
    double sum = 0.0;
    for (std::size_t k = 0; k < keep; ++k) {
        const std::size_t i = order[k];
        out.src.push_back(source[i]);
        out.dst.push_back(target[match[i]]);
        sum += d2[i];
    }
    out.rmse = std::sqrt(sum / double(keep));
    return out;
}

double trimmed_rmse(const Trimmed& t, const Sim3& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < t.src.size(); ++i)
        sum += (g.apply(t.src[i]) - t.dst[i]).squaredNorm();
    return std::sqrt(sum / double(t.src.size()));
}

}  // namespace

AlignmentReport icp_refine(const PointCloud& source, const PointCloud& target, const Sim3& init,
                           const IcpParams& params) {
    if (source.points.size() < 10 || target.points.size() < 10)
        throw DataError("point clouds too small for registration (need >= 10 points)");
    if (params.keep_fraction <= 0.0 || params.keep_fraction > 1.0)
        throw ArgumentError("keep_fraction must be in (0, 1]");
    if (params.max_iterations < 1) throw ArgumentError("max_iterations must be positive");

    const KdTree3 tree(target.points);
    const double exact_fit = 1e-12 * std::max(1e-12, bounding_diameter(target));

    AlignmentReport report;
    report.coarse = init;
    Sim3 g = init;

    double prev_rmse = -1.0;
    for (int it = 0; it < params.max_iterations; ++it) {
        Trimmed t = match_and_trim(source.points, tree, target.points, g, params.keep_fraction);
        if (t.src.size() < 3) throw DataError("registration failed: too few correspondences");
        if (it == 0) report.coarse_rmse = t.rmse;

        const Sim3 g_new = umeyama_similarity(t.src, t.dst, true);
        if (!std::isfinite(g_new.s) || !g_new.t.allFinite())
            throw NumericalError("non-finite similarity update");

        g = g_new;
        const double rmse = trimmed_rmse(t, g);
        report.rmse_history.push_back(rmse);
        report.icp_iterations = it + 1;
        report.correspondences = t.src.size();
        report.fine_rmse = rmse;
        if (rmse <= exact_fit) break;
        if (prev_rmse >= 0.0 &&
            std::abs(prev_rmse - rmse) <= params.rel_tolerance * std::max(prev_rmse, 1e-30))
            break;
        prev_rmse = rmse;
    }

    report.fine = g;
    return report;
}

}  // namespace panoblock
