#include "panoblock/blocksel/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "panoblock/error.hpp"

namespace panoblock {

SplinePath SplinePath::fit(const std::vector<Eigen::Vector3d>& centers) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(centers.size());
    for (const auto& c : centers) {
        if (pts.empty() || (c - pts.back()).norm() > 1e-12) pts.push_back(c);
    }
    const int n = int(pts.size());
    if (n < 2) throw ArgumentError("spline fit needs at least 2 distinct points");

    SplinePath path;
    path.knots_ = std::move(pts);
    path.u_.resize(n);
    path.u_[0] = 0.0;
    for (int i = 1; i < n; ++i)
        path.u_[i] = path.u_[i - 1] + (path.knots_[i] - path.knots_[i - 1]).norm();

    // natural spline: tridiagonal solve for knot second derivatives
    path.m_.assign(n, Eigen::Vector3d::Zero());
    if (n > 2) {
        const int m = n - 2;  // interior knots
        std::vector<double> a(m), b(m), c(m);
        std::vector<Eigen::Vector3d> rhs(m);
        for (int i = 0; i < m; ++i) {
            const double h0 = path.u_[i + 1] - path.u_[i];
            const double h1 = path.u_[i + 2] - path.u_[i + 1];
            a[i] = h0;
            b[i] = 2.0 * (h0 + h1);
            c[i] = h1;
            rhs[i] = 6.0 * ((path.knots_[i + 2] - path.knots_[i + 1]) / h1 -
                            (path.knots_[i + 1] - path.knots_[i]) / h0);
        }
        // Thomas algorithm
        for (int i = 1; i < m; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        path.m_[m] = rhs[m - 1] / b[m - 1];
        for (int i = m - 2; i >= 0; --i)
            path.m_[i + 1] = (rhs[i] - c[i] * path.m_[i + 2]) / b[i];
    }
    return path;
}

int SplinePath::segment_of(double u) const {
    const int n = int(u_.size());
    if (u <= u_.front()) return 0;
    if (u >= u_.back()) return n - 2;
    const int i = int(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin()) - 1;
    return std::min(i, n - 2);
}

Eigen::Vector3d SplinePath::position(double u) const {
    u = std::clamp(u, u_.front(), u_.back());
    const int i = segment_of(u);
    const double h = u_[i + 1] - u_[i];
    const double t0 = (u_[i + 1] - u) / h;
    const double t1 = (u - u_[i]) / h;
    return t0 * knots_[i] + t1 * knots_[i + 1] +
           (h * h / 6.0) * ((t0 * t0 * t0 - t0) * m_[i] + (t1 * t1 * t1 - t1) * m_[i + 1]);
}

Eigen::Vector3d SplinePath::derivative(double u) const {
    u = std::clamp(u, u_.front(), u_.back());
    const int i = segment_of(u);
    const double h = u_[i + 1] - u_[i];
    const double t0 = (u_[i + 1] - u) / h;
    const double t1 = (u - u_[i]) / h;
    return (knots_[i + 1] - knots_[i]) / h +
           (h / 6.0) * ((1.0 - 3.0 * t0 * t0) * m_[i] + (3.0 * t1 * t1 - 1.0) * m_[i + 1]);
}

Eigen::Vector3d SplinePath::second_derivative(double u) const {
    u = std::clamp(u, u_.front(), u_.back());
    const int i = segment_of(u);
    const double h = u_[i + 1] - u_[i];
    const double t0 = (u_[i + 1] - u) / h;
    const double t1 = (u - u_[i]) / h;
    return t0 * m_[i] + t1 * m_[i + 1];
}

namespace {

struct Objective {
    const SplinePath& path;
    const Eigen::Vector3d& p;

    double f(double u) const { return (path.position(u) - p).squaredNorm(); }
    double df(double u) const { return 2.0 * (path.position(u) - p).dot(path.derivative(u)); }
};

// golden-section over [lo, hi]
double golden_section(const Objective& obj, double lo, double hi, int iterations) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = obj.f(x1), f2 = obj.f(x2);
    for (int it = 0; it < iterations; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = obj.f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = obj.f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

// bounded 1-d quasi-Newton (secant curvature, Armijo backtracking)
double minimize_from(const Objective& obj, double u0, double lo, double hi, int max_iterations) {
    double u = std::clamp(u0, lo, hi);
    double g = obj.df(u);
    double fu = obj.f(u);
    double curv = 1.0;
    const double span = hi - lo;
    for (int it = 0; it < max_iterations; ++it) {
        if (std::abs(g) < 1e-14 * std::max(1.0, span)) break;
        double step = -g / std::max(curv, 1e-12);
        if (!std::isfinite(step) || step == 0.0) break;
        step = std::clamp(step, -0.5 * span, 0.5 * span);
        double next = std::clamp(u + step, lo, hi);
        if (next == u) break;
        double fn = obj.f(next);
        int backtrack = 0;
        while (fn > fu - 1e-4 * std::abs((next - u) * g) && backtrack < 12) {
            next = u + (next - u) * 0.5;
            fn = obj.f(next);
            ++backtrack;
        }
        if (fn >= fu) break;  // no descent: give up, the multi-start covers us
        const double gn = obj.df(next);
        const double denom = next - u;
        if (std::abs(denom) > 1e-15) {
            const double sec = (gn - g) / denom;     // secant curvature estimate
            if (std::isfinite(sec) && sec > 1e-12) curv = sec;
        }
        u = next;
        fu = fn;
        g = gn;
    }
    return u;
}

}  // namespace

SplineDistance distance_to_spline(const SplinePath& path, const Eigen::Vector3d& p, int starts,
                                  int max_iterations) {
    if (starts < 1) throw ArgumentError("at least one start required");
    const double hi = path.max_param();
    Objective obj{path, p};

    std::vector<double> seeds;
    seeds.reserve(starts + 1);
    for (int i = 0; i < starts; ++i)
        seeds.push_back(starts == 1 ? 0.5 * hi : hi * double(i) / double(starts - 1));
    // nearest knot is usually the best basin
    double best_knot_d = std::numeric_limits<double>::infinity();
    double best_knot_u = 0.0;
    for (std::size_t i = 0; i < path.knots().size(); ++i) {
        const double d = (path.knots()[i] - p).squaredNorm();
        if (d < best_knot_d) {
            best_knot_d = d;
            best_knot_u = path.knot_params()[i];
        }
    }
    seeds.push_back(best_knot_u);

    double best_u = 0.0;
    double best_f = std::numeric_limits<double>::infinity();
    for (double s : seeds) {
        const double u = minimize_from(obj, s, 0.0, hi, max_iterations);
        const double f = obj.f(u);
        if (f < best_f) {
            best_f = f;
            best_u = u;
        }
    }

    // polish the winning basin; also rescues rare quasi-Newton stalls
    const double lo_b = std::max(0.0, best_u - 0.05 * hi);
    const double hi_b = std::min(hi, best_u + 0.05 * hi);
    const double u_gold = golden_section(obj, lo_b, hi_b, 40);
    if (obj.f(u_gold) < best_f) {
        best_u = u_gold;
        best_f = obj.f(u_gold);
    }

    return {std::sqrt(best_f), best_u};
}

}  // namespace panoblock
