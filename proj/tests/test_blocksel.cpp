#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "panoblock/blocksel/select.hpp"
#include "panoblock/blocksel/spline.hpp"
#include "panoblock/error.hpp"

using namespace panoblock;

namespace {

std::vector<Eigen::Vector3d> random_smooth_knots(std::mt19937& rng, int count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::Vector3d> knots;
    Eigen::Vector3d pos(u(rng) * 5, u(rng) * 5, u(rng) * 5);
    Eigen::Vector3d dir = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized();
    for (int i = 0; i < count; ++i) {
        knots.push_back(pos);
        dir = (dir + 0.4 * Eigen::Vector3d(u(rng), u(rng), u(rng))).normalized();
        pos += dir * (0.5 + 0.5 * std::abs(u(rng)));
    }
    return knots;
}

// Dense-sampling minimum distance: uniform parameter sweep plus ternary
// refinement around the best sample. Independent of the production solver.
double oracle_distance(const SplinePath& path, const Eigen::Vector3d& p, int samples = 10000) {
    const double umax = path.max_param();
    double best_u = 0.0;
    double best = (path.position(0.0) - p).squaredNorm();
    for (int i = 1; i <= samples; ++i) {
        const double u = umax * double(i) / double(samples);
        const double d = (path.position(u) - p).squaredNorm();
        if (d < best) {
            best = d;
            best_u = u;
        }
    }
    double lo = std::max(0.0, best_u - umax / samples);
    double hi = std::min(umax, best_u + umax / samples);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if ((path.position(m1) - p).squaredNorm() < (path.position(m2) - p).squaredNorm())
            hi = m2;
        else
            lo = m1;
    }
    return (path.position(0.5 * (lo + hi)) - p).norm();
}

}  // namespace

TEST_CASE("two knots give a straight segment") {
    const SplinePath path = SplinePath::fit({{0, 0, 0}, {10, 0, 0}});
    CHECK((path.position(5.0) - Eigen::Vector3d(5, 0, 0)).norm() < 1e-12);
    CHECK(path.max_param() == doctest::Approx(10.0));
    CHECK(path.second_derivative(3.0).norm() < 1e-12);
}

TEST_CASE("collinear equispaced knots reproduce the line") {
    std::vector<Eigen::Vector3d> knots;
    for (int i = 0; i <= 8; ++i) knots.emplace_back(double(i), 2.0 * i, -1.0 * i);
    const SplinePath path = SplinePath::fit(knots);
    for (double u = 0.0; u <= path.max_param(); u += 0.37) {
        CHECK(path.second_derivative(u).norm() < 1e-9);
        const double f = u / path.max_param();
        const Eigen::Vector3d expected = knots.front() + f * (knots.back() - knots.front());
        CHECK((path.position(u) - expected).norm() < 1e-9);
    }
}

TEST_CASE("spline interpolates its knots") {
    std::mt19937 rng(5);
    const auto knots = random_smooth_knots(rng, 12);
    const SplinePath path = SplinePath::fit(knots);
    const auto& params = path.knot_params();
    REQUIRE(params.size() == knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
        CHECK((path.position(params[i]) - knots[i]).norm() < 1e-12);
}

TEST_CASE("natural end conditions and interior smoothness") {
    std::mt19937 rng(6);
    const auto knots = random_smooth_knots(rng, 9);
    const SplinePath path = SplinePath::fit(knots);
    CHECK(path.second_derivative(0.0).norm() < 1e-9);
    CHECK(path.second_derivative(path.max_param()).norm() < 1e-9);
    // C2 at interior knots: one-sided values agree
    const auto& params = path.knot_params();
    for (std::size_t i = 1; i + 1 < params.size(); ++i) {
        const double u = params[i];
        const double eps = 1e-7;
        CHECK((path.derivative(u - eps) - path.derivative(u + eps)).norm() < 1e-4);
        CHECK((path.second_derivative(u - eps) - path.second_derivative(u + eps)).norm() < 1e-3);
    }
}

TEST_CASE("fit rejects fewer than two distinct centers") {
    CHECK_THROWS_AS(SplinePath::fit({}), ArgumentError);
    CHECK_THROWS_AS(SplinePath::fit({{1, 2, 3}}), ArgumentError);
    CHECK_THROWS_AS(SplinePath::fit({{1, 2, 3}, {1, 2, 3}}), ArgumentError);
}

TEST_CASE("consecutive duplicate centers are collapsed") {
    const SplinePath path = SplinePath::fit({{0, 0, 0}, {0, 0, 0}, {5, 0, 0}, {5, 0, 0}});
    CHECK(path.knots().size() == 2);
    CHECK(path.max_param() == doctest::Approx(5.0));
}

TEST_CASE("distance to a knot is zero") {
    std::mt19937 rng(7);
    const auto knots = random_smooth_knots(rng, 10);
    const SplinePath path = SplinePath::fit(knots);
    const SplineDistance d = distance_to_spline(path, knots[4]);
    CHECK(d.distance < 1e-9);
    CHECK(d.u == doctest::Approx(path.knot_params()[4]).epsilon(1e-6));
}

TEST_CASE("perpendicular foot on a straight path") {
    const SplinePath path = SplinePath::fit({{0, 0, 0}, {10, 0, 0}});
    const SplineDistance d = distance_to_spline(path, {5.0, 1.0, 0.0});
    CHECK(d.distance == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.u == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("distance never beats the oracle by more than the tolerance") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + int(rng() % 20);
        const auto knots = random_smooth_knots(rng, n);
        const SplinePath path = SplinePath::fit(knots);
        Eigen::Vector3d center = Eigen::Vector3d::Zero();
        for (const auto& k : knots) center += k;
        center /= double(knots.size());
        const Eigen::Vector3d p =
            center + Eigen::Vector3d(u(rng), u(rng), u(rng)) * path.max_param() * 0.4;
        const double got = distance_to_spline(path, p).distance;
        const double expected = oracle_distance(path, p);
        CAPTURE(trial);
        CHECK(std::abs(got - expected) <= 1e-4 * path.max_param());
    }
}

TEST_CASE("distance is bounded by the nearest knot") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto knots = random_smooth_knots(rng, 8);
        const SplinePath path = SplinePath::fit(knots);
        const Eigen::Vector3d p(u(rng) * 10, u(rng) * 10, u(rng) * 10);
        double nearest_knot = std::numeric_limits<double>::infinity();
        for (const auto& k : knots) nearest_knot = std::min(nearest_knot, (k - p).norm());
        CHECK(distance_to_spline(path, p).distance <= nearest_knot + 1e-9);
    }
}

TEST_CASE("select_block picks the closest path") {
    const SplinePath a = SplinePath::fit({{0, 0, 0}, {10, 0, 0}});
    const SplinePath b = SplinePath::fit({{0, 5, 0}, {10, 5, 0}});
    const BlockSelection sel = select_block({5.0, 1.0, 0.0}, {a, b});
    CHECK(sel.block_id == 0);
    CHECK(sel.distance == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(sel.distances.size() == 2);
    CHECK(sel.distances[1] == doctest::Approx(4.0).epsilon(1e-9));

    const BlockSelection sel2 = select_block({5.0, 4.5, 0.0}, {a, b});
    CHECK(sel2.block_id == 1);
}

TEST_CASE("exact ties go to the lower block id") {
    const SplinePath a = SplinePath::fit({{0, 2, 0}, {10, 2, 0}});
    const SplinePath b = SplinePath::fit({{0, -2, 0}, {10, -2, 0}});
    const BlockSelection sel = select_block({5.0, 0.0, 0.0}, {a, b}, {3, 1});
    CHECK(sel.block_id == 1);  // equidistant: lower id wins
    const BlockSelection swapped = select_block({5.0, 0.0, 0.0}, {b, a}, {1, 3});
    CHECK(swapped.block_id == 1);
}

TEST_CASE("selection is invariant under a rigid motion of everything") {
    std::mt19937 rng(10);
    const auto ka = random_smooth_knots(rng, 7);
    const auto kb = random_smooth_knots(rng, 7);
    const Eigen::Vector3d p(1.0, -2.0, 0.5);
    const int before =
        select_block(p, {SplinePath::fit(ka), SplinePath::fit(kb)}).block_id;

    const Eigen::Matrix3d r =
        Eigen::AngleAxisd(0.8, Eigen::Vector3d(1, 1, 0).normalized()).toRotationMatrix();
    const Eigen::Vector3d t(4, -3, 2);
    auto map = [&](std::vector<Eigen::Vector3d> v) {
        for (auto& x : v) x = r * x + t;
        return v;
    };
    const int after =
        select_block(r * p + t, {SplinePath::fit(map(ka)), SplinePath::fit(map(kb))}).block_id;
    CHECK(before == after);
}

TEST_CASE("hysteresis keeps the current block near the boundary") {
    const SplinePath a = SplinePath::fit({{0, 0, 0}, {10, 0, 0}});
    const SplinePath b = SplinePath::fit({{0, 3, 0}, {10, 3, 0}});
    const Eigen::Vector3d p(5.0, 1.6, 0.0);  // slightly nearer b (1.4 vs 1.6)
    CHECK(select_block(p, {a, b}, {0, 1}).block_id == 1);
    CHECK(select_block(p, {a, b}, {0, 1}, 0.5, 0).block_id == 0);   // sticky
    CHECK(select_block(p, {a, b}, {0, 1}, 0.05, 0).block_id == 1);  // too far to stick
}

TEST_CASE("select_block rejects an empty path list") {
    CHECK_THROWS_AS(select_block({0, 0, 0}, {}), ArgumentError);
}
