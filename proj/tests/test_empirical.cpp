#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tilescope/empirical.hpp"

#include <cmath>
#include <numbers>

using namespace tilescope;
using namespace tilescope::empirical;
using generation::ColoredPointSet;
using generation::WindowDescriptor;

namespace {
const double kTau = (1 + std::sqrt(5.0)) / 2;

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

// integer lattice restricted to [-n, n], one color
ColoredPointSet lattice(int n) {
    ColoredPointSet out;
    out.dim = 1;
    out.colors.resize(1);
    for (int i = -n; i <= n; ++i) {
        out.colors[0].push_back({vec1(i), Eigen::MatrixXd::Identity(1, 1), 1.0});
    }
    WindowDescriptor w;
    w.center = vec1(0);
    w.inradius = n + 0.5;
    w.volume = 2 * n + 1;
    out.window = w;
    return out;
}
} // namespace

TEST_CASE("autocorrelation on the integer lattice") {
    const auto pts = lattice(200);
    const double R = 100;
    const auto est = autocorrelation_estimate(pts, {vec1(0), vec1(1)}, R);
    // self pairs: density 2R/(2R) = 1 up to endpoint rounding
    CHECK(est[0](0, 0) == doctest::Approx(1.0).epsilon(0.01));
    // z = 1 pairs: one partner per point
    CHECK(est[1](0, 0) == doctest::Approx(1.0).epsilon(0.01));
    CHECK_THROWS_AS(autocorrelation_estimate(pts, {vec1(0)}, 1e6), std::invalid_argument);
}

TEST_CASE("autocorrelation matches a brute-force pair count on Fibonacci") {
    const auto sys = inflation::builtin("fibonacci");
    const auto pts = generation::centers(generation::supertile(sys, 0, 8));
    const double z = (kTau + 1) / 2; // beta-alpha displacement inside one supertile step
    const double R = pts.window->inradius / 2;
    const auto est = autocorrelation_estimate(pts, {vec1(z)}, R);

    // independent oracle: direct double loop
    double count = 0;
    for (const auto& x : pts.colors[1]) {
        if (std::abs(x.point(0) - pts.window->center(0)) > R) continue;
        for (const auto& y : pts.colors[0]) {
            if (std::abs((x.point(0) - y.point(0)) - z) < 1e-9) count += 1;
        }
    }
    CHECK(count > 0);
    CHECK(est[0](1, 0) == doctest::Approx(count / (2 * R)).epsilon(1e-12));
}

TEST_CASE("autocorrelation Hermitian symmetry") {
    const auto sys = inflation::builtin("fibonacci");
    const auto pts = generation::centers(generation::supertile(sys, 0, 8));
    const double R = pts.window->inradius / 2;
    const double z = (kTau + 1) / 2;
    const auto fwd = autocorrelation_estimate(pts, {vec1(z)}, R);
    const auto bwd = autocorrelation_estimate(pts, {vec1(-z)}, R);
    // swapped colors and negated displacement count the same pairs, up to
    // points near the window edge; use the full window to avoid clipping
    const auto fwd_full = autocorrelation_estimate(pts, {vec1(z)}, pts.window->inradius);
    const auto bwd_full = autocorrelation_estimate(pts, {vec1(-z)}, pts.window->inradius);
    CHECK(fwd_full[0](1, 0) == doctest::Approx(bwd_full[0](0, 1)).epsilon(1e-12));
    CHECK(fwd[0].rows() == bwd[0].rows());
}

TEST_CASE("poisson sampler statistics and determinism") {
    double total = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        total += static_cast<double>(
            poisson_sample(2.0, vec1(0), vec1(1), 1000 + trial).colors[0].size());
    }
    CHECK(total / 10000 == doctest::Approx(2.0).epsilon(0.025));

    const auto a = poisson_sample(1.0, vec1(-500), vec1(500), 42);
    const auto b = poisson_sample(1.0, vec1(-500), vec1(500), 42);
    REQUIRE(a.colors[0].size() == b.colors[0].size());
    for (std::size_t i = 0; i < a.colors[0].size(); ++i) {
        CHECK(a.colors[0][i].point(0) == b.colors[0][i].point(0));
    }
    CHECK_THROWS_AS(poisson_sample(-1.0, vec1(0), vec1(1), 0), std::invalid_argument);
}

TEST_CASE("number variance: Poisson matches its mean") {
    const auto pts = poisson_sample(1.0, vec1(-600), vec1(600), 11);
    const auto curve = number_variance(pts, Eigen::VectorXd::Ones(1), {10.0}, 2000, 5);
    CHECK(curve.variances[0] == doctest::Approx(20.0).epsilon(0.15));
}

TEST_CASE("number variance: lattice is bounded") {
    const auto pts = lattice(2000);
    const auto curve = number_variance(pts, Eigen::VectorXd::Ones(1), {10.0, 100.0}, 1000, 9);
    CHECK(curve.variances[0] <= 0.3);
    CHECK(curve.variances[1] <= 0.3);
}

TEST_CASE("number variance: window and argument validation") {
    const auto pts = lattice(100);
    CHECK_THROWS_AS(number_variance(pts, Eigen::VectorXd::Ones(1), {90.0}, 500, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(number_variance(pts, Eigen::VectorXd::Ones(1), {10.0}, 50, 1),
                    std::invalid_argument);
}

TEST_CASE("number variance is translation invariant") {
    const auto sys = inflation::builtin("fibonacci");
    const auto pts = generation::centers(generation::supertile(sys, 0, 14));
    auto moved = pts;
    for (auto& color : moved.colors) {
        for (auto& pt : color) pt.point(0) += 3.7;
    }
    moved.window->center(0) += 3.7;
    const std::vector<double> rl{10.0, 20.0};
    const auto a = number_variance(pts, Eigen::VectorXd::Ones(2), rl, 2000, 21);
    const auto b = number_variance(moved, Eigen::VectorXd::Ones(2), rl, 2000, 21);
    for (std::size_t i = 0; i < rl.size(); ++i) {
        CHECK(std::abs(a.variances[i] - b.variances[i]) / a.variances[i] < 0.02);
    }
}

TEST_CASE("powder spectrum: Poisson is flat, lattice peaks at integers") {
    const auto poisson = poisson_sample(1.0, vec1(-200), vec1(200), 3);
    std::vector<double> grid;
    for (int i = 3; i <= 30; ++i) grid.push_back(0.1 * i);
    const auto est = powder_spectrum(poisson, grid, 4);
    double mean = 0;
    for (const auto& v : est.values) {
        CHECK(v(0, 0).imag() == doctest::Approx(0).epsilon(1e-10));
        CHECK(v(0, 0).real() >= -1e-10);
        mean += v(0, 0).real();
    }
    mean /= static_cast<double>(est.values.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(0.25));

    const auto lat = lattice(400);
    const auto peak = powder_spectrum(lat, {0.5, 1.0}, 4);
    CHECK(peak.values[1](0, 0).real() / peak.values[0](0, 0).real() > 50);
}

TEST_CASE("powder spectrum peak sharpens with window size") {
    auto half_width = [](int n) {
        const auto lat = lattice(n);
        const auto at_peak = powder_spectrum(lat, {1.0}, 4).values[0](0, 0).real();
        // walk outward until the estimate drops below half the peak
        double dr = 1e-5;
        while (dr < 0.5) {
            const auto v = powder_spectrum(lat, {1.0 + dr}, 4).values[0](0, 0).real();
            if (v < at_peak / 2) return dr;
            dr *= 1.25;
        }
        return 0.5;
    };
    const double w1 = half_width(200);
    const double w2 = half_width(400);
    CHECK(w1 / w2 >= 1.8);
}

TEST_CASE("renormalization residual: synthetic fixed point is exact") {
    const auto sys = inflation::builtin("fibonacci");
    const auto ctx = spectral::make_cocycle_context(sys);
    // lambda-closed grid
    std::vector<double> grid;
    for (double r = 0.5; r >= 0.05 * (1 - 1e-9); r /= ctx.scale) grid.push_back(r);
    std::reverse(grid.begin(), grid.end());

    SpectrumEstimate synthetic;
    synthetic.r_grid = grid;
    synthetic.values.assign(grid.size(), Eigen::MatrixXcd::Zero(2, 2));
    // seed the top radius and back-propagate theta(r) = T(r) theta(lr) T(r)^T
    Eigen::MatrixXcd top(2, 2);
    top << 2.0, 0.3, 0.3, 1.0;
    synthetic.values.back() = top;
    for (int i = static_cast<int>(grid.size()) - 2; i >= 0; --i) {
        const Eigen::MatrixXd t = spectral::transfer(ctx, grid[i]);
        synthetic.values[i] = t * synthetic.values[i + 1] * t.transpose();
    }
    const auto residuals = renormalization_residual(sys, synthetic);
    REQUIRE(!residuals.empty());
    for (double r : residuals) CHECK(r < 1e-10);
}

TEST_CASE("renormalization residual: Fibonacci passes, Poisson fails") {
    const auto sys = inflation::builtin("fibonacci");
    const auto ctx = spectral::make_cocycle_context(sys);
    std::vector<double> grid;
    for (double r = 0.5; r >= 0.05 * (1 - 1e-9); r /= ctx.scale) grid.push_back(r);
    std::reverse(grid.begin(), grid.end());

    const auto pts = generation::centers(generation::supertile(sys, 0, 16));
    const auto est = powder_spectrum(pts, grid, 2);
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    CHECK(median(renormalization_residual(sys, est)) < 0.15);

    const auto poisson =
        poisson_sample(1.0, vec1(-pts.window->inradius), vec1(pts.window->inradius), 17);
    const auto pest = powder_spectrum(poisson, grid, 2);
    // compare against the same 2-color transfer by duplicating the color
    generation::ShiftMeasureMatrix split = generation::ShiftMeasureMatrix::zero(2, 1);
    split.cells[0][0].push_back({1.0, euclid::Isometry::identity(1)});
    split.cells[1][0].push_back({1.0, euclid::Isometry::identity(1)});
    const auto split_pts = generation::tile_shift(poisson, split);
    const auto split_est = powder_spectrum(split_pts, grid, 2);
    CHECK(median(renormalization_residual(sys, split_est)) > 0.5);
}

TEST_CASE("tile-shift identity check: identity grid") {
    const auto sys = inflation::builtin("fibonacci");
    const auto pts = generation::centers(generation::supertile(sys, 0, 12));
    std::vector<double> grid{0.1, 0.2, 0.4};
    const auto report =
        tile_shift_identity_check(pts, generation::identity_shift(2, 1), grid, 2);
    CHECK(report.intensity_residual < 1e-12);
    for (double r : report.spectrum_residuals) CHECK(r < 1e-12);
}

TEST_CASE("tile-shift identity check: merging weights") {
    const auto sys = inflation::builtin("fibonacci");
    const auto pts = generation::centers(generation::supertile(sys, 0, 12));
    generation::ShiftMeasureMatrix row = generation::ShiftMeasureMatrix::zero(1, 2);
    row.cells[0][0].push_back({1.0, euclid::Isometry::identity(1)});
    row.cells[0][1].push_back({1.0, euclid::Isometry::identity(1)});
    const auto report = tile_shift_identity_check(pts, row, {}, 2);
    CHECK(report.intensity_residual < 1e-12);
}
