// End-to-end acceptance checks. Each test prints one summary line so the
// suite output reads as a checklist.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tilescope/empirical.hpp"
#include "tilescope/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

using namespace tilescope;

namespace {

const double kTau = (1 + std::sqrt(5.0)) / 2;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, bool ok, const char* what, double seconds) {
    std::printf("ACCEPTANCE %02d [%s] %s (%.2fs)\n", criterion, ok ? "PASS" : "FAIL", what,
                seconds);
    std::fflush(stdout);
}

double h_bound_of_builtin(const std::string& name) {
    const auto sys = inflation::builtin(name);
    const auto spec = inflation::pf_analysis(inflation::inflation_matrix(sys));
    return spectral::uniformity_bound(sys.dim, sys.scale, spec.rho2, sys.pure_point_asserted)
        .h_bound;
}

spectral::UniformityReport report_of(const std::string& name) {
    if (name == "fibonacci" || name == "penrose" || name == "ammann-beenker") {
        const auto sys = inflation::builtin(name);
        const auto spec = inflation::pf_analysis(inflation::inflation_matrix(sys));
        return spectral::uniformity_bound(sys.dim, sys.scale, spec.rho2, sys.pure_point_asserted);
    }
    const auto profile = inflation::matrix_only_profile(name);
    return spectral::uniformity_bound(profile.dim, profile.scale, profile.rho2,
                                      profile.pure_point_asserted);
}

} // namespace

TEST_CASE("criterion 1: degree-of-uniformity table") {
    Timer t;
    bool ok = true;
    const std::vector<std::pair<std::string, double>> expected = {
        {"fibonacci", 4}, {"penrose", 8}, {"ammann-beenker", 8},
        {"shield", 4},    {"abck", 4},    {"cap", 4},
    };
    for (const auto& [name, bound] : expected) {
        const double h = report_of(name).h_bound;
        CAPTURE(name);
        CHECK(std::abs(h - bound) < 1e-9);
        ok = ok && std::abs(h - bound) < 1e-9;
    }
    const double secs = t.seconds();
    CHECK(secs < 1.0);
    report(1, ok && secs < 1.0, "uniformity bounds 4/8/8/4/4/4 across the catalog", secs);
}

TEST_CASE("criterion 2: Penrose full-orientation contrast") {
    Timer t;
    const auto pen = inflation::builtin("penrose");
    const auto full = inflation::expand_orientations(pen);
    const bool count_ok = full.colors() == 40;
    const auto spec = inflation::spectral_summary(inflation::inflation_matrix(full));
    const bool rho_ok = std::abs(spec.rho2 - kTau) < 1e-9;
    const auto rep = spectral::uniformity_bound(2, pen.scale, spec.rho2, true);
    const bool bound_ok = std::abs(rep.h_bound - 2.0) < 1e-9;
    // a bound of 2 = d does not clear the hyperuniformity threshold
    const bool insufficient = rep.hyperuniform == spectral::Verdict::inconclusive;
    CHECK(count_ok);
    CHECK(rho_ok);
    CHECK(bound_ok);
    CHECK(insufficient);
    const double secs = t.seconds();
    CHECK(secs < 5.0);
    report(2, count_ok && rho_ok && bound_ok && insufficient && secs < 5.0,
           "40 translation prototiles, full rho2 = tau, insufficient bound 2", secs);
}

TEST_CASE("criterion 3: classification thresholds") {
    Timer t;
    bool ok = true;
    for (const auto& name : {"fibonacci", "penrose", "ammann-beenker"}) {
        const auto rep = report_of(name);
        ok = ok && rep.hyperuniform == spectral::Verdict::proved &&
             rep.number_rigid == spectral::Verdict::proved;
        CHECK(rep.hyperuniform == spectral::Verdict::proved);
        CHECK(rep.number_rigid == spectral::Verdict::proved);
    }
    for (const auto& name : {"shield", "abck", "cap"}) {
        const auto rep = report_of(name);
        ok = ok && rep.hyperuniform == spectral::Verdict::proved &&
             rep.number_rigid == spectral::Verdict::inconclusive;
        CHECK(rep.hyperuniform == spectral::Verdict::proved);
        CHECK(rep.number_rigid == spectral::Verdict::inconclusive);
    }
    report(3, ok, "HU proved everywhere; rigidity proved only for the Pisot trio", t.seconds());
}

TEST_CASE("criterion 4: stone-inflation certification") {
    Timer t;
    bool ok = true;
    for (const auto& name : inflation::builtin_names()) {
        CAPTURE(name);
        const auto sys = inflation::builtin(name);
        const auto rep = inflation::validate_stone_inflation(sys);
        for (const auto& e : rep.entries) {
            if (e.check == "area") {
                CHECK(e.magnitude < 1e-8);
                ok = ok && e.magnitude < 1e-8;
            }
            if (e.check == "coverage") {
                CHECK(e.magnitude <= 1e-3);
                ok = ok && e.magnitude <= 1e-3;
            }
        }
        ok = ok && rep.all_passed;
        CHECK(rep.all_passed);
        const double resid = inflation::volume_eigen_check(sys);
        CHECK(resid < 1e-8);
        ok = ok && resid < 1e-8;
    }
    const double secs = t.seconds();
    CHECK(secs < 10.0);
    report(4, ok && secs < 10.0, "geometric rules certified as stone inflations", secs);
}

TEST_CASE("criterion 5: frequency convergence to the PF eigenvector") {
    Timer t;
    const auto fib = inflation::builtin("fibonacci");
    const auto fib_spec = inflation::pf_analysis(inflation::inflation_matrix(fib));
    const auto fib_patch = generation::inflate_patch(fib, generation::seed_patch(fib, 0), 15);
    const double fib_gap =
        (generation::empirical_frequencies(fib, fib_patch) - fib_spec.pf_vector).cwiseAbs().sum();
    CHECK(fib_gap < 1e-3);

    const auto pen = inflation::builtin("penrose");
    const auto pen_spec = inflation::pf_analysis(inflation::inflation_matrix(pen));
    const auto pen_patch = generation::inflate_patch(pen, generation::seed_patch(pen, 0), 8);
    const double pen_gap =
        (generation::empirical_frequencies(pen, pen_patch) - pen_spec.pf_vector).cwiseAbs().sum();
    CHECK(pen_gap < 1e-2);

    const double secs = t.seconds();
    CHECK(secs < 30.0);
    report(5, fib_gap < 1e-3 && pen_gap < 1e-2 && secs < 30.0,
           "tile frequencies converge to the PF eigenvector", secs);
}

TEST_CASE("criterion 6: cocycle decay rates") {
    Timer t;
    const auto fib = spectral::make_cocycle_context(inflation::builtin("fibonacci"));
    const double fib_rate = spectral::decay_rate_estimate(fib, 0.01, 25);
    CHECK(fib_rate <= 0.4203);

    const auto pen = spectral::make_cocycle_context(inflation::builtin("penrose"));
    const double pen_rate = spectral::decay_rate_estimate(pen, 0.01, 25);
    CHECK(pen_rate <= 0.1574);

    const double secs = t.seconds();
    CHECK(secs < 5.0);
    report(6, fib_rate <= 0.4203 && pen_rate <= 0.1574 && secs < 5.0,
           "cocycle contraction within 1.1x of the eigenvalue gap", secs);
}

TEST_CASE("criterion 7: shift transform at zero is the inflation matrix") {
    Timer t;
    bool ok = true;
    for (const auto& name : inflation::builtin_names()) {
        CAPTURE(name);
        const auto sys = inflation::builtin(name);
        const Eigen::MatrixXd at0 =
            spectral::shift_transform(generation::displacement_matrix(sys), 0, sys.dim);
        const Eigen::MatrixXd a = inflation::inflation_matrix(sys);
        const double err = (at0 - a).cwiseAbs().maxCoeff();
        CHECK(err < 1e-12);
        ok = ok && err < 1e-12;
    }
    report(7, ok, "mu-transform at r = 0 equals the integer inflation matrix", t.seconds());
}

TEST_CASE("criterion 8: spherical function oracle") {
    Timer t;
    bool ok = true;
    for (int i = 1; i <= 50; ++i) {
        const double k = 0.1 * i;
        const double err = std::abs(spectral::spherical(2, k) -
                                    std::cyl_bessel_j(0.0, 2 * std::numbers::pi * k));
        CHECK(err < 1e-9);
        ok = ok && err < 1e-9;
    }
    for (int d = 1; d <= 3; ++d) {
        ok = ok && std::abs(spectral::spherical(d, 0) - 1) < 1e-12;
        CHECK(spectral::spherical(d, 0) == doctest::Approx(1).epsilon(1e-12));
    }
    for (int i = 1; i <= 25; ++i) {
        const double k = 0.2 * i;
        const double err = std::abs(spectral::spherical(1, k) - std::cos(2 * std::numbers::pi * k));
        CHECK(err < 1e-15);
        ok = ok && err < 1e-15;
    }
    report(8, ok, "sphere-average kernel matches the Bessel series oracle", t.seconds());
}

TEST_CASE("criterion 9: desk-scale variance scaling") {
    Timer t;
    auto slope = [](const empirical::VarianceCurve& curve) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(curve.radii.size());
        for (int i = 0; i < n; ++i) {
            const double x = std::log(curve.radii[i]);
            const double y = std::log(std::max(curve.variances[i], 1e-12));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    const std::vector<double> radii{10, 20, 40, 80};

    const auto sys = inflation::builtin("fibonacci");
    const auto pts = generation::centers(generation::supertile(sys, 0, 18));
    const auto curve = empirical::number_variance(pts, Eigen::VectorXd::Ones(2), radii, 2000, 7);
    const double fib_slope = slope(curve);
    CHECK(fib_slope <= 0.3);

    Eigen::VectorXd lo(1), hi(1);
    lo << -pts.window->inradius;
    hi << pts.window->inradius;
    const double density = static_cast<double>(pts.total_points()) / (2 * pts.window->inradius);
    const auto poisson = empirical::poisson_sample(density, lo, hi, 7);
    const auto pcurve =
        empirical::number_variance(poisson, Eigen::VectorXd::Ones(1), radii, 2000, 7);
    const double poisson_slope = slope(pcurve);
    CHECK(poisson_slope >= 0.8);
    CHECK(poisson_slope <= 1.2);

    const double secs = t.seconds();
    CHECK(secs < 120.0);
    report(9,
           fib_slope <= 0.3 && poisson_slope >= 0.8 && poisson_slope <= 1.2 && secs < 120.0,
           "bounded Fibonacci variance vs linear Poisson baseline", secs);
}

TEST_CASE("criterion 10: renormalization residuals") {
    Timer t;
    const auto sys = inflation::builtin("fibonacci");
    const auto ctx = spectral::make_cocycle_context(sys);
    std::vector<double> grid;
    for (double r = 0.5; r >= 0.05 * (1 - 1e-9); r /= ctx.scale) grid.push_back(r);
    std::reverse(grid.begin(), grid.end());
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };

    // synthetic cocycle fixed point must be reproduced exactly
    empirical::SpectrumEstimate synthetic;
    synthetic.r_grid = grid;
    synthetic.values.assign(grid.size(), Eigen::MatrixXcd::Zero(2, 2));
    Eigen::MatrixXcd top(2, 2);
    top << 2.0, 0.3, 0.3, 1.0;
    synthetic.values.back() = top;
    for (int i = static_cast<int>(grid.size()) - 2; i >= 0; --i) {
        const Eigen::MatrixXd tr = spectral::transfer(ctx, grid[i]);
        synthetic.values[i] = tr * synthetic.values[i + 1] * tr.transpose();
    }
    double synth_max = 0;
    for (double r : empirical::renormalization_residual(sys, synthetic)) {
        synth_max = std::max(synth_max, r);
    }
    CHECK(synth_max < 1e-10);

    const auto pts = generation::centers(generation::supertile(sys, 0, 16));
    const auto est = empirical::powder_spectrum(pts, grid, 2);
    const double fib_median = median(empirical::renormalization_residual(sys, est));
    CHECK(fib_median < 0.15);

    Eigen::VectorXd lo(1), hi(1);
    lo << -pts.window->inradius;
    hi << pts.window->inradius;
    const auto poisson = empirical::poisson_sample(1.0, lo, hi, 17);
    generation::ShiftMeasureMatrix split = generation::ShiftMeasureMatrix::zero(2, 1);
    split.cells[0][0].push_back({1.0, euclid::Isometry::identity(1)});
    split.cells[1][0].push_back({1.0, euclid::Isometry::identity(1)});
    const auto split_est =
        empirical::powder_spectrum(generation::tile_shift(poisson, split), grid, 2);
    const double poisson_median = median(empirical::renormalization_residual(sys, split_est));
    CHECK(poisson_median > 0.5);

    const double secs = t.seconds();
    CHECK(secs < 120.0);
    report(10,
           synth_max < 1e-10 && fib_median < 0.15 && poisson_median > 0.5 && secs < 120.0,
           "diffraction self-similarity holds for Fibonacci, fails for Poisson", secs);
}

TEST_CASE("criterion 11: tile-shift identities") {
    Timer t;
    bool ok = true;

    // identity shift leaves intensities and spectra untouched
    const auto fib = inflation::builtin("fibonacci");
    const auto fib_pts = generation::centers(generation::supertile(fib, 0, 12));
    const auto id_rep = empirical::tile_shift_identity_check(
        fib_pts, generation::identity_shift(2, 1), {0.1, 0.2, 0.4}, 2);
    CHECK(id_rep.intensity_residual < 1e-12);
    ok = ok && id_rep.intensity_residual < 1e-12;
    for (double r : id_rep.spectrum_residuals) {
        CHECK(r < 1e-12);
        ok = ok && r < 1e-12;
    }

    // Penrose half-tile -> full-tile merge: each half maps to the centroid
    // of the full tile it spans with its mirror partner, at weight 1/2
    const auto pen = inflation::builtin("penrose");
    generation::ShiftMeasureMatrix merge = generation::ShiftMeasureMatrix::zero(2, 2);
    for (int c = 0; c < 2; ++c) {
        const auto& verts = pen.prototiles[c].support.vertices();
        // the full tile is the union with the mirror image across the
        // apex-to-C leg; its centroid is the projection of the origin
        // (the half-tile centroid) onto that axis
        const Eigen::Vector2d apex = verts[0];
        const Eigen::Vector2d leg_end = verts[2];
        const Eigen::Vector2d axis = (leg_end - apex).normalized();
        const Eigen::Vector2d proj = apex + axis * axis.dot(Eigen::Vector2d(-apex));
        Eigen::VectorXd shift(2);
        shift << proj(0), proj(1);
        merge.cells[c][c].push_back({0.5, euclid::Isometry::translation(shift)});
    }
    // the powder conjugation identity is a small-r statement: the scalar
    // mu-transform averages the per-tile phase over orientations, which is
    // accurate while r * |shift| stays well below one
    const auto pen_pts = generation::centers(generation::supertile(pen, 0, 7));
    const auto merge_rep =
        empirical::tile_shift_identity_check(pen_pts, merge, {0.02, 0.05, 0.1}, 24);
    // intensities halve exactly: output density = 0.5 * input density
    CHECK(merge_rep.intensity_residual < 1e-12);
    ok = ok && merge_rep.intensity_residual < 1e-12;
    for (double r : merge_rep.spectrum_residuals) {
        CHECK(r < 0.2);
        ok = ok && r < 0.2;
    }
    report(11, ok, "tile-shift intensity and spectrum conjugation identities", t.seconds());
}

TEST_CASE("criterion 12: irreducibility and Pisot flags") {
    Timer t;
    const auto fib = spectral::irreducible_pisot_check(
        inflation::inflation_matrix(inflation::builtin("fibonacci")), kTau);
    const auto pen = spectral::irreducible_pisot_check(
        inflation::inflation_matrix(inflation::builtin("penrose")), kTau * kTau);
    const auto pd = spectral::irreducible_pisot_check(
        inflation::inflation_matrix(inflation::builtin("period-doubling")), 2.0);
    CHECK(fib.first);
    CHECK(fib.second);
    CHECK(pen.first);
    CHECK(pen.second);
    CHECK(!pd.first);
    CHECK(!pd.second);
    const bool ok =
        fib.first && fib.second && pen.first && pen.second && !pd.first && !pd.second;
    report(12, ok, "characteristic polynomials: irreducible Pisot vs the reducible boundary case",
           t.seconds());
}
