#pragma once

#include "tilescope/generation.hpp"
#include "tilescope/spectral.hpp"

#include <cstdint>

namespace tilescope::empirical {

using generation::ColoredPointSet;
using generation::ShiftMeasureMatrix;
using inflation::InflationSystem;

/// Finite-window powder (angularly averaged) structure factor estimate.
struct SpectrumEstimate {
    std::vector<double> r_grid;
    std::vector<Eigen::MatrixXcd> values; // Hermitian, one per grid point
    double window_radius = 0;
    int sample_count = 0; // angular directions averaged per radius
};

struct VarianceCurve {
    std::vector<double> radii;
    std::vector<double> variances;
    std::vector<int> sample_counts;
    std::uint64_t seed = 0;
};

struct TileShiftReport {
    double intensity_residual = 0;
    std::vector<double> r_grid;
    std::vector<double> spectrum_residuals; // relative Frobenius error per r
};

/// Pair-count estimate of the autocorrelation at the given displacements:
/// entry (i,j) of matrix z counts weighted pairs x in color i inside the
/// R-ball around the window center, y in color j, with x - y within 1e-9 of
/// z, normalized by the ball volume.
std::vector<Eigen::MatrixXd> autocorrelation_estimate(const ColoredPointSet& points,
                                                      const std::vector<Eigen::VectorXd>& displacements,
                                                      double R);

/// Scattering-amplitude estimator with angular averaging. For each radius r
/// averages F_i(ru) conj(F_j(ru)) / Vol(window) over directions u
/// (d=1: both signs; d=2: equispaced angles).
SpectrumEstimate powder_spectrum(const ColoredPointSet& points, const std::vector<double>& r_grid,
                                 int angular_samples);

/// Variance of the weighted count in balls B_R(c), centers sampled
/// uniformly in the eroded window interior; deterministic per seed.
VarianceCurve number_variance(const ColoredPointSet& points, const Eigen::VectorXd& weights,
                              const std::vector<double>& R_list, int samples,
                              std::uint64_t seed);

/// Homogeneous Poisson sample in the axis-aligned box [lo, hi], one color;
/// bitwise deterministic per seed.
ColoredPointSet poisson_sample(double intensity, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi, std::uint64_t seed);

double ball_volume(int d, double R);

/// Per-radius defect of the diffraction self-similarity identity
/// theta(r) = T(r) theta(lambda r) T(r)^T, with T the cocycle factor of
/// `sys` and theta(lambda r) linearly interpolated on the estimate's grid.
std::vector<double> renormalization_residual(const InflationSystem& sys,
                                             const SpectrumEstimate& est);

/// Checks the tile-shift identities on a concrete point set: (a) output
/// densities equal the weight-total matrix applied to input densities;
/// (b) output spectrum equals the mu-transform conjugation of the input
/// spectrum on the given grid.
TileShiftReport tile_shift_identity_check(const ColoredPointSet& points,
                                          const ShiftMeasureMatrix& mu,
                                          const std::vector<double>& r_grid,
                                          int angular_samples);

} // namespace tilescope::empirical
