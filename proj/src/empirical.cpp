#include "tilescope/empirical.hpp"

#include "tilescope/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace tilescope::empirical {

double ball_volume(int d, double R) {
    switch (d) {
        case 1: return 2 * R;
        case 2: return std::numbers::pi * R * R;
        case 3: return 4.0 / 3.0 * std::numbers::pi * R * R * R;
        default: throw std::invalid_argument("ball_volume: unsupported dimension");
    }
}

std::vector<Eigen::MatrixXd> autocorrelation_estimate(const ColoredPointSet& points,
                                                      const std::vector<Eigen::VectorXd>& displacements,
                                                      double R) {
    if (!points.window) throw std::invalid_argument("autocorrelation_estimate: point set has no window");
    if (R > points.window->inradius) {
        throw std::invalid_argument("autocorrelation_estimate: R exceeds the window inradius");
    }
    const int l = static_cast<int>(points.colors.size());
    const Eigen::VectorXd center = points.window->center;
    const double vol = ball_volume(points.dim, R);
    constexpr double match_tol = 1e-9;

    std::vector<Eigen::MatrixXd> out(displacements.size(), Eigen::MatrixXd::Zero(l, l));
    for (int i = 0; i < l; ++i) {
        for (const auto& x : points.colors[i]) {
            if ((x.point - center).norm() > R) continue;
            for (int j = 0; j < l; ++j) {
                for (const auto& y : points.colors[j]) {
                    const Eigen::VectorXd diff = x.point - y.point;
                    for (std::size_t z = 0; z < displacements.size(); ++z) {
                        if ((diff - displacements[z]).norm() < match_tol) {
                            out[z](i, j) += x.weight * y.weight;
                        }
                    }
                }
            }
        }
    }
    for (auto& m : out) m /= vol;
    return out;
}

namespace {

std::vector<Eigen::VectorXd> directions(int d, int angular_samples) {
    std::vector<Eigen::VectorXd> out;
    if (d == 1) {
        Eigen::VectorXd u(1);
        u << 1;
        out.push_back(u);
        u << -1;
        out.push_back(u);
    } else if (d == 2) {
        for (int s = 0; s < angular_samples; ++s) {
            const double phi = 2 * std::numbers::pi * s / angular_samples;
            Eigen::VectorXd u(2);
            u << std::cos(phi), std::sin(phi);
            out.push_back(u);
        }
    } else {
        throw std::invalid_argument("powder_spectrum: unsupported dimension");
    }
    return out;
}

} // namespace

SpectrumEstimate powder_spectrum(const ColoredPointSet& points, const std::vector<double>& r_grid,
                                 int angular_samples) {
    if (!points.window || points.window->volume <= 0) {
        throw std::invalid_argument("powder_spectrum: point set has no window volume");
    }
    if (points.total_points() == 0) throw std::invalid_argument("powder_spectrum: empty point set");
    const int l = static_cast<int>(points.colors.size());
    const auto dirs = directions(points.dim, angular_samples);
    SpectrumEstimate est;
    est.r_grid = r_grid;
    est.window_radius = points.window->inradius;
    est.sample_count = static_cast<int>(dirs.size());
    est.values.reserve(r_grid.size());
    for (double r : r_grid) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(l, l);
        for (const auto& u : dirs) {
            const Eigen::VectorXd k = r * u;
            Eigen::VectorXcd f = Eigen::VectorXcd::Zero(l);
            for (int i = 0; i < l; ++i) {
                for (const auto& pt : points.colors[i]) {
                    const double phase = -2 * std::numbers::pi * k.dot(pt.point);
                    f(i) += pt.weight * std::complex<double>(std::cos(phase), std::sin(phase));
                }
            }
            acc += f * f.adjoint();
        }
        est.values.push_back(acc / (static_cast<double>(dirs.size()) * points.window->volume));
    }
    return est;
}

VarianceCurve number_variance(const ColoredPointSet& points, const Eigen::VectorXd& weights,
                              const std::vector<double>& R_list, int samples,
                              std::uint64_t seed) {
    if (!points.window) throw std::invalid_argument("number_variance: point set has no window");
    if (samples < 100) throw std::invalid_argument("number_variance: need at least 100 samples");
    const double inradius = points.window->inradius;
    for (double R : R_list) {
        if (R > inradius / 4) {
            throw std::invalid_argument("number_variance: R exceeds a quarter of the window inradius");
        }
    }
    if (weights.size() != static_cast<Eigen::Index>(points.colors.size())) {
        throw std::invalid_argument("number_variance: weight vector length mismatch");
    }
    const int d = points.dim;
    const Eigen::VectorXd center = points.window->center;

    // flatten to one weighted array for fast scans
    std::vector<std::pair<Eigen::VectorXd, double>> flat;
    for (std::size_t c = 0; c < points.colors.size(); ++c) {
        for (const auto& pt : points.colors[c]) {
            flat.emplace_back(pt.point, pt.weight * weights(static_cast<Eigen::Index>(c)));
        }
    }
    // d=1: sort by coordinate and use prefix sums
    std::vector<double> xs, prefix;
    if (d == 1) {
        std::sort(flat.begin(), flat.end(),
                  [](const auto& a, const auto& b) { return a.first(0) < b.first(0); });
        prefix.push_back(0);
        for (const auto& [p, w] : flat) {
            xs.push_back(p(0));
            prefix.push_back(prefix.back() + w);
        }
    }

    VarianceCurve curve;
    curve.seed = seed;
    for (std::size_t ri = 0; ri < R_list.size(); ++ri) {
        const double R = R_list[ri];
        const double erode = inradius - R;
        CounterRng gen(seed, ri);
        double sum = 0, sumsq = 0;
        for (int s = 0; s < samples; ++s) {
            // uniform center in the eroded ball
            Eigen::VectorXd c(d);
            while (true) {
                for (int k = 0; k < d; ++k) c(k) = gen.uniform(-erode, erode);
                if (c.norm() <= erode) break;
            }
            c += center;
            double count = 0;
            if (d == 1) {
                const auto lo = std::lower_bound(xs.begin(), xs.end(), c(0) - R) - xs.begin();
                const auto hi = std::upper_bound(xs.begin(), xs.end(), c(0) + R) - xs.begin();
                count = prefix[hi] - prefix[lo];
            } else {
                for (const auto& [p, w] : flat) {
                    if ((p - c).norm() <= R) count += w;
                }
            }
            sum += count;
            sumsq += count * count;
        }
        const double mean = sum / samples;
        curve.radii.push_back(R);
        curve.variances.push_back(std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1)));
        curve.sample_counts.push_back(samples);
    }
    return curve;
}

ColoredPointSet poisson_sample(double intensity, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi, std::uint64_t seed) {
    if (intensity <= 0) throw std::invalid_argument("poisson_sample: intensity must be positive");
    const int d = static_cast<int>(lo.size());
    double vol = 1;
    for (int k = 0; k < d; ++k) {
        if (hi(k) < lo(k)) throw std::invalid_argument("poisson_sample: empty box");
        vol *= hi(k) - lo(k);
    }
    const double mean = intensity * vol;
    // split the mean into chunks small enough for stable inversion sampling
    const int chunks = std::max(1, static_cast<int>(std::ceil(mean / 16.0)));
    const double chunk_mean = mean / chunks;
    CounterRng gen(seed, 0);
    std::size_t total = 0;
    for (int c = 0; c < chunks; ++c) {
        // Knuth product method
        const double limit = std::exp(-chunk_mean);
        double prod = gen.next_double();
        std::size_t n = 0;
        while (prod > limit) {
            ++n;
            prod *= gen.next_double();
        }
        total += n;
    }
    ColoredPointSet out;
    out.dim = d;
    out.colors.resize(1);
    CounterRng pos(seed, 1);
    out.colors[0].reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        Eigen::VectorXd p(d);
        for (int k = 0; k < d; ++k) p(k) = pos.uniform(lo(k), hi(k));
        out.colors[0].push_back({p, Eigen::MatrixXd::Identity(d, d), 1.0});
    }
    generation::WindowDescriptor w;
    w.center = (lo + hi) / 2;
    w.inradius = (hi - lo).minCoeff() / 2;
    w.volume = vol;
    out.window = w;
    return out;
}

namespace {

Eigen::MatrixXcd interpolate_estimate(const SpectrumEstimate& est, double r) {
    const auto& g = est.r_grid;
    if (r < g.front() - 1e-12 || r > g.back() + 1e-12) {
        throw std::invalid_argument("renormalization_residual: grid does not span [r, lambda r]");
    }
    const auto it = std::lower_bound(g.begin(), g.end(), r);
    const std::size_t hi = std::min<std::size_t>(g.size() - 1, it - g.begin());
    if (hi == 0) return est.values[0];
    const std::size_t lo = hi - 1;
    if (std::abs(g[hi] - r) < 1e-12) return est.values[hi];
    const double t = (r - g[lo]) / (g[hi] - g[lo]);
    return (1 - t) * est.values[lo] + t * est.values[hi];
}

} // namespace

std::vector<double> renormalization_residual(const InflationSystem& sys,
                                             const SpectrumEstimate& est) {
    const auto ctx = spectral::make_cocycle_context(sys);
    if (est.r_grid.empty() || est.r_grid.front() * ctx.scale > est.r_grid.back() + 1e-12) {
        throw std::invalid_argument("renormalization_residual: grid does not span one scale factor");
    }
    std::vector<double> residuals;
    for (std::size_t i = 0; i < est.r_grid.size(); ++i) {
        const double r = est.r_grid[i];
        if (r * ctx.scale > est.r_grid.back() + 1e-12) break;
        const Eigen::MatrixXd t = spectral::transfer(ctx, r);
        const Eigen::MatrixXcd predicted =
            t * interpolate_estimate(est, r * ctx.scale) * t.transpose();
        const double num = (est.values[i] - predicted).norm();
        residuals.push_back(num / (1 + est.values[i].norm()));
    }
    return residuals;
}

TileShiftReport tile_shift_identity_check(const ColoredPointSet& points,
                                          const ShiftMeasureMatrix& mu,
                                          const std::vector<double>& r_grid,
                                          int angular_samples) {
    if (!points.window || points.window->volume <= 0) {
        throw std::invalid_argument("tile_shift_identity_check: point set has no window volume");
    }
    const ColoredPointSet shifted = generation::tile_shift(points, mu);
    const double vol = points.window->volume;

    auto densities = [vol](const ColoredPointSet& ps) {
        Eigen::VectorXd d(static_cast<Eigen::Index>(ps.colors.size()));
        for (std::size_t c = 0; c < ps.colors.size(); ++c) {
            double total = 0;
            for (const auto& pt : ps.colors[c]) total += pt.weight;
            d(static_cast<Eigen::Index>(c)) = total / vol;
        }
        return d;
    };
    const Eigen::VectorXd in_dens = densities(points);
    const Eigen::VectorXd out_dens = densities(shifted);
    const Eigen::VectorXd predicted = mu.weight_totals() * in_dens;

    TileShiftReport report;
    report.intensity_residual =
        (out_dens - predicted).cwiseAbs().maxCoeff() / std::max(1e-300, out_dens.cwiseAbs().maxCoeff());
    report.r_grid = r_grid;
    if (!r_grid.empty()) {
        const auto in_spec = powder_spectrum(points, r_grid, angular_samples);
        const auto out_spec = powder_spectrum(shifted, r_grid, angular_samples);
        for (std::size_t i = 0; i < r_grid.size(); ++i) {
            const Eigen::MatrixXd mh = spectral::shift_transform(mu, r_grid[i], points.dim);
            const Eigen::MatrixXcd predicted_spec = mh * in_spec.values[i] * mh.transpose();
            report.spectrum_residuals.push_back((out_spec.values[i] - predicted_spec).norm() /
                                                std::max(1e-300, out_spec.values[i].norm()));
        }
    }
    return report;
}

} // namespace tilescope::empirical
