#pragma once

#include "tilescope/inflation.hpp"

#include <cstdint>
#include <optional>

namespace tilescope::generation {

using euclid::Isometry;
using euclid::Polygon;
using inflation::InflationSystem;

struct Tile {
    Isometry pose;
    int color = 0;
};

/// Finite patch of placed tiles. `support` is tracked when the patch was
/// built from a single seed tile (supertiles), where the union of tile
/// supports is a known polygon; it powers window geometry downstream.
struct Patch {
    std::string system;
    std::vector<Tile> tiles;
    std::optional<Polygon> support;
};

struct WeightedPoint {
    Eigen::VectorXd point;
    Eigen::MatrixXd ortho;
    double weight = 1.0;
};

/// Ball-shaped sampling window metadata for a point set: the largest ball
/// around `center` contained in the generating region, and that region's
/// total volume (used to normalize spectra).
struct WindowDescriptor {
    Eigen::VectorXd center;
    double inradius = 0;
    double volume = 0;
};

struct ColoredPointSet {
    int dim = 1;
    std::vector<std::vector<WeightedPoint>> colors;
    std::optional<WindowDescriptor> window;

    std::size_t total_points() const {
        std::size_t n = 0;
        for (const auto& c : colors) n += c.size();
        return n;
    }
};

struct ShiftEntry {
    double weight = 1.0;
    Isometry shift;
};

/// Matrix of finitely supported positive measures on the motion group.
struct ShiftMeasureMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::vector<ShiftEntry>>> cells; // [row][col]

    static ShiftMeasureMatrix zero(int rows, int cols) {
        ShiftMeasureMatrix m;
        m.rows = rows;
        m.cols = cols;
        m.cells.assign(rows, std::vector<std::vector<ShiftEntry>>(cols));
        return m;
    }

    /// Entry (i,j) = total weight of cell (i,j).
    Eigen::MatrixXd weight_totals() const;
};

/// Identity grid: diagonal cells hold a unit mass at the identity.
ShiftMeasureMatrix identity_shift(int n, int dim);

/// The inflation displacement matrix: cell (i,j) collects one unit mass at
/// each placement isometry of child i inside rule j.
ShiftMeasureMatrix displacement_matrix(const InflationSystem& sys);

/// Single prototile t_color at the identity pose.
Patch seed_patch(const InflationSystem& sys, int color);

/// n-fold application of the inflation rule. Throws std::length_error when
/// the predicted tile count exceeds `cap`.
Patch inflate_patch(const InflationSystem& sys, const Patch& p, int n,
                    std::size_t cap = 50'000'000);

/// Translates the patch so its support centroid sits at the origin.
Patch recentred_patch(const Patch& p);

/// inflate_patch on a single seed tile, recentred; support tracked.
Patch supertile(const InflationSystem& sys, int color, int n,
                std::size_t cap = 50'000'000);

/// Tile centers grouped by color, weight 1, orientations retained. The
/// window descriptor is filled from the patch support when available.
ColoredPointSet centers(const Patch& p);

/// Inflates `seed` k times, coloring each final tile by its length-k word
/// of ancestor colors (most significant letter first, so index % l is the
/// tile's actual color). Throws when l^k exceeds 10^6.
ColoredPointSet superprocess_labels(const InflationSystem& sys, const Patch& seed, int k,
                                    std::size_t cap = 50'000'000);

/// Pushes each point of color j through every (w, v) in mu[i][j], producing
/// a point of color i at the composed pose with multiplied weight.
ColoredPointSet tile_shift(const ColoredPointSet& points, const ShiftMeasureMatrix& mu);

/// Color counts normalized to sum 1. Throws on an empty patch.
Eigen::VectorXd empirical_frequencies(const InflationSystem& sys, const Patch& p);

} // namespace tilescope::generation
