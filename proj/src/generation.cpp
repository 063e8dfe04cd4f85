#include "tilescope/generation.hpp"

#include <cmath>
#include <stdexcept>

namespace tilescope::generation {

Eigen::MatrixXd ShiftMeasureMatrix::weight_totals() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            for (const auto& e : cells[i][j]) a(i, j) += e.weight;
        }
    }
    return a;
}

ShiftMeasureMatrix identity_shift(int n, int dim) {
    ShiftMeasureMatrix m = ShiftMeasureMatrix::zero(n, n);
    for (int i = 0; i < n; ++i) m.cells[i][i].push_back({1.0, Isometry::identity(dim)});
    return m;
}

ShiftMeasureMatrix displacement_matrix(const InflationSystem& sys) {
    const int l = sys.colors();
    ShiftMeasureMatrix m = ShiftMeasureMatrix::zero(l, l);
    for (int j = 0; j < l; ++j) {
        for (const auto& pl : sys.rules[j]) {
            m.cells[pl.child][j].push_back({1.0, pl.map});
        }
    }
    return m;
}

Patch seed_patch(const InflationSystem& sys, int color) {
    if (color < 0 || color >= sys.colors()) {
        throw std::invalid_argument("seed_patch: invalid prototile id");
    }
    Patch p;
    p.system = sys.name;
    p.tiles.push_back({Isometry::identity(sys.dim), color});
    p.support = sys.prototiles[color].support;
    return p;
}

namespace {

std::size_t max_branching(const InflationSystem& sys) {
    std::size_t b = 1;
    for (const auto& rule : sys.rules) b = std::max(b, rule.size());
    return b;
}

} // namespace

Patch inflate_patch(const InflationSystem& sys, const Patch& p, int n, std::size_t cap) {
    if (n < 0) throw std::invalid_argument("inflate_patch: negative level");
    const std::size_t branch = max_branching(sys);

    // project the tile count through the inflation matrix first, so absurd
    // levels are rejected before any memory is committed
    const Eigen::MatrixXd a = inflation::inflation_matrix(sys);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(a.cols());
    for (const auto& tile : p.tiles) counts(tile.color) += 1;
    for (int step = 0; step < n; ++step) {
        counts = a * counts;
        if (!(counts.sum() <= static_cast<double>(cap))) {
            throw std::length_error("inflate_patch: tile count cap exceeded");
        }
    }

    Patch cur = p;
    for (int step = 0; step < n; ++step) {
        if (cur.tiles.size() > cap / branch) {
            throw std::length_error("inflate_patch: tile count cap exceeded");
        }
        Patch next;
        next.system = cur.system;
        next.tiles.reserve(cur.tiles.size() * branch);
        for (const auto& tile : cur.tiles) {
            const Isometry scaled = euclid::dilate(sys.scale, tile.pose);
            for (const auto& pl : sys.rules[tile.color]) {
                next.tiles.push_back({euclid::compose(scaled, pl.map), pl.child});
            }
        }
        if (cur.support) next.support = cur.support->scaled(sys.scale);
        cur = std::move(next);
        if (cur.tiles.size() > cap) throw std::length_error("inflate_patch: tile count cap exceeded");
    }
    return cur;
}

Patch recentred_patch(const Patch& p) {
    if (!p.support) throw std::invalid_argument("recentred_patch: patch has no tracked support");
    const Eigen::VectorXd c = p.support->centroid();
    Patch out;
    out.system = p.system;
    out.tiles.reserve(p.tiles.size());
    const Isometry shift = Isometry::translation(-c);
    for (const auto& tile : p.tiles) {
        out.tiles.push_back({euclid::compose(shift, tile.pose), tile.color});
    }
    out.support = p.support->transformed(shift);
    return out;
}

Patch supertile(const InflationSystem& sys, int color, int n, std::size_t cap) {
    return recentred_patch(inflate_patch(sys, seed_patch(sys, color), n, cap));
}

namespace {

WindowDescriptor window_of(const Polygon& support) {
    WindowDescriptor w;
    w.center = support.centroid();
    w.inradius = support.boundary_distance(w.center);
    w.volume = support.area();
    return w;
}

} // namespace

ColoredPointSet centers(const Patch& p) {
    ColoredPointSet out;
    int max_color = -1;
    for (const auto& tile : p.tiles) max_color = std::max(max_color, tile.color);
    out.dim = p.tiles.empty() ? (p.support ? p.support->dim() : 1) : p.tiles.front().pose.dim();
    out.colors.resize(max_color + 1);
    for (const auto& tile : p.tiles) {
        out.colors[tile.color].push_back({tile.pose.trans(), tile.pose.ortho(), 1.0});
    }
    if (p.support) out.window = window_of(*p.support);
    return out;
}

ColoredPointSet superprocess_labels(const InflationSystem& sys, const Patch& seed, int k,
                                    std::size_t cap) {
    if (k < 1) throw std::invalid_argument("superprocess_labels: k must be positive");
    const int l = sys.colors();
    double color_count = std::pow(static_cast<double>(l), k);
    if (color_count > 1e6) {
        throw std::length_error("superprocess_labels: color count l^k exceeds 1e6");
    }
    const std::size_t branch = max_branching(sys);

    struct LabeledTile {
        Isometry pose;
        int color;
        std::size_t word; // ancestry index, first letter most significant
    };
    std::vector<LabeledTile> cur;
    cur.reserve(seed.tiles.size());
    for (const auto& tile : seed.tiles) cur.push_back({tile.pose, tile.color, 0});
    std::optional<Polygon> support = seed.support;

    for (int step = 0; step < k; ++step) {
        if (cur.size() > cap / branch) {
            throw std::length_error("superprocess_labels: tile count cap exceeded");
        }
        std::vector<LabeledTile> next;
        next.reserve(cur.size() * branch);
        for (const auto& tile : cur) {
            const Isometry scaled = euclid::dilate(sys.scale, tile.pose);
            for (const auto& pl : sys.rules[tile.color]) {
                next.push_back({euclid::compose(scaled, pl.map), pl.child,
                                tile.word * l + static_cast<std::size_t>(pl.child)});
            }
        }
        if (support) support = support->scaled(sys.scale);
        cur = std::move(next);
    }

    ColoredPointSet out;
    out.dim = sys.dim;
    out.colors.resize(static_cast<std::size_t>(color_count));
    for (const auto& tile : cur) {
        out.colors[tile.word].push_back({tile.pose.trans(), tile.pose.ortho(), 1.0});
    }
    if (support) out.window = window_of(*support);
    return out;
}

ColoredPointSet tile_shift(const ColoredPointSet& points, const ShiftMeasureMatrix& mu) {
    if (mu.cols != static_cast<int>(points.colors.size())) {
        throw std::invalid_argument("tile_shift: measure matrix columns must match color count");
    }
    ColoredPointSet out;
    out.dim = points.dim;
    out.window = points.window;
    out.colors.resize(mu.rows);
    for (int i = 0; i < mu.rows; ++i) {
        for (int j = 0; j < mu.cols; ++j) {
            for (const auto& e : mu.cells[i][j]) {
                for (const auto& pt : points.colors[j]) {
                    const Isometry g(pt.ortho, pt.point);
                    const Isometry moved = euclid::compose(g, e.shift);
                    out.colors[i].push_back({moved.trans(), moved.ortho(), pt.weight * e.weight});
                }
            }
        }
    }
    return out;
}

Eigen::VectorXd empirical_frequencies(const InflationSystem& sys, const Patch& p) {
    if (p.tiles.empty()) throw std::invalid_argument("empirical_frequencies: empty patch");
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(sys.colors());
    for (const auto& tile : p.tiles) counts(tile.color) += 1.0;
    return counts / counts.sum();
}

} // namespace tilescope::generation
