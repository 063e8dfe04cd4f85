#include "tilescope/inflation.hpp"

#include "tilescope/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tilescope::inflation {

namespace {

constexpr double kTau = 1.6180339887498948482;

Eigen::Vector2d unit_dir(double deg) {
    const double t = deg * std::numbers::pi / 180.0;
    return {std::cos(t), std::sin(t)};
}

Polygon triangle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return Polygon({a, b, c});
}

Polygon recentred(const Polygon& p) {
    const Eigen::VectorXd c = p.centroid();
    std::vector<Eigen::VectorXd> verts;
    for (const auto& v : p.vertices()) verts.push_back(v - c);
    return Polygon(std::move(verts));
}

/// Isometry mapping a centroid-centered prototile onto a placed child copy,
/// given matching vertex orders. The linear part is solved from two edge
/// vectors and snapped to the nearest orthogonal matrix.
Isometry fit_isometry(const Polygon& proto, const std::vector<Eigen::Vector2d>& child) {
    const auto& pv = proto.vertices();
    Eigen::Matrix2d e, f;
    e.col(0) = Eigen::Vector2d(pv[1] - pv[0]);
    e.col(1) = Eigen::Vector2d(pv[2] - pv[0]);
    f.col(0) = child[1] - child[0];
    f.col(1) = child[2] - child[0];
    Eigen::Matrix2d q = euclid::nearest_orthogonal(f * e.inverse());
    const Eigen::Vector2d t = child[0] - q * Eigen::Vector2d(pv[0]);
    return Isometry(q, t);
}

/// Rebase a rule built in the raw parent frame onto the centered frame:
/// the stored parent support is the raw polygon recentred at its centroid
/// c, so its lambda-scaled copy sits at raw coordinates minus lambda * c.
void rebase_rule(std::vector<Placement>& rule, const Eigen::Vector2d& raw_centroid,
                 double lambda) {
    const Eigen::Vector2d off = lambda * raw_centroid;
    for (auto& pl : rule) {
        pl.map = Isometry(pl.map.ortho(), pl.map.trans() - off);
    }
}

bool matrices_close(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = 1e-9) {
    return (a - b).cwiseAbs().maxCoeff() < tol;
}

int group_index(const std::vector<Eigen::MatrixXd>& group, const Eigen::MatrixXd& m) {
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (matrices_close(group[i], m)) return static_cast<int>(i);
    }
    return -1;
}

InflationSystem make_fibonacci() {
    InflationSystem sys;
    sys.name = "fibonacci";
    sys.dim = 1;
    sys.scale = kTau;
    sys.pure_point_asserted = true;
    sys.prototiles.push_back({0, "alpha", Polygon::interval(-kTau / 2, kTau / 2)});
    sys.prototiles.push_back({1, "beta", Polygon::interval(-0.5, 0.5)});
    auto shift1 = [](double x) {
        Eigen::VectorXd v(1);
        v << x;
        return Isometry::translation(v);
    };
    sys.rules.resize(2);
    sys.rules[0] = {{shift1(-0.5), 0}, {shift1(kTau / 2), 1}};
    sys.rules[1] = {{shift1(0.0), 0}};
    return sys;
}

InflationSystem make_period_doubling() {
    InflationSystem sys;
    sys.name = "period-doubling";
    sys.dim = 1;
    sys.scale = 2.0;
    sys.pure_point_asserted = true;
    sys.prototiles.push_back({0, "a", Polygon::interval(-0.5, 0.5)});
    sys.prototiles.push_back({1, "b", Polygon::interval(-0.5, 0.5)});
    auto shift1 = [](double x) {
        Eigen::VectorXd v(1);
        v << x;
        return Isometry::translation(v);
    };
    sys.rules.resize(2);
    sys.rules[0] = {{shift1(-0.5), 0}, {shift1(0.5), 1}};
    sys.rules[1] = {{shift1(-0.5), 0}, {shift1(0.5), 0}};
    return sys;
}

// Penrose P2 half-kite / half-dart (Robinson triangles). The half-kite is the
// acute golden triangle (apex 36 degrees, legs tau, base 1), the half-dart the
// obtuse gnomon (apex 108 degrees, legs 1, base tau). The decomposition of the
// tau-scaled tiles is the standard Robinson subdivision; the vertex
// correspondences below fix the markings so that the 40-prototile
// translation-only expansion has second eigenvalue tau.
InflationSystem make_penrose() {
    InflationSystem sys;
    sys.name = "penrose";
    sys.dim = 2;
    sys.scale = kTau;
    sys.pure_point_asserted = true;

    const Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    Polygon kite_raw = triangle(origin, kTau * unit_dir(-18), kTau * unit_dir(18));
    Polygon dart_raw = triangle(origin, unit_dir(-54), unit_dir(54));
    Polygon kite = recentred(kite_raw);
    Polygon dart = recentred(dart_raw);
    sys.prototiles.push_back({0, "half-kite", kite});
    sys.prototiles.push_back({1, "half-dart", dart});

    // dihedral point group of order 20: rotation by 36 degrees + reflection
    sys.point_group = {Isometry::rotation2d(2 * std::numbers::pi / 10).ortho(),
                       Isometry::reflection2d(0).ortho()};

    // scaled half-kite: apex at origin, legs tau^2, base tau
    const Eigen::Vector2d kb = kTau * kTau * unit_dir(-18);
    const Eigen::Vector2d kc = kTau * kTau * unit_dir(18);
    const Eigen::Vector2d p = kTau * unit_dir(-18); // on apex-kb at distance tau
    const Eigen::Vector2d q = kTau * unit_dir(18);  // on apex-kc at distance tau
    sys.rules.resize(2);
    sys.rules[0] = {
        {fit_isometry(kite, {kc, p, kb}), 0},
        {fit_isometry(kite, {origin, q, p}), 0},
        {fit_isometry(dart, {q, kc, p}), 1},
    };

    // scaled half-dart: apex at origin, legs tau, base tau^2
    const Eigen::Vector2d db = kTau * unit_dir(-54);
    const Eigen::Vector2d dc = kTau * unit_dir(54);
    const Eigen::Vector2d r = db + kTau * (dc - db).normalized();
    sys.rules[1] = {
        {fit_isometry(kite, {db, r, origin}), 0},
        {fit_isometry(dart, {r, dc, origin}), 1},
    };
    rebase_rule(sys.rules[0], Eigen::Vector2d(kite_raw.centroid()), sys.scale);
    rebase_rule(sys.rules[1], Eigen::Vector2d(dart_raw.centroid()), sys.scale);
    return sys;
}

// Ammann-Beenker (A5): 45-degree rhomb and half-square triangle, scaling
// constant the silver mean 1 + sqrt(2). Triangle vertex order is
// (right angle, leg end, leg end); rhomb order starts at a 45-degree corner
// and winds counter-clockwise.
InflationSystem make_ammann_beenker() {
    InflationSystem sys;
    sys.name = "ammann-beenker";
    sys.dim = 2;
    sys.scale = 1.0 + std::numbers::sqrt2;
    sys.pure_point_asserted = true;

    const double s2 = std::numbers::sqrt2;
    const double lam = sys.scale;
    const Eigen::Vector2d e1(1.0, 0.0);
    const Eigen::Vector2d e2(s2 / 2, s2 / 2);
    const Eigen::Vector2d o = Eigen::Vector2d::Zero();

    Polygon rhomb_raw({Eigen::VectorXd(o), Eigen::VectorXd(e1),
                       Eigen::VectorXd(e1 + e2), Eigen::VectorXd(e2)});
    Polygon tri_raw = triangle(o, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1));
    Polygon rhomb = recentred(rhomb_raw);
    Polygon tri = recentred(tri_raw);
    sys.prototiles.push_back({0, "rhomb", rhomb});
    sys.prototiles.push_back({1, "triangle", tri});

    sys.point_group = {Isometry::rotation2d(std::numbers::pi / 4).ortho(),
                       Isometry::reflection2d(0).ortho()};

    auto fit_rhomb = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
        (void)d;
        return fit_isometry(rhomb, {a, b, c});
    };

    sys.rules.resize(2);
    // scaled rhomb, edge lam, corner at origin
    const Eigen::Vector2d diag = s2 * (e1 + e2);
    sys.rules[0] = {
        {fit_rhomb(o, e1, e1 + e2, e2), 0},
        {fit_rhomb(diag, diag + e1, lam * (e1 + e2), diag + e2), 0},
        {fit_rhomb(lam * e1, diag, lam * e2, e1 + e2), 0},
        {fit_isometry(tri, {e1 + e2, e1, lam * e1}), 1},
        {fit_isometry(tri, {diag, lam * e1, lam * e1 + s2 * e2}), 1},
        {fit_isometry(tri, {e1 + e2, lam * e2, e2}), 1},
        {fit_isometry(tri, {diag, lam * e2 + s2 * e1, lam * e2}), 1},
    };

    // scaled triangle, legs lam along the axes, right angle at origin
    const Eigen::Vector2d m(s2 / 2, s2 / 2);
    const Eigen::Vector2d p1(1 + s2 / 2, s2 / 2);
    const Eigen::Vector2d p2(s2 / 2, 1 + s2 / 2);
    const Eigen::Vector2d bx(lam, 0), cy(0, lam), sx(s2, 0), sy(0, s2);
    sys.rules[1] = {
        {fit_isometry(tri, {m, Eigen::Vector2d(o), sx}), 1},
        {fit_isometry(tri, {m, sy, Eigen::Vector2d(o)}), 1},
        {fit_isometry(tri, {m, p1, p2}), 1},
        {fit_rhomb(bx, p1, m, sx), 0},
        {fit_rhomb(cy, sy, m, p2), 0},
    };
    rebase_rule(sys.rules[0], Eigen::Vector2d(rhomb_raw.centroid()), sys.scale);
    rebase_rule(sys.rules[1], Eigen::Vector2d(tri_raw.centroid()), sys.scale);
    return sys;
}

} // namespace

void InflationSystem::check() const {
    if (scale <= 1.0) throw std::invalid_argument("InflationSystem: scale must exceed 1");
    if (prototiles.empty() || rules.size() != prototiles.size()) {
        throw std::invalid_argument("InflationSystem: rules must match prototiles");
    }
    const int l = colors();
    for (const auto& t : prototiles) {
        if (t.support.dim() != dim) throw std::invalid_argument("InflationSystem: support dimension mismatch");
        if (!t.support.contains(Eigen::VectorXd::Zero(dim), 1e-9 * t.support.diameter())) {
            throw std::invalid_argument("InflationSystem: prototile support must contain the origin");
        }
    }
    for (const auto& rule : rules) {
        for (const auto& pl : rule) {
            if (pl.child < 0 || pl.child >= l) throw std::invalid_argument("InflationSystem: invalid child id");
            if (pl.map.dim() != dim) throw std::invalid_argument("InflationSystem: placement dimension mismatch");
        }
    }
    if (!point_group.empty()) {
        auto group = generate_point_group(point_group, dim);
        for (const auto& rule : rules) {
            for (const auto& pl : rule) {
                if (group_index(group, pl.map.ortho()) < 0) {
                    throw std::invalid_argument("InflationSystem: placement orientation outside point group");
                }
            }
        }
    }
}

Eigen::MatrixXd inflation_matrix(const InflationSystem& sys) {
    const int l = sys.colors();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(l, l);
    for (int j = 0; j < l; ++j) {
        for (const auto& pl : sys.rules[j]) a(pl.child, j) += 1.0;
    }
    return a;
}

bool is_primitive(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("is_primitive: non-square input");
    if ((a.array() < 0).any()) throw std::invalid_argument("is_primitive: negative entries");
    const int n = static_cast<int>(a.rows());
    const int wielandt = (n - 1) * (n - 1) + 1;
    // positivity pattern powers only, to avoid numeric overflow
    using Pattern = std::vector<std::vector<bool>>;
    Pattern base(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base[i][j] = a(i, j) > 0;
    Pattern cur = base;
    auto all_positive = [n](const Pattern& p) {
        for (const auto& row : p)
            for (bool b : row)
                if (!b) return false;
        return true;
    };
    for (int k = 1; k <= wielandt; ++k) {
        if (all_positive(cur)) return true;
        Pattern next(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < n; ++m)
                if (cur[i][m])
                    for (int j = 0; j < n; ++j)
                        if (base[m][j]) next[i][j] = true;
        cur = std::move(next);
    }
    return false;
}

SpectralData spectral_summary(const Eigen::MatrixXd& a) {
    SpectralData out;
    out.matrix = a;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    const auto& vals = solver.eigenvalues();
    double radius = 0;
    int pf_idx = 0;
    for (int i = 0; i < vals.size(); ++i) {
        out.eigenvalues.push_back(vals(i));
        if (std::abs(vals(i)) > radius) radius = std::abs(vals(i));
    }
    // PF eigenvalue: the real eigenvalue at the spectral radius
    double best = -1;
    for (int i = 0; i < vals.size(); ++i) {
        if (std::abs(std::imag(vals(i))) < 1e-9 * std::max(1.0, radius) &&
            std::real(vals(i)) > best) {
            best = std::real(vals(i));
            pf_idx = i;
        }
    }
    out.pf_value = best;
    Eigen::VectorXcd vec = solver.eigenvectors().col(pf_idx);
    Eigen::VectorXd rv = vec.real();
    if (rv.sum() < 0) rv = -rv;
    out.pf_vector = rv / rv.sum();
    double rho2 = 0;
    bool skipped_pf = false;
    std::vector<double> mods;
    for (const auto& ev : out.eigenvalues) mods.push_back(std::abs(ev));
    std::sort(mods.begin(), mods.end(), std::greater<>());
    for (double m : mods) {
        if (!skipped_pf && std::abs(m - out.pf_value) < 1e-9 * std::max(1.0, out.pf_value)) {
            skipped_pf = true;
            continue;
        }
        rho2 = m;
        break;
    }
    out.rho2 = rho2;
    return out;
}

SpectralData pf_analysis(const Eigen::MatrixXd& a) {
    if (!is_primitive(a)) throw std::invalid_argument("pf_analysis: matrix is not primitive");
    SpectralData out = spectral_summary(a);
    if ((out.pf_vector.array() <= 0).any()) {
        throw std::runtime_error("pf_analysis: PF eigenvector not strictly positive");
    }
    return out;
}

StoneValidationReport validate_stone_inflation(const InflationSystem& sys, int samples,
                                               std::uint64_t seed) {
    sys.check();
    StoneValidationReport report;
    const double lam_d = std::pow(sys.scale, sys.dim);
    for (int j = 0; j < sys.colors(); ++j) {
        const Polygon parent = sys.prototiles[j].support.scaled(sys.scale);
        const double parent_area = parent.area();
        std::vector<Polygon> children;
        double child_area = 0;
        for (const auto& pl : sys.rules[j]) {
            children.push_back(sys.prototiles[pl.child].support.transformed(pl.map));
            child_area += children.back().area();
        }

        const double area_resid = std::abs(child_area - lam_d * sys.prototiles[j].support.area()) /
                                  (lam_d * sys.prototiles[j].support.area());
        report.entries.push_back({j, "area", area_resid, area_resid < 1e-8});

        // rejection-sample the parent support; count uncovered and
        // multiply-covered points
        Eigen::VectorXd lo, hi;
        parent.bounding_box(lo, hi);
        const double cover_tol = 1e-9 * parent.diameter();
        const double overlap_tol = -1e-7 * parent.diameter();
        CounterRng rng(seed, static_cast<std::uint64_t>(j));
        int accepted = 0, misses = 0, overlaps = 0;
        while (accepted < samples) {
            Eigen::VectorXd pt(sys.dim);
            for (int k = 0; k < sys.dim; ++k) pt(k) = rng.uniform(lo(k), hi(k));
            if (!parent.contains(pt, -cover_tol)) continue;
            ++accepted;
            int hits = 0, strict_hits = 0;
            for (const auto& c : children) {
                if (c.contains(pt, cover_tol)) ++hits;
                if (c.contains(pt, overlap_tol)) ++strict_hits;
            }
            if (hits == 0) ++misses;
            if (strict_hits > 1) ++overlaps;
        }
        const double overlap_frac = static_cast<double>(overlaps) / samples;
        const double miss_frac = static_cast<double>(misses) / samples;
        report.entries.push_back({j, "overlap", overlap_frac, overlap_frac <= 1e-3});
        report.entries.push_back({j, "coverage", miss_frac, miss_frac <= 1e-3});
    }
    for (const auto& e : report.entries) report.all_passed = report.all_passed && e.passed;
    return report;
}

double volume_eigen_check(const InflationSystem& sys) {
    const Eigen::MatrixXd a = inflation_matrix(sys);
    Eigen::VectorXd w(sys.colors());
    for (int i = 0; i < sys.colors(); ++i) w(i) = sys.prototiles[i].support.area();
    const double lam_d = std::pow(sys.scale, sys.dim);
    return (a.transpose() * w - lam_d * w).cwiseAbs().maxCoeff() / w.cwiseAbs().maxCoeff();
}

std::vector<Eigen::MatrixXd> generate_point_group(const std::vector<Eigen::MatrixXd>& generators,
                                                  int dim, std::size_t cap) {
    std::vector<Eigen::MatrixXd> group;
    group.push_back(Eigen::MatrixXd::Identity(dim, dim));
    std::vector<Eigen::MatrixXd> gens = generators;
    // breadth-first closure in deterministic order
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (const auto& g : gens) {
            Eigen::MatrixXd prod = g * group[i];
            if (group_index(group, prod) < 0) {
                group.push_back(prod);
                if (group.size() > cap) {
                    throw std::invalid_argument("generate_point_group: closure exceeds cap; group not finite?");
                }
            }
        }
    }
    return group;
}

InflationSystem expand_orientations(const InflationSystem& sys) {
    std::vector<Eigen::MatrixXd> group =
        sys.point_group.empty()
            ? std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(sys.dim, sys.dim)}
            : generate_point_group(sys.point_group, sys.dim);
    const int l = sys.colors();
    const int nk = static_cast<int>(group.size());

    InflationSystem out;
    out.name = sys.name + "-full";
    out.dim = sys.dim;
    out.scale = sys.scale;
    out.pure_point_asserted = sys.pure_point_asserted;
    out.prototiles.reserve(static_cast<std::size_t>(nk) * l);
    for (int k = 0; k < nk; ++k) {
        for (int i = 0; i < l; ++i) {
            std::ostringstream label;
            label << sys.prototiles[i].label << "@" << k;
            Isometry rot(group[k], Eigen::VectorXd::Zero(sys.dim));
            out.prototiles.push_back({k * l + i, label.str(),
                                      sys.prototiles[i].support.transformed(rot)});
        }
    }
    out.rules.resize(static_cast<std::size_t>(nk) * l);
    for (int k = 0; k < nk; ++k) {
        for (int i = 0; i < l; ++i) {
            auto& rule = out.rules[static_cast<std::size_t>(k) * l + i];
            for (const auto& pl : sys.rules[i]) {
                const Eigen::MatrixXd child_ortho = group[k] * pl.map.ortho();
                const int kq = group_index(group, child_ortho);
                if (kq < 0) {
                    throw std::invalid_argument("expand_orientations: placement orientation outside point group");
                }
                rule.push_back({Isometry::translation(group[k] * pl.map.trans()), kq * l + pl.child});
            }
        }
    }
    return out;
}

InflationSystem builtin(const std::string& name) {
    if (name == "fibonacci") return make_fibonacci();
    if (name == "penrose") return make_penrose();
    if (name == "ammann-beenker") return make_ammann_beenker();
    if (name == "period-doubling") return make_period_doubling();
    std::ostringstream msg;
    msg << "unknown system '" << name << "'; available:";
    for (const auto& n : builtin_names()) msg << " " << n;
    throw std::invalid_argument(msg.str());
}

std::vector<std::string> builtin_names() {
    return {"fibonacci", "penrose", "ammann-beenker", "period-doubling"};
}

MatrixProfile matrix_only_profile(const std::string& name) {
    MatrixProfile p;
    p.name = name;
    if (name == "shield") {
        p.dim = 2;
        p.scale = 2.0 + std::sqrt(3.0);
        p.rho2 = 1.0;
        return p;
    }
    if (name == "abck") {
        p.dim = 3;
        p.scale = kTau;
        p.eigenvalues = {kTau * kTau * kTau, kTau, -1.0 / kTau,
                         -1.0 / (kTau * kTau * kTau)};
        p.rho2 = kTau;
        return p;
    }
    if (name == "cap") {
        p.dim = 2;
        p.scale = kTau * kTau;
        p.rho2 = 1.0;
        return p;
    }
    std::ostringstream msg;
    msg << "unknown profile '" << name << "'; available:";
    for (const auto& n : profile_names()) msg << " " << n;
    throw std::invalid_argument(msg.str());
}

std::vector<std::string> profile_names() { return {"shield", "abck", "cap"}; }

} // namespace tilescope::inflation
