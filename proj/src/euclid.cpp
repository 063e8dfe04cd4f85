#include "tilescope/euclid.hpp"

#include <cmath>

namespace tilescope::euclid {

namespace {
constexpr double kOrthoTol = 1e-12;
}

Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

Isometry::Isometry(Eigen::MatrixXd ortho, Eigen::VectorXd trans)
    : ortho_(std::move(ortho)), trans_(std::move(trans)) {
    if (ortho_.rows() != ortho_.cols() || ortho_.rows() != trans_.size()) {
        throw std::invalid_argument("Isometry: inconsistent dimensions");
    }
    Eigen::MatrixXd gram = ortho_.transpose() * ortho_;
    gram -= Eigen::MatrixXd::Identity(ortho_.rows(), ortho_.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-6) {
        throw std::invalid_argument("Isometry: orthogonal part is not orthogonal");
    }
    if (gram.cwiseAbs().maxCoeff() > kOrthoTol) {
        ortho_ = nearest_orthogonal(ortho_);
    }
}

Isometry Isometry::identity(int dim) {
    return Isometry(Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim));
}

Isometry Isometry::translation(const Eigen::VectorXd& x) {
    return Isometry(Eigen::MatrixXd::Identity(x.size(), x.size()), x);
}

Isometry Isometry::rotation2d(double angle) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return Isometry(r, Eigen::Vector2d::Zero());
}

Isometry Isometry::reflection2d(double axis_angle) {
    Eigen::Matrix2d r;
    r << std::cos(2 * axis_angle), std::sin(2 * axis_angle),
         std::sin(2 * axis_angle), -std::cos(2 * axis_angle);
    return Isometry(r, Eigen::Vector2d::Zero());
}

Eigen::VectorXd Isometry::apply(const Eigen::VectorXd& point) const {
    return ortho_ * point + trans_;
}

Isometry compose(const Isometry& g, const Isometry& h) {
    if (g.dim() != h.dim()) {
        throw std::invalid_argument("compose: dimension mismatch");
    }
    return Isometry(g.ortho() * h.ortho(), g.trans() + g.ortho() * h.trans());
}

Isometry dilate(double lambda, const Isometry& g) {
    if (lambda <= 0) {
        throw std::invalid_argument("dilate: lambda must be positive");
    }
    return Isometry(g.ortho(), lambda * g.trans());
}

double norm(const Isometry& g) { return g.trans().norm(); }

Isometry inverse(const Isometry& g) {
    Eigen::MatrixXd ot = g.ortho().transpose();
    return Isometry(ot, -(ot * g.trans()));
}

Polygon::Polygon(std::vector<Eigen::VectorXd> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) {
        throw std::invalid_argument("Polygon: no vertices");
    }
    const int d = static_cast<int>(vertices_.front().size());
    for (const auto& v : vertices_) {
        if (v.size() != d) throw std::invalid_argument("Polygon: mixed dimensions");
    }
    if (d == 1) {
        if (vertices_.size() != 2 || vertices_[1](0) <= vertices_[0](0)) {
            throw std::invalid_argument("Polygon: 1d support needs two increasing endpoints");
        }
    } else if (d == 2) {
        if (vertices_.size() < 3) {
            throw std::invalid_argument("Polygon: 2d support needs at least 3 vertices");
        }
        if (area() <= 0) {
            throw std::invalid_argument("Polygon: vertices must wind counter-clockwise with positive area");
        }
    } else {
        throw std::invalid_argument("Polygon: only d=1,2 supports are implemented");
    }
}

Polygon Polygon::interval(double lo, double hi) {
    Eigen::VectorXd a(1), b(1);
    a << lo;
    b << hi;
    return Polygon({a, b});
}

double Polygon::area() const {
    if (dim() == 1) return vertices_[1](0) - vertices_[0](0);
    double s = 0;
    const auto n = vertices_.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = vertices_[i];
        const auto& b = vertices_[(i + 1) % n];
        s += a(0) * b(1) - b(0) * a(1);
    }
    return 0.5 * s;
}

Eigen::VectorXd Polygon::centroid() const {
    if (dim() == 1) {
        Eigen::VectorXd c(1);
        c << 0.5 * (vertices_[0](0) + vertices_[1](0));
        return c;
    }
    // area-weighted polygon centroid
    double a6 = 0;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    const auto n = vertices_.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = vertices_[i];
        const auto& q = vertices_[(i + 1) % n];
        const double cr = p(0) * q(1) - q(0) * p(1);
        a6 += cr;
        c += cr * (Eigen::Vector2d(p) + Eigen::Vector2d(q));
    }
    return Eigen::VectorXd(c / (3.0 * a6));
}

double Polygon::diameter() const {
    double best = 0;
    for (size_t i = 0; i < vertices_.size(); ++i) {
        for (size_t j = i + 1; j < vertices_.size(); ++j) {
            best = std::max(best, (vertices_[i] - vertices_[j]).norm());
        }
    }
    return best;
}

bool Polygon::contains(const Eigen::VectorXd& point, double tol) const {
    if (dim() == 1) {
        return point(0) >= vertices_[0](0) - tol && point(0) <= vertices_[1](0) + tol;
    }
    // convex/simple CCW polygon: inside iff on the left of every edge,
    // up to tol (supports here are convex; tolerance handles boundaries).
    const auto n = vertices_.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = vertices_[i];
        const auto& b = vertices_[(i + 1) % n];
        const Eigen::Vector2d e = b - a;
        const double cr = e(0) * (point(1) - a(1)) - e(1) * (point(0) - a(0));
        if (cr < -tol * std::max(1.0, e.norm())) return false;
    }
    return true;
}

double Polygon::boundary_distance(const Eigen::VectorXd& point) const {
    if (dim() == 1) {
        const double d = std::min(point(0) - vertices_[0](0), vertices_[1](0) - point(0));
        return std::max(0.0, d);
    }
    if (!contains(point, 0)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const auto n = vertices_.size();
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d a = vertices_[i];
        const Eigen::Vector2d b = vertices_[(i + 1) % n];
        const Eigen::Vector2d e = b - a;
        const double t = std::clamp((Eigen::Vector2d(point) - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (Eigen::Vector2d(point) - (a + t * e)).norm());
    }
    return best;
}

Polygon Polygon::transformed(const Isometry& g) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) out.push_back(g.apply(v));
    if (dim() == 1 && out[1](0) < out[0](0)) std::swap(out[0], out[1]);
    if (dim() == 2 && g.ortho().determinant() < 0) {
        std::reverse(out.begin(), out.end()); // keep CCW winding
    }
    return Polygon(std::move(out));
}

Polygon Polygon::scaled(double lambda) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) out.push_back(lambda * v);
    return Polygon(std::move(out));
}

void Polygon::bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
    lo = vertices_.front();
    hi = vertices_.front();
    for (const auto& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

double polygon_area(const Polygon& p) {
    const double a = p.area();
    if (a <= 0) throw std::invalid_argument("polygon_area: degenerate polygon");
    return a;
}

} // namespace tilescope::euclid
