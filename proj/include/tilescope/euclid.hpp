#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace tilescope::euclid {

/// Element of the Euclidean motion group R^d x| O(d), stored as an
/// orthogonal part and a translation part. Values are immutable after
/// construction; the orthogonal part is validated and re-orthonormalized
/// (nearest orthogonal projection) so long composition chains do not drift.
class Isometry {
public:
    Isometry(Eigen::MatrixXd ortho, Eigen::VectorXd trans);

    static Isometry identity(int dim);
    static Isometry translation(const Eigen::VectorXd& x);
    static Isometry rotation2d(double angle);
    static Isometry reflection2d(double axis_angle);

    int dim() const { return static_cast<int>(trans_.size()); }
    const Eigen::MatrixXd& ortho() const { return ortho_; }
    const Eigen::VectorXd& trans() const { return trans_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& point) const;

private:
    Eigen::MatrixXd ortho_;
    Eigen::VectorXd trans_;
};

/// Group law: result represents g then h applied right-to-left, g*h.
Isometry compose(const Isometry& g, const Isometry& h);

/// lambda * T_x k = T_{lambda x} k; the orthogonal part is untouched.
Isometry dilate(double lambda, const Isometry& g);

/// |T_x k| = |x|.
double norm(const Isometry& g);

Isometry inverse(const Isometry& g);

/// Projects a near-orthogonal matrix to the nearest orthogonal one (SVD).
Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& m);

/// Polygonal tile support. d=1: two endpoints (an interval); d=2: a simple
/// counter-clockwise polygon loop with positive signed area.
class Polygon {
public:
    explicit Polygon(std::vector<Eigen::VectorXd> vertices);

    static Polygon interval(double lo, double hi);

    int dim() const { return static_cast<int>(vertices_.front().size()); }
    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }

    double area() const;
    Eigen::VectorXd centroid() const;
    double diameter() const;

    /// Closed-support membership test with an absolute boundary tolerance.
    bool contains(const Eigen::VectorXd& point, double tol = 1e-9) const;

    /// Distance from an interior point to the boundary (0 if outside).
    double boundary_distance(const Eigen::VectorXd& point) const;

    Polygon transformed(const Isometry& g) const;
    Polygon scaled(double lambda) const;

    void bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const;

private:
    std::vector<Eigen::VectorXd> vertices_;
};

double polygon_area(const Polygon& p);

} // namespace tilescope::euclid
