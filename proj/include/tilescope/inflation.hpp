#pragma once

#include "tilescope/euclid.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace tilescope::inflation {

using euclid::Isometry;
using euclid::Polygon;

struct Prototile {
    int id = 0;
    std::string label;
    Polygon support;
};

/// One child tile of an inflation rule: the isometry placing prototile
/// `child` inside the lambda-scaled parent support.
struct Placement {
    Isometry map;
    int child = 0;
};

struct InflationSystem {
    int dim = 1;
    double scale = 0;                       // lambda > 1
    std::vector<Prototile> prototiles;
    std::vector<std::vector<Placement>> rules;   // rules[j] realizes rho_j
    std::vector<Eigen::MatrixXd> point_group;    // generators of K, may be empty
    bool pure_point_asserted = false;
    std::string name;

    int colors() const { return static_cast<int>(prototiles.size()); }

    /// Checks the structural invariants (lambda > 1, child ids valid,
    /// origin inside each support, point group finite and containing every
    /// placement's orthogonal part). Throws std::invalid_argument on failure.
    void check() const;
};

/// Spectral summary of a primitive nonnegative integer matrix.
struct SpectralData {
    Eigen::MatrixXd matrix;
    std::vector<std::complex<double>> eigenvalues;
    double pf_value = 0;
    Eigen::VectorXd pf_vector;   // positive, entries sum to 1
    double rho2 = 0;             // max |eigenvalue| excluding one copy of pf_value
};

struct StoneCheckEntry {
    int prototile = 0;
    std::string check;    // "area", "overlap", "coverage"
    double magnitude = 0;
    bool passed = false;
};

struct StoneValidationReport {
    std::vector<StoneCheckEntry> entries;
    bool all_passed = true;
};

/// Numeric profile of a catalog system known only at matrix level.
struct MatrixProfile {
    std::string name;
    int dim = 0;
    double scale = 0;
    double rho2 = 0;
    std::vector<std::complex<double>> eigenvalues;  // may be empty
    bool pure_point_asserted = true;
};

/// Entry (i,j) counts placements of child i in rule j.
Eigen::MatrixXd inflation_matrix(const InflationSystem& sys);

/// True iff A^k > 0 entrywise for some k <= (l-1)^2 + 1 (Wielandt bound).
bool is_primitive(const Eigen::MatrixXd& a);

/// Dense eigen-decomposition of a primitive matrix; throws if not primitive.
SpectralData pf_analysis(const Eigen::MatrixXd& a);

/// Like pf_analysis but without the primitivity gate; used for full
/// orientation-expanded matrices whose power positivity is irrelevant here.
SpectralData spectral_summary(const Eigen::MatrixXd& a);

/// Monte-Carlo stone-inflation certification: per prototile j checks
/// (a) child areas sum to lambda^d * area(t_j), (b) pairwise child overlap
/// has measure ~0, (c) samples of lambda*supp(t_j) are covered by children.
StoneValidationReport validate_stone_inflation(const InflationSystem& sys,
                                               int samples = 100000,
                                               std::uint64_t seed = 42);

/// ||A^T w - lambda^d w||_inf / ||w||_inf with w the prototile volumes.
double volume_eigen_check(const InflationSystem& sys);

/// Closure of the generator set under products; throws if it exceeds `cap`.
std::vector<Eigen::MatrixXd> generate_point_group(const std::vector<Eigen::MatrixXd>& generators,
                                                  int dim, std::size_t cap = 10000);

/// Rewrites a system defined over R^d x| K as one over translations only,
/// with |K| * l prototiles (k, t_i) and identity orthogonal parts.
InflationSystem expand_orientations(const InflationSystem& sys);

/// Built-in geometric systems: fibonacci, penrose, ammann-beenker,
/// period-doubling. Throws with the list of names on an unknown name.
InflationSystem builtin(const std::string& name);

std::vector<std::string> builtin_names();

/// Matrix-level catalog profiles: shield, abck, cap.
MatrixProfile matrix_only_profile(const std::string& name);

std::vector<std::string> profile_names();

} // namespace tilescope::inflation
