#pragma once

#include "tilescope/generation.hpp"

#include <optional>
#include <utility>

namespace tilescope::spectral {

using generation::ShiftMeasureMatrix;
using inflation::InflationSystem;

/// Normalized average of e^{-2 pi i k x_1} over the unit sphere in R^d.
/// d=1 is the two-point sphere (cos(2 pi k)); d>=2 integrates the polar
/// angle by Gauss-Legendre quadrature, absolute error below 1e-10.
double spherical(int d, double k);

/// Entry (i,j) = sum over (w, v) in mu[i][j] of w * sigma(|v| r).
Eigen::MatrixXd shift_transform(const ShiftMeasureMatrix& mu, double r, int d);

/// Everything needed to evaluate the renormalization cocycle of a system.
struct CocycleContext {
    int dim = 1;
    double scale = 0;
    int colors = 0;
    ShiftMeasureMatrix mu;      // inflation displacement matrix
    Eigen::MatrixXd a;          // reduced inflation matrix
    Eigen::VectorXd v_pf;       // PF eigenvector, unit Euclidean norm
    double mu_gap = 0;          // rho2 / lambda^d
    double lipschitz_c = 0;     // |transfer(r) - transfer(0)| <= C r
};

CocycleContext make_cocycle_context(const InflationSystem& sys);

/// One cocycle factor: lambda^{-d} * shift_transform(mu, lambda * r).
Eigen::MatrixXd transfer(const CocycleContext& ctx, double r);

/// Ordered product transfer(lambda^{-n+1} r) * ... * transfer(r).
Eigen::MatrixXd cocycle(const CocycleContext& ctx, double r, int n);

/// |v - proj| / |proj| with proj the component of v along v_pf;
/// +infinity when the parallel part vanishes. Throws on zero v.
double q_ratio(const Eigen::VectorXd& v, const Eigen::VectorXd& v_pf);

/// Contraction rate of the cocycle transverse to v_pf: starting from unit
/// vectors orthogonal to v_pf, apply the factors of cocycle(lambda^{-1} r0,
/// n) one at a time, removing the Perron component after each factor, and
/// fit the least-squares slope of the accumulated log norm against n.
/// Returns the max fitted slope, exponentiated.
double decay_rate_estimate(const CocycleContext& ctx, double r0, int n_max);

enum class Verdict { proved, inconclusive };

struct UniformityReport {
    int dim = 0;
    double scale = 0;
    double rho2 = 0;
    double h_bound = 0; // +infinity when rho2 = 0
    Verdict hyperuniform = Verdict::inconclusive;
    Verdict number_rigid = Verdict::inconclusive;
    std::optional<bool> irreducible;
    std::optional<bool> pisot;
    bool pure_point_asserted = false;
};

/// h_bound = 2d - 2 ln(rho2)/ln(lambda); classification is conditional on
/// the asserted pure-point flag. Throws when lambda <= 1 or rho2 < 0.
UniformityReport uniformity_bound(int d, double lambda, double rho2, bool pure_point);

/// (irreducible over Q, Pisot) for the characteristic polynomial of an
/// integer matrix with PF eigenvalue lambda_pf. Pisot means every other
/// root has modulus < 1 - 1e-9. Rejects matrices larger than 6x6.
std::pair<bool, bool> irreducible_pisot_check(const Eigen::MatrixXd& a, double lambda_pf);

/// Monic characteristic polynomial coefficients (c_0 .. c_{n-1}, leading 1
/// implicit) as exact integers, by the Faddeev-LeVerrier recursion.
std::vector<long long> char_poly_integer(const Eigen::MatrixXd& a);

/// Superprocess transform B^(k)(r): rows indexed by length-k ancestry words
/// (last letter least significant). Satisfies B^(1) = shift_transform(mu, r)
/// and, after summing rows with a common last letter, the ordered product
/// mu^(r) mu^(lambda r) ... mu^(lambda^{k-1} r). Caps l^k at 10^4.
Eigen::MatrixXd superprocess_transform(const CocycleContext& ctx, int k, double r);

} // namespace tilescope::spectral
