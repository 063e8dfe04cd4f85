#include "tilescope/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tilescope::spectral {

namespace {

struct Quadrature {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// recurrence; order 200 resolves the integrands used here (k up to ~50)
// to well below 1e-12.
Quadrature gauss_legendre(int n) {
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = x;
        q.weights[i] = 2.0 / ((1 - x * x) * dp * dp);
    }
    return q;
}

const Quadrature& quad200() {
    static const Quadrature q = gauss_legendre(200);
    return q;
}

} // namespace

double spherical(int d, double k) {
    if (k < 0) throw std::invalid_argument("spherical: negative argument");
    if (d < 1) throw std::invalid_argument("spherical: dimension must be positive");
    const double two_pi_k = 2 * std::numbers::pi * k;
    if (d == 1) return std::cos(two_pi_k);
    // average of cos(2 pi k cos(theta)) with weight sin^{d-2}(theta) on [0, pi]
    const auto& q = quad200();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double theta = std::numbers::pi * (q.nodes[i] + 1) / 2;
        const double w = q.weights[i] * std::pow(std::sin(theta), d - 2);
        num += w * std::cos(two_pi_k * std::cos(theta));
        den += w;
    }
    return num / den;
}

Eigen::MatrixXd shift_transform(const ShiftMeasureMatrix& mu, double r, int d) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mu.rows, mu.cols);
    for (int i = 0; i < mu.rows; ++i) {
        for (int j = 0; j < mu.cols; ++j) {
            for (const auto& e : mu.cells[i][j]) {
                out(i, j) += e.weight * spherical(d, euclid::norm(e.shift) * r);
            }
        }
    }
    return out;
}

CocycleContext make_cocycle_context(const InflationSystem& sys) {
    CocycleContext ctx;
    ctx.dim = sys.dim;
    ctx.scale = sys.scale;
    ctx.colors = sys.colors();
    ctx.mu = generation::displacement_matrix(sys);
    ctx.a = inflation::inflation_matrix(sys);
    const auto spec = inflation::pf_analysis(ctx.a);
    ctx.v_pf = spec.pf_vector / spec.pf_vector.norm();
    ctx.mu_gap = spec.rho2 / std::pow(sys.scale, sys.dim);
    // numeric Lipschitz bound: max finite-difference slope of the transfer
    // matrix on a 100-point grid in (0, 0.5], with a 1.5x safety factor
    double max_slope = 0;
    Eigen::MatrixXd prev = transfer(ctx, 0.0);
    double prev_r = 0;
    for (int i = 1; i <= 100; ++i) {
        const double r = 0.5 * i / 100;
        const Eigen::MatrixXd cur = transfer(ctx, r);
        max_slope = std::max(max_slope, (cur - prev).norm() / (r - prev_r));
        prev = cur;
        prev_r = r;
    }
    ctx.lipschitz_c = 1.5 * max_slope;
    return ctx;
}

Eigen::MatrixXd transfer(const CocycleContext& ctx, double r) {
    return shift_transform(ctx.mu, ctx.scale * r, ctx.dim) / std::pow(ctx.scale, ctx.dim);
}

Eigen::MatrixXd cocycle(const CocycleContext& ctx, double r, int n) {
    if (n < 1) throw std::invalid_argument("cocycle: n must be positive");
    if (r <= 0) throw std::invalid_argument("cocycle: r must be positive");
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(ctx.colors, ctx.colors);
    for (int e = n - 1; e >= 0; --e) {
        prod = prod * transfer(ctx, r * std::pow(ctx.scale, -e));
    }
    return prod;
}

double q_ratio(const Eigen::VectorXd& v, const Eigen::VectorXd& v_pf) {
    if (v.norm() == 0) throw std::invalid_argument("q_ratio: zero vector");
    if (std::abs(v_pf.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("q_ratio: v_pf must be a unit vector");
    }
    const Eigen::VectorXd parallel = v_pf * v_pf.dot(v);
    const double par_norm = parallel.norm();
    if (par_norm == 0) return std::numeric_limits<double>::infinity();
    return (v - parallel).norm() / par_norm;
}

double decay_rate_estimate(const CocycleContext& ctx, double r0, int n_max) {
    if (!(r0 > 0 && r0 <= 0.1)) throw std::invalid_argument("decay_rate_estimate: need 0 < r0 <= 0.1");
    if (n_max < 10) throw std::invalid_argument("decay_rate_estimate: n_max must be at least 10");
    const int l = ctx.colors;
    // orthonormal completion of v_pf via a Householder reflector mapping e1
    Eigen::VectorXd u = ctx.v_pf;
    u(0) += (u(0) >= 0 ? 1.0 : -1.0);
    const Eigen::MatrixXd house =
        Eigen::MatrixXd::Identity(l, l) - 2.0 * (u * u.transpose()) / u.squaredNorm();
    const double r = r0 / ctx.scale;
    double max_slope = -std::numeric_limits<double>::infinity();
    // Track the component transverse to v_pf. Each factor leaks a small
    // Perron component (eigenvalue approx 1) into the iterate; left in place
    // it would dominate the norm after a few steps and hide the contraction,
    // so it is removed after every factor and the per-step gains are
    // accumulated in log space to avoid underflow.
    for (int col = 1; col < l; ++col) {
        Eigen::VectorXd w = house.col(col);
        double log_norm = 0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int n = 1; n <= n_max; ++n) {
            Eigen::VectorXd next = transfer(ctx, r * std::pow(ctx.scale, -(n - 1))) * w;
            next -= ctx.v_pf * ctx.v_pf.dot(next);
            const double gain = next.norm(); // w enters with unit norm
            if (!std::isfinite(gain) || gain <= 0) {
                throw std::runtime_error("decay_rate_estimate: non-finite cocycle norm");
            }
            log_norm += std::log(gain);
            w = next / gain;
            sx += n;
            sy += log_norm;
            sxx += static_cast<double>(n) * n;
            sxy += n * log_norm;
        }
        const double slope = (n_max * sxy - sx * sy) / (n_max * sxx - sx * sx);
        max_slope = std::max(max_slope, slope);
    }
    return std::exp(max_slope);
}

UniformityReport uniformity_bound(int d, double lambda, double rho2, bool pure_point) {
    if (lambda <= 1) throw std::invalid_argument("uniformity_bound: lambda must exceed 1");
    if (rho2 < 0) throw std::invalid_argument("uniformity_bound: rho2 must be nonnegative");
    UniformityReport rep;
    rep.dim = d;
    rep.scale = lambda;
    rep.rho2 = rho2;
    rep.pure_point_asserted = pure_point;
    rep.h_bound = rho2 == 0 ? std::numeric_limits<double>::infinity()
                            : 2.0 * d - 2.0 * std::log(rho2) / std::log(lambda);
    rep.hyperuniform =
        (pure_point && rep.h_bound > d) ? Verdict::proved : Verdict::inconclusive;
    rep.number_rigid =
        (pure_point && rep.h_bound > 2 * d) ? Verdict::proved : Verdict::inconclusive;
    return rep;
}

std::vector<long long> char_poly_integer(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    // Faddeev-LeVerrier: exact for integer matrices of moderate size
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> coef(n + 1, 0.0);
    coef[n] = 1.0;
    for (int k = 1; k <= n; ++k) {
        mk = a * mk + coef[n - k + 1] * Eigen::MatrixXd::Identity(n, n);
        coef[n - k] = -(a * mk).trace() / k;
    }
    std::vector<long long> out(n);
    for (int i = 0; i < n; ++i) {
        const double v = coef[i];
        const long long r = std::llround(v);
        if (std::abs(v - r) > 1e-6) {
            throw std::runtime_error("char_poly_integer: non-integer coefficient");
        }
        out[i] = r;
    }
    return out;
}

namespace {

// divides monic p (low-order first, implicit leading 1) by monic q;
// returns true iff the remainder is zero
bool monic_divides(const std::vector<long long>& p, const std::vector<long long>& q) {
    const int n = static_cast<int>(p.size());
    const int m = static_cast<int>(q.size());
    std::vector<long long> rem(p);
    rem.push_back(1); // leading coefficient
    for (int deg = n; deg >= m; --deg) {
        const long long factor = rem[deg];
        if (factor == 0) continue;
        rem[deg] = 0;
        for (int i = 0; i < m; ++i) rem[deg - m + i] -= factor * q[i];
    }
    return std::all_of(rem.begin(), rem.end(), [](long long v) { return v == 0; });
}

bool has_monic_factor_of_degree(const std::vector<long long>& p, int deg, long long bound) {
    // candidate factor coefficients bounded via the root bound: every root of
    // a factor is a root of p, of modulus <= bound, so |coef_i| <= C(deg,i) bound^i
    std::vector<long long> limits(deg);
    for (int i = 0; i < deg; ++i) {
        double binom = 1;
        for (int t = 0; t < deg - i; ++t) binom = binom * (deg - t) / (t + 1);
        limits[i] = static_cast<long long>(std::ceil(binom * std::pow(static_cast<double>(bound),
                                                                      deg - i))) +
                    1;
    }
    std::vector<long long> cand(deg, 0);
    // odometer over the coefficient box
    for (int i = 0; i < deg; ++i) cand[i] = -limits[i];
    while (true) {
        if (cand[0] != 0 || p[0] == 0) { // constant term must divide p's constant term
            if (p[0] == 0 || (cand[0] != 0 && p[0] % cand[0] == 0)) {
                if (monic_divides(p, cand)) return true;
            }
        }
        int pos = 0;
        while (pos < deg && cand[pos] == limits[pos]) {
            cand[pos] = -limits[pos];
            ++pos;
        }
        if (pos == deg) break;
        ++cand[pos];
    }
    return false;
}

} // namespace

std::pair<bool, bool> irreducible_pisot_check(const Eigen::MatrixXd& a, double lambda_pf) {
    const int n = static_cast<int>(a.rows());
    if (n > 6) throw std::invalid_argument("irreducible_pisot_check: matrices larger than 6x6 unsupported");
    const std::vector<long long> p = char_poly_integer(a);

    long long max_abs = 1;
    for (long long c : p) max_abs = std::max(max_abs, std::llabs(c));
    const long long root_bound = 1 + max_abs;

    bool irreducible = true;
    if (p[0] == 0) {
        irreducible = false; // x is a factor
    } else {
        for (int deg = 1; irreducible && deg <= n / 2; ++deg) {
            if (has_monic_factor_of_degree(p, deg, root_bound)) irreducible = false;
        }
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    bool pisot = lambda_pf > 1;
    bool skipped_pf = false;
    std::vector<double> mods;
    for (int i = 0; i < n; ++i) mods.push_back(std::abs(solver.eigenvalues()(i)));
    std::sort(mods.begin(), mods.end(), std::greater<>());
    for (double m : mods) {
        if (!skipped_pf && std::abs(m - lambda_pf) < 1e-9 * std::max(1.0, lambda_pf)) {
            skipped_pf = true;
            continue;
        }
        if (m >= 1.0 - 1e-9) pisot = false;
    }
    return {irreducible, pisot};
}

Eigen::MatrixXd superprocess_transform(const CocycleContext& ctx, int k, double r) {
    if (k < 1) throw std::invalid_argument("superprocess_transform: k must be positive");
    const int l = ctx.colors;
    double rows = std::pow(static_cast<double>(l), k);
    if (rows > 1e4) throw std::length_error("superprocess_transform: l^k exceeds 1e4");
    if (k == 1) return shift_transform(ctx.mu, r, ctx.dim);
    const Eigen::MatrixXd prev = superprocess_transform(ctx, k - 1, ctx.scale * r);
    const Eigen::MatrixXd mu_hat = shift_transform(ctx.mu, r, ctx.dim);
    Eigen::MatrixXd out(static_cast<int>(rows), l);
    for (int i = 0; i < prev.rows(); ++i) {
        const int last = i % l;
        for (int j = 0; j < l; ++j) {
            out.row(i * l + j) = mu_hat(j, last) * prev.row(i);
        }
    }
    return out;
}

} // namespace tilescope::spectral
