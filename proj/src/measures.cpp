#include "optomech/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optomech/errors.hpp"
#include "optomech/symplectic.hpp"

namespace optomech {

namespace {

constexpr double kSnap = 1e-12;

// The discriminants below vanish for exchange-symmetric states (degenerate
// symplectic spectrum); in double precision their square root would carry an
// O(sqrt(eps)) error. Invariants are therefore accumulated in quad precision.
#if defined(__SIZEOF_FLOAT128__)
using Quad = __float128;
#else
using Quad = long double;
#endif

Quad quad_sqrt(Quad x) {
    if (x <= 0) return 0;
    Quad y = std::sqrt(static_cast<double>(x));
    for (int i = 0; i < 3; ++i) y = 0.5 * (y + x / y);
    return y;
}

struct QuadInvariants {
    Quad det_x, det_b, det_z, det_full;
};

QuadInvariants quad_invariants(const Mat4& m) {
    Quad a[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = m(i, j);
    auto det2 = [&](int r0, int c0) { return a[r0][c0] * a[r0 + 1][c0 + 1] - a[r0][c0 + 1] * a[r0 + 1][c0]; };
    // 4x4 determinant from 2x2 minors of the top and bottom row pairs
    const Quad s0 = a[0][0] * a[1][1] - a[1][0] * a[0][1];
    const Quad s1 = a[0][0] * a[1][2] - a[1][0] * a[0][2];
    const Quad s2 = a[0][0] * a[1][3] - a[1][0] * a[0][3];
    const Quad s3 = a[0][1] * a[1][2] - a[1][1] * a[0][2];
    const Quad s4 = a[0][1] * a[1][3] - a[1][1] * a[0][3];
    const Quad s5 = a[0][2] * a[1][3] - a[1][2] * a[0][3];
    const Quad c5 = a[2][2] * a[3][3] - a[3][2] * a[2][3];
    const Quad c4 = a[2][1] * a[3][3] - a[3][1] * a[2][3];
    const Quad c3 = a[2][1] * a[3][2] - a[3][1] * a[2][2];
    const Quad c2 = a[2][0] * a[3][3] - a[3][0] * a[2][3];
    const Quad c1 = a[2][0] * a[3][2] - a[3][0] * a[2][2];
    const Quad c0 = a[2][0] * a[3][1] - a[3][0] * a[2][1];
    return {det2(0, 0), det2(2, 2), det2(0, 2), s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0};
}

double snap_nonnegative(double v) { return v < kSnap ? 0.0 : v; }

// Roots sqrt((delta +- sqrt(delta^2 - 4 det)) / 2); the smaller one uses
// 2 det / (delta + root), which is the same quantity without cancellation.
struct RootPair {
    double plus, minus;
};

RootPair symplectic_roots(Quad delta, Quad det, const char* what) {
    const Quad disc = delta * delta - 4 * det;
    const Quad scale = delta * delta > 1 ? delta * delta : Quad(1);
    if (disc < -1e-12 * scale) {
        std::ostringstream os;
        os << what << ": negative discriminant " << static_cast<double>(disc) << " (unphysical covariance)";
        throw PhysicalityError(os.str());
    }
    const Quad root = quad_sqrt(disc > 0 ? disc : Quad(0));
    const Quad sum = delta + root;
    if (!(sum > 0) || !(det > 0)) throw PhysicalityError(std::string(what) + ": non-positive invariants");
    return {static_cast<double>(quad_sqrt(sum / 2)), static_cast<double>(quad_sqrt(2 * det / sum))};
}

double half_clamped(double x, const char* what) {
    if (x < 0.5 - kBoundaryTolerance) {
        std::ostringstream os;
        os << what << " = " << x << " is below the vacuum bound 1/2";
        throw PhysicalityError(os.str());
    }
    return std::max(x, 0.5);
}

}  // namespace

TwoModeCovariance::TwoModeCovariance(const Mat4& cov) : cov_(cov) {
    if (!cov.allFinite()) throw PhysicalityError("covariance has non-finite entries");
    if ((cov - cov.transpose()).norm() > 1e-10 * cov.norm()) throw PhysicalityError("covariance is not symmetric");
    cov_ = 0.5 * (cov + cov.transpose());
    det_x_ = X().determinant();
    det_b_ = B().determinant();
    det_z_ = Z().determinant();
    det_full_ = cov_.determinant();
    if (!(det_full_ > 0.0)) throw PhysicalityError("covariance determinant is not positive");
    const double nu_min = min_symplectic_eigenvalue(cov_);
    if (nu_min < 0.5 - kBoundaryTolerance) {
        std::ostringstream os;
        os << "covariance violates the uncertainty principle (min symplectic eigenvalue " << nu_min << ")";
        throw PhysicalityError(os.str());
    }
}

double entropy_function(double x) {
    if (x < 0.5 - kBoundaryTolerance) {
        std::ostringstream os;
        os << "entropy_function: argument " << x << " below 1/2";
        throw PhysicalityError(os.str());
    }
    const double above = x - 0.5;
    if (above <= 0.0) return 0.0;
    // (above + 1) ln(above + 1) - above ln(above), arranged to avoid cancellation at large x
    return std::log1p(above) + above * std::log1p(1.0 / above);
}

SteeringPair gaussian_steering(const TwoModeCovariance& cov) {
    if (!(cov.det_full() > 0.0)) throw PhysicalityError("gaussian_steering: det sigma <= 0");
    const double denom = 4.0 * cov.det_full();
    SteeringPair s;
    s.a_to_b = snap_nonnegative(std::max(0.0, 0.5 * std::log(cov.det_X() / denom)));
    s.b_to_a = snap_nonnegative(std::max(0.0, 0.5 * std::log(cov.det_B() / denom)));
    return s;
}

LogNegativity log_negativity(const TwoModeCovariance& cov) {
    const QuadInvariants q = quad_invariants(cov.matrix());
    const Quad delta = q.det_x + q.det_b - 2 * q.det_z;
    LogNegativity out;
    out.delta = static_cast<double>(delta);
    out.nu_minus = symplectic_roots(delta, q.det_full, "log_negativity").minus;
    out.value = snap_nonnegative(std::max(0.0, -std::log(2.0 * out.nu_minus)));
    return out;
}

SymplecticPair symplectic_eigenvalues(const TwoModeCovariance& cov) {
    const QuadInvariants q = quad_invariants(cov.matrix());
    const Quad delta = q.det_x + q.det_b + 2 * q.det_z;
    const RootPair roots = symplectic_roots(delta, q.det_full, "symplectic_eigenvalues");
    SymplecticPair out;
    out.delta = static_cast<double>(delta);
    out.plus = roots.plus;
    out.minus = roots.minus;

    const Eigen::VectorXd spectrum = symplectic_spectrum(cov.matrix());
    const double mismatch = std::max(std::abs(spectrum[0] - out.minus), std::abs(spectrum[1] - out.plus));
    if (mismatch > 1e-9 * std::max(1.0, out.plus)) {
        std::ostringstream os;
        os << "symplectic_eigenvalues: closed form disagrees with spectrum of i Omega sigma by " << mismatch;
        throw NumericalError(os.str());
    }
    return out;
}

Discord gaussian_discord(const TwoModeCovariance& cov) {
    if (cov.det_Z() > kSnap * cov.det_X())
        throw UnsupportedBranchError("gaussian_discord: det Z > 0 branch is not implemented");
    if (std::abs(cov.det_X() - cov.det_B()) > 1e-9 * std::max(cov.det_X(), cov.det_B()))
        throw UnsupportedBranchError("gaussian_discord: requires equal local determinants det X = det B");

    const SymplecticPair nu = symplectic_eigenvalues(cov);
    const QuadInvariants q = quad_invariants(cov.matrix());
    const Quad root_x = quad_sqrt(q.det_x);
    const double a = static_cast<double>(root_x);
    Discord out;
    out.delta = static_cast<double>((root_x + 2 * q.det_x + 2 * q.det_z) / (1 + 2 * root_x));
    const double d = entropy_function(half_clamped(a, "sqrt(det X)")) -
                     entropy_function(half_clamped(nu.plus, "theta_plus")) -
                     entropy_function(half_clamped(nu.minus, "theta_minus")) +
                     entropy_function(half_clamped(out.delta, "delta"));
    out.value = std::abs(d) < kSnap ? 0.0 : std::max(0.0, d);
    return out;
}

CorrelationReport correlations(const TwoModeCovariance& cov) {
    CorrelationReport rep;
    const SteeringPair s = gaussian_steering(cov);
    const LogNegativity en = log_negativity(cov);
    const SymplecticPair nu = symplectic_eigenvalues(cov);
    const Discord d = gaussian_discord(cov);
    rep.steering_ab = s.a_to_b;
    rep.steering_ba = s.b_to_a;
    rep.log_negativity = en.value;
    rep.nu_minus = en.nu_minus;
    rep.delta_pt = en.delta;
    rep.theta_plus = nu.plus;
    rep.theta_minus = nu.minus;
    rep.delta_sympl = nu.delta;
    rep.discord = d.value;
    rep.delta_disc = d.delta;
    return rep;
}

}  // namespace optomech
