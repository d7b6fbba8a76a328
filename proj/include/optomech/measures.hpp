#pragma once

#include "optomech/dynamics.hpp"

namespace optomech {

/// Two-mode Gaussian covariance in block form [[X, Z], [Z^T, B]] with cached
/// determinants. Vacuum variance is 1/2.
class TwoModeCovariance {
public:
    /// Throws PhysicalityError if the matrix is asymmetric, has non-positive
    /// determinant, or a symplectic eigenvalue below 1/2 - 1e-9.
    explicit TwoModeCovariance(const Mat4& cov);

    const Mat4& matrix() const { return cov_; }
    Mat2 X() const { return cov_.topLeftCorner<2, 2>(); }
    Mat2 B() const { return cov_.bottomRightCorner<2, 2>(); }
    Mat2 Z() const { return cov_.topRightCorner<2, 2>(); }

    double det_X() const { return det_x_; }
    double det_B() const { return det_b_; }
    double det_Z() const { return det_z_; }
    double det_full() const { return det_full_; }

private:
    Mat4 cov_;
    double det_x_, det_b_, det_z_, det_full_;
};

/// Nats. Inputs within this distance of a boundary (x = 1/2, nu = 1/2) are snapped to it.
inline constexpr double kBoundaryTolerance = 1e-9;

/// f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), with f(1/2) = 0.
double entropy_function(double x);

struct SteeringPair {
    double a_to_b = 0.0;
    double b_to_a = 0.0;
};

/// max[0, 1/2 ln(det X / (4 det sigma))] and its mirror image with det B.
SteeringPair gaussian_steering(const TwoModeCovariance& cov);

struct LogNegativity {
    double value = 0.0;     // E_N
    double nu_minus = 0.0;  // smallest symplectic eigenvalue of the partial transpose
    double delta = 0.0;     // det X + det B - 2 det Z
};

LogNegativity log_negativity(const TwoModeCovariance& cov);

struct SymplecticPair {
    double plus = 0.0;
    double minus = 0.0;
    double delta = 0.0;  // det X + det B + 2 det Z
};

/// Closed-form symplectic eigenvalues, cross-checked against the spectrum of
/// i Omega sigma; throws NumericalError on disagreement above 1e-9.
SymplecticPair symplectic_eigenvalues(const TwoModeCovariance& cov);

struct Discord {
    double value = 0.0;
    double delta = 0.0;  // optimal-measurement conditional determinant argument
};

/// Gaussian discord for the det Z <= 0 branch with equal local determinants.
/// Throws UnsupportedBranchError for det Z > 1e-12 det X or det X != det B.
Discord gaussian_discord(const TwoModeCovariance& cov);

struct CorrelationReport {
    double steering_ab = 0.0;
    double steering_ba = 0.0;
    double log_negativity = 0.0;
    double discord = 0.0;
    double nu_minus = 0.0;
    double theta_plus = 0.0;
    double theta_minus = 0.0;
    double delta_disc = 0.0;
    double delta_pt = 0.0;
    double delta_sympl = 0.0;
    bool stable = true;
};

CorrelationReport correlations(const TwoModeCovariance& cov);

}  // namespace optomech
