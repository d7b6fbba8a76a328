#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "optomech/params.hpp"

namespace optomech {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat2 = Eigen::Matrix<double, 2, 2>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

/// Program-wide quadrature ordering of the fluctuation vector.
/// Covariances use vacuum variance 1/2 (quadratures (b + b^dag)/sqrt 2).
enum Quadrature : int { q_b1 = 0, Y_b1, q_b2, Y_b2, q_c1, Y_c1, q_c2, Y_c2 };

/// The four bosonic modes; mode k occupies quadrature indices 2k, 2k+1.
enum class Mode : int { mirror1 = 0, mirror2 = 1, cavity1 = 2, cavity2 = 3 };

struct SystemMatrices {
    Mat8 drift;  // W
    Mat8 noise;  // R, symmetric-ordered diffusion
};

Mat8 build_drift(const DerivedParams& d);
Mat8 build_noise(const DerivedParams& d);
SystemMatrices build_system(const DerivedParams& d);

enum class Stability { stable, marginal, unstable };

struct StabilityReport {
    Stability verdict = Stability::unstable;
    double max_real_part = 0.0;
    double tolerance = 0.0;
    bool is_stable() const { return verdict == Stability::stable; }
};

/// Eigenvalue test of a drift matrix. `rate_scale` sets the marginal band
/// |max Re| <= 1e-9 * rate_scale; when <= 0 it is taken as 2 max|W_ii|
/// (max(gamma, kappa) for this system).
StabilityReport check_stability(const Eigen::Ref<const Eigen::MatrixXd>& drift, double rate_scale = 0.0);

const char* to_string(Stability s);

struct CovarianceState {
    Mat8 full;
    Mat4 mechanical_block;
    double residual = 0.0;    // ||W s + s W^T + R||_F / ||R||_F
    double asymmetry = 0.0;   // ||s - s^T||_F / ||s||_F before symmetrization
};

/// Steady state of W s + s W^T + R = 0.
///
/// The equation is rescaled by the largest damping rate and vectorized into a
/// 64x64 Kronecker system solved by partially pivoted LU. Throws StabilityError
/// for a non-Hurwitz drift, NumericalError when the system is singular, the raw
/// solution is asymmetric beyond 1e-10, or the residual exceeds 1e-10.
CovarianceState solve_lyapunov(const SystemMatrices& m);

/// 4x4 covariance of two distinct modes, rows/cols in quadrature order (a first).
Mat4 extract_block(const Mat8& full, Mode a, Mode b);
Mat4 extract_block(const CovarianceState& state, Mode a, Mode b);

/// Writes a matrix row-per-line, space separated, 17 significant digits.
void dump_matrix(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace optomech
