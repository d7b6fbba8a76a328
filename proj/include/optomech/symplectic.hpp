#pragma once

#include <Eigen/Dense>

namespace optomech {

/// Block-diagonal symplectic form with [[0, 1], [-1, 0]] on the diagonal (size 2n).
Eigen::MatrixXd symplectic_form(int n_modes);

/// Symplectic eigenvalues of a 2n x 2n covariance, ascending: the moduli of the
/// eigenvalues of i Omega sigma, each pair collapsed to one value.
Eigen::VectorXd symplectic_spectrum(const Eigen::Ref<const Eigen::MatrixXd>& cov);

inline double min_symplectic_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& cov) {
    return symplectic_spectrum(cov).minCoeff();
}

}  // namespace optomech
