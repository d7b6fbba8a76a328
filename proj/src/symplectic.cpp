#include "optomech/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

Eigen::VectorXd symplectic_spectrum(const Eigen::Ref<const Eigen::MatrixXd>& cov) {
    const auto dim = cov.rows();
    if (dim != cov.cols() || dim % 2 != 0) throw NumericalError("symplectic_spectrum: need a square even-sized matrix");
    const int n = static_cast<int>(dim / 2);
    // i Omega sigma is similar to the Hermitian matrix sigma^1/2 (i Omega) sigma^1/2,
    // whose eigenvalues come in pairs +-nu.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(cov);
    if (sym.info() != Eigen::Success) throw NumericalError("symplectic_spectrum: eigen solver failed");
    if (sym.eigenvalues().minCoeff() <= 0.0) throw NumericalError("symplectic_spectrum: matrix is not positive definite");
    const Eigen::MatrixXd root = sym.operatorSqrt();
    const Eigen::MatrixXcd herm =
        std::complex<double>(0.0, 1.0) * (root * symplectic_form(n) * root).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("symplectic_spectrum: eigen solver failed");
    std::vector<double> moduli(dim);
    for (Eigen::Index i = 0; i < dim; ++i) moduli[i] = std::abs(es.eigenvalues()[i]);
    std::sort(moduli.begin(), moduli.end());
    Eigen::VectorXd out(n);
    for (int k = 0; k < n; ++k) out[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
    return out;
}

}  // namespace optomech
