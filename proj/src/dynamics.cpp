#include "optomech/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech {

Mat8 build_drift(const DerivedParams& d) {
    Mat8 w = Mat8::Zero();
    for (int k = 0; k < 4; ++k) {
        w(k, k) = -0.5 * d.gamma;
        w(4 + k, 4 + k) = -0.5 * d.kappa;
        // beam-splitter exchange between mirror j and cavity j
        w(k, 4 + k) = d.G;
        w(4 + k, k) = -d.G;
    }
    // photon hopping: dq_cj/dt ~ -lambda Y_cs, dY_cj/dt ~ +lambda q_cs
    w(q_c1, Y_c2) = -d.lambda;
    w(Y_c1, q_c2) = d.lambda;
    w(q_c2, Y_c1) = -d.lambda;
    w(Y_c2, q_c1) = d.lambda;
    return w;
}

Mat8 build_noise(const DerivedParams& d) {
    Mat8 r = Mat8::Zero();
    for (int k = 0; k < 4; ++k) {
        r(k, k) = d.gamma_prime;
        r(4 + k, 4 + k) = d.kappa_prime;
    }
    const double cross = d.M_sq * d.kappa;
    r(q_c1, q_c2) = r(q_c2, q_c1) = cross;
    r(Y_c1, Y_c2) = r(Y_c2, Y_c1) = -cross;
    return r;
}

SystemMatrices build_system(const DerivedParams& d) { return {build_drift(d), build_noise(d)}; }

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::marginal: return "marginal";
        case Stability::unstable: return "unstable";
    }
    return "?";
}

StabilityReport check_stability(const Eigen::Ref<const Eigen::MatrixXd>& drift, double rate_scale) {
    if (drift.rows() != drift.cols() || drift.rows() == 0)
        throw NumericalError("check_stability: drift must be a non-empty square matrix");
    if (rate_scale <= 0.0) rate_scale = 2.0 * drift.diagonal().cwiseAbs().maxCoeff();

    Eigen::EigenSolver<Eigen::MatrixXd> es(drift, false);
    if (es.info() != Eigen::Success) throw NumericalError("check_stability: eigenvalue computation did not converge");

    StabilityReport rep;
    rep.max_real_part = es.eigenvalues().real().maxCoeff();
    rep.tolerance = 1e-9 * rate_scale;
    if (std::abs(rep.max_real_part) <= rep.tolerance)
        rep.verdict = Stability::marginal;
    else if (rep.max_real_part < 0.0)
        rep.verdict = Stability::stable;
    else
        rep.verdict = Stability::unstable;
    return rep;
}

CovarianceState solve_lyapunov(const SystemMatrices& m) {
    const StabilityReport stab = check_stability(m.drift);
    if (!stab.is_stable()) {
        std::ostringstream os;
        os << "drift matrix is " << to_string(stab.verdict) << " (max Re eigenvalue " << stab.max_real_part
           << " rad/s); no steady state";
        throw StabilityError(os.str());
    }

    // Work in units of the fastest damping rate; sigma is invariant under a common
    // rescaling of W and R.
    const double scale = m.drift.diagonal().cwiseAbs().maxCoeff();
    const Mat8 w = m.drift / scale;
    const Mat8 r = m.noise / scale;

    using Mat64 = Eigen::Matrix<double, 64, 64>;
    const Mat8 eye = Mat8::Identity();
    Mat64 kron;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            kron.block<8, 8>(8 * i, 8 * j) = eye(i, j) * w + w(i, j) * eye;

    Eigen::PartialPivLU<Mat64> lu(kron);
    if (!(lu.rcond() > 1e-14)) throw NumericalError("solve_lyapunov: vectorized Lyapunov system is singular");
    const Eigen::Matrix<double, 64, 1> x = lu.solve(-Eigen::Map<const Eigen::Matrix<double, 64, 1>>(r.data()));
    const Mat8 raw = Eigen::Map<const Mat8>(x.data());

    CovarianceState out;
    out.asymmetry = (raw - raw.transpose()).norm() / raw.norm();
    if (!(out.asymmetry < 1e-10)) {
        std::ostringstream os;
        os << "solve_lyapunov: raw solution asymmetric (" << out.asymmetry << ")";
        throw NumericalError(os.str());
    }
    out.full = 0.5 * (raw + raw.transpose());
    out.residual = (m.drift * out.full + out.full * m.drift.transpose() + m.noise).norm() / m.noise.norm();
    if (!(out.residual < 1e-10)) {
        std::ostringstream os;
        os << "solve_lyapunov: residual " << out.residual << " exceeds 1e-10";
        throw NumericalError(os.str());
    }
    out.mechanical_block = out.full.topLeftCorner<4, 4>();
    return out;
}

Mat4 extract_block(const Mat8& full, Mode a, Mode b) {
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    if (ia < 0 || ia > 3 || ib < 0 || ib > 3 || ia == ib)
        throw ConfigError("extract_block: need two distinct modes");
    const int idx[4] = {2 * ia, 2 * ia + 1, 2 * ib, 2 * ib + 1};
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = full(idx[i], idx[j]);
    return out;
}

Mat4 extract_block(const CovarianceState& state, Mode a, Mode b) { return extract_block(state.full, a, b); }

void dump_matrix(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace optomech
