#include "optomech/montecarlo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {

SdeConfig default_sde_config(const DerivedParams& d) {
    SdeConfig cfg;
    cfg.kappa = d.kappa;
    const double gamma_units = d.gamma / d.kappa;
    cfg.dt = 0.005;
    cfg.burn_in = 20.0 / gamma_units;
    cfg.sample_duration = 200.0 / gamma_units;
    cfg.n_trajectories = 16;
    cfg.n_batches = 8;
    return cfg;
}

void check_sde_config(const SdeConfig& cfg, const SystemMatrices& m) {
    auto fail = [](const std::string& msg) { throw ConfigError("SdeConfig: " + msg); };
    if (!(cfg.kappa > 0.0)) fail("kappa must be > 0");
    if (!(cfg.dt > 0.0)) fail("dt must be > 0");
    if (cfg.n_trajectories < 1) fail("n_trajectories must be >= 1");
    if (cfg.n_batches < 1) fail("n_batches must be >= 1");
    if (!(cfg.sample_duration >= cfg.dt * cfg.n_batches)) fail("sample_duration shorter than one step per batch");

    // rates in units of kappa: damping from the diagonal, coupling/hopping off the diagonal
    const Mat8 w = m.drift / cfg.kappa;
    const double fastest = std::max(w.diagonal().cwiseAbs().maxCoeff() * 2.0,
                                    (w - Mat8(w.diagonal().asDiagonal())).cwiseAbs().maxCoeff());
    const double slowest_damping = 2.0 * w.diagonal().cwiseAbs().minCoeff();
    if (cfg.dt > 0.01 / fastest * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt = " << cfg.dt << " exceeds 0.01 / fastest rate (" << 0.01 / fastest << ")";
        fail(os.str());
    }
    if (cfg.burn_in < 10.0 / slowest_damping * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "burn_in = " << cfg.burn_in << " shorter than 10 / slowest damping (" << 10.0 / slowest_damping << ")";
        fail(os.str());
    }
}

NoiseFactor::NoiseFactor(const Mat8& noise) {
    if ((noise - noise.transpose()).norm() > 1e-12 * noise.norm())
        throw NumericalError("NoiseFactor: noise matrix is not symmetric");
    Eigen::LDLT<Mat8> ldlt(noise);
    if (ldlt.info() != Eigen::Success) throw NumericalError("NoiseFactor: LDLT factorization failed");
    Eigen::Matrix<double, 8, 1> diag = ldlt.vectorD();
    const double tol = 1e-12 * std::max(1.0, noise.diagonal().cwiseAbs().maxCoeff());
    for (int i = 0; i < 8; ++i) {
        if (diag[i] < -tol) throw NumericalError("NoiseFactor: noise matrix is not positive semidefinite");
        diag[i] = std::max(diag[i], 0.0);
    }
    const Mat8 lower = ldlt.matrixL();
    const Mat8 scaled = lower * diag.cwiseSqrt().asDiagonal();
    factor_ = ldlt.transpositionsP().transpose() * scaled;
    if ((factor_ * factor_.transpose() - noise).norm() > 1e-10 * std::max(1.0, noise.norm()))
        throw NumericalError("NoiseFactor: factor does not reproduce the noise matrix");
}

Vec8 NoiseFactor::sample(double dt, Rng& rng) const {
    if (dt <= 0.0) return Vec8::Zero();
    std::normal_distribution<double> normal;
    Vec8 z;
    for (int i = 0; i < 8; ++i) z[i] = normal(rng);
    return std::sqrt(dt) * (factor_ * z);
}

Vec8 sample_noise_increment(const Mat8& noise, double dt, Rng& rng) { return NoiseFactor(noise).sample(dt, rng); }

namespace {

struct TrajectoryResult {
    std::vector<Mat8> batch_means;
};

TrajectoryResult run_trajectory(const Mat8& w, const NoiseFactor& noise, const SdeConfig& cfg, int index,
                                double divergence_sq) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    Rng rng(seq);
    std::normal_distribution<double> normal;

    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const Mat8 step = Mat8::Identity() + dt * w;
    const Mat8 kick = sqrt_dt * noise.factor();
    const long long burn_steps = static_cast<long long>(std::ceil(cfg.burn_in / dt));
    const long long batch_steps =
        std::max<long long>(1, static_cast<long long>(std::llround(cfg.sample_duration / dt)) / cfg.n_batches);

    Vec8 u = Vec8::Zero();
    Vec8 z;
    auto advance = [&]() {
        for (int i = 0; i < 8; ++i) z[i] = normal(rng);
        u = step * u + kick * z;
    };
    auto check = [&](long long k) {
        if ((k & 1023) == 0 && !(u.squaredNorm() < divergence_sq)) {
            std::ostringstream os;
            os << "integrate_steady_covariance: trajectory " << index << " diverged (|u|^2 = " << u.squaredNorm()
               << ")";
            throw NumericalError(os.str());
        }
    };

    for (long long k = 0; k < burn_steps; ++k) {
        advance();
        check(k);
    }
    TrajectoryResult res;
    res.batch_means.reserve(cfg.n_batches);
    for (int b = 0; b < cfg.n_batches; ++b) {
        Mat8 acc = Mat8::Zero();
        for (long long k = 0; k < batch_steps; ++k) {
            advance();
            check(k);
            acc.selfadjointView<Eigen::Upper>().rankUpdate(u);
        }
        Mat8 sym = acc.triangularView<Eigen::Upper>();
        sym.triangularView<Eigen::StrictlyLower>() = acc.transpose().triangularView<Eigen::StrictlyLower>();
        res.batch_means.push_back(sym / static_cast<double>(batch_steps));
    }
    return res;
}

}  // namespace

McEstimate integrate_steady_covariance(const SystemMatrices& m, const SdeConfig& cfg) {
    const StabilityReport stab = check_stability(m.drift);
    if (!stab.is_stable()) {
        std::ostringstream os;
        os << "integrate_steady_covariance: drift is " << to_string(stab.verdict) << " (max Re "
           << stab.max_real_part << ")";
        throw StabilityError(os.str());
    }
    check_sde_config(cfg, m);

    const Mat8 w = m.drift / cfg.kappa;
    const Mat8 r = m.noise / cfg.kappa;
    const NoiseFactor noise(r);
    // variance scale of the slowest relaxing direction
    const double expected_sq = r.trace() / (2.0 * std::abs(stab.max_real_part / cfg.kappa));
    const double divergence_sq = 1e12 * expected_sq;

    std::vector<TrajectoryResult> results(cfg.n_trajectories);
    std::vector<std::exception_ptr> errors(cfg.n_trajectories);
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(cfg.n_trajectories)));
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < n_workers; ++t) {
            workers.emplace_back([&, t]() {
                for (int i = static_cast<int>(t); i < cfg.n_trajectories; i += static_cast<int>(n_workers)) {
                    try {
                        results[i] = run_trajectory(w, noise, cfg, i, divergence_sq);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    McEstimate est;
    Mat8 sum = Mat8::Zero();
    Mat8 sum_sq = Mat8::Zero();
    for (const auto& tr : results)
        for (const Mat8& b : tr.batch_means) {
            sum += b;
            sum_sq += b.cwiseProduct(b);
            ++est.n_batches;
        }
    const double nb = est.n_batches;
    est.cov_estimate = sum / nb;
    if (est.n_batches > 1) {
        const Mat8 var = ((sum_sq - nb * est.cov_estimate.cwiseProduct(est.cov_estimate)) / (nb - 1.0)).cwiseMax(0.0);
        est.std_error = (var / nb).cwiseSqrt();
    } else {
        est.std_error.setConstant(std::numeric_limits<double>::infinity());
    }
    const long long batch_steps =
        std::max<long long>(1, static_cast<long long>(std::llround(cfg.sample_duration / cfg.dt)) / cfg.n_batches);
    est.n_samples = batch_steps * est.n_batches;
    return est;
}

McComparison compare_to_lyapunov(const McEstimate& mc, const Mat8& exact) {
    McComparison cmp;
    for (int i = 0; i < 8; ++i)
        for (int j = i; j < 8; ++j) {
            const double diff = mc.cov_estimate(i, j) - exact(i, j);
            const double se = mc.std_error(i, j);
            double z = 0.0;
            if (se > 0.0)
                z = diff / se;
            else if (diff != 0.0)
                z = std::numeric_limits<double>::infinity();
            const double scale = std::sqrt(std::abs(exact(i, i) * exact(j, j)));
            const double ref = std::abs(exact(i, j)) >= 1e-6 * scale ? std::abs(exact(i, j)) : scale;
            const double rel = ref > 0.0 ? std::abs(diff) / ref : std::abs(diff);
            cmp.z_score(i, j) = cmp.z_score(j, i) = z;
            cmp.rel_dev(i, j) = cmp.rel_dev(j, i) = rel;
            const double az = std::abs(z);
            cmp.max_abs_z = std::max(cmp.max_abs_z, az);
            if (az > 3.0) ++cmp.over_3;
            if (az > 4.0) ++cmp.over_4;
        }
    cmp.pass = cmp.over_4 == 0 && cmp.over_3 <= 2;
    return cmp;
}

bool mechanical_block_agrees(const McComparison& cmp, double z_limit, double rel_limit) {
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            if (!(std::abs(cmp.z_score(i, j)) <= z_limit) || !(cmp.rel_dev(i, j) <= rel_limit)) return false;
    return true;
}

void write_mc_report(const McEstimate& mc, const Mat8& exact, const McComparison& cmp, const SdeConfig& cfg,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << std::setprecision(17);
    out << "# rng=" << mc.rng << " seed=" << cfg.seed << " dt_over_kappa=" << cfg.dt << " burn_in=" << cfg.burn_in
        << " sample_duration=" << cfg.sample_duration << " trajectories=" << cfg.n_trajectories
        << " batches=" << mc.n_batches << " samples=" << mc.n_samples << '\n';
    out << "# pass=" << (cmp.pass ? 1 : 0) << " over_3=" << cmp.over_3 << " over_4=" << cmp.over_4
        << " mechanical_block_ok=" << (mechanical_block_agrees(cmp) ? 1 : 0) << '\n';
    out << "i,j,mc,std_error,lyapunov,z,rel_dev\n";
    for (int i = 0; i < 8; ++i)
        for (int j = i; j < 8; ++j)
            out << i << ',' << j << ',' << mc.cov_estimate(i, j) << ',' << mc.std_error(i, j) << ',' << exact(i, j)
                << ',' << cmp.z_score(i, j) << ',' << cmp.rel_dev(i, j) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace optomech
