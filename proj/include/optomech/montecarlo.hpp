#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "optomech/dynamics.hpp"

namespace optomech {

/// Euler-Maruyama settings. Times are in units of 1/kappa.
///
/// The linear SDE du = W u dt + dB with Cov(dB) = R dt reproduces the
/// symmetric-ordered quantum moments of the linearized Langevin equations,
/// because the dynamics is linear and R is the symmetrized noise correlation.
/// Simulation happens in the frame rotating at the mechanical frequency, where
/// R is time independent.
struct SdeConfig {
    double kappa = 1.0;            ///< rad/s, defines the time unit
    double dt = 0.005;
    double burn_in = 2000.0;
    double sample_duration = 20000.0;
    int n_trajectories = 16;
    int n_batches = 8;             ///< batches per trajectory for the standard error
    std::uint64_t seed = 20200101;
};

/// dt = 0.005/kappa, burn_in = 20/gamma, sample_duration = 200/gamma, 16 trajectories.
SdeConfig default_sde_config(const DerivedParams& d);

/// Throws ConfigError when dt exceeds 0.01 over the fastest rate, burn-in is
/// shorter than 10 over the slowest damping rate, or counts are non-positive.
void check_sde_config(const SdeConfig& cfg, const SystemMatrices& m);

using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64+std::normal_distribution";

/// Factor F with F F^T = R via pivoted LDL^T; tolerates positive semidefinite R.
class NoiseFactor {
public:
    explicit NoiseFactor(const Mat8& noise);
    const Mat8& factor() const { return factor_; }
    /// sqrt(dt) F z with z standard normal; covariance R dt.
    Vec8 sample(double dt, Rng& rng) const;

private:
    Mat8 factor_;
};

Vec8 sample_noise_increment(const Mat8& noise, double dt, Rng& rng);

struct McEstimate {
    Mat8 cov_estimate = Mat8::Zero();
    Mat8 std_error = Mat8::Zero();
    long long n_samples = 0;
    int n_batches = 0;
    std::string rng = kRngName;
};

/// Ensemble/time average of u u^T after burn-in. Deterministic for a fixed seed
/// regardless of thread count. Throws StabilityError for an unstable drift and
/// NumericalError if a trajectory diverges.
McEstimate integrate_steady_covariance(const SystemMatrices& m, const SdeConfig& cfg);

struct McComparison {
    Mat8 z_score = Mat8::Zero();
    Mat8 rel_dev = Mat8::Zero();
    int unique_entries = 36;
    int over_3 = 0;
    int over_4 = 0;
    double max_abs_z = 0.0;
    bool pass = false;  ///< no |z| > 4 and at most 2 entries with |z| > 3
};

/// Relative deviation per entry; entries whose exact value is below 1e-6 of the
/// geometric mean of the two variances are normalized by that geometric mean.
McComparison compare_to_lyapunov(const McEstimate& mc, const Mat8& exact);

/// Mechanical 4x4 block check used by the acceptance suite: every entry within
/// `z_limit` standard errors and `rel_limit` relative deviation.
bool mechanical_block_agrees(const McComparison& cmp, double z_limit = 4.0, double rel_limit = 0.02);

void write_mc_report(const McEstimate& mc, const Mat8& exact, const McComparison& cmp, const SdeConfig& cfg,
                     const std::filesystem::path& path);

}  // namespace optomech
