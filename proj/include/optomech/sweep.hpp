#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/measures.hpp"
#include "optomech/params.hpp"

namespace optomech {

enum class SweepVariable { r, xi, T, gamma_over_kappa };

const char* to_string(SweepVariable v);
/// Accepts "r", "xi", "T" and "gamma_over_kappa"; throws ConfigError otherwise.
SweepVariable parse_sweep_variable(const std::string& name);

/// Sets one sweepable quantity. xi and gamma_over_kappa are taken relative to kappa;
/// with a cooperativity drive C stays fixed as gamma changes.
void set_variable(PhysicalParams& p, SweepVariable v, double value);
double get_variable(const PhysicalParams& p, SweepVariable v);

struct CurveSpec {
    SweepVariable variable = SweepVariable::xi;
    std::vector<double> values;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::r;
    double start = 0.0;
    double stop = 1.0;
    int points = 2;
    PhysicalParams held;
    std::optional<CurveSpec> curves;
    std::string name;  ///< preset name, empty for ad-hoc sweeps

    std::vector<double> grid() const;
    /// Throws ConfigError for start >= stop, fewer than 2 points, empty curve list.
    void check() const;
};

/// Lyapunov route plus correlation measures at one parameter point.
struct PointResult {
    DerivedParams derived;
    StabilityReport stability;
    std::optional<CovarianceState> covariance;      // set when stable
    std::optional<CorrelationReport> correlations;  // set when stable
    std::string error;                              // non-empty when evaluation failed
    bool ok() const { return correlations.has_value(); }
};

PointResult evaluate_point(const PhysicalParams& p);

struct SweepRow {
    double swept = 0.0;
    std::optional<double> curve;
    double r = 0.0, xi = 0.0, T_K = 0.0, gamma_rads = 0.0, kappa_rads = 0.0, C = 0.0, n_th = 0.0;
    bool stable = false;
    // present only when stable
    std::optional<double> sigma1, sigma12, sigma13;
    std::optional<double> steering, log_negativity, discord, nu_minus;
    // diagnostics, not serialized
    double residual = 0.0;
    double min_symplectic_full = 0.0;
    std::string error;
};

struct SweepTable {
    SweepVariable variable = SweepVariable::r;
    std::optional<SweepVariable> curve_variable;
    std::vector<SweepRow> rows;
};

/// Rows ordered by curve value (outer, as listed) then grid ascending (inner).
/// Per-point failures are recorded on the row and never abort the sweep.
SweepTable run_sweep(const SweepSpec& spec);

/// fig2: r in [0, 3], curves xi in {0, 0.1, 0.2, 0.3}, T = 0.1 mK.
/// fig3: T in [1e-6, 5e-3] K, curves gamma/kappa in {0.001, 0.005, 0.01, 0.05}, xi = 0.2, r = 1.
/// fig4: xi in [0, 1], curves T in {0.1, 0.4, 0.8, 1.6} mK, r = 1.
/// All: 301 points, kappa = 2 pi x 14 kHz, C = 32.11.
SweepSpec figure_preset(const std::string& name);

struct CriticalXi {
    double xi_l = 0.0;
    double lo = 0.0, hi = 0.0;  // final bracket, E_N(lo) > tol, E_N(hi) <= tol
    double en_lo = 0.0, en_hi = 0.0;
    int iterations = 0;
};

inline constexpr double kEntanglementTolerance = 1e-10;

/// Bisection for the hopping strength beyond which the mirrors are no longer
/// entangled. Requires E_N(lo) > 1e-10 and E_N(hi) <= 1e-10; stops at width 1e-6.
CriticalXi find_critical_xi(const PhysicalParams& held, double xi_lo, double xi_hi, double resolution = 1e-6);

std::string csv_header(const SweepTable& table);
/// 17 significant digits, '\n' line ends, empty fields for absent values.
/// `metadata` lines are written first, each prefixed by "# ".
void write_csv(const SweepTable& table, std::ostream& out, const std::vector<std::string>& metadata = {});
void emit_csv(const SweepTable& table, const std::filesystem::path& path,
              const std::vector<std::string>& metadata = {});

}  // namespace optomech
