#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "optomech/params.hpp"

namespace optomech {

/// Mechanical covariance entries of the form
///   [[s1, s12, s13, 0], [s12, s1, 0, -s13], [s13, 0, s1, s12], [0, -s13, s12, s1]].
struct MechanicalCovarianceClosed {
    double sigma1 = 0.0;
    double sigma12 = 0.0;
    double sigma13 = 0.0;
    // inputs echoed
    double C = 0.0, r = 0.0, xi = 0.0, gamma = 0.0, kappa = 0.0, n_th = 0.0;
};

/// Closed-form expressions, evaluated term for term.
///
/// sigma12 and sigma13 are homogeneous of degree zero in (gamma, kappa), so any
/// rate unit works. The sigma1 numerator contains gamma (1 + 2 n_th) + kappa^2 cosh 2r,
/// which only balances dimensionally when rates are measured in units of kappa;
/// pass gamma/kappa and kappa = 1 to get the physical value.
MechanicalCovarianceClosed closed_sigma(double C, double r, double xi, double gamma, double kappa, double n_th);

/// Same expressions with the sigma1 bracket written as gamma (1 + 2 n_th) + kappa cosh 2r.
/// Unit-independent; coincides with closed_sigma whenever kappa = 1.
MechanicalCovarianceClosed closed_sigma_corrected(double C, double r, double xi, double gamma, double kappa,
                                                  double n_th);

struct ClosedFormRow {
    double C = 0.0, r = 0.0, xi = 0.0, gamma_over_kappa = 0.0, n_th = 0.0;
    bool stable = false;
    // Lyapunov route
    double sigma1_lyap = 0.0, sigma12_lyap = 0.0, sigma13_lyap = 0.0;
    // closed forms with rates in units of kappa
    double sigma1_closed = 0.0, sigma12_closed = 0.0, sigma13_closed = 0.0;
    double rel_dev_1 = 0.0, rel_dev_12 = 0.0, rel_dev_13 = 0.0;
    // closed-form sigma1 with rates in rad/s
    double sigma1_closed_si = 0.0, rel_dev_1_si = 0.0;
    std::string note;
};

struct ClosedFormReport {
    std::vector<ClosedFormRow> rows;
    double max_rel_dev = 0.0;     // over stable rows, kappa units
    double max_rel_dev_si = 0.0;  // sigma1 with rates in rad/s
    bool agrees = false;          // max_rel_dev < 1e-8
    std::vector<std::string> summary;
};

/// Relative deviation |a - b| / |b|, or the absolute deviation when |b| < 1e-12.
double relative_deviation(double value, double reference);

/// Compares both routes at every grid point. Unstable points are kept with a note.
ClosedFormReport validate_closed_forms(const std::vector<PhysicalParams>& grid);

/// Default study grid: C = 0 line, r = 0 line, xi = 0 line over r in [0, 3], the
/// reference point under a gamma/kappa scan, and an (r, xi) lattice.
std::vector<PhysicalParams> closed_form_study_grid(const PhysicalParams& base);

/// CSV with columns C, r, xi, gamma_over_kappa, n_th, sigma1_closed, sigma1_lyap, rel_dev_1,
/// sigma12_closed, sigma12_lyap, rel_dev_12, sigma13_closed, sigma13_lyap, rel_dev_13,
/// sigma1_closed_si, rel_dev_1_si, stable, note; summary lines prefixed by '#'.
void write_closed_form_report(const ClosedFormReport& report, const std::filesystem::path& path);

}  // namespace optomech
