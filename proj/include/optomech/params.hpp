#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace optomech {

/// Drive specified as the input laser power in watts.
struct PumpPower {
    double watts = 0.0;
};

/// Drive specified directly as the optomechanical cooperativity C = 4G^2/(gamma kappa).
struct Cooperativity {
    double value = 0.0;
};

using Drive = std::variant<PumpPower, Cooperativity>;

/// Raw physical inputs of the symmetric double-cavity system. All frequencies and
/// rates are angular (rad/s). One value serves both cavities.
struct PhysicalParams {
    double omega_M = 0.0;        ///< mechanical frequency
    double gamma = 0.0;          ///< mechanical damping rate
    double mass = 0.0;           ///< mirror mass (kg)
    double cavity_length = 0.0;  ///< L (m)
    double omega_c = 0.0;        ///< cavity frequency
    double omega_L = 0.0;        ///< laser frequency
    double kappa = 0.0;          ///< cavity damping rate
    double temperature = 0.0;    ///< mechanical bath temperature (K)
    double squeezing_r = 0.0;    ///< two-mode squeezing parameter of the injected light
    double hopping_lambda = 0.0; ///< photon hopping rate
    Drive drive = Cooperativity{0.0};
    double detuning = 0.0;       ///< effective detuning Delta'; red sideband is -omega_M

    double xi() const { return hopping_lambda / kappa; }
};

/// Quantities the linearized dynamics consumes, all derived from PhysicalParams.
struct DerivedParams {
    double n_th = 0.0;
    double N_sq = 0.0;  ///< sinh^2 r
    double M_sq = 0.0;  ///< sinh r cosh r
    double G = 0.0;     ///< many-photon coupling (rad/s)
    double cooperativity = 0.0;
    double xi = 0.0;
    double phi = 0.0;   ///< drive phase (rad)
    double gamma_prime = 0.0;  ///< gamma (n_th + 1/2)
    double kappa_prime = 0.0;  ///< kappa (N_sq + 1/2)
    // echoed rates needed to assemble the drift matrix
    double gamma = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
};

/// Bose occupancy of a mode at omega_M (rad/s) and temperature (K). Exactly 0 at T = 0.
double thermal_occupancy(double omega_M, double temperature);

/// Bare single-photon coupling g = (omega_c/L) sqrt(hbar/(m omega_M)).
double single_photon_coupling(const PhysicalParams& p);

/// Drive amplitude E = sqrt(2 kappa P / (hbar omega_L)) for a pump power P.
double drive_amplitude(const PhysicalParams& p, double power_watts);

/// Many-photon coupling G. For a power drive this is the closed expression in the
/// steady-state intracavity amplitude; for a cooperativity drive G = sqrt(C gamma kappa / 4).
double effective_coupling(const PhysicalParams& p);

double cooperativity_from_coupling(double G, double gamma, double kappa);
double coupling_from_cooperativity(double C, double gamma, double kappa);

/// Cooperativity produced by pump power `watts` at the geometry/detuning of `p`.
double cooperativity_from_power(const PhysicalParams& p, double watts);
/// Inverse of cooperativity_from_power.
double power_from_cooperativity(const PhysicalParams& p, double C);

/// Laser phase that makes the mean intracavity amplitude purely imaginary.
double drive_phase(const PhysicalParams& p);

struct SteadyAmplitudes {
    std::complex<double> cavity;      ///< mean intracavity amplitude (c-bar)
    std::complex<double> mechanical;  ///< mean mirror amplitude (b-bar)
};

/// Mean amplitudes of the symmetric configuration with drive_phase applied.
SteadyAmplitudes steady_state_amplitudes(const PhysicalParams& p);

/// Throws ConfigError on hard violations (non-positive rates, negative temperature,
/// negative r or lambda, negative drive). Returns soft warnings for RWA violations.
std::vector<std::string> validate(const PhysicalParams& p);

/// Validates and computes every derived quantity.
DerivedParams derive(const PhysicalParams& p);

}  // namespace optomech
