#include "optomech/params.hpp"

#include <cmath>
#include <sstream>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

// (Delta' + lambda)^2 + kappa^2/4, the Lorentzian denominator of the intracavity field.
double lorentzian_denominator(const PhysicalParams& p) {
    const double shifted = p.detuning + p.hopping_lambda;
    return shifted * shifted + 0.25 * p.kappa * p.kappa;
}

// G^2 per watt of pump power.
double coupling_sq_per_watt(const PhysicalParams& p) {
    const double geom = p.omega_c / p.cavity_length;
    return geom * geom * 2.0 * p.kappa /
           (p.mass * p.omega_M * p.omega_L * lorentzian_denominator(p));
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

double thermal_occupancy(double omega_M, double temperature) {
    if (temperature <= 0.0) return 0.0;
    const double x = constants::hbar * omega_M / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double single_photon_coupling(const PhysicalParams& p) {
    return p.omega_c / p.cavity_length * std::sqrt(constants::hbar / (p.mass * p.omega_M));
}

double drive_amplitude(const PhysicalParams& p, double power_watts) {
    return std::sqrt(2.0 * p.kappa * power_watts / (constants::hbar * p.omega_L));
}

double cooperativity_from_coupling(double G, double gamma, double kappa) {
    return 4.0 * G * G / (gamma * kappa);
}

double coupling_from_cooperativity(double C, double gamma, double kappa) {
    return std::sqrt(C * gamma * kappa / 4.0);
}

double cooperativity_from_power(const PhysicalParams& p, double watts) {
    return 4.0 * coupling_sq_per_watt(p) * watts / (p.gamma * p.kappa);
}

double power_from_cooperativity(const PhysicalParams& p, double C) {
    return C * p.gamma * p.kappa / (4.0 * coupling_sq_per_watt(p));
}

double effective_coupling(const PhysicalParams& p) {
    struct Visitor {
        const PhysicalParams& p;
        double operator()(const PumpPower& d) const {
            require(d.watts >= 0.0, "pump_power must be >= 0");
            return std::sqrt(coupling_sq_per_watt(p) * d.watts);
        }
        double operator()(const Cooperativity& d) const {
            require(d.value >= 0.0, "cooperativity must be >= 0");
            return coupling_from_cooperativity(d.value, p.gamma, p.kappa);
        }
    };
    return std::visit(Visitor{p}, p.drive);
}

double drive_phase(const PhysicalParams& p) {
    return -std::atan(2.0 * (p.detuning + p.hopping_lambda) / p.kappa);
}

SteadyAmplitudes steady_state_amplitudes(const PhysicalParams& p) {
    using namespace std::complex_literals;
    const double watts = std::holds_alternative<PumpPower>(p.drive)
                             ? std::get<PumpPower>(p.drive).watts
                             : power_from_cooperativity(p, std::get<Cooperativity>(p.drive).value);
    const double E = drive_amplitude(p, watts);
    const double phi = drive_phase(p);
    const std::complex<double> denom(0.5 * p.kappa, -(p.detuning + p.hopping_lambda));
    const std::complex<double> cavity = 1i * E * std::exp(1i * phi) / denom;
    const double g = single_photon_coupling(p);
    const std::complex<double> mechanical =
        1i * g * std::norm(cavity) / std::complex<double>(0.5 * p.gamma, p.omega_M);
    return {cavity, mechanical};
}

std::vector<std::string> validate(const PhysicalParams& p) {
    require(p.omega_M > 0.0, "omega_M must be > 0");
    require(p.gamma > 0.0, "gamma must be > 0");
    require(p.kappa > 0.0, "kappa must be > 0");
    require(p.mass > 0.0, "mass must be > 0");
    require(p.cavity_length > 0.0, "cavity_length must be > 0");
    require(p.omega_c > 0.0, "omega_c must be > 0");
    require(p.omega_L > 0.0, "omega_L must be > 0");
    require(p.temperature >= 0.0, "temperature must be >= 0");
    require(p.squeezing_r >= 0.0, "squeezing_r must be >= 0");
    require(p.hopping_lambda >= 0.0, "hopping_lambda must be >= 0");
    require(std::isfinite(p.detuning), "detuning must be finite");

    std::vector<std::string> warnings;
    auto ratio_warning = [&](double ratio, const char* name) {
        if (ratio <= 10.0) {
            std::ostringstream os;
            os << "rotating-wave regime questionable: omega_M/" << name << " = " << ratio
               << " (want > 10)";
            warnings.push_back(os.str());
        }
    };
    ratio_warning(p.omega_M / p.kappa, "kappa");
    ratio_warning(p.omega_M / p.gamma, "gamma");
    return warnings;
}

DerivedParams derive(const PhysicalParams& p) {
    validate(p);
    DerivedParams d;
    d.n_th = thermal_occupancy(p.omega_M, p.temperature);
    const double sh = std::sinh(p.squeezing_r);
    const double ch = std::cosh(p.squeezing_r);
    d.N_sq = sh * sh;
    d.M_sq = sh * ch;
    d.G = effective_coupling(p);
    d.cooperativity = cooperativity_from_coupling(d.G, p.gamma, p.kappa);
    d.xi = p.xi();
    d.phi = drive_phase(p);
    d.gamma_prime = p.gamma * (d.n_th + 0.5);
    d.kappa_prime = p.kappa * (d.N_sq + 0.5);
    d.gamma = p.gamma;
    d.kappa = p.kappa;
    d.lambda = p.hopping_lambda;
    return d;
}

}  // namespace optomech
