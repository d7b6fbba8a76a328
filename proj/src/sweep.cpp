#include "optomech/sweep.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/symplectic.hpp"

namespace optomech {

const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::r: return "r";
        case SweepVariable::xi: return "xi";
        case SweepVariable::T: return "T";
        case SweepVariable::gamma_over_kappa: return "gamma_over_kappa";
    }
    return "?";
}

SweepVariable parse_sweep_variable(const std::string& name) {
    if (name == "r") return SweepVariable::r;
    if (name == "xi") return SweepVariable::xi;
    if (name == "T") return SweepVariable::T;
    if (name == "gamma_over_kappa") return SweepVariable::gamma_over_kappa;
    throw ConfigError("unknown sweep variable '" + name + "' (expected r, xi, T or gamma_over_kappa)");
}

void set_variable(PhysicalParams& p, SweepVariable v, double value) {
    switch (v) {
        case SweepVariable::r: p.squeezing_r = value; break;
        case SweepVariable::xi: p.hopping_lambda = value * p.kappa; break;
        case SweepVariable::T: p.temperature = value; break;
        case SweepVariable::gamma_over_kappa: p.gamma = value * p.kappa; break;
    }
}

double get_variable(const PhysicalParams& p, SweepVariable v) {
    switch (v) {
        case SweepVariable::r: return p.squeezing_r;
        case SweepVariable::xi: return p.xi();
        case SweepVariable::T: return p.temperature;
        case SweepVariable::gamma_over_kappa: return p.gamma / p.kappa;
    }
    return 0.0;
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = start + (stop - start) * i / (points - 1);
    g.back() = stop;
    return g;
}

void SweepSpec::check() const {
    if (!(start < stop)) throw ConfigError("sweep: start must be < stop");
    if (points < 2) throw ConfigError("sweep: need at least 2 points");
    if (curves && curves->values.empty()) throw ConfigError("curves: empty value list");
    if (curves && curves->variable == variable) throw ConfigError("curves: curve variable equals swept variable");
}

PointResult evaluate_point(const PhysicalParams& p) {
    PointResult res;
    try {
        res.derived = derive(p);
        const SystemMatrices m = build_system(res.derived);
        res.stability = check_stability(m.drift);
        if (!res.stability.is_stable()) {
            res.error = std::string("drift ") + to_string(res.stability.verdict);
            return res;
        }
        res.covariance = solve_lyapunov(m);
        CorrelationReport rep = correlations(TwoModeCovariance(res.covariance->mechanical_block));
        rep.stable = true;
        res.correlations = rep;
    } catch (const Error& e) {
        res.error = e.what();
    }
    return res;
}

SweepTable run_sweep(const SweepSpec& spec) {
    spec.check();
    validate(spec.held);

    SweepTable table;
    table.variable = spec.variable;
    if (spec.curves) table.curve_variable = spec.curves->variable;

    std::vector<std::optional<double>> curve_values;
    if (spec.curves)
        for (double v : spec.curves->values) curve_values.emplace_back(v);
    else
        curve_values.emplace_back(std::nullopt);

    const std::vector<double> grid = spec.grid();
    for (const auto& cv : curve_values) {
        PhysicalParams base = spec.held;
        if (cv) set_variable(base, spec.curves->variable, *cv);
        for (double x : grid) {
            PhysicalParams p = base;
            set_variable(p, spec.variable, x);

            SweepRow row;
            row.swept = x;
            row.curve = cv;
            row.r = p.squeezing_r;
            row.xi = p.xi();
            row.T_K = p.temperature;
            row.gamma_rads = p.gamma;
            row.kappa_rads = p.kappa;

            const PointResult pr = evaluate_point(p);
            row.C = pr.derived.cooperativity;
            row.n_th = pr.derived.n_th;
            row.error = pr.error;
            row.stable = pr.stability.is_stable();
            if (pr.covariance) {
                const Mat4& mech = pr.covariance->mechanical_block;
                row.sigma1 = mech(0, 0);
                row.sigma12 = mech(0, 1);
                row.sigma13 = mech(0, 2);
                row.residual = pr.covariance->residual;
                row.min_symplectic_full = min_symplectic_eigenvalue(pr.covariance->full);
            }
            if (pr.correlations) {
                row.steering = pr.correlations->steering_ab;
                row.log_negativity = pr.correlations->log_negativity;
                row.discord = pr.correlations->discord;
                row.nu_minus = pr.correlations->nu_minus;
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

SweepSpec figure_preset(const std::string& name) {
    SweepSpec spec;
    spec.name = name;
    spec.held = reference_params();
    spec.points = 301;
    if (name == "fig2") {
        spec.variable = SweepVariable::r;
        spec.start = 0.0;
        spec.stop = 3.0;
        spec.held.temperature = 1e-4;
        spec.curves = CurveSpec{SweepVariable::xi, {0.0, 0.1, 0.2, 0.3}};
    } else if (name == "fig3") {
        spec.variable = SweepVariable::T;
        spec.start = 1e-6;
        spec.stop = 5e-3;
        spec.held.hopping_lambda = 0.2 * spec.held.kappa;
        spec.held.squeezing_r = 1.0;
        spec.curves = CurveSpec{SweepVariable::gamma_over_kappa, {0.001, 0.005, 0.01, 0.05}};
    } else if (name == "fig4") {
        spec.variable = SweepVariable::xi;
        spec.start = 0.0;
        spec.stop = 1.0;
        spec.held.squeezing_r = 1.0;
        spec.curves = CurveSpec{SweepVariable::T, {1e-4, 4e-4, 8e-4, 1.6e-3}};
    } else {
        throw ConfigError("unknown figure preset '" + name + "' (expected fig2, fig3 or fig4)");
    }
    return spec;
}

namespace {

double entanglement_at(PhysicalParams p, double xi) {
    set_variable(p, SweepVariable::xi, xi);
    const PointResult pr = evaluate_point(p);
    if (!pr.ok()) {
        std::ostringstream os;
        os << "find_critical_xi: evaluation failed at xi = " << xi << ": " << pr.error;
        throw NumericalError(os.str());
    }
    return pr.correlations->log_negativity;
}

}  // namespace

CriticalXi find_critical_xi(const PhysicalParams& held, double xi_lo, double xi_hi, double resolution) {
    if (!(xi_lo < xi_hi)) throw ConfigError("find_critical_xi: need lo < hi");
    CriticalXi out;
    out.lo = xi_lo;
    out.hi = xi_hi;
    out.en_lo = entanglement_at(held, xi_lo);
    out.en_hi = entanglement_at(held, xi_hi);
    if (!(out.en_lo > kEntanglementTolerance) || out.en_hi > kEntanglementTolerance) {
        std::ostringstream os;
        os << std::setprecision(17) << "find_critical_xi: invalid bracket, E_N(" << xi_lo << ") = " << out.en_lo
           << ", E_N(" << xi_hi << ") = " << out.en_hi << " (need E_N(lo) > 0 = E_N(hi))";
        throw ConfigError(os.str());
    }
    while (out.hi - out.lo > resolution) {
        const double mid = 0.5 * (out.lo + out.hi);
        const double en = entanglement_at(held, mid);
        if (en > kEntanglementTolerance) {
            out.lo = mid;
            out.en_lo = en;
        } else {
            out.hi = mid;
            out.en_hi = en;
        }
        ++out.iterations;
    }
    out.xi_l = 0.5 * (out.lo + out.hi);
    return out;
}

std::string csv_header(const SweepTable& table) {
    std::string h = std::string("sweep_") + to_string(table.variable) + ",";
    h += table.curve_variable ? std::string("curve_") + to_string(*table.curve_variable) : std::string("curve");
    h += ",r,xi,T_K,gamma_rads,kappa_rads,C,n_th,sigma1,sigma12,sigma13,steering,log_negativity,discord,nu_minus,stable";
    return h;
}

void write_csv(const SweepTable& table, std::ostream& out, const std::vector<std::string>& metadata) {
    out << std::setprecision(17);
    for (const auto& m : metadata) out << "# " << m << '\n';
    out << csv_header(table) << '\n';
    auto opt = [&](const std::optional<double>& v) {
        out << ',';
        if (v) out << *v;
    };
    for (const SweepRow& row : table.rows) {
        out << row.swept;
        opt(row.curve);
        out << ',' << row.r << ',' << row.xi << ',' << row.T_K << ',' << row.gamma_rads << ',' << row.kappa_rads
            << ',' << row.C << ',' << row.n_th;
        opt(row.sigma1);
        opt(row.sigma12);
        opt(row.sigma13);
        opt(row.steering);
        opt(row.log_negativity);
        opt(row.discord);
        opt(row.nu_minus);
        out << ',' << (row.stable ? 1 : 0) << '\n';
    }
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path, const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_csv(table, out, metadata);
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace optomech
