// Command-line front end: figure presets, ad-hoc sweeps, critical hopping search,
// Monte Carlo validation and closed-form comparison.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/closedform.hpp"
#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/montecarlo.hpp"
#include "optomech/sweep.hpp"
#include "optomech/symplectic.hpp"

using namespace optomech;

namespace {

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + text + "' in " + what);
    }
    if (used != text.size()) throw ConfigError("cannot parse number '" + text + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// var=start:stop:n
void apply_sweep_arg(SweepSpec& spec, const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw ConfigError("--sweep expects var=start:stop:n, got '" + arg + "'");
    spec.variable = parse_sweep_variable(arg.substr(0, eq));
    const auto parts = split(arg.substr(eq + 1), ':');
    if (parts.size() != 3) throw ConfigError("--sweep expects var=start:stop:n, got '" + arg + "'");
    spec.start = parse_number(parts[0], "--sweep");
    spec.stop = parse_number(parts[1], "--sweep");
    const double n = parse_number(parts[2], "--sweep");
    if (n != std::floor(n)) throw ConfigError("--sweep point count must be an integer");
    spec.points = static_cast<int>(n);
}

// var=v1,v2,...
CurveSpec parse_curves_arg(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw ConfigError("--curves expects var=v1,v2,..., got '" + arg + "'");
    CurveSpec c;
    c.variable = parse_sweep_variable(arg.substr(0, eq));
    for (const auto& item : split(arg.substr(eq + 1), ',')) c.values.push_back(parse_number(item, "--curves"));
    if (c.values.empty()) throw ConfigError("--curves: empty value list");
    return c;
}

std::vector<std::string> csv_metadata(const SweepSpec& spec, bool timestamp) {
    std::vector<std::string> md;
    if (timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::ostringstream os;
        os << "generated " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
        md.push_back(os.str());
    }
    if (!spec.name.empty()) md.push_back("preset=" + spec.name);
    std::ostringstream os;
    os << std::setprecision(17);
    if (const auto* c = std::get_if<Cooperativity>(&spec.held.drive))
        os << "drive=cooperativity " << c->value;
    else
        os << "drive=pump_power_W " << std::get<PumpPower>(spec.held.drive).watts;
    if (spec.name == "fig2" || spec.name == "fig4") os << " (drive strength not given for this figure; C assumed)";
    md.push_back(os.str());
    md.push_back("covariance convention: vacuum variance 1/2; measures in nats");
    return md;
}

void print_point(const PhysicalParams& p, std::ostream& out) {
    const PointResult pr = evaluate_point(p);
    out << std::setprecision(17);
    out << "C=" << pr.derived.cooperativity << "\nG_rads=" << pr.derived.G << "\nn_th=" << pr.derived.n_th
        << "\nxi=" << pr.derived.xi << "\nphi_rad=" << pr.derived.phi << "\nstability=" << to_string(pr.stability.verdict)
        << "\nmax_re_eig=" << pr.stability.max_real_part << '\n';
    if (pr.covariance) {
        const Mat4& mb = pr.covariance->mechanical_block;
        out << "sigma1=" << mb(0, 0) << "\nsigma12=" << mb(0, 1) << "\nsigma13=" << mb(0, 2)
            << "\nresidual=" << pr.covariance->residual
            << "\nmin_symplectic_full=" << min_symplectic_eigenvalue(pr.covariance->full) << '\n';
    }
    if (pr.correlations) {
        const auto& c = *pr.correlations;
        out << "steering=" << c.steering_ab << "\nlog_negativity=" << c.log_negativity << "\ndiscord=" << c.discord
            << "\nnu_minus=" << c.nu_minus << "\ntheta_plus=" << c.theta_plus << "\ntheta_minus=" << c.theta_minus
            << '\n';
    }
    if (!pr.error.empty()) out << "error=" << pr.error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state mirror-mirror Gaussian correlations of a photon-hopping double cavity"};

    std::string config_path, figure, sweep_arg, curves_arg, output, critical_arg, closed_form_path, mc_output;
    std::string dump_dir = ".";
    bool dump = false, mc_validate = false, timestamp = false;
    double mc_dt = -1.0, mc_burn_in = -1.0, mc_duration = -1.0;
    int mc_trajectories = -1, mc_batches = -1;
    std::uint64_t mc_seed = SdeConfig{}.seed;

    app.add_option("--config", config_path, "key = value parameter file")->check(CLI::ExistingFile);
    app.add_option("--figure", figure, "figure preset")->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    app.add_option("--sweep", sweep_arg, "var=start:stop:n with var in r, xi, T, gamma_over_kappa");
    app.add_option("--curves", curves_arg, "var=v1,v2,... curve family");
    app.add_option("--output", output, "CSV output path (default stdout)");
    app.add_flag("--timestamp", timestamp, "add a generation timestamp line to the CSV");
    app.add_flag("--dump-matrices", dump, "write W, R and sigma of the held point as text matrices");
    app.add_option("--dump-dir", dump_dir, "directory for --dump-matrices output");
    app.add_option("--find-critical-xi", critical_arg, "lo:hi bracket for the entanglement-death hopping strength");
    app.add_option("--closed-form-report", closed_form_path, "write the closed-form vs Lyapunov CSV");

    auto* mc = app.add_flag("--mc-validate", mc_validate, "Monte Carlo check of the held point");
    app.add_option("--mc-dt", mc_dt, "time step in units of 1/kappa")->needs(mc);
    app.add_option("--mc-burn-in", mc_burn_in, "burn-in in units of 1/kappa")->needs(mc);
    app.add_option("--mc-duration", mc_duration, "sampling duration in units of 1/kappa")->needs(mc);
    app.add_option("--mc-trajectories", mc_trajectories, "ensemble size")->needs(mc);
    app.add_option("--mc-batches", mc_batches, "batches per trajectory")->needs(mc);
    app.add_option("--mc-seed", mc_seed, "RNG seed")->needs(mc);
    app.add_option("--mc-output", mc_output, "Monte Carlo report CSV path")->needs(mc);

    CLI11_PARSE(app, argc, argv);

    try {
        SweepSpec spec = figure.empty() ? SweepSpec{} : figure_preset(figure);
        if (figure.empty()) {
            spec.held = reference_params();
            spec.points = 0;
        }
        if (!config_path.empty()) spec.held = load_config(config_path, spec.held);
        for (const auto& w : validate(spec.held)) std::cerr << "warning: " << w << '\n';
        if (!sweep_arg.empty()) {
            apply_sweep_arg(spec, sweep_arg);
            spec.name.clear();
        }
        if (!curves_arg.empty()) spec.curves = parse_curves_arg(curves_arg);
        const bool do_sweep = !figure.empty() || !sweep_arg.empty();
        if (!curves_arg.empty() && !do_sweep) throw ConfigError("--curves requires --sweep or --figure");

        bool did_something = false;

        if (dump) {
            const DerivedParams d = derive(spec.held);
            const SystemMatrices m = build_system(d);
            const std::filesystem::path dir(dump_dir);
            dump_matrix(dir / "drift_W.txt", m.drift);
            dump_matrix(dir / "noise_R.txt", m.noise);
            dump_matrix(dir / "sigma.txt", solve_lyapunov(m).full);
            did_something = true;
        }

        if (!critical_arg.empty()) {
            const auto parts = split(critical_arg, ':');
            if (parts.size() != 2) throw ConfigError("--find-critical-xi expects lo:hi");
            const CriticalXi c = find_critical_xi(spec.held, parse_number(parts[0], "--find-critical-xi"),
                                                  parse_number(parts[1], "--find-critical-xi"));
            std::cout << std::setprecision(17) << "xi_l=" << c.xi_l << "\nbracket_lo=" << c.lo
                      << "\nbracket_hi=" << c.hi << "\nE_N_lo=" << c.en_lo << "\nE_N_hi=" << c.en_hi
                      << "\niterations=" << c.iterations << '\n';
            did_something = true;
        }

        if (!closed_form_path.empty()) {
            const ClosedFormReport rep = validate_closed_forms(closed_form_study_grid(spec.held));
            write_closed_form_report(rep, closed_form_path);
            for (const auto& line : rep.summary) std::cerr << line << '\n';
            did_something = true;
        }

        if (mc_validate) {
            const DerivedParams d = derive(spec.held);
            const SystemMatrices m = build_system(d);
            SdeConfig cfg = default_sde_config(d);
            if (mc_dt > 0) cfg.dt = mc_dt;
            if (mc_burn_in > 0) cfg.burn_in = mc_burn_in;
            if (mc_duration > 0) cfg.sample_duration = mc_duration;
            if (mc_trajectories > 0) cfg.n_trajectories = mc_trajectories;
            if (mc_batches > 0) cfg.n_batches = mc_batches;
            cfg.seed = mc_seed;
            const CovarianceState exact = solve_lyapunov(m);
            const McEstimate est = integrate_steady_covariance(m, cfg);
            const McComparison cmp = compare_to_lyapunov(est, exact.full);
            if (!mc_output.empty()) write_mc_report(est, exact.full, cmp, cfg, mc_output);
            std::cout << "mc_pass=" << (cmp.pass ? 1 : 0) << " mechanical_block_ok=" << (mechanical_block_agrees(cmp) ? 1 : 0)
                      << " max_abs_z=" << cmp.max_abs_z << " over_3=" << cmp.over_3 << " rng=" << est.rng << '\n';
            did_something = true;
        }

        if (do_sweep) {
            const SweepTable table = run_sweep(spec);
            const auto md = csv_metadata(spec, timestamp);
            if (output.empty())
                write_csv(table, std::cout, md);
            else
                emit_csv(table, output, md);
            did_something = true;
        }

        if (!did_something) print_point(spec.held, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
