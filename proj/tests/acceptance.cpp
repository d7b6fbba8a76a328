// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   acceptance [--report-dir DIR] [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/closedform.hpp"
#include "optomech/config.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/errors.hpp"
#include "optomech/measures.hpp"
#include "optomech/montecarlo.hpp"
#include "optomech/sweep.hpp"
#include "optomech/symplectic.hpp"
#include "support/gaussian_states.hpp"

using namespace optomech;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (failures.size() < 5) failures.push_back(what);
        }
    }
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// CSV reading

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error("csv: missing column " + name);
        return static_cast<int>(it - header.begin());
    }
    std::optional<double> value(std::size_t row, int col) const {
        const std::string& cell = rows.at(row).at(col);
        if (cell.empty()) return std::nullopt;
        return std::stod(cell);
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Csv read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    Csv csv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (csv.header.empty())
            csv.header = split(line);
        else
            csv.rows.push_back(split(line));
    }
    return csv;
}

/// One figure curve: the swept values and the three measures, in file order.
struct Curve {
    double label = 0.0;
    std::vector<double> x, S, EN, D;
    std::vector<bool> stable;
};

std::vector<Curve> curves_of(const Csv& csv) {
    const int cx = 0, cc = 1;
    const int cs = csv.column("steering"), ce = csv.column("log_negativity"), cd = csv.column("discord"),
              cst = csv.column("stable");
    std::vector<Curve> out;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const double label = csv.value(i, cc).value_or(0.0);
        if (out.empty() || out.back().label != label) out.push_back(Curve{label, {}, {}, {}, {}, {}});
        Curve& c = out.back();
        c.x.push_back(*csv.value(i, cx));
        const bool stable = csv.rows[i][cst] == "1";
        c.stable.push_back(stable);
        c.S.push_back(csv.value(i, cs).value_or(NAN));
        c.EN.push_back(csv.value(i, ce).value_or(NAN));
        c.D.push_back(csv.value(i, cd).value_or(NAN));
    }
    return out;
}

constexpr double kMonotoneSlack = 1e-12;
constexpr double kZero = kEntanglementTolerance;

bool non_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - kMonotoneSlack) return false;
    return true;
}

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + kMonotoneSlack) return false;
    return true;
}

// ---------------------------------------------------------------------------

struct Context {
    fs::path report_dir;
    std::map<std::string, fs::path> figure_csv;
};

const std::vector<std::string> kPresets = {"fig2", "fig3", "fig4"};

Outcome lyapunov_correctness(Context& ctx) {
    Outcome out;
    double sweep_seconds = 0.0;
    std::size_t stable = 0, total = 0;
    double worst_residual = 0.0, worst_nu = 1e300;
    for (const auto& name : kPresets) {
        const SweepSpec spec = figure_preset(name);
        const auto t0 = Clock::now();
        const SweepTable table = run_sweep(spec);
        sweep_seconds += seconds_since(t0);
        for (const SweepRow& row : table.rows) {
            ++total;
            out.require(row.error.empty() || !row.stable, name + ": " + row.error);
            if (!row.stable) continue;
            ++stable;
            worst_residual = std::max(worst_residual, row.residual);
            worst_nu = std::min(worst_nu, row.min_symplectic_full);
            out.require(row.residual < 1e-10, name + ": residual " + fmt(row.residual));
            out.require(row.min_symplectic_full >= 0.5 - 1e-9,
                        name + ": min symplectic eigenvalue " + fmt(row.min_symplectic_full, 17));
        }
        const fs::path path = ctx.report_dir / (name + ".csv");
        emit_csv(table, path, {"preset=" + name, "covariance convention: vacuum variance 1/2"});
        ctx.figure_csv[name] = path;
    }
    out.require(total == 3u * 301u * 4u, "unexpected point count " + std::to_string(total));
    out.require(sweep_seconds < 10.0, "sweep runtime " + fmt(sweep_seconds) + " s");
    out.detail = std::to_string(stable) + "/" + std::to_string(total) + " stable points, max residual " +
                 fmt(worst_residual, 3) + ", min nu " + fmt(worst_nu, 12) + ", sweeps " + fmt(sweep_seconds, 3) +
                 " s";
    return out;
}

Outcome trivial_limits(Context&) {
    Outcome out;
    int checked = 0;
    for (double r : {0.0, 0.5, 1.0, 2.5})
        for (double xi : {0.0, 0.2, 0.6})
            for (double T : {0.0, 1e-4, 1e-3}) {
                PhysicalParams p = reference_params();
                p.drive = Cooperativity{0.0};
                p.squeezing_r = r;
                p.hopping_lambda = xi * p.kappa;
                p.temperature = T;
                const PointResult res = evaluate_point(p);
                ++checked;
                const std::string at = "C=0 r=" + fmt(r) + " xi=" + fmt(xi) + " T=" + fmt(T);
                if (!res.ok()) {
                    out.require(false, at + ": " + res.error);
                    continue;
                }
                const Mat4 expected = (res.derived.n_th + 0.5) * Mat4::Identity();
                const double dev = (res.covariance->mechanical_block - expected).cwiseAbs().maxCoeff();
                out.require(dev < 1e-10, at + ": mechanical block off by " + fmt(dev));
                const CorrelationReport& c = *res.correlations;
                out.require(std::max({c.steering_ab, c.log_negativity, c.discord}) < 1e-10, at + ": nonzero measure");
            }
    for (double C : {1.0, 32.11, 200.0})
        for (double xi : {0.0, 0.2, 0.6})
            for (double T : {0.0, 1e-4, 1e-3}) {
                PhysicalParams p = reference_params();
                p.drive = Cooperativity{C};
                p.squeezing_r = 0.0;
                p.hopping_lambda = xi * p.kappa;
                p.temperature = T;
                const PointResult res = evaluate_point(p);
                ++checked;
                const std::string at = "r=0 C=" + fmt(C) + " xi=" + fmt(xi) + " T=" + fmt(T);
                if (!res.ok()) {
                    out.require(false, at + ": " + res.error);
                    continue;
                }
                const Mat4& b = res.covariance->mechanical_block;
                out.require(std::abs(b(0, 1)) < 1e-10 && std::abs(b(0, 2)) < 1e-10,
                            at + ": sigma12=" + fmt(b(0, 1)) + " sigma13=" + fmt(b(0, 2)));
                const CorrelationReport& c = *res.correlations;
                out.require(std::max({c.steering_ab, c.log_negativity, c.discord}) < 1e-10, at + ": nonzero measure");
            }
    out.detail = std::to_string(checked) + " limit points";
    return out;
}

Outcome analytic_states(Context&) {
    Outcome out;
    for (double n : {0.0, 0.5, 1.74, 20.0}) {
        const CorrelationReport c = correlations(TwoModeCovariance(testing::thermal(n)));
        out.require(c.steering_ab == 0.0 && c.steering_ba == 0.0 && c.log_negativity == 0.0 && c.discord == 0.0,
                    "thermal n=" + fmt(n) + " has correlations");
    }
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        const CorrelationReport c = correlations(TwoModeCovariance(testing::tmsv(s)));
        const double den = std::abs(c.log_negativity - 2.0 * s);
        const double dst = std::abs(c.steering_ab - std::log(std::cosh(2.0 * s)));
        worst = std::max({worst, den, dst});
        out.require(den < 1e-9, "TMSV s=" + fmt(s) + ": E_N off by " + fmt(den));
        out.require(dst < 1e-9, "TMSV s=" + fmt(s) + ": steering off by " + fmt(dst));
    }
    out.detail = "thermal x4, TMSV s in {0.5, 1, 2}, worst deviation " + fmt(worst, 3);
    return out;
}

Outcome symplectic_cross_check(Context&) {
    Outcome out;
    std::mt19937_64 rng(20200101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Mat4 m = testing::random_physical(rng);
        try {
            const SymplecticPair nu = symplectic_eigenvalues(TwoModeCovariance(m));
            const Eigen::VectorXd spec = symplectic_spectrum(m);
            const double dev = std::max(std::abs(nu.minus - spec[0]), std::abs(nu.plus - spec[1]));
            worst = std::max(worst, dev);
            out.require(dev < 1e-9, "state " + std::to_string(i) + ": deviation " + fmt(dev));
        } catch (const Error& e) {
            out.require(false, "state " + std::to_string(i) + ": " + e.what());
        }
    }
    out.detail = "1000 random covariances, worst deviation " + fmt(worst, 3);
    return out;
}

Outcome monte_carlo(Context& ctx) {
    Outcome out;
    const DerivedParams d = derive(reference_params());
    const SystemMatrices m = build_system(d);
    const CovarianceState exact = solve_lyapunov(m);
    const SdeConfig cfg = default_sde_config(d);
    const auto t0 = Clock::now();
    const McEstimate mc = integrate_steady_covariance(m, cfg);
    const double elapsed = seconds_since(t0);
    McComparison cmp = compare_to_lyapunov(mc, exact.full);

    double max_z = 0.0, max_rel = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            max_z = std::max(max_z, std::abs(cmp.z_score(i, j)));
            max_rel = std::max(max_rel, cmp.rel_dev(i, j));
        }
    out.require(mechanical_block_agrees(cmp, 4.0, 0.02),
                "mechanical block: max |z| " + fmt(max_z) + ", max rel " + fmt(max_rel));
    out.require(elapsed < 300.0, "runtime " + fmt(elapsed) + " s");
    write_mc_report(mc, exact.full, cmp, cfg, ctx.report_dir / "montecarlo.csv");
    out.detail = "mechanical block max |z| " + fmt(max_z, 3) + ", max rel " + fmt(max_rel, 3) + ", " +
                 std::to_string(mc.n_samples) + " samples in " + fmt(elapsed, 3) + " s";
    return out;
}

const Csv& figure(Context& ctx, const std::string& name) {
    static std::map<std::string, Csv> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    if (!ctx.figure_csv.count(name)) {
        const fs::path path = ctx.report_dir / (name + ".csv");
        emit_csv(run_sweep(figure_preset(name)), path, {"preset=" + name});
        ctx.figure_csv[name] = path;
    }
    return cache.emplace(name, read_csv(ctx.figure_csv.at(name))).first->second;
}

Outcome figure2(Context& ctx) {
    Outcome out;
    const std::vector<Curve> curves = curves_of(figure(ctx, "fig2"));
    out.require(curves.size() == 4, "expected 4 curves");
    std::vector<double> r_min;
    std::ostringstream detail;
    for (const Curve& c : curves) {
        const std::string tag = "xi=" + fmt(c.label);
        out.require(std::all_of(c.stable.begin(), c.stable.end(), [](bool b) { return b; }), tag + ": unstable rows");
        if (c.label == 0.0) {
            out.require(non_decreasing(c.S), tag + ": steering not non-decreasing");
            out.require(non_decreasing(c.EN), tag + ": E_N not non-decreasing");
            out.require(non_decreasing(c.D), tag + ": discord not non-decreasing");
        } else {
            const auto peak = std::max_element(c.EN.begin(), c.EN.end()) - c.EN.begin();
            const bool interior = peak > 0 && peak < static_cast<long>(c.EN.size()) - 1;
            out.require(interior, tag + ": E_N maximum not interior");
            const std::vector<double> tail(c.EN.begin() + peak, c.EN.end());
            out.require(non_increasing(tail) && tail.back() < tail.front(), tag + ": E_N does not decrease after peak");
            detail << tag << " peak r=" << fmt(c.x[peak], 3) << "; ";
        }
        const auto first = std::find_if(c.EN.begin(), c.EN.end(), [](double v) { return v > kZero; });
        r_min.push_back(first == c.EN.end() ? INFINITY : c.x[first - c.EN.begin()]);
    }
    out.require(non_decreasing(r_min), "r_min not non-decreasing in xi");
    detail << "r_min =";
    for (double v : r_min) detail << ' ' << fmt(v, 3);
    out.detail = detail.str();
    return out;
}

Outcome figure3(Context& ctx) {
    Outcome out;
    std::vector<Curve> curves = curves_of(figure(ctx, "fig3"));
    out.require(curves.size() == 4, "expected 4 curves");
    std::sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) { return a.label < b.label; });
    std::ostringstream detail;
    for (const Curve& c : curves) {
        const std::string tag = "gamma/kappa=" + fmt(c.label);
        out.require(non_increasing(c.S), tag + ": steering increases with T");
        out.require(non_increasing(c.EN), tag + ": E_N increases with T");
        out.require(non_increasing(c.D), tag + ": discord increases with T");
        const auto zero = std::find(c.EN.begin(), c.EN.end(), 0.0);
        if (zero == c.EN.end()) {
            out.require(false, tag + ": E_N never reaches 0");
            continue;
        }
        const std::size_t k = zero - c.EN.begin();
        out.require(c.D[k] > 0.0, tag + ": discord vanishes with E_N");
        detail << tag << " E_N=0 from T=" << fmt(c.x[k] * 1e3, 3) << " mK (D=" << fmt(c.D[k], 3) << ", S=" << c.S[k]
               << "); ";
    }
    for (std::size_t i = 1; i < curves.size(); ++i)
        for (std::size_t k = 0; k < curves[i].x.size(); ++k) {
            const std::string at = "T=" + fmt(curves[i].x[k]) + " gamma/kappa " + fmt(curves[i - 1].label) + " -> " +
                                   fmt(curves[i].label);
            out.require(curves[i].S[k] <= curves[i - 1].S[k] + kMonotoneSlack, at + ": steering increases");
            out.require(curves[i].EN[k] <= curves[i - 1].EN[k] + kMonotoneSlack, at + ": E_N increases");
            out.require(curves[i].D[k] <= curves[i - 1].D[k] + kMonotoneSlack, at + ": discord increases");
        }
    out.detail = detail.str();
    return out;
}

Outcome hierarchy(Context& ctx) {
    Outcome out;
    std::size_t rows = 0;
    double max_s_minus_en = -INFINITY;
    for (const auto& name : kPresets) {
        const Csv& csv = figure(ctx, name);
        const int cs = csv.column("steering"), ce = csv.column("log_negativity"), cd = csv.column("discord");
        for (std::size_t i = 0; i < csv.rows.size(); ++i) {
            const auto S = csv.value(i, cs), EN = csv.value(i, ce), D = csv.value(i, cd);
            if (!S || !EN || !D) continue;
            ++rows;
            const std::string at = name + " row " + std::to_string(i);
            max_s_minus_en = std::max(max_s_minus_en, *S - *EN);
            out.require(*S <= *EN + kMonotoneSlack, at + ": steering exceeds E_N");
            out.require(!(*S > 0.0) || *EN > 0.0, at + ": steering without entanglement");
            out.require(!(*D > 1.0) || *EN > 0.0, at + ": discord above 1 without entanglement");
            out.require(*D >= 0.0, at + ": negative discord");
        }
    }
    out.detail = std::to_string(rows) + " rows, max(S - E_N) = " + fmt(max_s_minus_en, 3);
    return out;
}

Outcome closed_form_report(Context& ctx) {
    Outcome out;
    const ClosedFormReport report = validate_closed_forms(closed_form_study_grid(reference_params()));
    const fs::path path = ctx.report_dir / "closed_form_report.csv";
    write_closed_form_report(report, path);
    out.require(fs::exists(path) && fs::file_size(path) > 0, "report not written");
    const Csv csv = read_csv(path);
    const int cC = csv.column("C"), cr = csv.column("r"), cst = csv.column("stable");
    const int devs[] = {csv.column("rel_dev_1"), csv.column("rel_dev_12"), csv.column("rel_dev_13")};
    const int si = csv.column("rel_dev_1_si");
    int exact_lines = 0;
    double max_si = 0.0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        if (csv.rows[i][cst] != "1") continue;
        if (const auto v = csv.value(i, si)) max_si = std::max(max_si, *v);
        if (*csv.value(i, cC) != 0.0 && *csv.value(i, cr) != 0.0) continue;
        ++exact_lines;
        for (int c : devs) {
            const double dev = csv.value(i, c).value_or(INFINITY);
            out.require(dev < 1e-10, "row " + std::to_string(i) + " column " + csv.header[c] + " = " + fmt(dev));
        }
    }
    out.require(exact_lines > 0, "no C = 0 or r = 0 rows");
    out.require(!report.summary.empty(), "no deviation summary");
    out.detail = std::to_string(csv.rows.size()) + " rows, " + std::to_string(exact_lines) +
                 " on C=0/r=0 lines; max rel dev (kappa units) " + fmt(report.max_rel_dev, 3) +
                 ", sigma1 in rad/s up to " + fmt(max_si, 3);
    return out;
}

Outcome critical_hopping(Context& ctx) {
    Outcome out;
    const SweepSpec spec = figure_preset("fig4");
    PhysicalParams held = spec.held;
    const double T = spec.curves->values.front();
    set_variable(held, spec.curves->variable, T);
    const CriticalXi c = find_critical_xi(held, 0.0, 1.0);
    out.require(c.xi_l > 0.0 && c.xi_l < 1.0, "xi_l outside (0, 1)");
    out.require(c.hi - c.lo <= 1e-6 * (1.0 + 1e-9), "bracket width " + fmt(c.hi - c.lo));
    out.require(c.en_lo > kEntanglementTolerance && c.en_hi <= kEntanglementTolerance, "bracket not a crossing");

    const std::vector<Curve> curves = curves_of(figure(ctx, "fig4"));
    const auto it = std::find_if(curves.begin(), curves.end(),
                                 [&](const Curve& cv) { return std::abs(cv.label - T) <= 1e-12 * T; });
    if (it == curves.end()) {
        out.require(false, "fig4 CSV has no T = " + fmt(T) + " curve");
        return out;
    }
    double last_entangled = -INFINITY;
    for (std::size_t k = 0; k < it->x.size(); ++k) {
        if (it->EN[k] > kZero) last_entangled = std::max(last_entangled, it->x[k]);
        if (it->x[k] >= c.hi)
            out.require(it->EN[k] <= kZero, "E_N > 0 at xi=" + fmt(it->x[k]) + " beyond xi_l");
    }
    out.require(last_entangled < c.hi, "sweep entangled at xi=" + fmt(last_entangled) + " beyond xi_l");
    const double grid_step = it->x[1] - it->x[0];
    out.require(c.xi_l - last_entangled <= grid_step, "sweep crossing more than one grid step below xi_l");
    out.detail = "xi_l = " + fmt(c.xi_l, 10) + " (bracket " + fmt(c.hi - c.lo, 3) + ", " +
                 std::to_string(c.iterations) + " steps); last entangled grid xi = " + fmt(last_entangled, 6);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    Context ctx;
    ctx.report_dir = "acceptance_artifacts";
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--report-dir" && i + 1 < argc) {
            ctx.report_dir = argv[++i];
        } else if (arg == "--only" && i + 1 < argc) {
            only = std::stoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--report-dir DIR] [--only N]\n";
            return 2;
        }
    }
    fs::create_directories(ctx.report_dir);

    const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
        {"Lyapunov correctness over all figure presets", lyapunov_correctness},
        {"trivial limits C = 0 and r = 0", trivial_limits},
        {"measures on analytic states", analytic_states},
        {"closed-form symplectic eigenvalues vs spectrum", symplectic_cross_check},
        {"Monte Carlo oracle at the reference point", monte_carlo},
        {"squeezing sweep shape", figure2},
        {"temperature sweep shape", figure3},
        {"correlation hierarchy", hierarchy},
        {"closed-form discrepancy report", closed_form_report},
        {"critical hopping strength", critical_hopping},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (only && id != only) continue;
        Outcome res;
        const auto t0 = Clock::now();
        try {
            res = criteria[i].second(ctx);
        } catch (const std::exception& e) {
            res.pass = false;
            res.failures.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(t0);
        std::cout << (res.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[i].first << " ["
                  << fmt(elapsed, 3) << " s]";
        if (!res.detail.empty()) std::cout << " | " << res.detail;
        std::cout << '\n';
        for (const auto& f : res.failures) std::cout << "      " << f << '\n';
        std::cout.flush();
        if (!res.pass) ++failed;
    }
    std::cout << (failed ? "FAILED: " + std::to_string(failed) + " criteria" : std::string("ALL CRITERIA PASSED"))
              << '\n';
    return failed ? 1 : 0;
}
