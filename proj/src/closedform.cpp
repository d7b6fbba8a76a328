#include "optomech/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "optomech/dynamics.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

MechanicalCovarianceClosed evaluate(double C, double r, double xi, double g, double k, double n_th,
                                    double cosh_coefficient) {
    const double thermal = 1.0 + 2.0 * n_th;
    const double d0 = k * k + 2.0 * k * g + g * g;
    const double hop = 4.0 * k * k * xi * xi;
    const double c_poly = C * C + 2.0 * C + 1.0 + 4.0 * xi * xi;
    const double s2r = std::sinh(2.0 * r);

    MechanicalCovarianceClosed out;
    out.sigma1 = (C * (g + k) * (g * thermal + cosh_coefficient * std::cosh(2.0 * r)) + thermal * (d0 + hop)) /
                 (2.0 * d0 * (C + 1.0) + 2.0 * hop);
    out.sigma12 = k * C * s2r * (k * C + g + 2.0 * k) * xi / ((d0 + hop) * c_poly);
    out.sigma13 = k * C * s2r * ((g + k) * (C + 1.0) - 4.0 * k * xi * xi) / (2.0 * (d0 + hop) * c_poly);
    out.C = C;
    out.r = r;
    out.xi = xi;
    out.gamma = g;
    out.kappa = k;
    out.n_th = n_th;
    return out;
}

}  // namespace

MechanicalCovarianceClosed closed_sigma(double C, double r, double xi, double gamma, double kappa, double n_th) {
    return evaluate(C, r, xi, gamma, kappa, n_th, kappa * kappa);
}

MechanicalCovarianceClosed closed_sigma_corrected(double C, double r, double xi, double gamma, double kappa,
                                                  double n_th) {
    return evaluate(C, r, xi, gamma, kappa, n_th, kappa);
}

double relative_deviation(double value, double reference) {
    const double diff = std::abs(value - reference);
    return std::abs(reference) < 1e-12 ? diff : diff / std::abs(reference);
}

ClosedFormReport validate_closed_forms(const std::vector<PhysicalParams>& grid) {
    ClosedFormReport rep;
    double max_si_at_c0 = 0.0;
    double max_dev_at_r0 = 0.0;
    double max_dev_at_c0 = 0.0;
    for (const PhysicalParams& p : grid) {
        const DerivedParams d = derive(p);
        ClosedFormRow row;
        row.C = d.cooperativity;
        row.r = p.squeezing_r;
        row.xi = d.xi;
        row.gamma_over_kappa = p.gamma / p.kappa;
        row.n_th = d.n_th;

        const auto closed = closed_sigma(row.C, row.r, row.xi, row.gamma_over_kappa, 1.0, row.n_th);
        const auto closed_si = closed_sigma(row.C, row.r, row.xi, p.gamma, p.kappa, row.n_th);
        row.sigma1_closed = closed.sigma1;
        row.sigma12_closed = closed.sigma12;
        row.sigma13_closed = closed.sigma13;
        row.sigma1_closed_si = closed_si.sigma1;

        try {
            const CovarianceState st = solve_lyapunov(build_system(d));
            row.stable = true;
            row.sigma1_lyap = st.mechanical_block(0, 0);
            row.sigma12_lyap = st.mechanical_block(0, 1);
            row.sigma13_lyap = st.mechanical_block(0, 2);
        } catch (const StabilityError& e) {
            row.note = "skipped: unstable";
            rep.rows.push_back(row);
            continue;
        }
        row.rel_dev_1 = relative_deviation(row.sigma1_closed, row.sigma1_lyap);
        row.rel_dev_12 = relative_deviation(row.sigma12_closed, row.sigma12_lyap);
        row.rel_dev_13 = relative_deviation(row.sigma13_closed, row.sigma13_lyap);
        row.rel_dev_1_si = relative_deviation(row.sigma1_closed_si, row.sigma1_lyap);

        const double worst = std::max({row.rel_dev_1, row.rel_dev_12, row.rel_dev_13});
        rep.max_rel_dev = std::max(rep.max_rel_dev, worst);
        rep.max_rel_dev_si = std::max(rep.max_rel_dev_si, row.rel_dev_1_si);
        if (row.C == 0.0) {
            max_dev_at_c0 = std::max(max_dev_at_c0, worst);
            max_si_at_c0 = std::max(max_si_at_c0, row.rel_dev_1_si);
        }
        if (row.r == 0.0) max_dev_at_r0 = std::max(max_dev_at_r0, worst);
        rep.rows.push_back(row);
    }
    rep.agrees = rep.max_rel_dev < 1e-8;

    std::ostringstream os;
    os << std::setprecision(3);
    os << "rates in units of kappa: max relative deviation " << rep.max_rel_dev << " ("
       << (rep.agrees ? "agrees" : "DISAGREES") << " within 1e-8)";
    rep.summary.push_back(os.str());
    os.str("");
    os << "C = 0 rows: max deviation " << max_dev_at_c0 << "; r = 0 rows: max deviation " << max_dev_at_r0;
    rep.summary.push_back(os.str());
    os.str("");
    os << "rates in rad/s: sigma12, sigma13 unchanged (degree-0 homogeneous); sigma1 max relative deviation "
       << rep.max_rel_dev_si << ", zero on C = 0 rows (" << max_si_at_c0
       << "), growing with C (gamma + kappa)(kappa^2 - kappa) cosh 2r";
    rep.summary.push_back(os.str());
    rep.summary.push_back(
        "closed-form sigma1 bracket gamma(1+2n_th) + kappa^2 cosh 2r is exact only for kappa = 1; "
        "closed_sigma_corrected uses kappa cosh 2r");
    return rep;
}

std::vector<PhysicalParams> closed_form_study_grid(const PhysicalParams& base) {
    std::vector<PhysicalParams> grid;
    auto with = [&](double C, double r, double xi, double gk) {
        PhysicalParams p = base;
        p.drive = Cooperativity{C};
        p.squeezing_r = r;
        p.hopping_lambda = xi * p.kappa;
        p.gamma = gk * p.kappa;
        grid.push_back(p);
    };
    const double gk0 = base.gamma / base.kappa;
    const double xi0 = base.xi();
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0})
        for (double xi : {0.0, 0.2}) with(0.0, r, xi, gk0);
    for (double C : {1.0, 10.0, 32.11, 100.0})
        for (double xi : {0.0, 0.1, 0.3}) with(C, 0.0, xi, gk0);
    for (int i = 0; i <= 30; ++i) with(32.11, 0.1 * i, 0.0, gk0);
    for (double gk : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) with(32.11, 1.0, xi0, gk);
    for (double r : {0.25, 1.0, 2.0})
        for (double xi : {0.05, 0.2, 0.5, 1.0})
            for (double C : {5.0, 32.11}) with(C, r, xi, gk0);
    return grid;
}

void write_closed_form_report(const ClosedFormReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << std::setprecision(17);
    for (const auto& line : report.summary) out << "# " << line << '\n';
    out << "C,r,xi,gamma_over_kappa,n_th,sigma1_closed,sigma1_lyap,rel_dev_1,sigma12_closed,sigma12_lyap,"
           "rel_dev_12,sigma13_closed,sigma13_lyap,rel_dev_13,sigma1_closed_si,rel_dev_1_si,stable,note\n";
    for (const auto& r : report.rows) {
        out << r.C << ',' << r.r << ',' << r.xi << ',' << r.gamma_over_kappa << ',' << r.n_th << ','
            << r.sigma1_closed << ',';
        if (r.stable)
            out << r.sigma1_lyap << ',' << r.rel_dev_1 << ',' << r.sigma12_closed << ',' << r.sigma12_lyap << ','
                << r.rel_dev_12 << ',' << r.sigma13_closed << ',' << r.sigma13_lyap << ',' << r.rel_dev_13 << ','
                << r.sigma1_closed_si << ',' << r.rel_dev_1_si << ",1,";
        else
            out << ",," << r.sigma12_closed << ",,," << r.sigma13_closed << ",,," << r.sigma1_closed_si << ",,0,";
        out << r.note << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace optomech
