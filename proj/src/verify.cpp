#include "bogo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "bogo/asymptotics.hpp"
#include "bogo/bogolyubov.hpp"
#include "bogo/errors.hpp"
#include "bogo/specfun.hpp"
#include "bogo/traces.hpp"

namespace bogo {

namespace {

using json = nlohmann::json;

std::string fmt(const char* f, double a)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

MatrixXd scalar(double v)
{
    MatrixXd g(1, 1);
    g << v;
    return g;
}

// Fixed models of the suite.
OperatorPair torus_pair(int cutoff) { return build_torus_pair(1, scalar(4), scalar(1), 0, 0, cutoff, 1.0); }
OperatorPair dirac_scale_pair(int cutoff) { return build_dirac_circle_pair(2, 1, 0, false, cutoff, 1.0); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Context {
    VerifyLevel level;
    int threads;
};

void kernel_laplace(const Context&, CriterionResult& r)
{
    double worst = 0;
    for (KernelKind kind : {KernelKind::bose, KernelKind::fermi, KernelKind::zero})
        for (double x : {0.5, 1.0, 2.0, 5.0}) {
            EndpointHints h;
            h.scale = 1.0 / (x * x);
            Tolerance tol{1e-14, 1e-12};
            const double v =
                integrate_semi_infinite([&](double t) { return eval_h(kind, t) * std::exp(-t * x * x); }, tol, h).value;
            const double err = std::abs(v - eval_E(kind, x));
            worst = std::max(worst, err);
            r.data["points"].push_back({{"kind", to_string(kind)}, {"x", x}, {"error", err}});
        }
    r.passed = worst <= 1e-8;
    r.detail = fmt("max |int h e^{-t x^2} - E(x)| = %.2e (bound 1e-8)", worst);
}

void dual_representation(const Context&, CriterionResult& r)
{
    double worst = 0, worst0 = 0;
    for (int i = 0; i < 20; ++i) {
        const double t = 0.25 * std::pow(16.0, i / 19.0);
        for (KernelKind kind : {KernelKind::bose, KernelKind::fermi}) {
            const double a = eval_h_theta(kind, t).value, b = eval_h_asymptotic(kind, t).value;
            worst = std::max(worst, std::abs(a - b));
        }
        const double avg = 0.5 * (eval_h(KernelKind::bose, t) + eval_h(KernelKind::fermi, t));
        worst0 = std::max(worst0, std::abs(eval_h(KernelKind::zero, t) - avg));
    }
    r.data = {{"max_dual_difference", worst}, {"max_h0_difference", worst0}};
    r.passed = worst <= 1e-10 && worst0 <= 1e-13;
    r.detail = fmt("theta vs large-t %.2e (1e-10), h0 vs mean %.2e (1e-13)", worst, worst0);
}

void leading_h(const Context&, CriterionResult& r)
{
    const double t = 100;
    const double b = eval_h(KernelKind::bose, t) * std::sqrt(M_PI * t);
    const double f = eval_h(KernelKind::fermi, t) * 8 * std::sqrt(M_PI) * std::pow(t, 1.5);
    r.data = {{"bose_ratio", b}, {"fermi_ratio", f}};
    r.passed = b >= 0.995 && b <= 1.005 && f >= 0.99 && f <= 1.01;
    r.detail = fmt("h_b ratio %.6f, h_f ratio %.6f", b, f);
}

void route_agreement(const Context& c, CriterionResult& r)
{
    std::vector<double> betas = {0.5, 1.0, 2.0};
    if (c.level == VerifyLevel::quick) betas = {1.0};
    double worst = 0;
    bool ok = true;
    for (Flavor fl : {Flavor::bose, Flavor::fermi}) {
        const auto pair = fl == Flavor::bose ? torus_pair(64) : dirac_scale_pair(64);
        const auto sweep = run_sweep(pair, fl, betas, {Route::spectral, Route::heat}, c.threads);
        ok = ok && sweep.ok();
        for (std::size_t i = 0; i < sweep.betas.size(); ++i) {
            const double s = sweep.value(i, Route::spectral), h = sweep.value(i, Route::heat);
            const double d = rel(h, s);
            worst = std::max(worst, d);
            r.data["rows"].push_back(
                {{"flavor", to_string(fl)}, {"beta", sweep.betas[i]}, {"spectral", s}, {"heat", h}, {"relative", d}});
        }
    }
    r.passed = ok && worst <= 1e-6;
    r.detail = fmt("max |spectral - heat| / spectral = %.2e (bound 1e-6)", worst);
}

void equal_operators(const Context&, CriterionResult& r)
{
    double worst = 0;
    const auto bose = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 64, 1.0);
    const auto fermi = build_dirac_circle_pair(1, 1, 0, false, 64, 1.0);
    for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        for (const auto* p : {&bose, &fermi}) {
            // diagonal scale: sum of E_b(2 beta omega) over both sides
            double scale = 0;
            for (Index k = 0; k < p->omega_plus.size(); ++k) scale += 2 * eval_E(KernelKind::bose, 2 * beta * p->omega_plus[k]);
            const Flavor fl = p == &bose ? Flavor::bose : Flavor::fermi;
            for (SpectralForm form : {SpectralForm::paired, SpectralForm::expanded})
                worst = std::max(worst, std::abs(B_spectral(*p, fl, beta, form)) / scale);
            const double h = fl == Flavor::bose ? B_b_heat(*p, beta).value : B_f_heat(*p, beta).value;
            worst = std::max(worst, std::abs(h) / scale);
        }
    }
    r.data = {{"max_relative", worst}};
    r.passed = worst <= 1e-14;
    r.detail = fmt("max |B| / diagonal scale = %.2e (bound 1e-14)", worst);
}

void shift_oracles(const Context&, CriterionResult& r)
{
    const double M_sq = 1.0;
    const auto base = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 64, 1.0);
    const auto shift = constant_shift_pair(base.minus, M_sq, 1.0, base.family);
    const auto dirac = build_dirac_circle_pair(1, 1, std::sqrt(M_sq), false, 64, 1.0);
    const double grid[] = {0.05, 0.2, 0.5, 1.0, 2.0};
    double worst_psi = 0, worst_phi = 0;
    for (double t : grid)
        for (double s : grid) {
            const double a = psi_shift_oracle(shift.minus, M_sq, t, s);
            worst_psi = std::max(worst_psi, std::abs(Psi(shift, t, s) - a) / std::max(1.0, std::abs(a)));
            const double b = phi_dirac_shift_oracle(dirac.minus, M_sq, t, s);
            worst_phi = std::max(worst_phi, std::abs(Phi(dirac, t, s) - b) / std::max(1.0, std::abs(b)));
        }
    r.data = {{"psi_error", worst_psi}, {"phi_error", worst_phi}};
    r.passed = worst_psi <= 1e-10 && worst_phi <= 1e-10;
    r.detail = fmt("Psi vs closed form %.2e, Phi vs closed form %.2e (bound 1e-10)", worst_psi, worst_phi);
}

void diagonal_equivalence(const Context&, CriterionResult& r)
{
    // omega_- = 1, omega_+ = 2 with m = 1
    Spectrum plus, minus;
    plus.values = VectorXd::Constant(1, 3.0);
    minus.values = VectorXd::Constant(1, 0.0);
    const auto pair = make_operator_pair(plus, minus, OverlapMatrix::identity(1), 1.0);
    const double a = B_b_spectral(pair, 1.0, SpectralForm::paired);
    const double b = B_b_spectral(pair, 1.0, SpectralForm::expanded);
    const double s = B_b_single_mode(2, 1, 1);
    const double d = std::max(std::abs(a - b), std::abs(s - b));
    r.data = {{"sinh_form", a}, {"E_form", b}, {"single_mode", s}, {"difference", d}};
    r.passed = d <= 1e-14;
    r.detail = fmt("B_b = %.15f, |sinh form - E form| = %.1e (bound 1e-14)", b, d);
}

void coefficient_chain(const Context& c, CriterionResult& r)
{
    const auto betas = geometric_grid(0.002, 0.02, c.level == VerifyLevel::quick ? 8 : 12);
    bool ok = true;
    for (Flavor fl : {Flavor::bose, Flavor::fermi}) {
        const auto geom = fl == Flavor::bose ? make_geometry(scalar(4), scalar(1), 2 * M_PI, 1)
                                             : make_geometry(scalar(4), scalar(1), 2 * M_PI, 2);
        const double V = fl == Flavor::bose ? V_b(geom) : V_f(geom);
        const double k = fl == Flavor::bose ? c0_coefficient_b(geom) : d0_coefficient_f(geom);
        const auto fit = continuum_fit(fl == Flavor::bose ? std::function<OperatorPair(int)>(torus_pair)
                                                          : std::function<OperatorPair(int)>(dirac_scale_pair),
                                       fl, 1, betas, 2, 40, 80, 0.005, c.threads);
        const double f = fit.fine.coefficients[0];
        const double quad = rel(k, V), fv = rel(f, V), fk = rel(f, k);
        const bool pass = quad <= 1e-4 && fv <= 0.01 && fk <= 0.01 && fit.accepted;
        ok = ok && pass;
        r.data[to_string(fl)] = {{"momentum_integral", V}, {"kernel_integral", k},  {"fit", f},
                                 {"fit_uncertainty", fit.fine.uncertainties[0]},   {"fit_cutoff_change", fit.relative_change},
                                 {"quadrature_gap", quad},                          {"fit_gap", std::max(fv, fk)}};
        r.detail += std::string(r.detail.empty() ? "" : "; ") + to_string(fl) +
                    fmt(": quadratures %.1e (1e-4), ", quad) + fmt("fit %.1e (1e-2)", std::max(fv, fk));
    }
    r.passed = ok;
}

double lemma_worst(const char* f_name, const char* h_name, int K, json& out)
{
    const auto& f = find_test_function(f_name);
    const auto& h = find_test_function(h_name);
    const auto F = f.transform(), H = h.transform();
    const auto d = lemma_residuals(f.value, h.value, F, H, K, {0.1, 0.05, 0.025});
    out = to_json(lemma_expand(F, H, K), d);
    return d.worst_ratio_error;
}

void lemma_engine(const Context&, CriterionResult& r)
{
    // f = e^{-t} with nu = 3/2 (mu + nu noninteger) and nu = 2 (mu + nu = 1 + 1)
    json a, b;
    const double wa = lemma_worst("exp", "bump_nu1.5", 2, a);
    const double wb = lemma_worst("exp", "bump_nu2", 2, b);
    r.data = {{"noninteger", a}, {"integer", b}};
    r.passed = wa <= 0.1 && wb <= 0.1;
    r.detail = fmt("residual ratio vs next-term ratio: noninteger %.2e, integer %.2e (bound 0.1)", wa, wb);
}

void overlap_completeness(const Context&, CriterionResult& r)
{
    const FourierPotential vp = {0.0, 1.0};  // 2 cos x
    const FourierPotential vm = {0.0};
    // the ground state of -d^2 + 2 cos x is -1.0701, so m = 1 is not admissible;
    // overlaps do not depend on m
    const auto pair = build_schrodinger_circle_pair(vp, vm, 32, 2.0);
    const auto& O = pair.overlap.entries;
    double worst = 0;
    int rows = 0;
    for (Index j = 0; j < O.rows(); ++j) {
        if (pair.minus.values[j] > 16.0 * 16.0 + 1e-9) continue;  // |k| <= 16
        double s = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) s += it.value();
        worst = std::max(worst, std::abs(s - 1));
        ++rows;
    }
    r.data = {{"interior_rows", rows}, {"max_deviation", worst}};
    r.passed = rows == 33 && worst <= 1e-8;
    r.detail = fmt("%.0f interior rows, max |row sum - 1| = %.2e (bound 1e-8)", rows, worst);
}

void heat_equation(const Context&, CriterionResult& r)
{
    const auto pair = build_dirac_circle_pair(1, 1, 0, false, 64, 1.0);
    const auto& s = pair.minus;
    double worst = 0;
    for (double t : {0.5, 1.0})
        for (double a : {0.0, 0.3}) {
            const double ht = 1e-5, ha = 2e-4;
            const auto dt = (Xi_trace(s, t + ht, a) - Xi_trace(s, t - ht, a)) / (2 * ht);
            const auto daa = (Xi_trace(s, t, a + ha) - 2.0 * Xi_trace(s, t, a) + Xi_trace(s, t, a - ha)) / (ha * ha);
            worst = std::max(worst, std::abs(dt - daa));
        }
    r.data = {{"max_residual", worst}};
    r.passed = worst <= 1e-6;
    r.detail = fmt("max |d_t Xi - d_alpha^2 Xi| = %.2e (bound 1e-6)", worst);
}

void zeta_pole(const Context&, CriterionResult& r)
{
    const auto pair = torus_pair(64);
    const double res = zeta_pole_residue(pair, Flavor::bose);
    const double c0 = c0_coefficient_b(*pair.geometry);
    const double d = rel(res, c0);
    r.data = {{"residue", res}, {"c0", c0}, {"relative", d}};
    r.passed = d <= 0.05;
    r.detail = fmt("residue %.6f vs c0 %.6f", res, c0) + fmt(", gap %.2e (bound 0.05)", d);
}

struct Criterion {
    int id;
    const char* name;
    double limit;
    void (*run)(const Context&, CriterionResult&);
};

const Criterion criteria[] = {
    {1, "kernel Laplace identity", 5, kernel_laplace},
    {2, "dual representation of h", 0, dual_representation},
    {3, "leading h asymptotics", 0, leading_h},
    {4, "route agreement", 120, route_agreement},
    {5, "equal operators", 0, equal_operators},
    {6, "shift oracles", 0, shift_oracles},
    {7, "diagonal equivalence", 0, diagonal_equivalence},
    {8, "leading coefficient chain", 600, coefficient_chain},
    {9, "expansion engine", 0, lemma_engine},
    {10, "overlap completeness", 0, overlap_completeness},
    {11, "heat equation", 0, heat_equation},
    {12, "zeta pole", 0, zeta_pole},
};

}  // namespace

bool VerifyReport::passed() const
{
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

VerifyLevel parse_level(const std::string& s)
{
    if (s == "quick") return VerifyLevel::quick;
    if (s == "full") return VerifyLevel::full;
    throw UsageError("level", "expected quick or full, got '" + s + "'");
}

const char* to_string(VerifyLevel level) { return level == VerifyLevel::quick ? "quick" : "full"; }

VerifyReport run_verification(VerifyLevel level, const std::vector<int>& only, int threads)
{
    for (int id : only)
        if (id < 1 || id > 12) throw UsageError("criteria", "no criterion " + std::to_string(id));
    VerifyReport rep;
    rep.level = level;
    const Context ctx{level, threads};
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        r.runtime_limit = c.limit;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(ctx, r);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit > 0 && r.seconds > c.limit) {
            r.passed = false;
            r.detail += fmt(" [runtime %.1f s over limit %.0f s]", r.seconds, c.limit);
        }
        rep.results.push_back(std::move(r));
    }
    return rep;
}

std::string summary_line(const CriterionResult& r)
{
    char head[128];
    std::snprintf(head, sizeof head, "%s %2d  %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    return head + r.detail;
}

json to_json(const VerifyReport& report, bool include_timing)
{
    json j;
    j["level"] = to_string(report.level);
    j["passed"] = report.passed();
    j["criteria"] = json::array();
    for (const auto& r : report.results) {
        json c = {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"data", r.data}};
        if (include_timing) c["seconds"] = r.seconds;
        j["criteria"].push_back(c);
    }
    return j;
}

}  // namespace bogo
