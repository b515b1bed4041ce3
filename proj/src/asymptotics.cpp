#include "bogo/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "bogo/errors.hpp"
#include "bogo/specfun.hpp"
#include "bogo/taylor.hpp"

namespace bogo {

namespace {

constexpr double integer_tol = 1e-9;
// q step of the central differences; 0.1 leaves O(1e-4) errors in the double-pole terms
constexpr double derivative_step = 0.02;

double factorial(int k)
{
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Transform at q with the parts order chosen so that N - q lies in (1/2, 3/2].
double hat(const MellinTransform& tr, double q, const Tolerance& tol)
{
    MellinTransform t = tr;
    t.parts_order = std::max(0, static_cast<int>(std::floor(q + 0.5)) + 1);
    return mellin_hat(t, q, tol);
}

double hat_derivative(const MellinTransform& tr, int k, const Tolerance& tol)
{
    MellinTransform t = tr;
    t.parts_order = k + 1;
    return mellin_hat_derivative(t, k, tol, derivative_step);
}

double heat_prefactor(int n) { return std::pow(4 * M_PI, -0.5 * n); }

}  // namespace

const char* to_string(LemmaCase c)
{
    switch (c) {
    case LemmaCase::noninteger: return "noninteger";
    case LemmaCase::positive_integer: return "positive_integer";
    case LemmaCase::nonpositive_integer: return "nonpositive_integer";
    }
    return "?";
}

LemmaCase classify(double mu, double nu, int* m)
{
    const double x = mu + nu - 1;
    const double r = std::round(x);
    if (std::abs(x - r) > integer_tol) return LemmaCase::noninteger;
    if (m) *m = static_cast<int>(std::abs(r));
    return r >= 0 ? LemmaCase::positive_integer : LemmaCase::nonpositive_integer;
}

double AsymptoticExpansion::evaluate(double eps) const
{
    if (!(eps > 0)) throw DomainError("AsymptoticExpansion::evaluate: eps must be positive");
    const double le = std::log(eps);
    double s = 0;
    for (const auto& t : terms) s += t.coefficient * std::pow(eps, t.power) * (t.log_power ? le : 1.0);
    return s;
}

bool AsymptoticExpansion::has_logs() const
{
    return std::any_of(terms.begin(), terms.end(), [](const ExpansionTerm& t) { return t.log_power != 0; });
}

double lemma_c1(const MellinTransform& f_hat, const MellinTransform& h_hat, int k, const Tolerance& tol)
{
    const double s = f_hat.offset + h_hat.offset;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign / factorial(k) * std::tgamma(-k + s - 1) * hat(h_hat, k - s + 1, tol) * hat(f_hat, k, tol);
}

double lemma_c3(const MellinTransform& f_hat, const MellinTransform& h_hat, int k, int m,
                const Tolerance& tol)
{
    if (!(k >= 0 && k < m)) throw DomainError("lemma_c3: need 0 <= k < m");
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign / factorial(k) * factorial(m - k - 1) * hat(h_hat, k - m, tol) * hat(f_hat, k, tol);
}

AsymptoticExpansion lemma_expand(const MellinTransform& f_hat, const MellinTransform& h_hat, int K,
                                 const Tolerance& tol)
{
    if (K < 1) throw DomainError("lemma_expand: K must be >= 1");
    if (f_hat.kind != MellinKind::f_type || h_hat.kind != MellinKind::h_type)
        throw DomainError("lemma_expand: need an f-type and an h-type transform");
    AsymptoticExpansion e;
    e.mu = f_hat.offset;
    e.nu = h_hat.offset;
    e.truncation_order = K;
    int m = 0;
    e.case_tag = classify(e.mu, e.nu, &m);
    e.m = m;
    const double mu = e.mu, nu = e.nu;
    auto add = [&](double power, int log_power, double c, const char* name, int k) {
        e.terms.push_back({power, log_power, c, std::string(name) + "[" + std::to_string(k) + "]"});
    };

    switch (e.case_tag) {
    case LemmaCase::noninteger:
        for (int k = 0; k < K; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            add(k - mu, 0, lemma_c1(f_hat, h_hat, k, tol), "c1", k);
            const double c2 = sign / factorial(k) * std::tgamma(-k - mu - nu + 1) * hat(h_hat, k, tol) *
                              hat(f_hat, k + mu + nu - 1, tol);
            add(k + nu - 1, 0, c2, "c2", k);
        }
        break;
    case LemmaCase::positive_integer:
        for (int k = 0; k < std::min(K, m); ++k) add(k - mu, 0, lemma_c3(f_hat, h_hat, k, m, tol), "c3", k);
        for (int k = 0; k < K; ++k) {
            const double pre = ((m % 2 == 0) ? 1.0 : -1.0) / (factorial(k + m) * factorial(k));
            const double h = hat(h_hat, k, tol), f = hat(f_hat, k + m, tol);
            const double dh = hat_derivative(h_hat, k, tol), df = hat_derivative(f_hat, k + m, tol);
            const double psi = digamma(k + 1) + digamma(k + 1 + m);
            add(k + m - mu, 0, pre * (psi * h * f - dh * f - h * df), "c4", k);
            add(k + m - mu, 1, -pre * h * f, "c5", k);
        }
        break;
    case LemmaCase::nonpositive_integer:
        for (int k = 0; k < std::min(K, m); ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const double c6 = sign / factorial(k) * factorial(m - k - 1) * hat(h_hat, k, tol) * hat(f_hat, k - m, tol);
            add(k - m - mu, 0, c6, "c6", k);
        }
        for (int k = 0; k < K; ++k) {
            const double pre = ((m % 2 == 0) ? 1.0 : -1.0) / (factorial(k + m) * factorial(k));
            const double h = hat(h_hat, k + m, tol), f = hat(f_hat, k, tol);
            const double dh = hat_derivative(h_hat, k + m, tol), df = hat_derivative(f_hat, k, tol);
            const double psi = digamma(k + 1) + digamma(k + 1 + m);
            add(k - mu, 0, pre * (psi * h * f - dh * f - h * df), "c7", k);
            add(k - mu, 1, -pre * h * f, "c8", k);
        }
        break;
    }
    std::stable_sort(e.terms.begin(), e.terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
        return a.power != b.power ? a.power < b.power : a.log_power < b.log_power;
    });
    return e;
}

double lemma_direct(const std::function<double(double)>& f, const std::function<double(double)>& h,
                    double eps, const Tolerance& tol)
{
    if (!(eps > 0)) throw DomainError("lemma_direct: eps must be positive");
    auto F = [&](double t) { return h(t) * f(eps * t); };
    // h lives on t ~ 1, f(eps t) on t ~ 1/eps; split geometrically in between
    double total = integrate_interval(F, 0.0, 1.0, tol).value;
    const double T = 64.0 / eps;
    for (double a = 1.0; a < T; a *= 4) total += integrate_interval(F, a, std::min(4 * a, T), tol).value;
    EndpointHints tail;
    tail.scale = 1.0 / eps;
    total += integrate_semi_infinite([&](double x) { return F(T + x); }, tol, tail).value;
    return total;
}

ResidualDiagnostics lemma_residuals(const std::function<double(double)>& f,
                                    const std::function<double(double)>& h, const MellinTransform& f_hat,
                                    const MellinTransform& h_hat, int K, const std::vector<double>& eps,
                                    const Tolerance& tol)
{
    const auto full = lemma_expand(f_hat, h_hat, K + 2);
    const auto trunc = lemma_expand(f_hat, h_hat, K);
    ResidualDiagnostics d;
    for (double e : eps) {
        ResidualPoint p;
        p.eps = e;
        p.direct = lemma_direct(f, h, e, tol);
        p.expansion = trunc.evaluate(e);
        p.residual = p.direct - p.expansion;
        p.next_terms = full.evaluate(e) - p.expansion;
        d.points.push_back(p);
    }
    for (std::size_t i = 0; i + 1 < d.points.size(); ++i) {
        const auto &a = d.points[i], &b = d.points[i + 1];
        const double obs = a.residual / b.residual, pred = a.next_terms / b.next_terms;
        d.observed_ratio.push_back(obs);
        d.predicted_ratio.push_back(pred);
        d.worst_ratio_error = std::max(d.worst_ratio_error, std::abs(obs / pred - 1));
    }
    return d;
}

MellinTransform TestFunction::transform() const { return make_mellin(kind, offset, 0, jet); }

const std::vector<TestFunction>& registered_test_functions()
{
    static const std::vector<TestFunction> table = {
        {"exp", MellinKind::f_type, 0.0, [](const Jet& t) { return exp(-t); },
         [](double t) { return std::exp(-t); }},
        {"t_exp", MellinKind::f_type, -1.0, [](const Jet& t) { return t * exp(-t); },
         [](double t) { return t * std::exp(-t); }},
        {"exp_over_sqrt", MellinKind::f_type, 0.5, [](const Jet& t) { return exp(-t) / sqrt(t); },
         [](double t) { return t <= 0 ? 0.0 : std::exp(-t) / std::sqrt(t); }},
        {"bump_nu1", MellinKind::h_type, 1.0, [](const Jet& t) { return exp(-1.0 / t) / sqrt(1.0 + t * t); },
         [](double t) { return t <= 0 ? 0.0 : std::exp(-1 / t) / std::sqrt(1 + t * t); }},
        {"bump_nu1.5", MellinKind::h_type, 1.5, [](const Jet& t) { return sqrt(t) * exp(-1.0 / t) / (1.0 + t * t); },
         [](double t) { return t <= 0 ? 0.0 : std::sqrt(t) * std::exp(-1 / t) / (1 + t * t); }},
        {"bump_nu2", MellinKind::h_type, 2.0, [](const Jet& t) { return t * exp(-1.0 / t) / pow(1.0 + t * t, 1.5); },
         [](double t) { return t <= 0 ? 0.0 : t * std::exp(-1 / t) / std::pow(1 + t * t, 1.5); }},
    };
    return table;
}

const TestFunction& find_test_function(const std::string& name)
{
    for (const auto& f : registered_test_functions())
        if (f.name == name) return f;
    throw UsageError(name, "unknown test function");
}

nlohmann::json to_json(const AsymptoticExpansion& e, const std::optional<ResidualDiagnostics>& diag)
{
    nlohmann::json j;
    j["case"] = to_string(e.case_tag);
    j["mu"] = e.mu;
    j["nu"] = e.nu;
    j["m"] = e.m;
    j["truncation_order"] = e.truncation_order;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : e.terms)
        j["terms"].push_back(
            {{"power", t.power}, {"log_power", t.log_power}, {"coefficient", t.coefficient}, {"label", t.label}});
    if (diag) {
        nlohmann::json d;
        d["points"] = nlohmann::json::array();
        for (const auto& p : diag->points)
            d["points"].push_back({{"eps", p.eps},
                                   {"direct", p.direct},
                                   {"expansion", p.expansion},
                                   {"residual", p.residual},
                                   {"next_terms", p.next_terms}});
        d["observed_ratio"] = diag->observed_ratio;
        d["predicted_ratio"] = diag->predicted_ratio;
        d["worst_ratio_error"] = diag->worst_ratio_error;
        j["residual_diagnostics"] = d;
    } else {
        j["residual_diagnostics"] = nullptr;
    }
    return j;
}

// ---- local coefficients ----

namespace {

double leading_coefficient(const GeometryPair& g, const MatrixXd& inverse_metric)
{
    return g.fiber_dim * g.volume / std::sqrt(inverse_metric.determinant());
}

}  // namespace

double LocalGeometryCoefficients::B0(double t, double s) const
{
    return leading_coefficient(geom, t * geom.g_plus + s * geom.g_minus);
}

double LocalGeometryCoefficients::C0(double t, double s) const
{
    const MatrixXd G = t * geom.g_plus + s * geom.g_minus;
    const MatrixXd P = geom.vielbein_plus * geom.vielbein_minus.transpose();
    const MatrixXd S = 0.5 * (P + P.transpose());
    return leading_coefficient(geom, G) * 0.5 * G.ldlt().solve(S).trace();
}

double LocalGeometryCoefficients::Psi0(double t, double s) const
{
    return std::pow(t + s, -0.5 * geom.n) * (A0_plus + A0_minus) - B0(t, s) - B0(s, t);
}

double LocalGeometryCoefficients::Phi0(double t, double s) const
{
    const double n = geom.n;
    return 0.5 * n * std::pow(t + s, -0.5 * n - 1) * (A0_plus + A0_minus) - C0(t, s) - C0(s, t);
}

LocalGeometryCoefficients local_coefficients(const GeometryPair& geom)
{
    if (geom.g_plus.rows() != geom.n || geom.g_minus.rows() != geom.n)
        throw DomainError("local_coefficients: metric size must equal n");
    LocalGeometryCoefficients c;
    c.geom = geom;
    c.A0_plus = leading_coefficient(geom, geom.g_plus);
    c.A0_minus = leading_coefficient(geom, geom.g_minus);
    return c;
}

// ---- shift families ----

ShiftFamily circle_shift_family(ShiftFamily::Kind kind, double scale, double M_sq, double m, double q,
                                bool antiperiodic)
{
    if (!(scale > 0) || !(m > 0)) throw DomainError("circle_shift_family: scale and m must be positive");
    if (kind == ShiftFamily::Kind::dirac_shift && q != 0)
        throw DomainError("circle_shift_family: the Dirac shift has no base potential");
    ShiftFamily f;
    f.kind = kind;
    f.n = 1;
    const int fiber = kind == ShiftFamily::Kind::dirac_shift ? 2 : 1;
    f.A0 = fiber * 2 * M_PI / scale;
    f.M_sq = M_sq;
    f.q = q;
    f.m = m;
    f.scale = scale;
    f.antiperiodic = antiperiodic;
    return f;
}

namespace {

// Leading-symbol brackets as jets in the scaling parameter e:
//   Psi(e t, e s) = (4 pi)^{-n/2} e^{-n/2} bracket_psi(e), likewise Phi with e^{-1-n/2}.
Jet bracket_psi(const ShiftFamily& f, int order, double t, double s)
{
    const Jet e = Jet::variable(0.0, order);
    const double q = f.kind == ShiftFamily::Kind::constant_shift ? f.q : 0.0;
    return (exp(-t * f.M_sq * e) - 1.0) * (exp(-s * f.M_sq * e) - 1.0) * exp(-(t + s) * q * e) *
           (std::pow(t + s, -0.5 * f.n) * f.A0);
}

Jet bracket_phi(const ShiftFamily& f, int order, double t, double s)
{
    if (f.kind != ShiftFamily::Kind::dirac_shift) throw DomainError("Phi_k: needs the Dirac shift family");
    const Jet e = Jet::variable(0.0, order);
    const double n = f.n;
    const Jet a = (exp(-t * f.M_sq * e) - 1.0) * (exp(-s * f.M_sq * e) - 1.0) *
                  (0.5 * n * std::pow(t + s, -0.5 * n - 1));
    const Jet b = e * exp(-(t + s) * f.M_sq * e) * (f.M_sq * std::pow(t + s, -0.5 * n));
    return (a + b) * f.A0;
}

}  // namespace

double shift_Psi_k(const ShiftFamily& fam, int k, double t, double s)
{
    if (k < 0) throw DomainError("shift_Psi_k: k must be >= 0");
    return bracket_psi(fam, k, t, s).coeff(k);
}

double shift_Phi_k(const ShiftFamily& fam, int k, double t, double s)
{
    if (k < 0) throw DomainError("shift_Phi_k: k must be >= 0");
    return bracket_phi(fam, k, t, s).coeff(k);
}

double psi_hat_local(const ShiftFamily& fam, int k, double u)
{
    double s = 0;
    const double m2 = fam.m * fam.m;
    for (int j = 0; j <= k; ++j) {
        const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
        s += sign * factorial(k) / factorial(j) * std::pow(m2, j) * shift_Psi_k(fam, k - j, u, 1 - u);
    }
    return heat_prefactor(fam.n) * s;
}

double phi_hat_local(const ShiftFamily& fam, int k, double u)
{
    double s = 0;
    const double m2 = fam.m * fam.m;
    for (int j = 0; j <= k; ++j) {
        const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
        const double bracket = shift_Phi_k(fam, k - j, u, 1 - u) - j * shift_Psi_k(fam, k - j, u, 1 - u);
        s += sign * factorial(k) / factorial(j) * std::pow(m2, j) * bracket;
    }
    return heat_prefactor(fam.n) * s;
}

namespace {

// Heat trace of the minus operator of the circle model and its derivative, as jets
// in tau. Dual (Poisson) form below tau = pi / a^2, direct sum above.
struct ThetaJets {
    Jet theta, dtheta;
};

ThetaJets circle_theta(const ShiftFamily& f, const Jet& tau)
{
    const double a2 = f.scale * f.scale;
    const int order = tau.order();
    const double fiber = f.kind == ShiftFamily::Kind::dirac_shift ? 2.0 : 1.0;
    Jet S(0.0, order), dS(0.0, order);
    if (tau.value() * a2 < M_PI) {
        // sqrt(pi / (a^2 tau)) sum_j (+-1)^j e^{-pi^2 j^2 / (a^2 tau)}
        const Jet root = sqrt(M_PI / (a2 * tau));
        const Jet inv = 1.0 / tau;
        for (int j = 0; j < 64; ++j) {
            const double c = M_PI * M_PI * j * j / a2;
            if (j > 0 && c / tau.value() > 745) break;
            const double w = (j == 0 ? 1.0 : 2.0) * ((f.antiperiodic && j % 2) ? -1.0 : 1.0);
            const Jet term = root * exp(-c * inv);
            S += w * term;
            dS += w * term * (c * inv * inv - 0.5 * inv);
        }
    } else {
        for (int k = 0; k < 4096; ++k) {
            const double kk = f.antiperiodic ? k + 0.5 : k;
            const double lam = a2 * kk * kk;
            if (k > 0 && lam * tau.value() > 745) break;
            const double w = (f.antiperiodic || k > 0) ? 2.0 : 1.0;
            const Jet term = exp(-lam * tau);
            S += w * term;
            dS += (-w * lam) * term;
        }
    }
    const double q = f.kind == ShiftFamily::Kind::constant_shift ? f.q : 0.0;
    const Jet eq = exp(-q * tau);
    return {fiber * eq * S, fiber * eq * (dS - q * S)};
}

// Closed forms of psi(rho, u) = e^{-m^2 rho} Psi(rho u, rho (1-u)) and of the Dirac
// weight phi(rho, u) = e^{-m^2 rho} [Phi + m^2 Psi](rho u, rho (1-u)).
Jet psi_rho(const ShiftFamily& f, const Jet& rho, double u)
{
    const ThetaJets th = circle_theta(f, rho);
    const Jet shift = (exp(-u * f.M_sq * rho) - 1.0) * (exp(-(1 - u) * f.M_sq * rho) - 1.0);
    return exp(-f.m * f.m * rho) * shift * th.theta;
}

Jet phi_rho(const ShiftFamily& f, const Jet& rho, double u)
{
    const ThetaJets th = circle_theta(f, rho);
    const Jet shift = (exp(-u * f.M_sq * rho) - 1.0) * (exp(-(1 - u) * f.M_sq * rho) - 1.0);
    const Jet Psi = shift * th.theta;
    const Jet Phi = -1.0 * shift * th.dtheta + f.M_sq * exp(-f.M_sq * rho) * th.theta;
    return exp(-f.m * f.m * rho) * (Phi + f.m * f.m * Psi);
}

void require_circle(const ShiftFamily& f, const char* what)
{
    if (f.n != 1) throw UnsupportedError(std::string(what) + ": closed forms exist for the circle models only");
}

}  // namespace

double psi_hat_numeric(const ShiftFamily& fam, int k, double u, const Tolerance& tol)
{
    require_circle(fam, "psi_hat_numeric");
    auto fn = [fam, u](const Jet& rho) { return psi_rho(fam, rho, u); };
    // the image terms e^{-pi^2/rho} defeat a jet continuation from rho = 0.25; floor at 0.1
    const auto tr = make_mellin(MellinKind::f_type, 0.5 * fam.n, k + 1, fn, 0.4);
    return mellin_hat(tr, k, tol);
}

double phi_hat_numeric(const ShiftFamily& fam, int k, double u, const Tolerance& tol)
{
    require_circle(fam, "phi_hat_numeric");
    if (fam.kind != ShiftFamily::Kind::dirac_shift) throw DomainError("phi_hat_numeric: needs the Dirac shift family");
    auto fn = [fam, u](const Jet& rho) { return phi_rho(fam, rho, u); };
    const auto tr = make_mellin(MellinKind::f_type, 0.5 * fam.n + 1, k + 1, fn, 0.4);
    return mellin_hat(tr, k, tol);
}

// ---- kernel transforms and coefficients ----

namespace {

KernelKind first_kernel(Flavor f) { return f == Flavor::bose ? KernelKind::fermi : KernelKind::zero; }
KernelKind second_kernel(Flavor f) { return f == Flavor::bose ? KernelKind::bose : KernelKind::zero; }

EndpointHints radial_hints(double u, int n)
{
    EndpointHints h;
    h.scale = 1.0 / std::min(u, 1 - u);
    h.decay_power = 1 + 0.5 * n;
    return h;
}

}  // namespace

double kernel_hat(Flavor flavor, double q, double u, const Tolerance& tol)
{
    if (!(u > 0 && u < 1)) throw DomainError("kernel_hat: u must lie in (0, 1)");
    if (!(q < 1)) throw DomainError("kernel_hat: q must be below 1");
    const KernelKind k1 = first_kernel(flavor), k2 = second_kernel(flavor);
    // rho^nu times the kernel product: nu = 1 (bose) carries rho^2, nu = 0 (fermi) rho
    const int p = flavor == Flavor::bose ? 2 : 1;
    EndpointHints hints;
    hints.scale = 1.0 / std::min(u, 1 - u);
    if (q < 0) {
        auto F = [&](double r) { return std::pow(r, q + p - 1) * eval_h(k1, r * u) * eval_h(k2, r * (1 - u)); };
        return integrate_semi_infinite(F, tol, hints).value / std::tgamma(-q);
    }
    auto F = [&](double r) {
        const double a = eval_h(k1, r * u), b = eval_h(k2, r * (1 - u));
        const double da = eval_h_derivative(k1, r * u), db = eval_h_derivative(k2, r * (1 - u));
        const double d = p * std::pow(r, p - 1) * a * b + std::pow(r, p) * (u * da * b + (1 - u) * a * db);
        return std::pow(r, q) * d;
    };
    return integrate_semi_infinite(F, tol, hints).value / std::tgamma(1 - q);
}

double fermi_kernel_hat_integrated(double q, const Tolerance& tol)
{
    if (!(q < 1)) throw DomainError("fermi_kernel_hat_integrated: q must be below 1");
    // K(rho) = (h_0 * h_0)(rho) tends to 1/4 up to e^{-pi^2 rho}, so K' is cut at rho = 5,
    // where it sits at the rounding floor of the inner integral
    Tolerance inner = tol;
    inner.abs_tol = std::max(0.1 * tol.abs_tol, 1e-15);
    inner.max_subdivisions = 200;
    inner.throw_on_failure = false;
    auto dK = [&](double r) {
        if (r <= 0) return 0.0;
        auto G = [&](double u) {
            return eval_h(KernelKind::zero, r * u) * eval_h_derivative(KernelKind::zero, r * (1 - u));
        };
        return r * integrate_interval(G, 0.0, 1.0, inner).value;
    };
    double total = 0;
    const double edges[] = {0.0, 0.25, 1.0, 2.5, 5.0};
    for (int i = 0; i < 4; ++i)
        total += integrate_interval([&](double r) { return std::pow(r, q) * dK(r); }, edges[i], edges[i + 1], tol)
                     .value;
    return total / std::tgamma(1 - q);
}

namespace {

// int_0^1 du w(u) int_0^inf rho^{power} h_a(rho u) h_b(rho (1-u)) drho
double polar_kernel_integral(Flavor flavor, const std::function<double(double)>& weight, double power, int n,
                             const Tolerance& tol)
{
    const KernelKind k1 = first_kernel(flavor), k2 = second_kernel(flavor);
    Tolerance inner = tol;
    inner.abs_tol *= 0.01;
    inner.rel_tol *= 0.1;
    auto outer = [&](double u) {
        const double w = weight(u);
        if (w == 0) return 0.0;
        auto F = [&](double r) { return std::pow(r, power) * eval_h(k1, r * u) * eval_h(k2, r * (1 - u)); };
        return w * integrate_semi_infinite(F, inner, radial_hints(u, n)).value;
    };
    // the inner integral grows like 1/u near the ends; split at 1/2 to resolve both
    return integrate_interval(outer, 0.0, 0.5, tol).value + integrate_interval(outer, 0.5, 1.0, tol).value;
}

}  // namespace

double c0_coefficient_b(const GeometryPair& geom, const Tolerance& tol)
{
    const auto lc = local_coefficients(geom);
    const int n = geom.n;
    if (lc.Psi0(0.3, 0.7) == 0 && lc.Psi0(0.7, 0.3) == 0 && lc.Psi0(0.5, 0.5) == 0) return 0.0;
    return heat_prefactor(n) *
           polar_kernel_integral(Flavor::bose, [&](double u) { return lc.Psi0(u, 1 - u); }, 1 - 0.5 * n, n, tol);
}

double d0_coefficient_f(const GeometryPair& geom, const Tolerance& tol)
{
    const auto lc = local_coefficients(geom);
    const int n = geom.n;
    if (lc.Phi0(0.3, 0.7) == 0 && lc.Phi0(0.7, 0.3) == 0 && lc.Phi0(0.5, 0.5) == 0) return 0.0;
    return heat_prefactor(n) *
           polar_kernel_integral(Flavor::fermi, [&](double u) { return lc.Phi0(u, 1 - u); }, -0.5 * n, n, tol);
}

double c1_coefficient_b(const ShiftFamily& fam, const Tolerance&)
{
    if (fam.kind != ShiftFamily::Kind::constant_shift)
        throw UnsupportedError("c1_coefficient_b: only the constant shift family is supported");
    // psi-hat_1 = (4 pi)^{-n/2} [-Psi_1 + m^2 Psi_0]; the shift brackets start at second order
    for (double u : {0.1, 0.3, 0.5, 0.7, 0.9})
        if (psi_hat_local(fam, 1, u) != 0)
            throw UnsupportedError("c1_coefficient_b: nonvanishing first-order local data");
    return 0.0;
}

double d1_coefficient_f(const ShiftFamily& fam, const Tolerance& tol)
{
    if (fam.kind != ShiftFamily::Kind::dirac_shift)
        throw UnsupportedError("d1_coefficient_f: only the Dirac shift family is supported");
    if (fam.n % 2 == 0) throw UnsupportedError("d1_coefficient_f: even n carries logarithmic terms");
    // phi-hat_1 is constant on the simplex t + s = 1, so the u integral is done first:
    // int du chi-hat_q(u) is the continued transform of (h_0 * h_0)(rho).
    const double phi1 = phi_hat_local(fam, 1, 0.5);
    const double q = 1 - 0.5 * fam.n;
    return -std::tgamma(-1 + 0.5 * fam.n) * phi1 * fermi_kernel_hat_integrated(q, tol);
}

// ---- fits ----

std::vector<double> geometric_grid(double lo, double hi, int count)
{
    if (!(lo > 0 && hi > lo) || count < 2) throw DomainError("geometric_grid: need 0 < lo < hi, count >= 2");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, double(i) / (count - 1));
    return g;
}

FitResult fit_leading(const std::vector<double>& betas, const std::vector<double>& values, int n, int num_terms,
                      bool include_global)
{
    if (betas.size() != values.size()) throw DomainError("fit_leading: betas and values differ in length");
    if (num_terms != 1 && num_terms != 2) throw DomainError("fit_leading: num_terms must be 1 or 2");
    if (n < 1) throw DomainError("fit_leading: n must be >= 1");
    const bool even = n % 2 == 0;
    if (even && include_global && num_terms == 2)
        throw UnsupportedError("fit_leading: for even n the second local power coincides with a global one");

    using Column = std::function<double(double)>;
    std::vector<Column> cols;
    FitResult r;
    cols.push_back([](double) { return 1.0; });
    r.columns.push_back("1");
    if (num_terms == 2) {
        cols.push_back([](double b) { return b * b; });
        r.columns.push_back("beta^2");
    }
    if (include_global) {
        if (even) {
            cols.push_back([n](double b) { return std::pow(b, n) * std::log(b * b); });
            r.columns.push_back("beta^" + std::to_string(n) + " log beta^2");
            cols.push_back([n](double b) { return std::pow(b, n); });
            r.columns.push_back("beta^" + std::to_string(n));
        } else {
            for (int j = 0; j < num_terms; ++j) {
                cols.push_back([p = n + 2 * j](double b) { return std::pow(b, p); });
                r.columns.push_back("beta^" + std::to_string(n + 2 * j));
            }
        }
    }
    const Index N = static_cast<Index>(betas.size()), P = static_cast<Index>(cols.size());
    if (N < P + 1) throw NumericError("fit_leading: need more beta points than fit columns");

    MatrixXd A(N, P);
    VectorXd y(N);
    for (Index i = 0; i < N; ++i) {
        const double b = betas[static_cast<std::size_t>(i)];
        if (!(b > 0)) throw DomainError("fit_leading: betas must be positive");
        y[i] = std::pow(b, n) * values[static_cast<std::size_t>(i)];
        for (Index c = 0; c < P; ++c) A(i, c) = cols[static_cast<std::size_t>(c)](b);
    }
    // unit-norm columns before the SVD
    VectorXd norms = A.colwise().norm().transpose();
    for (Index c = 0; c < P; ++c) A.col(c) /= norms[c];
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd sv = svd.singularValues();
    r.condition = sv[0] / sv[P - 1];
    if (!(r.condition < 1e12)) throw NumericError("fit_leading: ill-conditioned fit (condition " + std::to_string(r.condition) + ")");
    const VectorXd x = svd.solve(y);
    const VectorXd res = A * x - y;
    r.residual_rms = std::sqrt(res.squaredNorm() / N);
    const double sigma2 = res.squaredNorm() / static_cast<double>(N - P);
    const MatrixXd V = svd.matrixV();
    const VectorXd inv_s2 = sv.array().square().inverse().matrix();
    const MatrixXd cov = sigma2 * V * inv_s2.asDiagonal() * V.transpose();
    for (Index c = 0; c < P; ++c) {
        r.all_coefficients.push_back(x[c] / norms[c]);
        if (c < num_terms) {
            r.coefficients.push_back(x[c] / norms[c]);
            r.uncertainties.push_back(std::sqrt(std::max(0.0, cov(c, c))) / norms[c]);
        }
    }
    return r;
}

FitResult fit_leading(const BetaSweep& sweep, int n, int num_terms, bool include_global, Route route)
{
    if (!sweep.ok()) throw NumericError("fit_leading: the sweep has failed rows");
    std::vector<double> values;
    for (std::size_t i = 0; i < sweep.betas.size(); ++i) values.push_back(sweep.value(i, route));
    return fit_leading(sweep.betas, values, n, num_terms, include_global);
}

ContinuumFit continuum_fit(const std::function<OperatorPair(int cutoff)>& make_pair, Flavor flavor, int n,
                           const std::vector<double>& betas, int num_terms, double factor, double refine_factor,
                           double max_change, int threads)
{
    if (!(factor > 0 && refine_factor > factor)) throw DomainError("continuum_fit: need 0 < factor < refine_factor");
    auto fit_at = [&](double fac) {
        auto per_beta = [&](double beta) { return make_pair(static_cast<int>(std::ceil(fac / beta))); };
        const auto sweep = run_sweep(per_beta, flavor, betas, {Route::spectral}, threads);
        return fit_leading(sweep, n, num_terms, true, Route::spectral);
    };
    ContinuumFit c;
    c.coarse = fit_at(factor);
    c.fine = fit_at(refine_factor);
    double scale = 1e-6, change = 0;
    for (std::size_t i = 0; i < c.fine.coefficients.size(); ++i) {
        scale = std::max(scale, std::abs(c.fine.coefficients[i]));
        change = std::max(change, std::abs(c.fine.coefficients[i] - c.coarse.coefficients[i]));
    }
    c.relative_change = change / scale;
    c.accepted = c.relative_change < max_change;
    return c;
}

}  // namespace bogo
