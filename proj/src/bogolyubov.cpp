#include "bogo/bogolyubov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <thread>

#include "bogo/errors.hpp"
#include "bogo/traces.hpp"

namespace bogo {

const char* to_string(Flavor f) { return f == Flavor::bose ? "bose" : "fermi"; }
const char* to_string(Route r) { return r == Route::spectral ? "spectral" : "heat"; }

namespace {

void require_kind(const OperatorPair& pair, Flavor flavor, const char* what)
{
    if (flavor == Flavor::bose && pair.is_dirac())
        throw DomainError(std::string(what) + ": bosonic invariant needs a Laplace pair");
    if (flavor == Flavor::fermi && !pair.is_dirac())
        throw DomainError(std::string(what) + ": fermionic invariant needs a Dirac pair");
}

void require_beta(double beta, const char* what)
{
    if (!(beta > 0)) throw DomainError(std::string(what) + ": beta must be positive");
}

double E0(double x) { return 0.5 / std::sinh(x); }

// x / sinh x without overflow
double x_csch(double x)
{
    if (x == 0) return 1.0;
    return -2.0 * x * std::exp(-x) / std::expm1(-2.0 * x);
}

// 1 / (sinh x sinh y) without overflow
double csch_product(double x, double y)
{
    return 4.0 * std::exp(-x - y) / (std::expm1(-2.0 * x) * std::expm1(-2.0 * y));
}

// omega+ omega- - mu+ mu- - m^2 >= 0, rationalized when the subtraction cancels
double dirac_defect(double mu_p, double mu_m, double w_p, double w_m, double m2)
{
    if (mu_p * mu_m >= 0) {
        const double d = mu_p - mu_m;
        return m2 * d * d / (w_p * w_m + mu_p * mu_m + m2);
    }
    return w_p * w_m - mu_p * mu_m - m2;
}

struct Sums {
    VectorXd row, col;
};

Sums overlap_sums(const OperatorPair& pair)
{
    const auto& O = pair.overlap.entries;
    Sums s{VectorXd::Zero(O.rows()), VectorXd::Zero(O.cols())};
    for (Index j = 0; j < O.outerSize(); ++j)
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            s.row[j] += it.value();
            s.col[it.col()] += it.value();
        }
    return s;
}

template <class Entry, class DiagPlus, class DiagMinus>
double paired_sum(const OperatorPair& pair, Entry entry, DiagPlus diag_plus, DiagMinus diag_minus)
{
    const auto& O = pair.overlap.entries;
    const Sums sums = overlap_sums(pair);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(O.rows() + pair.plus.size()));
    for (Index j = 0; j < O.outerSize(); ++j) {
        double r = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) r += it.value() * entry(it.col(), j);
        // modes of the minus side not fully covered by the truncated plus basis
        r += (1.0 - sums.row[j]) * diag_minus(j);
        terms.push_back(r);
    }
    for (Index k = 0; k < pair.plus.size(); ++k) terms.push_back((1.0 - sums.col[k]) * diag_plus(k));
    return pairwise_sum(terms);
}

}  // namespace

double B_b_single_mode(double omega_plus, double omega_minus, double beta)
{
    const double x = beta * omega_plus, y = beta * omega_minus;
    const double d = std::abs(x - y);
    // sinh^2(d/2) / (sinh x sinh y)
    const double e = std::expm1(-d);
    return e * e * std::exp(d - x - y) / (std::expm1(-2 * x) * std::expm1(-2 * y));
}

double B_f_single_mode(double mu_plus, double mu_minus, double m, double beta)
{
    const double m2 = m * m;
    const double wp = std::sqrt(mu_plus * mu_plus + m2), wm = std::sqrt(mu_minus * mu_minus + m2);
    const double X = 0.5 * x_csch(beta * wp), Y = 0.5 * x_csch(beta * wm);
    const double D = dirac_defect(mu_plus, mu_minus, wp, wm, m2);
    if (D == 0) return (X - Y) * (X - Y);
    return (X - Y) * (X - Y) + 2 * D / (wp * wm) * X * Y;
}

double B_b_spectral(const OperatorPair& pair, double beta, SpectralForm form)
{
    require_kind(pair, Flavor::bose, "B_b_spectral");
    require_beta(beta, "B_b_spectral");
    const auto& wp = pair.omega_plus;
    const auto& wm = pair.omega_minus;
    if (form == SpectralForm::paired) {
        return paired_sum(
            pair, [&](Index k, Index j) { return B_b_single_mode(wp[k], wm[j], beta); },
            [&](Index k) { return eval_E(KernelKind::bose, 2 * beta * wp[k]); },
            [&](Index j) { return eval_E(KernelKind::bose, 2 * beta * wm[j]); });
    }
    std::vector<double> diag;
    for (Index k = 0; k < wp.size(); ++k) diag.push_back(eval_E(KernelKind::bose, 2 * beta * wp[k]));
    for (Index j = 0; j < wm.size(); ++j) diag.push_back(eval_E(KernelKind::bose, 2 * beta * wm[j]));
    const auto& O = pair.overlap.entries;
    std::vector<double> cross;
    for (Index j = 0; j < O.outerSize(); ++j) {
        double r = 0;
        const double y = beta * wm[j];
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            const double x = beta * wp[it.col()];
            r += it.value() * (eval_E(KernelKind::fermi, x) * eval_E(KernelKind::bose, y) +
                               eval_E(KernelKind::bose, x) * eval_E(KernelKind::fermi, y));
        }
        cross.push_back(r);
    }
    return pairwise_sum(diag) - pairwise_sum(cross);
}

double B_f_spectral(const OperatorPair& pair, double beta, SpectralForm form)
{
    require_kind(pair, Flavor::fermi, "B_f_spectral");
    require_beta(beta, "B_f_spectral");
    const auto& wp = pair.omega_plus;
    const auto& wm = pair.omega_minus;
    const auto& mp = pair.plus.values;
    const auto& mm = pair.minus.values;
    const double m = pair.m;
    if (form == SpectralForm::paired) {
        return paired_sum(
            pair, [&](Index k, Index j) { return B_f_single_mode(mp[k], mm[j], m, beta); },
            [&](Index k) { return std::pow(0.5 * x_csch(beta * wp[k]), 2); },
            [&](Index j) { return std::pow(0.5 * x_csch(beta * wm[j]), 2); });
    }
    const double b2 = beta * beta, m2 = m * m;
    std::vector<double> diag;
    for (Index k = 0; k < wp.size(); ++k) diag.push_back(b2 * std::pow(wp[k] * E0(beta * wp[k]), 2));
    for (Index j = 0; j < wm.size(); ++j) diag.push_back(b2 * std::pow(wm[j] * E0(beta * wm[j]), 2));
    const auto& O = pair.overlap.entries;
    std::vector<double> cross;
    for (Index j = 0; j < O.outerSize(); ++j) {
        double r = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            const Index k = it.col();
            r += it.value() * (mp[k] * mm[j] + m2) * E0(beta * wm[j]) * E0(beta * wp[k]);
        }
        cross.push_back(2 * b2 * r);
    }
    return pairwise_sum(diag) - pairwise_sum(cross);
}

double B_spectral(const OperatorPair& pair, Flavor flavor, double beta, SpectralForm form)
{
    return flavor == Flavor::bose ? B_b_spectral(pair, beta, form) : B_f_spectral(pair, beta, form);
}

Tolerance heat_tolerance()
{
    Tolerance t;
    t.abs_tol = 1e-14;
    t.rel_tol = 1e-10;
    t.max_subdivisions = 4000;
    return t;
}

namespace {

EndpointHints heat_hints(double m, double beta)
{
    EndpointHints h;
    // kernels peak at t ~ 0.1..1; the mass factor cuts off at t ~ 1/(beta m)^2
    h.scale = std::clamp(1.0 / (beta * beta * m * m), 0.25, 100.0);
    return h;
}

QuadratureResult heat_integral(KernelKind kt, KernelKind ks, double m, double beta, double prefactor,
                               const std::function<double(double, double)>& weight,
                               const Tolerance& tol)
{
    const EndpointHints hints = heat_hints(m, beta);
    auto f = [&](double t, double s) {
        const double w = weight(t, s);
        if (w == 0) return 0.0;
        return eval_h(kt, t) * eval_h(ks, s) * w;
    };
    auto r = integrate_quadrant(f, tol, hints, hints);
    r.value *= prefactor;
    r.error_estimate *= std::abs(prefactor);
    return r;
}

QuadratureResult heat_route(const OperatorPair& pair, double beta, double w_psi, double w_phi,
                            KernelKind kt, KernelKind ks, double prefactor, const Tolerance& tol)
{
    const double b2 = beta * beta;
    // the inner loop runs over t at fixed s; rebuild the slice only when s changes
    std::optional<RelativeTraceSlice> slice;
    double slice_s = std::numeric_limits<double>::quiet_NaN();
    auto weight = [&](double t, double s) {
        if (s != slice_s) {
            slice.emplace(pair, b2 * s, w_psi, w_phi);
            slice_s = s;
        }
        return (*slice)(b2 * t);
    };
    return heat_integral(kt, ks, pair.m, beta, prefactor, weight, tol);
}

}  // namespace

QuadratureResult B_b_heat(const OperatorPair& pair, double beta, const Tolerance& tol)
{
    require_kind(pair, Flavor::bose, "B_b_heat");
    require_beta(beta, "B_b_heat");
    return heat_route(pair, beta, 1.0, 0.0, KernelKind::fermi, KernelKind::bose, 1.0, tol);
}

QuadratureResult B_f_heat(const OperatorPair& pair, double beta, const Tolerance& tol)
{
    require_kind(pair, Flavor::fermi, "B_f_heat");
    require_beta(beta, "B_f_heat");
    return heat_route(pair, beta, pair.m * pair.m, 1.0, KernelKind::zero, KernelKind::zero,
                      beta * beta, tol);
}

QuadratureResult B_b_heat(const RelativeTrace& psi, double m, double beta, const Tolerance& tol)
{
    require_beta(beta, "B_b_heat");
    if (!(m > 0)) throw DomainError("B_b_heat: m must be positive");
    const double b2 = beta * beta, m2 = m * m;
    auto weight = [&](double t, double s) {
        return std::exp(-m2 * b2 * (t + s)) * psi(b2 * t, b2 * s);
    };
    return heat_integral(KernelKind::fermi, KernelKind::bose, m, beta, 1.0, weight, tol);
}

QuadratureResult B_f_heat(const RelativeTrace& phi, const RelativeTrace& psi, double m, double beta,
                          const Tolerance& tol)
{
    require_beta(beta, "B_f_heat");
    if (!(m > 0)) throw DomainError("B_f_heat: m must be positive");
    const double b2 = beta * beta, m2 = m * m;
    auto weight = [&](double t, double s) {
        return std::exp(-m2 * b2 * (t + s)) * (phi(b2 * t, b2 * s) + m2 * psi(b2 * t, b2 * s));
    };
    return heat_integral(KernelKind::zero, KernelKind::zero, m, beta, b2, weight, tol);
}

double N_truncated(const OperatorPair& pair, Flavor flavor)
{
    require_kind(pair, flavor, "N_truncated");
    const auto& wp = pair.omega_plus;
    const auto& wm = pair.omega_minus;
    const auto& O = pair.overlap.entries;
    std::vector<double> rows;
    if (flavor == Flavor::bose) {
        // (1/4) sum O(j,k) (sqrt(w-_j/w+_k) - sqrt(w+_k/w-_j))^2
        for (Index j = 0; j < O.outerSize(); ++j) {
            double r = 0;
            for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
                const double d = wp[it.col()] - wm[j];
                r += it.value() * d * d / (4 * wp[it.col()] * wm[j]);
            }
            rows.push_back(r);
        }
        return pairwise_sum(rows);
    }
    // (1/8) Tr (F+ - F-)^2 with F = (A + m eta)/omega on the fiber-doubled space:
    // (1/4)(#plus + #minus) - (1/2) sum O(j,k) (mu+ mu- + m^2)/(w+ w-)
    const double m2 = pair.m * pair.m;
    const auto& mp = pair.plus.values;
    const auto& mm = pair.minus.values;
    for (Index j = 0; j < O.outerSize(); ++j) {
        double r = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            const Index k = it.col();
            r += it.value() * (mp[k] * mm[j] + m2) / (wp[k] * wm[j]);
        }
        rows.push_back(-0.5 * r);
    }
    return 0.25 * static_cast<double>(pair.plus.size() + pair.minus.size()) + pairwise_sum(rows);
}

double adiabatic_oracle(const OperatorPair& pair, Flavor flavor, double beta)
{
    require_kind(pair, flavor, "adiabatic_oracle");
    require_beta(beta, "adiabatic_oracle");
    const auto& wp = pair.omega_plus;
    const auto& wm = pair.omega_minus;
    const auto& O = pair.overlap.entries;
    const bool fermi = flavor == Flavor::fermi;
    const double m2 = pair.m * pair.m;
    std::vector<double> terms;
    for (Index k = 0; k < wp.size(); ++k)
        terms.push_back((fermi ? wp[k] * wp[k] : 1.0) * std::exp(-2 * beta * wp[k]));
    for (Index j = 0; j < wm.size(); ++j)
        terms.push_back((fermi ? wm[j] * wm[j] : 1.0) * std::exp(-2 * beta * wm[j]));
    for (Index j = 0; j < O.outerSize(); ++j) {
        double r = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            const Index k = it.col();
            const double w = fermi ? pair.plus.values[k] * pair.minus.values[j] + m2 : 1.0;
            r += it.value() * w * std::exp(-beta * (wp[k] + wm[j]));
        }
        terms.push_back(-2 * r);
    }
    return (fermi ? beta * beta : 1.0) * pairwise_sum(terms);
}

namespace {

double mellin_beta(const std::function<double(double)>& B, double s, double scale, const Tolerance& tol)
{
    EndpointHints h;
    h.scale = scale;
    h.exponent_at_zero = s - 1;
    return integrate_semi_infinite([&](double b) { return std::pow(b, s - 1) * B(b); }, tol, h).value;
}

double min_omega(const OperatorPair& pair)
{
    return std::min(pair.omega_plus.minCoeff(), pair.omega_minus.minCoeff());
}

}  // namespace

double zeta(const OperatorPair& pair, Flavor flavor, double s, const Tolerance& tol)
{
    require_kind(pair, flavor, "zeta");
    if (!(s > pair.plus.n)) throw DomainError("zeta: s must exceed the dimension n");
    const double integral = mellin_beta([&](double b) { return B_spectral(pair, flavor, b); }, s,
                                        1.0 / min_omega(pair), tol);
    return integral / std::tgamma(s);
}

double zeta_completed(const OperatorPair& pair, Flavor flavor, double s, const Tolerance& tol)
{
    require_kind(pair, flavor, "zeta_completed");
    if (!(s > pair.plus.n)) throw DomainError("zeta_completed: s must exceed the dimension n");
    if (!pair.family) throw UnsupportedError("zeta_completed: pair has no mode family");
    const ModeFamily& f = *pair.family;
    const double m = pair.m, m2 = m * m;
    const int K = f.cutoff;
    const double scale = 1.0 / min_omega(pair);
    std::vector<double> per_mode;
    double tail = 0;

    if (flavor == Flavor::bose) {
        if (f.kind != ModeFamily::Kind::torus) throw UnsupportedError("zeta_completed: needs a torus family");
        for (int k = 0; k <= K; ++k) {
            const double wp = std::sqrt(f.a * f.a * k * k + f.q_plus + m2);
            const double wm = std::sqrt(f.b * f.b * k * k + f.q_minus + m2);
            const double z = mellin_beta([&](double b) { return B_b_single_mode(wp, wm, b); }, s, scale, tol);
            per_mode.push_back(k == 0 ? z : 2 * z);
        }
        const double z0 =
            mellin_beta([&](double b) { return B_b_single_mode(f.a, f.b, b); }, s, 1.0, tol);
        tail = 2 * z0 * hurwitz_zeta(s, K + 1.0);
    } else {
        if (f.kind != ModeFamily::Kind::dirac) throw UnsupportedError("zeta_completed: needs a Dirac family");
        // modes +-k with two fiber components, all four with equal contributions
        const double k0 = f.antiperiodic ? 0.5 : 0.0;
        for (double k = k0; k <= K - k0 + 1e-9; k += 1.0) {
            const double z = mellin_beta([&](double b) { return B_f_single_mode(f.a * k, f.b * k, m, b); },
                                         s, scale, tol);
            per_mode.push_back((k == 0 ? 2 : 4) * z);
        }
        const double z0 =
            mellin_beta([&](double b) { return B_f_single_mode(f.a, f.b, 0.0, b); }, s, 1.0, tol);
        tail = 4 * z0 * hurwitz_zeta(s, K + (f.antiperiodic ? 0.5 : 1.0));
    }
    return (pairwise_sum(per_mode) + tail) / std::tgamma(s);
}

double zeta_pole_residue(const OperatorPair& pair, Flavor flavor, double s1, double s2, const Tolerance& tol)
{
    const double n = pair.plus.n;
    if (!(s1 > s2 && s2 > n)) throw DomainError("zeta_pole_residue: need s1 > s2 > n");
    auto v = [&](double s) {
        const double z = pair.family ? zeta_completed(pair, flavor, s, tol) : zeta(pair, flavor, s, tol);
        return (s - n) * std::tgamma(s) * z;
    };
    const double v1 = v(s1), v2 = v(s2);
    // linear in s through (s1, v1), (s2, v2), evaluated at n
    return v2 + (v2 - v1) * (s2 - n) / (s1 - s2);
}

double V_b_integrand(double x, double y)
{
    const double d = std::abs(x - y);
    const double e = std::expm1(-d);
    return e * e * std::exp(d - x - y) / (std::expm1(-2 * x) * std::expm1(-2 * y));
}

double V_f_integrand(double x, double y, double p)
{
    const double a = x_csch(x) - x_csch(y);
    return 0.25 * (a * a + 2 * (x * y - p) * csch_product(x, y));
}

namespace {

double momentum_integral(const GeometryPair& geom, bool fermi, const Tolerance& tol)
{
    const int n = geom.n;
    if (n != 1 && n != 2) throw UnsupportedError("V_b/V_f: only n = 1 and n = 2 are supported");
    // the integrands vanish identically; skip the roundoff in x y - p
    if (geom.g_plus == geom.g_minus && geom.vielbein_plus == geom.vielbein_minus) return 0.0;
    const MatrixXd P = 0.5 * (geom.vielbein_plus * geom.vielbein_minus.transpose() +
                              geom.vielbein_minus * geom.vielbein_plus.transpose());
    auto integrand = [&](const Eigen::VectorXd& xi) {
        const double x = std::sqrt(xi.dot(geom.g_plus * xi));
        const double y = std::sqrt(xi.dot(geom.g_minus * xi));
        return fermi ? V_f_integrand(x, y, xi.dot(P * xi)) : V_b_integrand(x, y);
    };
    const double pref = geom.fiber_dim * geom.volume / std::pow(2 * M_PI, n);
    if (n == 1) {
        EndpointHints h;
        h.scale = 1.0 / std::sqrt(std::min(geom.g_plus(0, 0), geom.g_minus(0, 0)));
        Eigen::VectorXd xi(1);
        auto r = integrate_semi_infinite(
            [&](double k) {
                xi[0] = k;
                return integrand(xi);
            },
            tol, h);
        return 2 * pref * r.value;
    }
    // polar coordinates; xi -> -xi symmetry halves the angular range
    Tolerance inner = tol;
    inner.abs_tol *= 0.1;
    inner.rel_tol *= 0.1;
    auto radial = [&](double phi) {
        Eigen::VectorXd dir(2);
        dir << std::cos(phi), std::sin(phi);
        const double ap = std::sqrt(dir.dot(geom.g_plus * dir));
        const double am = std::sqrt(dir.dot(geom.g_minus * dir));
        EndpointHints h;
        h.scale = 1.0 / std::min(ap, am);
        return integrate_semi_infinite([&](double r) { return r * integrand(r * dir); }, inner, h).value;
    };
    return 2 * pref * integrate_interval(radial, 0.0, M_PI, tol).value;
}

}  // namespace

double V_b(const GeometryPair& geom, const Tolerance& tol) { return momentum_integral(geom, false, tol); }
double V_f(const GeometryPair& geom, const Tolerance& tol) { return momentum_integral(geom, true, tol); }

bool BetaSweep::ok() const
{
    return std::all_of(records.begin(), records.end(), [](const BetaRecord& r) { return r.ok; });
}

double BetaSweep::value(std::size_t i, Route route) const
{
    for (const auto& r : records)
        if (r.beta == betas.at(i) && r.route == route) return r.value;
    throw DomainError("BetaSweep::value: no record for this beta and route");
}

int default_thread_count()
{
    if (const char* env = std::getenv("BOGO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

BetaSweep run_sweep(const std::function<OperatorPair(double)>& make_pair, Flavor flavor,
                    std::vector<double> betas, const std::vector<Route>& routes, int threads,
                    const Tolerance& tol)
{
    for (double b : betas)
        if (!(b > 0) || !std::isfinite(b)) throw DomainError("run_sweep: betas must be positive");
    if (routes.empty()) throw DomainError("run_sweep: no route requested");
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());

    BetaSweep sweep;
    sweep.flavor = flavor;
    sweep.betas = betas;
    sweep.records.resize(betas.size() * routes.size());
    for (std::size_t i = 0; i < betas.size(); ++i)
        for (std::size_t r = 0; r < routes.size(); ++r) {
            auto& rec = sweep.records[i * routes.size() + r];
            rec.beta = betas[i];
            rec.route = routes[r];
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < betas.size(); i = next++) {
            std::optional<OperatorPair> pair;
            for (std::size_t r = 0; r < routes.size(); ++r) {
                auto& rec = sweep.records[i * routes.size() + r];
                try {
                    if (!pair) pair.emplace(make_pair(rec.beta));
                    if (rec.route == Route::spectral) {
                        rec.value = B_spectral(*pair, flavor, rec.beta);
                    } else {
                        const auto q = flavor == Flavor::bose ? B_b_heat(*pair, rec.beta, tol)
                                                              : B_f_heat(*pair, rec.beta, tol);
                        rec.value = q.value;
                        rec.error_estimate = q.error_estimate;
                    }
                    if (!std::isfinite(rec.value)) throw NumericError("non-finite value");
                } catch (const AccuracyError& e) {
                    rec.ok = false;
                    rec.value = e.value;
                    rec.error_estimate = e.error_estimate;
                    rec.message = e.what();
                } catch (const std::exception& e) {
                    rec.ok = false;
                    rec.message = e.what();
                }
            }
        }
    };
    if (threads <= 0) threads = default_thread_count();
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), betas.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return sweep;
}

BetaSweep run_sweep(const OperatorPair& pair, Flavor flavor, std::vector<double> betas,
                    const std::vector<Route>& routes, int threads, const Tolerance& tol)
{
    require_kind(pair, flavor, "run_sweep");
    return run_sweep([&](double) { return pair; }, flavor, std::move(betas), routes, threads, tol);
}

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool has_both(const BetaSweep& s)
{
    bool spec = false, heat = false;
    for (const auto& r : s.records) (r.route == Route::spectral ? spec : heat) = true;
    return spec && heat;
}

// relative |heat - spectral| per beta, or NaN when either row is missing or failed
double discrepancy(const BetaSweep& s, double beta)
{
    const BetaRecord *sp = nullptr, *ht = nullptr;
    for (const auto& r : s.records)
        if (r.beta == beta) (r.route == Route::spectral ? sp : ht) = &r;
    if (!sp || !ht || !sp->ok || !ht->ok) return std::numeric_limits<double>::quiet_NaN();
    const double scale = std::abs(sp->value);
    const double diff = std::abs(ht->value - sp->value);
    return scale > 0 ? diff / scale : diff;
}

}  // namespace

std::string sweep_csv(const BetaSweep& sweep)
{
    const bool both = has_both(sweep);
    std::string out = both ? "beta,value,route,error_estimate,discrepancy\n"
                           : "beta,value,route,error_estimate\n";
    for (const auto& r : sweep.records) {
        out += fmt(r.beta) + "," + (r.ok ? fmt(r.value) : std::string("nan")) + "," +
               to_string(r.route) + "," + fmt(r.error_estimate);
        if (both) out += "," + fmt(discrepancy(sweep, r.beta));
        out += "\n";
    }
    return out;
}

nlohmann::json sweep_json(const BetaSweep& sweep)
{
    const bool both = has_both(sweep);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : sweep.records) {
        nlohmann::json row{{"beta", r.beta},
                           {"value", r.ok ? nlohmann::json(r.value) : nlohmann::json(nullptr)},
                           {"route", to_string(r.route)},
                           {"error_estimate", r.error_estimate},
                           {"ok", r.ok}};
        if (both) {
            const double d = discrepancy(sweep, r.beta);
            row["discrepancy"] = std::isfinite(d) ? nlohmann::json(d) : nlohmann::json(nullptr);
        }
        if (!r.ok) row["message"] = r.message;
        rows.push_back(row);
    }
    nlohmann::json cols = {"beta", "value", "route", "error_estimate"};
    if (both) cols.push_back("discrepancy");
    return {{"flavor", to_string(sweep.flavor)}, {"columns", cols}, {"rows", rows}};
}

}  // namespace bogo
