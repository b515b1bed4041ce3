#pragma once

// Small-parameter expansions: the Mellin residue expansion of
// I(eps) = int_0^inf h(t) f(eps t) dt, the local coefficients of the relative
// traces, the leading coefficients of B_b and B_f, and least-squares fits of
// computed beta sweeps.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bogo/bogolyubov.hpp"
#include "bogo/quadrature.hpp"
#include "bogo/spectral.hpp"

namespace bogo {

enum class LemmaCase { noninteger, positive_integer, nonpositive_integer };
const char* to_string(LemmaCase c);

struct ExpansionTerm {
    double power = 0;
    int log_power = 0;  // 0 or 1 (factor log eps)
    double coefficient = 0;
    std::string label;  // coefficient family and index, e.g. "c4[2]"
};

struct AsymptoticExpansion {
    std::vector<ExpansionTerm> terms;  // sorted by (power, log_power)
    int truncation_order = 0;          // every sum runs over k < truncation_order
    LemmaCase case_tag = LemmaCase::noninteger;
    double mu = 0, nu = 0;
    int m = 0;  // |mu + nu - 1| in the integer cases

    double evaluate(double eps) const;
    bool has_logs() const;
};

// Which of the three residue patterns applies to mu + nu (integers within 1e-9).
LemmaCase classify(double mu, double nu, int* m = nullptr);

// Expansion of I(eps) through truncation order K. The transforms carry mu and nu
// as their offsets; the parts order is raised as needed per evaluation point.
AsymptoticExpansion lemma_expand(const MellinTransform& f_hat, const MellinTransform& h_hat, int K,
                                 const Tolerance& tol = {1e-13, 1e-11});

// Coefficient of eps^{k-mu} for noninteger mu + nu, and its counterpart for
// mu + nu = 1 + m, 0 <= k < m. The two agree when the first is evaluated there.
double lemma_c1(const MellinTransform& f_hat, const MellinTransform& h_hat, int k,
                const Tolerance& tol = {1e-13, 1e-11});
double lemma_c3(const MellinTransform& f_hat, const MellinTransform& h_hat, int k, int m,
                const Tolerance& tol = {1e-13, 1e-11});

// I(eps) by direct quadrature.
double lemma_direct(const std::function<double(double)>& f, const std::function<double(double)>& h,
                    double eps, const Tolerance& tol = {1e-15, 1e-13});

struct ResidualPoint {
    double eps = 0;
    double direct = 0;     // I(eps) by quadrature
    double expansion = 0;  // K-term expansion
    double residual = 0;   // direct - expansion
    double next_terms = 0;  // terms K and K+1 of the expansion
};

struct ResidualDiagnostics {
    std::vector<ResidualPoint> points;
    // residual(eps)/residual(eps/2) against the same ratio of the next terms
    std::vector<double> observed_ratio, predicted_ratio;
    double worst_ratio_error = 0;  // max |observed/predicted - 1|
};

ResidualDiagnostics lemma_residuals(const std::function<double(double)>& f,
                                    const std::function<double(double)>& h, const MellinTransform& f_hat,
                                    const MellinTransform& h_hat, int K, const std::vector<double>& eps,
                                    const Tolerance& tol = {1e-15, 1e-13});

// Named analytic test functions for the expansion engine. f-type entries are
// regular at 0 after x^mu; h-type entries h(t) ~ t^{-nu} with x^{-nu} h(1/x) smooth.
struct TestFunction {
    std::string name;
    MellinKind kind = MellinKind::f_type;
    double offset = 0;  // mu or nu
    JetFunction jet;
    std::function<double(double)> value;

    MellinTransform transform() const;
};

const std::vector<TestFunction>& registered_test_functions();
// Throws UsageError("name") for an unknown name.
const TestFunction& find_test_function(const std::string& name);

nlohmann::json to_json(const AsymptoticExpansion& e,
                       const std::optional<ResidualDiagnostics>& diag = std::nullopt);

// Leading local data of the relative traces for constant metrics.
struct LocalGeometryCoefficients {
    GeometryPair geom;
    double A0_plus = 0, A0_minus = 0;

    double B0(double t, double s) const;
    double C0(double t, double s) const;
    double Psi0(double t, double s) const;
    double Phi0(double t, double s) const;
};

LocalGeometryCoefficients local_coefficients(const GeometryPair& geom);

// Solvable shift families on a flat base with leading heat coefficient A0:
//   constant_shift: H+ = H- + M^2 (Laplace, base potential q)
//   dirac_shift:    A+ = A- + M with M anticommuting with A-, M^2 = M_sq
struct ShiftFamily {
    enum class Kind { constant_shift, dirac_shift } kind = Kind::constant_shift;
    int n = 1;
    double A0 = 2 * M_PI;
    double M_sq = 1.0;
    double q = 0.0;
    double m = 1.0;
    // circle models for the global closed forms: scale a, periodic or not
    double scale = 1.0;
    bool antiperiodic = false;
};

// Circle models: Laplace circle of scale a (H- = a^2 k^2 + q), or the Dirac circle
// with two fiber components; A0 = fiber * 2 pi / a.
ShiftFamily circle_shift_family(ShiftFamily::Kind kind, double scale, double M_sq, double m,
                                double q = 0.0, bool antiperiodic = false);

// Psi_k(t, s), Phi_k(t, s) in Psi(e t, e s) ~ (4 pi)^{-n/2} sum_k e^{k-n/2} Psi_k(t, s)
// and Phi(e t, e s) ~ (4 pi)^{-n/2} sum_k e^{k-1-n/2} Phi_k(t, s).
double shift_Psi_k(const ShiftFamily& fam, int k, double t, double s);
double shift_Phi_k(const ShiftFamily& fam, int k, double t, double s);

// psi-hat_k(u) and phi-hat_k(u) at integer k from the local coefficients (finite sums).
double psi_hat_local(const ShiftFamily& fam, int k, double u);
double phi_hat_local(const ShiftFamily& fam, int k, double u);
// The same by numeric Mellin transforms of the global closed forms of Psi and Phi
// on the circle models (exact theta functions, no truncation).
double psi_hat_numeric(const ShiftFamily& fam, int k, double u, const Tolerance& tol = {1e-12, 1e-10});
double phi_hat_numeric(const ShiftFamily& fam, int k, double u, const Tolerance& tol = {1e-12, 1e-10});

// Mellin transforms in rho of the kernel products rho h_f(rho u) h_b(rho (1-u))
// (bose, nu = 1) and rho h_0(rho u) h_0(rho (1-u)) (fermi, nu = 0). q < 1.
double kernel_hat(Flavor flavor, double q, double u, const Tolerance& tol = {1e-14, 1e-11});
// int_0^1 du of the fermi kernel transform at q < 1, taken before the continuation
// (the per-u transform is not integrable at the ends for q >= 1/2).
double fermi_kernel_hat_integrated(double q, const Tolerance& tol = {1e-14, 1e-11});

double c0_coefficient_b(const GeometryPair& geom, const Tolerance& tol = {1e-13, 1e-10});
double d0_coefficient_f(const GeometryPair& geom, const Tolerance& tol = {1e-13, 1e-10});
// Only shift families; anything else throws UnsupportedError.
double c1_coefficient_b(const ShiftFamily& fam, const Tolerance& tol = {1e-13, 1e-10});
double d1_coefficient_f(const ShiftFamily& fam, const Tolerance& tol = {1e-13, 1e-10});

struct FitResult {
    std::vector<double> coefficients;  // c_0 (and c_1) of beta^{-n}, beta^{-n+2}
    std::vector<double> uncertainties;
    std::vector<std::string> columns;  // basis functions of beta^n B, local first
    std::vector<double> all_coefficients;
    double residual_rms = 0;
    double condition = 0;
};

// Least squares of beta^n B(beta) on {1, beta^2} (num_terms = 2) or {1}. With
// include_global the non-local powers of B are added as nuisance columns:
// beta^{n+2j} for odd n, beta^n log beta^2 and beta^n for even n.
FitResult fit_leading(const std::vector<double>& betas, const std::vector<double>& values, int n,
                      int num_terms, bool include_global = true);
FitResult fit_leading(const BetaSweep& sweep, int n, int num_terms, bool include_global = true,
                      Route route = Route::spectral);

// Small-beta sweep with the cutoff tied to beta (K = ceil(factor / beta)), refit
// with a larger factor, accepted when c_0 (or c_1 if c_0 is 0) moves by < max_change.
struct ContinuumFit {
    FitResult coarse, fine;
    double relative_change = 0;
    bool accepted = false;
};

ContinuumFit continuum_fit(const std::function<OperatorPair(int cutoff)>& make_pair, Flavor flavor,
                           int n, const std::vector<double>& betas, int num_terms,
                           double factor = 40, double refine_factor = 80, double max_change = 0.005,
                           int threads = 0);

// Geometric grid of `count` points on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int count);

}  // namespace bogo
