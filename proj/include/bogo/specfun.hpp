#pragma once

// Statistical functions E_b, E_f, E_0, the regulator tanh(x/2) and the
// inverse-Laplace kernels h_b, h_f, h_0 with their small-t and large-t forms.

namespace bogo {

enum class KernelKind { bose, fermi, zero };

const char* to_string(KernelKind kind);

struct SeriesControl {
    double abs_tol = 1e-16;
    double rel_tol = 1e-15;
    int max_terms = 500;
    double crossover_t = 1.0;  // theta series below, large-t series at and above

    void check() const;  // throws DomainError on invalid fields
};

double eval_E(KernelKind kind, double x);
// Geometric-series form of E, used as an independent cross-check path.
double eval_E_series(KernelKind kind, double x, int max_terms = 100000);
double eval_f_tanh(double x);

struct KernelValue {
    double value = 0;
    double error_estimate = 0;  // first omitted term
    int terms = 0;
};

double eval_h(KernelKind kind, double t, const SeriesControl& ctl = {});
// d/dt h(t), same branch selection as eval_h.
double eval_h_derivative(KernelKind kind, double t, const SeriesControl& ctl = {});

KernelValue eval_h_theta(KernelKind kind, double t, const SeriesControl& ctl = {});
KernelValue eval_h_theta_derivative(KernelKind kind, double t, const SeriesControl& ctl = {});

// Large-t representation. The first `images` Gaussian images of the dual sum are
// resummed exactly (Dawson function); the remainder is the Bernoulli-type asymptotic
// series truncated at its smallest term. images < 0 selects the count automatically;
// images == 0 is the pure Bernoulli series.
KernelValue eval_h_asymptotic(KernelKind kind, double t, const SeriesControl& ctl = {},
                              int images = -1);
KernelValue eval_h_asymptotic_derivative(KernelKind kind, double t,
                                         const SeriesControl& ctl = {}, int images = -1);

// Coefficient a_k of t^{-k-1/2} in the pure large-t series of h_b / h_f (k >= 0).
double h_series_coefficient(KernelKind kind, int k);

// B_{2k}, k >= 1. Exact table for small k, recurrence beyond it.
double bernoulli_even(int k);

// Test hook: multiply B_{2k} by `factor` (factor 1 clears). Not thread-safe with
// concurrent readers; meant for fault-injection runs only.
void inject_bernoulli_fault(int k, double factor);
void clear_bernoulli_faults();

double digamma(double x);
// Dawson integral F(x) = e^{-x^2} int_0^x e^{y^2} dy.
double dawson(double x);
// Hurwitz zeta(s, a) for s > 1, a > 0.
double hurwitz_zeta(double s, double a);
double riemann_zeta(double s);

}  // namespace bogo
