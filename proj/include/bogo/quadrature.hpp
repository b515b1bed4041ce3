#pragma once

// Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals,
// iterated quadrature on the positive quadrant, and the modified Mellin
// transforms with continuation by integration by parts.

#include <functional>
#include <vector>

#include "bogo/taylor.hpp"

namespace bogo {

struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    bool throw_on_failure = true;
};

struct QuadratureResult {
    double value = 0;
    double error_estimate = 0;
    long evaluations = 0;
    bool converged = true;
};

// Power-law behaviour at the ends of (0, inf): f ~ t^exponent_at_zero near 0 and
// f ~ t^{-decay_power} at infinity (0 means faster than any power).
struct EndpointHints {
    double scale = 1.0;
    double exponent_at_zero = 0.0;
    double decay_power = 0.0;
};

// Endpoint exponents of an integrable singularity on [a, b].
struct IntervalHints {
    double exponent_at_a = 0.0;
    double exponent_at_b = 0.0;
};

using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const Tolerance& tol = {}, const IntervalHints& hints = {});
QuadratureResult integrate_semi_infinite(const Integrand& f, const Tolerance& tol = {},
                                         const EndpointHints& hints = {});
// Iterated: outer over s, inner over t, for f(t, s).
QuadratureResult integrate_quadrant(const Integrand2& f, const Tolerance& tol = {},
                                    const EndpointHints& hints_t = {},
                                    const EndpointHints& hints_s = {});

enum class MellinKind { f_type, h_type };

// The transform is reduced to an f-type integral of g, where g(x) = x^offset f(x)
// for f-type and g(x) = x^{-offset} h(1/x) for h-type (the variable x = 1/t keeps
// integration by parts valid for Re q < N in the h case as well). Then
//   hat_q = 1/Gamma(N-q) int_0^inf x^{N-q-1} (-d/dx)^N g(x) dx.
struct MellinTransform {
    MellinKind kind = MellinKind::f_type;
    double offset = 0.0;
    int parts_order = 0;
    // N-th derivative of g at x (N = 0 is g itself)
    std::function<double(double x, int N)> g_derivative;
    double scale = 1.0;  // typical length of g
    double decay = 0.0;  // g ~ x^{-decay} at infinity, 0 when faster than any power
};

// Derivatives of g from Taylor jets of the user function.
MellinTransform make_mellin(MellinKind kind, double offset, int parts_order, JetFunction fn,
                            double scale = 1.0);
// Derivatives of g by central finite differences (accuracy order 4).
MellinTransform make_mellin_fd(MellinKind kind, double offset, int parts_order,
                               std::function<double(double)> fn, double scale = 1.0);

double mellin_hat(const MellinTransform& tr, double q, const Tolerance& tol = {});
// f-type convenience form
double mellin_hat(JetFunction f, double offset, double q, int parts_order,
                  const Tolerance& tol = {});

// d/dq of the transform at q = k by central differences with one Richardson step.
double mellin_hat_derivative(const MellinTransform& tr, int k, const Tolerance& tol = {},
                             double step = 0.1, bool richardson = true);

// Weights for the m-th derivative at x0 from values at the nodes z (Fornberg).
std::vector<double> finite_difference_weights(double x0, const std::vector<double>& z, int m);

}  // namespace bogo
