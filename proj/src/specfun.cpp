#include "bogo/specfun.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bogo/errors.hpp"

namespace bogo {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv_sqrt_pi = std::numbers::inv_sqrtpi;
// Images whose argument stays below this are resummed through the Dawson function.
constexpr double exact_image_limit = 6.5;
constexpr int max_images = 256;

// B_{2k} for k = 1..10.
constexpr std::array<double, 11> bernoulli_table = {
    0.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
};

// Fault-injection multipliers; 0 means unset.
std::atomic<double> fault_factor[bernoulli_table.size()];

double zeta_direct(double s, double a)
{
    // sum_{j>=0} (a+j)^{-s}; only used where the terms fall off quickly
    double sum = 0;
    for (int j = 0; j < 100000; ++j) {
        const double term = std::pow(a + j, -s);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double bernoulli_exact(int k)
{
    if (k < static_cast<int>(bernoulli_table.size())) return bernoulli_table[k];
    // B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
    const double z = zeta_direct(2.0 * k, 1.0);
    const double logmag = std::log(2.0) + std::lgamma(2.0 * k + 1) + std::log(z)
                          - 2.0 * k * std::log(2 * pi);
    const double mag = std::exp(logmag);
    return (k % 2 == 1) ? mag : -mag;
}

double double_factorial_odd(int n)
{
    // (2n-1)!!
    double r = 1;
    for (int i = 1; i <= n; ++i) r *= (2.0 * i - 1);
    return r;
}

// zeta(2n) through the Bernoulli numbers, so the kernel series follows the table.
double zeta_even(int n)
{
    const double b = bernoulli_even(n);
    const double logmag = std::log(std::abs(b)) + 2.0 * n * std::log(2 * pi)
                          - std::log(2.0) - std::lgamma(2.0 * n + 1);
    return std::exp(logmag);
}

// sum_{j>J} j^{-2n}
double tail_bose(int J, int n)
{
    if (J == 0) return zeta_even(n);
    if (n <= 3) {
        double s = zeta_even(n);
        for (int j = 1; j <= J; ++j) s -= std::pow(static_cast<double>(j), -2.0 * n);
        return s;
    }
    return hurwitz_zeta(2.0 * n, J + 1.0);
}

// sum_{j>=J} (2j+1)^{-2n}
double tail_fermi(int J, int n)
{
    if (J == 0) return (1.0 - std::pow(2.0, -2.0 * n)) * zeta_even(n);
    if (n <= 3) {
        double s = (1.0 - std::pow(2.0, -2.0 * n)) * zeta_even(n);
        for (int j = 0; j < J; ++j) s -= std::pow(2.0 * j + 1, -2.0 * n);
        return s;
    }
    return std::pow(2.0, -2.0 * n) * hurwitz_zeta(2.0 * n, J + 0.5);
}

// G(x) = 1 - 2 x F(x) and its derivative
double image_G(double x) { return 1.0 - 2.0 * x * dawson(x); }
double image_dG(double x)
{
    const double F = dawson(x);
    return -2.0 * F - 2.0 * x + 4.0 * x * x * F;
}

struct ImageSum {
    double value = 0;       // sum over all images of G
    double derivative = 0;  // d/dt of the same sum
    double error = 0;
    int terms = 0;
};

// Sum of G(c_j sqrt(t)) over images c_j = c*j (bose, j>=1) or c*(2j+1) (fermi, j>=0).
ImageSum image_sum(bool bose, double t, const SeriesControl& ctl, int images)
{
    const double c = bose ? 2 * pi : pi;
    const double rt = std::sqrt(t);
    auto arg = [&](int j) { return bose ? c * j * rt : c * (2 * j + 1) * rt; };

    int J = images;
    if (J < 0) {
        J = 0;
        while (J < max_images && arg(bose ? J + 1 : J) < exact_image_limit) ++J;
    }

    ImageSum out;
    for (int i = 0; i < J; ++i) {
        const int j = bose ? i + 1 : i;
        const double x = arg(j);
        out.value += image_G(x);
        out.derivative += image_dG(x) * x / (2 * t);
    }

    // Tail: sum G ~ -sum_n (2n-1)!!/(2 c^2 t)^n Z_n, truncated at its smallest term.
    const double base = 2 * c * c * t;
    double prev = std::numeric_limits<double>::infinity();
    double tail = 0, dtail = 0;
    int n = 1;
    for (; n <= ctl.max_terms; ++n) {
        const double Z = bose ? tail_bose(J, n) : tail_fermi(J, n);
        const double term = double_factorial_odd(n) / std::pow(base, n) * Z;
        if (!std::isfinite(term) || std::abs(term) >= prev) break;
        prev = std::abs(term);
        tail -= term;
        dtail += n * term / t;
        if (std::abs(term) <= 1e-18 * std::max(1.0, std::abs(tail))) {
            ++n;
            break;
        }
    }
    out.value += tail;
    out.derivative += dtail;
    out.error = prev;
    out.terms = J + n - 1;
    return out;
}

struct ThetaSum {
    double value = 0;
    double derivative = 0;
    double error = 0;
    int terms = 0;
};

ThetaSum theta_sum(KernelKind kind, double t, const SeriesControl& ctl)
{
    // (4 pi)^{-1/2} t^{-3/2} sum_k w_k k exp(-k^2/(4t))
    const double pref = 0.5 * inv_sqrt_pi * std::pow(t, -1.5);
    const double kpeak = std::sqrt(2 * t);
    ThetaSum out;
    double sum = 0, dsum = 0, last = 0;
    int used = 0;
    const int step = (kind == KernelKind::zero) ? 2 : 1;
    for (int k = 1; used < ctl.max_terms; k += step, ++used) {
        double w = 1;
        if (kind == KernelKind::fermi && k % 2 == 0) w = -1;
        const double e = std::exp(-static_cast<double>(k) * k / (4 * t));
        const double term = w * k * e;
        sum += term;
        // d/dt [t^{-3/2} k e] = t^{-3/2} k e (k^2/(4 t^2) - 3/(2t))
        dsum += term * (static_cast<double>(k) * k / (4 * t * t) - 1.5 / t);
        last = std::abs(term);
        if (k > kpeak && last <= 1e-18 * std::abs(sum)) {
            ++used;
            break;
        }
        if (e == 0.0) {
            ++used;
            break;
        }
    }
    out.value = pref * sum;
    out.derivative = pref * dsum;
    out.error = pref * last;
    out.terms = used;
    if (used >= ctl.max_terms) out.error = std::max(out.error, std::abs(out.value));
    return out;
}

void require_positive(double t, const char* what)
{
    if (!(t > 0)) throw DomainError(std::string(what) + ": argument must be positive");
}

void check_accuracy(const KernelValue& v, const SeriesControl& ctl, const char* what)
{
    const double target = std::max(ctl.abs_tol, ctl.rel_tol * std::abs(v.value));
    // The truncation estimate is itself of size one term; allow for its roundoff.
    if (v.error_estimate > 1e3 * target)
        throw AccuracyError(std::string(what) + ": series did not reach tolerance", v.value,
                            v.error_estimate);
}

}  // namespace

const char* to_string(KernelKind kind)
{
    switch (kind) {
    case KernelKind::bose: return "bose";
    case KernelKind::fermi: return "fermi";
    case KernelKind::zero: return "zero";
    }
    return "?";
}

void SeriesControl::check() const
{
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("SeriesControl: tolerances must be > 0");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
    if (!(crossover_t > 0)) throw DomainError("SeriesControl: crossover_t must be > 0");
}

double eval_E(KernelKind kind, double x)
{
    switch (kind) {
    case KernelKind::fermi:
        if (x > 0) {
            const double e = std::exp(-x);
            return e / (1 + e);
        }
        return 1.0 / (std::exp(x) + 1.0);
    case KernelKind::bose:
        require_positive(x, "eval_E(bose)");
        return -std::exp(-x) / std::expm1(-x);
    case KernelKind::zero:
        require_positive(x, "eval_E(zero)");
        return -std::exp(-x) / std::expm1(-2 * x);
    }
    return 0;
}

double eval_E_series(KernelKind kind, double x, int max_terms)
{
    require_positive(x, "eval_E_series");
    const double q = std::exp(-x);
    double sum = 0;
    double p = (kind == KernelKind::zero) ? q : q;
    const double ratio = (kind == KernelKind::zero) ? q * q : q;
    double sign = 1;
    for (int k = 0; k < max_terms; ++k) {
        sum += sign * p;
        if (p < 1e-18 * std::abs(sum)) break;
        p *= ratio;
        if (kind == KernelKind::fermi) sign = -sign;
    }
    return sum;
}

double eval_f_tanh(double x)
{
    if (x < 0) throw DomainError("eval_f_tanh: argument must be nonnegative");
    return std::tanh(0.5 * x);
}

double bernoulli_even(int k)
{
    if (k < 1) throw DomainError("bernoulli_even: k must be >= 1");
    double b = bernoulli_exact(k);
    if (k < static_cast<int>(bernoulli_table.size())) {
        const double f = fault_factor[k].load();
        if (f != 0.0) b *= f;
    }
    return b;
}

void inject_bernoulli_fault(int k, double factor)
{
    if (k < 1 || k >= static_cast<int>(bernoulli_table.size()))
        throw DomainError("inject_bernoulli_fault: k outside the exact table");
    fault_factor[k].store(factor);
}

void clear_bernoulli_faults()
{
    for (auto& f : fault_factor) f.store(0.0);
}

double h_series_coefficient(KernelKind kind, int k)
{
    if (k < 0) throw DomainError("h_series_coefficient: k must be >= 0");
    if (kind == KernelKind::zero)
        return 0.5 * (h_series_coefficient(KernelKind::bose, k)
                      + h_series_coefficient(KernelKind::fermi, k));
    if (k == 0) return kind == KernelKind::bose ? inv_sqrt_pi : 0.0;
    const double B = bernoulli_even(k);
    const double logden = 2.0 * k * std::log(2.0) + std::lgamma(k + 1.0);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
    if (kind == KernelKind::bose) return inv_sqrt_pi * sign * B * std::exp(-logden);
    return -inv_sqrt_pi * sign * (std::pow(2.0, 2.0 * k) - 1) * B * std::exp(-logden);
}

KernelValue eval_h_theta(KernelKind kind, double t, const SeriesControl& ctl)
{
    require_positive(t, "eval_h_theta");
    const auto s = theta_sum(kind, t, ctl);
    return {s.value, s.error, s.terms};
}

KernelValue eval_h_theta_derivative(KernelKind kind, double t, const SeriesControl& ctl)
{
    require_positive(t, "eval_h_theta_derivative");
    const auto s = theta_sum(kind, t, ctl);
    return {s.derivative, s.error * (1.0 + 1.0 / t) * 10, s.terms};
}

KernelValue eval_h_asymptotic(KernelKind kind, double t, const SeriesControl& ctl, int images)
{
    require_positive(t, "eval_h_asymptotic");
    if (kind == KernelKind::zero) {
        const auto b = eval_h_asymptotic(KernelKind::bose, t, ctl, images);
        const auto f = eval_h_asymptotic(KernelKind::fermi, t, ctl, images);
        return {0.5 * (b.value + f.value), 0.5 * (b.error_estimate + f.error_estimate),
                std::max(b.terms, f.terms)};
    }
    const double pref = inv_sqrt_pi / std::sqrt(t);
    const bool bose = kind == KernelKind::bose;
    const auto s = image_sum(bose, t, ctl, images);
    if (bose) return {pref * (1 + 2 * s.value), 2 * pref * s.error, s.terms};
    return {-2 * pref * s.value, 2 * pref * s.error, s.terms};
}

KernelValue eval_h_asymptotic_derivative(KernelKind kind, double t, const SeriesControl& ctl,
                                         int images)
{
    require_positive(t, "eval_h_asymptotic_derivative");
    if (kind == KernelKind::zero) {
        const auto b = eval_h_asymptotic_derivative(KernelKind::bose, t, ctl, images);
        const auto f = eval_h_asymptotic_derivative(KernelKind::fermi, t, ctl, images);
        return {0.5 * (b.value + f.value), 0.5 * (b.error_estimate + f.error_estimate),
                std::max(b.terms, f.terms)};
    }
    const double pref = inv_sqrt_pi / std::sqrt(t);
    const bool bose = kind == KernelKind::bose;
    const auto s = image_sum(bose, t, ctl, images);
    // d/dt [pref * S] = pref * (S' - S/(2t))
    if (bose) {
        const double S = 1 + 2 * s.value;
        return {pref * (2 * s.derivative - S / (2 * t)), 2 * pref * s.error / t, s.terms};
    }
    const double S = -2 * s.value;
    return {pref * (-2 * s.derivative - S / (2 * t)), 2 * pref * s.error / t, s.terms};
}

double eval_h(KernelKind kind, double t, const SeriesControl& ctl)
{
    require_positive(t, "eval_h");
    const KernelValue v = t < ctl.crossover_t ? eval_h_theta(kind, t, ctl)
                                              : eval_h_asymptotic(kind, t, ctl);
    check_accuracy(v, ctl, "eval_h");
    return v.value;
}

double eval_h_derivative(KernelKind kind, double t, const SeriesControl& ctl)
{
    require_positive(t, "eval_h_derivative");
    const KernelValue v = t < ctl.crossover_t ? eval_h_theta_derivative(kind, t, ctl)
                                              : eval_h_asymptotic_derivative(kind, t, ctl);
    return v.value;
}

double digamma(double x)
{
    if (!std::isfinite(x)) throw DomainError("digamma: non-finite argument");
    if (x <= 0 && x == std::floor(x)) throw DomainError("digamma: pole at nonpositive integer");
    if (x < 0) return digamma(1 - x) - pi / std::tan(pi * x);
    double r = 0;
    while (x < 10) {
        r -= 1 / x;
        x += 1;
    }
    const double inv2 = 1 / (x * x);
    double p = inv2;
    double s = std::log(x) - 0.5 / x;
    for (int k = 1; k <= 8; ++k) {
        s -= bernoulli_exact(k) / (2.0 * k) * p;
        p *= inv2;
    }
    return r + s;
}

double dawson(double x)
{
    if (x < 0) return -dawson(-x);
    if (x == 0) return 0;
    const double x2 = x * x;
    if (x <= exact_image_limit) {
        // e^{-x^2} sum x^{2n+1} / (n! (2n+1)); all terms positive
        double p = x, sum = 0;
        for (int n = 0; n < 1000; ++n) {
            const double term = p / (2 * n + 1);
            sum += term;
            if (n > x2 && term < 1e-18 * sum) break;
            p *= x2 / (n + 1);
        }
        return std::exp(-x2) * sum;
    }
    // 1/(2x) sum (2n-1)!!/(2x^2)^n, truncated at the smallest term
    double term = 1, sum = 1;
    for (int n = 1; n < 200; ++n) {
        const double next = term * (2 * n - 1) / (2 * x2);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum / (2 * x);
}

double hurwitz_zeta(double s, double a)
{
    if (!(s > 1)) throw DomainError("hurwitz_zeta: s must be > 1");
    if (!(a > 0)) throw DomainError("hurwitz_zeta: a must be > 0");
    // Euler-Maclaurin after shifting a past max(12, s)
    const int N = static_cast<int>(std::max(0.0, std::ceil(std::max(12.0, s) - a)));
    double sum = 0;
    for (int k = 0; k < N; ++k) sum += std::pow(a + k, -s);
    const double b = a + N;
    sum += std::pow(b, 1 - s) / (s - 1) + 0.5 * std::pow(b, -s);
    // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * b^{-s-2j+1}
    double rising = s;  // s(s+1)...(s+2j-2)
    double fact = 2;    // (2j)!
    double bp = std::pow(b, -s - 1);
    for (int j = 1; j <= 12; ++j) {
        const double term = bernoulli_exact(j) / fact * rising * bp;
        sum += term;
        if (std::abs(term) < 1e-18 * sum) break;
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        bp /= b * b;
    }
    return sum;
}

double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

}  // namespace bogo
