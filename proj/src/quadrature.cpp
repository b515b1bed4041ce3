#include "bogo/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "bogo/errors.hpp"

namespace bogo {

namespace {

// Gauss-Kronrod 10/21 nodes on [-1, 1]; the 10-point Gauss nodes are xgk[1], xgk[3], ...
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067316104, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    long id;
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const
    {
        if (x.error != y.error) return x.error < y.error;
        return x.id > y.id;
    }
};

Panel gk21(const Integrand& f, double a, double b, long id)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[10], resg = 0, resabs = std::abs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += wgk[j] * (f1[j] + f2[j]);
        resabs += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    Panel p{a, b, resk * h, 0, id};
    double err = std::abs((resk - resg) * h);
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50 * eps))
        err = std::max(50 * eps * resabs, err);
    if (!std::isfinite(p.value)) err = std::numeric_limits<double>::infinity();
    p.error = err;
    return p;
}

QuadratureResult adapt(const Integrand& f, const std::vector<double>& breaks, const Tolerance& tol)
{
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    std::vector<Panel> done;
    long id = 0;
    QuadratureResult r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        heap.push(gk21(f, breaks[i], breaks[i + 1], id++));
        r.evaluations += 21;
    }
    auto totals = [&](double& value, double& error) {
        // fixed order: by panel id
        std::vector<Panel> all = done;
        auto copy = heap;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.id < y.id; });
        value = 0;
        error = 0;
        for (const auto& p : all) {
            value += p.value;
            error += p.error;
        }
    };
    double value = 0, error = 0;
    int subdivisions = 0;
    // running sums are only used to decide when to stop
    double run_v = 0, run_e = 0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            run_v += copy.top().value;
            run_e += copy.top().error;
            copy.pop();
        }
    }
    while (true) {
        if (run_e <= std::max(tol.abs_tol, tol.rel_tol * std::abs(run_v))) break;
        if (subdivisions >= tol.max_subdivisions || heap.empty()) {
            r.converged = false;
            break;
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval exhausted at machine resolution
            heap.pop();
            done.push_back(worst);
            continue;
        }
        heap.pop();
        Panel left = gk21(f, worst.a, mid, id++);
        Panel right = gk21(f, mid, worst.b, id++);
        r.evaluations += 42;
        run_v += left.value + right.value - worst.value;
        run_e += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }
    totals(value, error);
    r.value = value;
    r.error_estimate = error;
    if (r.converged && !(error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(value))))
        r.converged = error <= 2 * std::max(tol.abs_tol, tol.rel_tol * std::abs(value));
    return r;
}

int smoothing_power(double exponent)
{
    // t = w^k makes t^a dt ~ w^{k(a+1)-1}; pick k with k(a+1) an integer when a in (-1, 0)
    if (exponent >= 0 || exponent <= -1) return 1;
    return static_cast<int>(std::ceil(1.0 / (exponent + 1.0) - 1e-9));
}

void finish(QuadratureResult& r, const Tolerance& tol, const char* what)
{
    if (!r.converged && tol.throw_on_failure)
        throw AccuracyError(std::string(what) + ": tolerance not reached", r.value,
                            r.error_estimate);
}

}  // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b, const Tolerance& tol,
                                    const IntervalHints& hints)
{
    if (!(b > a)) {
        if (a == b) return {0, 0, 0, true};
        auto r = integrate_interval(f, b, a, tol, hints);
        r.value = -r.value;
        return r;
    }
    const int ka = smoothing_power(hints.exponent_at_a);
    const int kb = smoothing_power(hints.exponent_at_b);
    QuadratureResult r;
    if (ka == 1 && kb == 1) {
        r = adapt(f, {a, b}, tol);
    } else {
        // w in [0,1] covers [a, mid] with t = a + L w^ka; w in [1,2] covers [mid, b]
        const double mid = 0.5 * (a + b), L = mid - a;
        auto g = [&](double w) {
            if (w <= 1) {
                const double t = a + L * std::pow(w, ka);
                return f(t) * ka * L * std::pow(w, ka - 1);
            }
            const double v = 2 - w;
            const double t = b - L * std::pow(v, kb);
            return f(t) * kb * L * std::pow(v, kb - 1);
        };
        r = adapt(g, {0.0, 1.0, 2.0}, tol);
    }
    finish(r, tol, "integrate_interval");
    return r;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const Tolerance& tol,
                                         const EndpointHints& hints)
{
    if (!(hints.scale > 0)) throw DomainError("integrate_semi_infinite: scale must be > 0");
    const double S = hints.scale;
    const int k0 = smoothing_power(hints.exponent_at_zero);
    // decay t^{-d}: t = S w^{-k} gives w^{k(d-1)-1}; k = 1/(d-1) when 1 < d < 2
    int k1 = 1;
    if (hints.decay_power > 1 && hints.decay_power < 2)
        k1 = static_cast<int>(std::ceil(1.0 / (hints.decay_power - 1.0) - 1e-9));
    auto g = [&](double v) {
        if (v <= 1) {
            const double t = S * std::pow(v, k0);
            if (t == 0) return 0.0;
            return f(t) * k0 * S * std::pow(v, k0 - 1);
        }
        const double w = 2 - v;
        if (w <= 0) return 0.0;
        const double t = S * std::pow(w, -k1);
        if (!std::isfinite(t)) return 0.0;
        return f(t) * k1 * S * std::pow(w, -k1 - 1);
    };
    QuadratureResult r = adapt(g, {0.0, 0.5, 1.0, 1.5, 2.0}, tol);
    finish(r, tol, "integrate_semi_infinite");
    return r;
}

QuadratureResult integrate_quadrant(const Integrand2& f, const Tolerance& tol,
                                    const EndpointHints& hints_t, const EndpointHints& hints_s)
{
    Tolerance inner = tol;
    inner.abs_tol = 0.1 * tol.abs_tol;
    inner.rel_tol = 0.1 * tol.rel_tol;
    inner.throw_on_failure = false;
    long evals = 0;
    double inner_error = 0;
    bool inner_ok = true;
    auto outer_f = [&](double s) {
        auto r = integrate_semi_infinite([&](double t) { return f(t, s); }, inner, hints_t);
        evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        inner_error = std::max(inner_error, r.error_estimate);
        return r.value;
    };
    Tolerance outer = tol;
    outer.throw_on_failure = false;
    auto r = integrate_semi_infinite(outer_f, outer, hints_s);
    r.evaluations = evals;
    r.converged = r.converged && inner_ok;
    finish(r, tol, "integrate_quadrant");
    return r;
}

std::vector<double> finite_difference_weights(double x0, const std::vector<double>& z, int m)
{
    // Fornberg's recursion
    const int n = static_cast<int>(z.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1, c4 = z[0] - x0;
    c[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1;
        const double c5 = c4;
        c4 = z[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = z[i] - z[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

MellinTransform make_mellin(MellinKind kind, double offset, int parts_order, JetFunction fn,
                            double scale)
{
    if (parts_order < 0) throw DomainError("make_mellin: parts_order must be >= 0");
    MellinTransform tr;
    tr.kind = kind;
    tr.offset = offset;
    tr.parts_order = parts_order;
    tr.scale = scale;
    auto jet_of_g = [kind, offset, fn](double x, int order) {
        const Jet X = Jet::variable(x, order);
        if (kind == MellinKind::f_type) return pow(X, offset) * fn(X);
        return pow(X, -offset) * fn(1.0 / X);
    };
    // For h-type the composition with 1/x loses ~eps/x^2 near x = 0, and for f-type
    // with a nonzero offset x^mu f(x) cancels singular jets; below x_floor the
    // derivative is continued from a longer jet taken at x_floor.
    const double x_floor = (kind == MellinKind::h_type || offset != 0) ? 0.25 * scale : 0.0;
    tr.g_derivative = [jet_of_g, x_floor](double x, int N) {
        if (x >= x_floor) return jet_of_g(x, N).derivative(N);
        constexpr int extra = 30;
        const Jet g = jet_of_g(x_floor, N + extra);
        const double d = x - x_floor;
        double s = 0, dp = 1, fact = 1;  // fact = (N+j)!/j!
        for (int i = 2; i <= N; ++i) fact *= i;
        for (int j = 0; j <= extra; ++j) {
            s += g.coeff(N + j) * fact * dp;
            dp *= d;
            fact *= static_cast<double>(N + j + 1) / (j + 1);
        }
        return s;
    };
    return tr;
}

MellinTransform make_mellin_fd(MellinKind kind, double offset, int parts_order,
                               std::function<double(double)> fn, double scale)
{
    if (parts_order < 0) throw DomainError("make_mellin_fd: parts_order must be >= 0");
    MellinTransform tr;
    tr.kind = kind;
    tr.offset = offset;
    tr.parts_order = parts_order;
    tr.scale = scale;
    auto g = [kind, offset, fn](double x) {
        x = std::max(x, 1e-100);
        return kind == MellinKind::f_type ? std::pow(x, offset) * fn(x)
                                          : std::pow(x, -offset) * fn(1.0 / x);
    };
    tr.g_derivative = [g, scale](double x, int N) {
        if (N == 0) return g(x);
        const int p = (N + 1) / 2 + 1;
        const double delta = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (N + 4));
        const double h = delta * std::max(x, scale);
        std::vector<double> z;
        if (x - p * h > 0) {
            for (int i = -p; i <= p; ++i) z.push_back(x + i * h);
        } else {
            // one-sided stencil of the same order near the origin
            for (int i = 0; i < N + 4; ++i) z.push_back(x + i * h);
        }
        const auto w = finite_difference_weights(x, z, N);
        double s = 0;
        for (std::size_t i = 0; i < z.size(); ++i) s += w[i] * g(z[i]);
        return s;
    };
    return tr;
}

double mellin_hat(const MellinTransform& tr, double q, const Tolerance& tol)
{
    const int N = tr.parts_order;
    if (!(q < N)) throw DomainError("mellin_hat: q must be below parts_order");
    if (!tr.g_derivative) throw DomainError("mellin_hat: transform has no evaluator");
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    const double p = N - q - 1;
    auto integrand = [&](double x) { return std::pow(x, p) * sign * tr.g_derivative(x, N); };
    EndpointHints hints;
    hints.scale = tr.scale;
    hints.exponent_at_zero = p;
    if (tr.decay > 0) hints.decay_power = tr.decay + N - p;
    const auto r = integrate_semi_infinite(integrand, tol, hints);
    return r.value / std::tgamma(N - q);
}

double mellin_hat(JetFunction f, double offset, double q, int parts_order, const Tolerance& tol)
{
    return mellin_hat(make_mellin(MellinKind::f_type, offset, parts_order, std::move(f)), q, tol);
}

double mellin_hat_derivative(const MellinTransform& tr, int k, const Tolerance& tol, double step,
                             bool richardson)
{
    if (k < 0) throw DomainError("mellin_hat_derivative: k must be >= 0");
    if (!(step > 0 && k + step < tr.parts_order))
        throw DomainError("mellin_hat_derivative: parts_order must exceed k + step");
    auto central = [&](double h) {
        return (mellin_hat(tr, k + h, tol) - mellin_hat(tr, k - h, tol)) / (2 * h);
    };
    const double d1 = central(step);
    if (!richardson) return d1;
    const double d2 = central(0.5 * step);
    return (4 * d2 - d1) / 3;
}

}  // namespace bogo
