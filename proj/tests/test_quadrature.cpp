#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bogo/errors.hpp"
#include "bogo/quadrature.hpp"
#include "bogo/specfun.hpp"

using namespace bogo;

TEST_CASE("semi-infinite integrals")
{
    CHECK(integrate_semi_infinite([](double t) { return std::exp(-t); }).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_semi_infinite([](double t) { return t * std::exp(-t * t); }).value ==
          doctest::Approx(0.5).epsilon(1e-12));
    const auto r = integrate_semi_infinite([](double t) { return eval_h(KernelKind::bose, t) * std::exp(-t); },
                                           {1e-13, 1e-11});
    CHECK(r.value == doctest::Approx(1 / (M_E - 1)).epsilon(1e-10));
    CHECK(r.error_estimate < 1e-9);
    CHECK(r.evaluations > 0);
    // t^{-1/2} e^{-t} = sqrt(pi), integrable singularity at 0
    const auto s = integrate_semi_infinite([](double t) { return std::exp(-t) / std::sqrt(t); }, {1e-13, 1e-12},
                                           {1.0, -0.5, 0.0});
    CHECK(s.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));
    // algebraic decay 1/(1+t)^2
    const auto p = integrate_semi_infinite([](double t) { return 1 / ((1 + t) * (1 + t)); }, {1e-13, 1e-12},
                                           {1.0, 0.0, 2.0});
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("finite intervals with endpoint singularities")
{
    const auto r = integrate_interval([](double x) { return std::log(x); }, 0, 1, {1e-13, 1e-12});
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-11));
    // Beta(1/2, 1/2) = pi
    const auto b = integrate_interval([](double x) { return 1 / std::sqrt(x * (1 - x)); }, 0, 1, {1e-12, 1e-11},
                                      {-0.5, -0.5});
    CHECK(b.value == doctest::Approx(M_PI).epsilon(1e-10));
    CHECK(integrate_interval([](double x) { return x * x; }, -1, 2).value == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("quadrant integrals")
{
    CHECK(integrate_quadrant([](double t, double s) { return std::exp(-t - s); }).value ==
          doctest::Approx(1.0).epsilon(1e-11));
    const auto r = integrate_quadrant(
        [](double t, double s) { return eval_h(KernelKind::fermi, t) * eval_h(KernelKind::bose, s) * std::exp(-t - s); },
        {1e-13, 1e-11});
    CHECK(r.value == doctest::Approx(eval_E(KernelKind::bose, 2.0)).epsilon(1e-9));
    CHECK(r.value == doctest::Approx(0.15651764274966565).epsilon(1e-9));
    // product form equals the product of 1D integrals
    const auto f = [](double t) { return std::exp(-2 * t) * (1 + t); };
    const auto g = [](double s) { return std::exp(-s) / (1 + s * s); };
    const double a = integrate_semi_infinite(f, {1e-14, 1e-13}).value;
    const double b = integrate_semi_infinite(g, {1e-14, 1e-13}).value;
    const double q = integrate_quadrant([&](double t, double s) { return f(t) * g(s); }, {1e-14, 1e-12}).value;
    CHECK(q == doctest::Approx(a * b).epsilon(1e-11));
}

TEST_CASE("determinism")
{
    const auto f = [](double t) { return eval_h(KernelKind::zero, t) * std::exp(-0.3 * t); };
    const auto a = integrate_semi_infinite(f, {1e-13, 1e-11});
    const auto b = integrate_semi_infinite(f, {1e-13, 1e-11});
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("accuracy failure")
{
    // 1/t is not integrable at 0
    Tolerance tol{1e-14, 1e-14, 50, true};
    CHECK_THROWS_AS(integrate_interval([](double x) { return 1 / x; }, 0, 1, tol), AccuracyError);
    tol.throw_on_failure = false;
    CHECK_FALSE(integrate_interval([](double x) { return 1 / x; }, 0, 1, tol).converged);
}

TEST_CASE("Mellin transform of e^{-t}")
{
    const JetFunction e = [](const Jet& t) { return exp(-t); };
    // hat is identically 1
    CHECK(mellin_hat(e, 0.0, -1.5, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mellin_hat(e, 0.0, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mellin_hat(e, 0.0, 2.5, 3) == doctest::Approx(1.0).epsilon(1e-9));
    for (double q : {-2.5, -1.2, -0.3}) CHECK(mellin_hat(e, 0.0, q, 0) == doctest::Approx(mellin_hat(e, 0.0, q, 2)).epsilon(1e-9));
    const auto tr = make_mellin(MellinKind::f_type, 0.0, 2, e);
    CHECK(std::abs(mellin_hat_derivative(tr, 1)) < 1e-6);
}

TEST_CASE("Mellin transform of 1/(1+t)")
{
    // hat_q = Gamma(1 + q)
    const JetFunction f = [](const Jet& t) { return 1.0 / (1.0 + t); };
    auto tr = make_mellin(MellinKind::f_type, 0.0, 2, f, 1.0);
    tr.decay = 1;
    for (double q : {-0.5, 0.5, 1.0, 1.5}) CHECK(mellin_hat(tr, q) == doctest::Approx(std::tgamma(1 + q)).epsilon(1e-11));
    // d/dq Gamma(1 + q) at q = 1 is 1 - gamma
    CHECK(mellin_hat_derivative(tr, 1, {}, 0.02) == doctest::Approx(1 - 0.5772156649015329).epsilon(1e-6));
    // finite-difference derivatives lose a few digits
    const auto fd = make_mellin_fd(MellinKind::f_type, 0.0, 1, [](double t) { return 1 / (1 + t); });
    CHECK(mellin_hat(fd, 0.5) == doctest::Approx(std::tgamma(1.5)).epsilon(1e-5));
}

TEST_CASE("h-type Mellin transform")
{
    // h(t) = e^{-1/t} t^{-2}: x^{-2} h(1/x) = e^{-x}, so the transform is 1 for every q
    const JetFunction h = [](const Jet& t) { return exp(-1.0 / t) / (t * t); };
    const auto tr = make_mellin(MellinKind::h_type, 2.0, 2, h);
    for (double q : {-0.5, 0.5, 1.5}) CHECK(mellin_hat(tr, q) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Fornberg weights")
{
    const auto w = finite_difference_weights(0.0, {-1.0, 0.0, 1.0}, 2);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(-2.0));
    CHECK(w[2] == doctest::Approx(1.0));
    const auto d = finite_difference_weights(0.0, {-2.0, -1.0, 0.0, 1.0, 2.0}, 1);
    CHECK(d[0] == doctest::Approx(1.0 / 12));
    CHECK(d[1] == doctest::Approx(-2.0 / 3));
    CHECK(std::abs(d[2]) < 1e-15);
}
