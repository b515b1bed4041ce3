#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bogo/bogolyubov.hpp"
#include "bogo/errors.hpp"
#include "bogo/quadrature.hpp"
#include "bogo/traces.hpp"

using namespace bogo;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

Spectrum laplace(double v)
{
    Spectrum s;
    s.values = VectorXd::Constant(1, v);
    return s;
}

// omega+ = 2, omega- = 1 at m = 1
OperatorPair one_mode() { return make_operator_pair(laplace(3), laplace(0), OverlapMatrix::identity(1), 1.0); }

OperatorPair torus(int cutoff) { return build_torus_pair(1, scalar(4), scalar(1), 0, 0, cutoff, 1.0); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("single mode")
{
    const double sinh_form = std::pow(std::sinh(0.5), 2) / (std::sinh(2.0) * std::sinh(1.0));
    CHECK(B_b_single_mode(2, 1, 1) == doctest::Approx(sinh_form).epsilon(1e-15));
    CHECK(B_b_single_mode(2, 1, 1) == doctest::Approx(0.063707601795230426).epsilon(1e-15));
    const auto p = one_mode();
    CHECK(std::abs(B_b_spectral(p, 1.0, SpectralForm::paired) - sinh_form) <= 1e-14);
    CHECK(std::abs(B_b_spectral(p, 1.0, SpectralForm::expanded) - sinh_form) <= 1e-14);
    CHECK(B_f_single_mode(0.7, 0.7, 1.3, 2.0) == 0.0);
}

TEST_CASE("equal operators give zero")
{
    const auto b = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 16, 1.0);
    const auto f = build_dirac_circle_pair(1, 1, 0, false, 16, 1.0);
    for (double beta : {0.2, 1.0, 4.0}) {
        CHECK(B_b_spectral(b, beta) == 0.0);
        CHECK(std::abs(B_b_spectral(b, beta, SpectralForm::expanded)) <= 1e-14 * b.omega_plus.size());
        CHECK(B_f_spectral(f, beta) == 0.0);
        CHECK(std::abs(B_b_heat(b, beta).value) <= 1e-12);
        CHECK(std::abs(B_f_heat(f, beta).value) <= 1e-12);
    }
    CHECK(N_truncated(b, Flavor::bose) == 0.0);
    CHECK(adiabatic_oracle(b, Flavor::bose, 3.0) == 0.0);
    CHECK(zeta(b, Flavor::bose, 1.5) == 0.0);
}

TEST_CASE("spectral forms agree")
{
    const auto s = build_schrodinger_circle_pair({0.0, 1.0}, {0.3}, 12, 2.0);
    const auto d = build_dirac_circle_pair(1, 1, 0.6, true, 12, 0.8);
    for (double beta : {0.3, 1.0, 3.0}) {
        const double p = B_b_spectral(s, beta), e = B_b_spectral(s, beta, SpectralForm::expanded);
        CHECK(std::abs(p - e) <= 1e-12 * std::abs(p) + 1e-14);
        const double fp = B_f_spectral(d, beta), fe = B_f_spectral(d, beta, SpectralForm::expanded);
        CHECK(std::abs(fp - fe) <= 1e-12 * std::abs(fp) + 1e-14);
        CHECK(p > 0);
        CHECK(fp > 0);
    }
}

TEST_CASE("spectral and heat routes agree")
{
    const auto t = torus(64);
    for (double beta : {0.5, 1.0, 2.0}) {
        const double s = B_b_spectral(t, beta);
        const auto h = B_b_heat(t, beta);
        CHECK(rel(h.value, s) <= 1e-6);
    }
    const auto d = build_dirac_circle_pair(1, 1, 1.0, false, 64, 1.0);
    CHECK(rel(B_f_heat(d, 1.0).value, B_f_spectral(d, 1.0)) <= 1e-6);
    const auto sc = build_dirac_circle_pair(2, 1, 0, false, 64, 1.0);
    CHECK(rel(B_f_heat(sc, 1.0).value, B_f_spectral(sc, 1.0)) <= 1e-6);
    const auto sp = build_schrodinger_circle_pair({0.0, 1.0}, {0.0}, 24, 2.0);
    CHECK(rel(B_b_heat(sp, 0.7).value, B_b_spectral(sp, 0.7)) <= 1e-6);
}

TEST_CASE("heat route with closed-form relative traces")
{
    const auto base = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 64, 1.0);
    const double M2 = 0.8;
    const auto sh = constant_shift_pair(base.minus, M2, 1.0);
    const RelativeTrace oracle = [&](double t, double s) { return psi_shift_oracle(base.minus, M2, t, s); };
    const double a = B_b_heat(oracle, 1.0, 1.0).value;
    const double b = B_b_heat(sh, 1.0).value;
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));

    const auto d = build_dirac_circle_pair(1, 1, std::sqrt(M2), false, 64, 1.0);
    const RelativeTrace phi = [&](double t, double s) { return phi_dirac_shift_oracle(d.minus, M2, t, s); };
    const RelativeTrace psi = [&](double t, double s) { return Psi(d, t, s); };
    const double fa = B_f_heat(phi, psi, 1.0, 1.0).value;
    CHECK(std::abs(fa - B_f_heat(d, 1.0).value) <= 1e-10 * std::abs(fa));
}

TEST_CASE("swapping the operators")
{
    const auto s = build_schrodinger_circle_pair({0.0, 1.0}, {0.0}, 12, 2.0);
    CHECK(B_b_spectral(swapped(s), 0.8) == doctest::Approx(B_b_spectral(s, 0.8)).epsilon(1e-13));
    const auto d = build_dirac_circle_pair(1, 1, 0.5, false, 12, 1.0);
    CHECK(B_f_spectral(swapped(d), 0.8) == doctest::Approx(B_f_spectral(d, 0.8)).epsilon(1e-13));
}

TEST_CASE("fixed-truncation limits")
{
    // (1/4)(sqrt(w+/w-) - sqrt(w-/w+))^2 = 1/8 for one mode
    CHECK(N_truncated(one_mode(), Flavor::bose) == doctest::Approx(0.125).epsilon(1e-15));
    const auto t = torus(8);
    CHECK(B_b_spectral(t, 1e-3) / N_truncated(t, Flavor::bose) == doctest::Approx(1.0).epsilon(0.02));
    const auto d = build_dirac_circle_pair(2, 1, 0, false, 8, 1.0);
    CHECK(B_f_spectral(d, 1e-3) / N_truncated(d, Flavor::fermi) == doctest::Approx(1.0).epsilon(0.02));

    const double a = adiabatic_oracle(one_mode(), Flavor::bose, 10.0);
    CHECK(a == doctest::Approx(std::exp(-20.0) + std::exp(-40.0) - 2 * std::exp(-30.0)).epsilon(1e-12));
    CHECK(a / B_b_spectral(one_mode(), 10.0) == doctest::Approx(1.0).epsilon(1e-4));
    // B decreases to 0
    CHECK(B_b_spectral(t, 20.0) < 1e-15);
}

TEST_CASE("momentum integrals")
{
    const auto g = make_geometry(scalar(4), scalar(1), 2 * M_PI, 1);
    CHECK(V_b(g) == doctest::Approx(M_PI / 4 - 0.5).epsilon(1e-12));
    // 4 int_0^inf (x/sinh 2x - x/(2 sinh x))^2 dx, the m -> 0 single-mode integral
    const double vf = 4 * integrate_semi_infinite(
                              [](double x) {
                                  const double d = x < 1e-4 ? -0.25 * x * x : x / std::sinh(2 * x) - x / (2 * std::sinh(x));
                                  return d * d;
                              },
                              {1e-15, 1e-13})
                              .value;
    const auto gf = make_geometry(scalar(4), scalar(1), 2 * M_PI, 2);
    CHECK(V_f(gf) == doctest::Approx(vf).epsilon(1e-11));
    CHECK(V_f(gf) == doctest::Approx(0.3493658692579361).epsilon(1e-12));
    const auto eq = make_geometry(scalar(2), scalar(2), 2 * M_PI, 1);
    CHECK(V_b(eq) == 0.0);
    CHECK(V_f(eq) == 0.0);
    // V scales with the volume and the fiber count
    CHECK(V_b(make_geometry(scalar(4), scalar(1), 4 * M_PI, 3)) == doctest::Approx(6 * V_b(g)).epsilon(1e-12));
}

TEST_CASE("zeta function")
{
    const auto t = torus(64);
    // beyond the pole the completed and truncated zeta differ only by the tail
    CHECK(zeta_completed(t, Flavor::bose, 3.0) == doctest::Approx(zeta(t, Flavor::bose, 3.0)).epsilon(1e-3));
    const double r = zeta_pole_residue(t, Flavor::bose);
    CHECK(r == doctest::Approx(M_PI / 4 - 0.5).epsilon(0.05));
}

TEST_CASE("sweeps")
{
    const auto t = torus(32);
    const auto s = run_sweep(t, Flavor::bose, {2.0, 0.5, 1.0, 0.5}, {Route::spectral, Route::heat}, 2);
    CHECK(s.betas == std::vector<double>{0.5, 1.0, 2.0});
    REQUIRE(s.records.size() == 6);
    CHECK(s.records[0].route == Route::spectral);
    CHECK(s.records[1].route == Route::heat);
    CHECK(s.ok());
    for (std::size_t i = 0; i < 3; ++i) CHECK(rel(s.value(i, Route::heat), s.value(i)) <= 1e-6);
    const std::string csv = sweep_csv(s);
    CHECK(csv.rfind("beta,value,route,error_estimate,discrepancy\n", 0) == 0);
    // thread count does not change the output
    const auto s1 = run_sweep(t, Flavor::bose, {0.5, 1.0, 2.0}, {Route::spectral, Route::heat}, 1);
    CHECK(sweep_csv(s1) == csv);
    CHECK(sweep_json(s1).dump() == sweep_json(s).dump());

    const auto only = run_sweep(t, Flavor::bose, {1.0}, {Route::spectral}, 1);
    CHECK(sweep_csv(only).rfind("beta,value,route,error_estimate\n", 0) == 0);
    CHECK_THROWS_AS(run_sweep(t, Flavor::bose, {-1.0}, {Route::spectral}, 1), DomainError);
}

TEST_CASE("thread count from the environment")
{
    setenv("BOGO_THREADS", "3", 1);
    CHECK(default_thread_count() == 3);
    setenv("BOGO_THREADS", "zero", 1);
    CHECK(default_thread_count() >= 1);
    unsetenv("BOGO_THREADS");
}
