#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "bogo/traces.hpp"

using namespace bogo;
using C = std::complex<double>;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

// Per-mode 2x2 blocks of the Dirac circle operators: A_- = diag(b k, -b k),
// A_+ = [[a k, M0], [M0, -a k]]. P(t) = A e^{-t A^2} with A^2 a multiple of 1.
Eigen::Matrix2d block_P(double scale, double k, double shift, double t)
{
    Eigen::Matrix2d A;
    A << scale * k, shift, shift, -scale * k;
    const double r2 = scale * scale * k * k + shift * shift;
    return A * std::exp(-t * r2);
}

Eigen::Matrix2d block_E(double scale, double k, double shift, double t)
{
    const double r2 = scale * scale * k * k + shift * shift;
    return Eigen::Matrix2d::Identity() * std::exp(-t * r2);
}

// Tr (P+(t) - P-(t)) (P+(s) - P-(s)) summed over modes
double phi_blocks(double a, double b, double shift, int cutoff, double t, double s)
{
    double sum = 0;
    for (int k = -cutoff; k <= cutoff; ++k) {
        const Eigen::Matrix2d dt = block_P(a, k, shift, t) - block_P(b, k, 0, t);
        const Eigen::Matrix2d ds = block_P(a, k, shift, s) - block_P(b, k, 0, s);
        sum += (dt * ds).trace();
    }
    return sum;
}

double psi_blocks(double a, double b, double shift, int cutoff, double t, double s)
{
    double sum = 0;
    for (int k = -cutoff; k <= cutoff; ++k) {
        const Eigen::Matrix2d dt = block_E(a, k, shift, t) - block_E(b, k, 0, t);
        const Eigen::Matrix2d ds = block_E(a, k, shift, s) - block_E(b, k, 0, s);
        sum += (dt * ds).trace();
    }
    return sum;
}

Spectrum single(double v)
{
    Spectrum s;
    s.values = VectorXd::Constant(1, v);
    return s;
}

}  // namespace

TEST_CASE("classical heat trace")
{
    CHECK(theta(single(0.0), 3.7) == 1.0);
    const auto circle = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 64, 1.0).minus;
    CHECK(theta(circle, 0.01) == doctest::Approx(std::sqrt(M_PI / 0.01)).epsilon(1e-6));
    CHECK(theta(circle, 50.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(theta(circle, 0.3, 2.0) == doctest::Approx(std::exp(-1.2) * theta(circle, 0.3)).epsilon(1e-14));
    // term-wise derivative
    const double h = 1e-6;
    CHECK(theta_derivative(circle, 0.2) ==
          doctest::Approx((theta(circle, 0.2 + h) - theta(circle, 0.2 - h)) / (2 * h)).epsilon(1e-8));
    // ratio test of the decay toward the zero mode: (Theta - 1) ~ 2 e^{-t}
    CHECK((theta(circle, 20.0) - 1) / (theta(circle, 10.0) - 1) == doctest::Approx(std::exp(-10.0)).epsilon(1e-8));
}

TEST_CASE("X trace")
{
    const auto eq = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 32, 1.0);
    CHECK(X_trace(eq, 0.1, 0.3) == doctest::Approx(theta(eq.minus, 0.4)).epsilon(1e-14));

    const auto base = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 32, 1.0);
    const auto sh = constant_shift_pair(base.minus, 0.6, 1.0);
    CHECK(X_trace(sh, 0.2, 0.5) == doctest::Approx(std::exp(-0.2 * 0.6) * theta(base.minus, 0.7)).epsilon(1e-14));

    // commuting pair collapses to a single sum over e^{-(4t+s)k^2}
    const auto tp = build_torus_pair(1, scalar(4), scalar(1), 0, 0, 32, 1.0);
    double single_sum = 0;
    for (int k = -32; k <= 32; ++k) single_sum += std::exp(-(4 * 0.1 + 0.1) * k * k);
    CHECK(X_trace(tp, 0.1, 0.1) == doctest::Approx(single_sum).epsilon(1e-14));
}

TEST_CASE("Y trace")
{
    const auto eq = build_dirac_circle_pair(1, 1, 0, false, 16, 1.0);
    double d = 0;
    for (Index k = 0; k < eq.minus.size(); ++k) {
        const double l = eq.minus.values[k] * eq.minus.values[k];
        d += l * std::exp(-0.5 * l);
    }
    CHECK(Y_trace(eq, 0.2, 0.3) == doctest::Approx(d).epsilon(1e-14));
    CHECK(Y_trace(eq, 0.2, 0.3) == doctest::Approx(-theta_derivative(eq.minus, 0.5)).epsilon(1e-14));
}

TEST_CASE("Xi and W traces")
{
    const auto p = build_dirac_circle_pair(1, 1, 0, false, 20, 1.0);
    const C xi0 = Xi_trace(p.minus, 0.4, 0.0);
    CHECK(xi0.real() == doctest::Approx(theta(p.minus, 0.4)).epsilon(1e-14));
    CHECK(std::abs(Xi_trace(p.minus, 0.4, 0.7).imag()) <= 1e-15);

    const auto sh = build_dirac_circle_pair(1, 1, 0.5, false, 20, 1.0);
    CHECK(W_trace(sh, 0.3, 0.2, 0.0, 0.0).real() == doctest::Approx(X_trace(sh, 0.3, 0.2)).epsilon(1e-13));
    const C w = W_trace(p, 0.3, 0.2, 0.4, 0.25);
    const C x = Xi_trace(p.minus, 0.5, 0.65);
    CHECK(std::abs(w - x) <= 1e-13 * std::abs(x));
    // complex alpha
    const C wc = W_trace(p, 0.3, 0.2, C(0.1, 0.2), C(0.0, -0.1));
    const C xc = Xi_trace(p.minus, 0.5, C(0.1, 0.1));
    CHECK(std::abs(wc - xc) <= 1e-13 * std::abs(xc));

    const auto ap = build_dirac_circle_pair(1, 1, 0, true, 20, 1.0);
    CHECK(std::abs(Xi_trace(ap.minus, 0.4, 1.3).imag()) <= 1e-15);
}

TEST_CASE("Psi")
{
    const auto eq = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 32, 1.0);
    CHECK(std::abs(Psi(eq, 0.3, 0.5)) <= 1e-14 * theta(eq.minus, 0.8));

    const auto base = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 64, 1.0);
    for (double M2 : {0.5, 2.0}) {
        const auto sh = constant_shift_pair(base.minus, M2, 1.0);
        for (double t : {0.05, 0.5, 2.0})
            for (double s : {0.1, 1.0}) {
                const double oracle = (std::exp(-t * M2) - 1) * (std::exp(-s * M2) - 1) * theta(base.minus, t + s);
                CHECK(Psi(sh, t, s) == doctest::Approx(oracle).epsilon(1e-12));
                CHECK(psi_shift_oracle(base.minus, M2, t, s) == doctest::Approx(oracle).epsilon(1e-14));
            }
    }

    // commuting torus: sum over k of (e^{-4tk^2} - e^{-tk^2})(e^{-4sk^2} - e^{-sk^2})
    const auto tp = build_torus_pair(1, scalar(4), scalar(1), 0, 0, 64, 1.0);
    double direct = 0;
    for (int k = -64; k <= 64; ++k) {
        const double kk = double(k) * k;
        direct += (std::exp(-0.8 * kk) - std::exp(-0.2 * kk)) * (std::exp(-0.8 * kk) - std::exp(-0.2 * kk));
    }
    CHECK(Psi(tp, 0.2, 0.2) > 0);
    CHECK(Psi(tp, 0.2, 0.2) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(Psi(tp, 0.2, 0.7) == Psi(tp, 0.7, 0.2));

    // noncommuting Dirac shift pair against the 2x2 blocks
    const auto ds = build_dirac_circle_pair(1, 1, 0.8, false, 24, 1.0);
    CHECK(Psi(ds, 0.3, 0.6) == doctest::Approx(psi_blocks(1, 1, 0.8, 24, 0.3, 0.6)).epsilon(1e-12));
}

TEST_CASE("Phi")
{
    const auto eq = build_dirac_circle_pair(1, 1, 0, false, 32, 1.0);
    CHECK(std::abs(Phi(eq, 0.3, 0.4)) <= 1e-14 * theta(eq.minus, 0.7));

    const auto sc = build_dirac_circle_pair(2, 1, 0, false, 32, 1.0);
    CHECK(Phi(sc, 0.3, 0.3) == doctest::Approx(phi_blocks(2, 1, 0, 32, 0.3, 0.3)).epsilon(1e-12));
    CHECK(Phi(sc, 0.3, 0.3) > 0);
    CHECK(Phi(sc, 0.1, 0.9) == Phi(sc, 0.9, 0.1));

    const auto ds = build_dirac_circle_pair(1, 1, 0.8, false, 32, 1.0);
    for (double t : {0.05, 0.4})
        for (double s : {0.2, 1.5}) {
            CHECK(Phi(ds, t, s) == doctest::Approx(phi_blocks(1, 1, 0.8, 32, t, s)).epsilon(1e-12));
            CHECK(phi_dirac_shift_oracle(ds.minus, 0.64, t, s) == doctest::Approx(Phi(ds, t, s)).epsilon(1e-12));
        }
}

TEST_CASE("relative trace slice")
{
    const auto ds = build_dirac_circle_pair(1, 1, 0.8, false, 16, 1.3);
    const double sigma = 0.35;
    const RelativeTraceSlice slice(ds, sigma, 0.7, -0.2);
    for (double tau : {0.01, 0.2, 3.0}) {
        const double direct = std::exp(-(tau + sigma) * 1.69) * (0.7 * Psi(ds, tau, sigma) - 0.2 * Phi(ds, tau, sigma));
        CHECK(slice(tau) == doctest::Approx(direct).epsilon(1e-12));
    }
}
