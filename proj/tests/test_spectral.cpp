#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bogo/errors.hpp"
#include "bogo/spectral.hpp"

using namespace bogo;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

Spectrum laplace(std::vector<double> v)
{
    Spectrum s;
    s.values = Eigen::Map<VectorXd>(v.data(), static_cast<Index>(v.size()));
    return s;
}

std::vector<double> sorted(const VectorXd& v)
{
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end());
    return out;
}

double row_sum(const OverlapMatrix& o, Index j)
{
    double s = 0;
    for (SparseRowMatrix::InnerIterator it(o.entries, j); it; ++it) s += it.value();
    return s;
}

double interior_deviation(int cutoff, int interior)
{
    const auto p = build_schrodinger_circle_pair({0.0, 1.0}, {0.0}, cutoff, 2.0);
    double worst = 0;
    for (Index j = 0; j < p.minus.size(); ++j)
        if (p.minus.values[j] <= interior * interior + 1e-9) worst = std::max(worst, std::abs(row_sum(p.overlap, j) - 1));
    return worst;
}

}  // namespace

TEST_CASE("torus spectra")
{
    const auto p = build_torus_pair(1, scalar(1), scalar(1), 0, 0, 2, 1.0);
    CHECK(sorted(p.plus.values) == std::vector<double>{0, 1, 1, 4, 4});
    CHECK(p.overlap.is_identity);
    CHECK(p.omega_plus[0] == 1.0);

    const auto q = build_torus_pair(1, scalar(4), scalar(1), 0, 0, 3, 1.0);
    for (Index i = 0; i < q.plus.size(); ++i) CHECK(q.plus.values[i] == 4 * q.minus.values[i]);
    REQUIRE(q.geometry);
    CHECK(q.geometry->volume == doctest::Approx(2 * M_PI));

    MatrixXd g(2, 2);
    g << 2, 0.5, 0.5, 1;
    const auto t2 = build_torus_pair(2, g, MatrixXd::Identity(2, 2), 0, 0, 4, 1.0);
    CHECK(t2.plus.size() == 81);
    CHECK(t2.minus.values[0] == 0.0);
    CHECK(t2.minus.values[80] == 32.0);
    CHECK_THROWS_AS(build_torus_pair(2, scalar(1), scalar(1), 0, 0, 4, 1.0), DomainError);
}

TEST_CASE("torus overlap is a permutation matrix")
{
    // an anisotropic metric reorders the modes on one side only
    MatrixXd g(2, 2);
    g << 3, 0, 0, 1;
    const auto p = build_torus_pair(2, g, MatrixXd::Identity(2, 2), 0.5, 0, 3, 1.0);
    CHECK_FALSE(p.overlap.is_identity);
    for (Index j = 0; j < p.overlap.rows(); ++j) CHECK(row_sum(p.overlap, j) == 1.0);
    const auto r = validate(p);
    CHECK(r.ok);
    CHECK(r.worst_row_deviation == 0.0);
    CHECK(r.worst_column_deviation == 0.0);
}

TEST_CASE("Schrodinger circle pair")
{
    const auto z = build_schrodinger_circle_pair({0.0}, {0.0}, 8, 1.0);
    CHECK(z.overlap.is_identity);
    CHECK(sorted(z.minus.values)[16] == doctest::Approx(64.0).epsilon(1e-12));

    const auto c = build_schrodinger_circle_pair({0.7}, {0.0}, 8, 1.0);
    CHECK(c.overlap.is_identity);
    for (Index i = 0; i < c.plus.size(); ++i) CHECK(std::abs(c.plus.values[i] - c.minus.values[i] - 0.7) <= 1e-12);

    const auto p = build_schrodinger_circle_pair({0.0, 1.0}, {0.0}, 32, 2.0);
    // ground state of -d^2 + 2 cos x (a_0(4) / 4 in Mathieu form)
    CHECK(p.plus.values[0] == doctest::Approx(-1.0701).epsilon(1e-4));
    CHECK(interior_deviation(32, 16) <= 1e-8);
    CHECK_THROWS(build_schrodinger_circle_pair({0.0, 1.0}, {0.0}, 32, 0.1));
}

TEST_CASE("Schrodinger overlap completeness improves with the cutoff")
{
    const double d16 = interior_deviation(16, 8), d32 = interior_deviation(32, 8), d64 = interior_deviation(64, 8);
    CHECK(d32 <= d16 + 1e-10);
    CHECK(d64 <= d32 + 1e-10);
}

TEST_CASE("Dirac circle pair")
{
    const auto e = build_dirac_circle_pair(1, 1, 0, false, 6, 1.0);
    CHECK(e.overlap.is_identity);
    CHECK(e.plus.values == e.minus.values);

    const auto a = build_dirac_circle_pair(1, 1, 0, true, 2, 1.0);
    CHECK(a.plus.size() == 8);
    CHECK(sorted(a.plus.values) == std::vector<double>{-1.5, -1.5, -0.5, -0.5, 0.5, 0.5, 1.5, 1.5});
    CHECK(a.plus.fiber_dim == 2);

    // ordered by |mu|, then sign
    const auto s = build_dirac_circle_pair(2, 1, 0, false, 3, 1.0);
    for (Index i = 1; i < s.plus.size(); ++i) CHECK(std::abs(s.plus.values[i]) >= std::abs(s.plus.values[i - 1]));
    const VectorXd sq = s.minus.squared();
    for (Index i = 0; i < sq.size(); ++i) CHECK(sq[i] == s.minus.values[i] * s.minus.values[i]);

    const auto m = build_dirac_circle_pair(1, 1, 0.8, false, 4, 1.0);
    CHECK(m.plus.values.cwiseAbs().minCoeff() == doctest::Approx(0.8));
    CHECK(validate(m).ok);
    CHECK_THROWS_AS(build_dirac_circle_pair(2, 1, 0.8, false, 4, 1.0), UnsupportedError);
}

TEST_CASE("constant shift pair")
{
    const auto p = constant_shift_pair(laplace({0, 1, 4}), 1.0, 1.0);
    CHECK(sorted(p.plus.values) == std::vector<double>{1, 2, 5});
    CHECK(p.overlap.is_identity);
    const auto z = constant_shift_pair(laplace({0, 1, 4}), 0.0, 1.0);
    CHECK(z.plus.values == z.minus.values);
}

TEST_CASE("validation flags bad overlaps")
{
    MatrixXd o = MatrixXd::Identity(3, 3);
    o(0, 1) = 0.5;  // row 0 sums to 1.5
    const auto p = make_operator_pair(laplace({0, 1, 4}), laplace({0, 1, 4}), OverlapMatrix::from_dense(o), 1.0);
    const auto r = validate(p);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.violations.empty());
    CHECK(r.worst_row_deviation == doctest::Approx(0.5));
    CHECK_THROWS_AS(make_operator_pair(laplace({0, 1}), laplace({0, 1}), OverlapMatrix::identity(2), 0.0), DomainError);
    CHECK_THROWS(make_operator_pair(laplace({0, 1}), laplace({0, 1, 2}), OverlapMatrix::identity(2), 1.0));
}

TEST_CASE("swapping transposes the overlap")
{
    MatrixXd o(2, 2);
    o << 0.9, 0.1, 0.1, 0.9;
    o(0, 1) = 0.2;
    const auto p = make_operator_pair(laplace({0, 2}), laplace({1, 3}), OverlapMatrix::from_dense(o), 1.0);
    const auto s = swapped(p);
    CHECK(s.plus.values == p.minus.values);
    CHECK(MatrixXd(s.overlap.entries) == MatrixXd(p.overlap.entries).transpose());
    CHECK(s.omega_plus == p.omega_minus);
}

TEST_CASE("symmetric vielbein")
{
    MatrixXd g(2, 2);
    g << 2, 0.3, 0.3, 1;
    const MatrixXd e = symmetric_vielbein(g);
    CHECK((e * e.transpose() - g).norm() < 1e-14);
    CHECK((e - e.transpose()).norm() < 1e-15);
}
