#include "bogo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "bogo/errors.hpp"

namespace bogo {

namespace {

// Stable ordering of `keys`; ties keep the original (basis) index order.
std::vector<Index> stable_order(const std::vector<double>& keys)
{
    std::vector<Index> idx(keys.size());
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Index x, Index y) { return keys[x] < keys[y]; });
    return idx;
}

// position[i] = rank of basis element i in `order`
std::vector<Index> inverse_permutation(const std::vector<Index>& order)
{
    std::vector<Index> pos(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) pos[order[r]] = static_cast<Index>(r);
    return pos;
}

bool is_spd(const MatrixXd& g)
{
    if (g.rows() != g.cols() || g.rows() == 0) return false;
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
        return false;
    Eigen::LLT<MatrixXd> llt(g);
    return llt.info() == Eigen::Success;
}

}  // namespace

VectorXd Spectrum::squared() const
{
    if (kind == SpectrumKind::laplace) return values;
    return values.array().square().matrix();
}

OverlapMatrix OverlapMatrix::identity(Index size)
{
    OverlapMatrix o;
    o.entries.resize(size, size);
    o.entries.setIdentity();
    o.is_identity = true;
    return o;
}

OverlapMatrix OverlapMatrix::from_dense(const MatrixXd& m, double drop_below)
{
    OverlapMatrix o;
    o.entries = m.sparseView(1.0, drop_below);
    o.entries.makeCompressed();
    o.is_identity = false;
    return o;
}

MatrixXd symmetric_vielbein(const MatrixXd& g)
{
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    if (es.info() != Eigen::Success) throw NumericError("symmetric_vielbein: eigensolver failed");
    return es.operatorSqrt();
}

GeometryPair make_geometry(const MatrixXd& g_plus, const MatrixXd& g_minus, double volume,
                           int fiber_dim)
{
    if (!is_spd(g_plus) || !is_spd(g_minus))
        throw DomainError("make_geometry: metrics must be symmetric positive definite");
    if (g_plus.rows() != g_minus.rows()) throw DomainError("make_geometry: dimension mismatch");
    if (!(volume > 0)) throw DomainError("make_geometry: volume must be positive");
    GeometryPair geom;
    geom.n = static_cast<int>(g_plus.rows());
    geom.g_plus = g_plus;
    geom.g_minus = g_minus;
    geom.vielbein_plus = symmetric_vielbein(g_plus);
    geom.vielbein_minus = symmetric_vielbein(g_minus);
    geom.volume = volume;
    geom.fiber_dim = fiber_dim;
    return geom;
}

OperatorPair make_operator_pair(Spectrum plus, Spectrum minus, OverlapMatrix overlap, double m)
{
    if (!(m > 0)) throw DomainError("operator pair: mass m must be positive");
    if (plus.kind != minus.kind) throw DomainError("operator pair: spectra of different kinds");
    if (plus.n != minus.n) throw DomainError("operator pair: dimension mismatch");
    if (plus.fiber_dim != minus.fiber_dim) throw DomainError("operator pair: fiber mismatch");
    if (overlap.rows() != minus.size() || overlap.cols() != plus.size())
        throw DomainError("operator pair: overlap shape does not match the spectra");
    OperatorPair p;
    p.m = m;
    const double m2 = m * m;
    p.omega_plus = (plus.squared().array() + m2).matrix();
    p.omega_minus = (minus.squared().array() + m2).matrix();
    if ((p.omega_plus.array() <= 0).any() || (p.omega_minus.array() <= 0).any())
        throw DomainError("operator pair: lambda + m^2 must be positive");
    p.omega_plus = p.omega_plus.array().sqrt().matrix();
    p.omega_minus = p.omega_minus.array().sqrt().matrix();
    p.plus = std::move(plus);
    p.minus = std::move(minus);
    p.overlap = std::move(overlap);
    p.overlap.entries.makeCompressed();
    return p;
}

OperatorPair swapped(const OperatorPair& pair)
{
    OverlapMatrix o;
    o.entries = SparseRowMatrix(pair.overlap.entries.transpose());
    o.is_identity = pair.overlap.is_identity;
    OperatorPair p = make_operator_pair(pair.minus, pair.plus, std::move(o), pair.m);
    if (pair.geometry) {
        GeometryPair g = *pair.geometry;
        std::swap(g.g_plus, g.g_minus);
        std::swap(g.vielbein_plus, g.vielbein_minus);
        p.geometry = g;
    }
    if (pair.family) {
        ModeFamily f = *pair.family;
        std::swap(f.a, f.b);
        std::swap(f.q_plus, f.q_minus);
        p.family = f;
    }
    return p;
}

OperatorPair build_torus_pair(int n, const MatrixXd& g_plus, const MatrixXd& g_minus,
                              double q_plus, double q_minus, int cutoff, double m)
{
    if (n < 1) throw DomainError("build_torus_pair: n must be >= 1");
    if (cutoff < 1) throw DomainError("build_torus_pair: cutoff must be >= 1");
    if (g_plus.rows() != n || g_minus.rows() != n)
        throw DomainError("build_torus_pair: metric size does not match n");
    GeometryPair geom = make_geometry(g_plus, g_minus, std::pow(2 * M_PI, n), 1);

    const Index side = 2 * cutoff + 1;
    Index count = 1;
    for (int i = 0; i < n; ++i) count *= side;
    std::vector<double> lp(count), lm(count);
    Eigen::VectorXd k(n);
    for (Index idx = 0; idx < count; ++idx) {
        Index r = idx;
        for (int i = n - 1; i >= 0; --i) {
            k[i] = static_cast<double>(r % side - cutoff);
            r /= side;
        }
        lp[idx] = k.dot(g_plus * k) + q_plus;
        lm[idx] = k.dot(g_minus * k) + q_minus;
    }
    const auto op = stable_order(lp), om = stable_order(lm);
    Spectrum sp, sm;
    sp.n = sm.n = n;
    sp.values.resize(count);
    sm.values.resize(count);
    for (Index r = 0; r < count; ++r) {
        sp.values[r] = lp[op[r]];
        sm.values[r] = lm[om[r]];
    }
    sp.label = "torus+";
    sm.label = "torus-";

    OverlapMatrix overlap;
    if (op == om) {
        overlap = OverlapMatrix::identity(count);
    } else {
        const auto pp = inverse_permutation(op), pm = inverse_permutation(om);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(count);
        for (Index i = 0; i < count; ++i) trip.emplace_back(pm[i], pp[i], 1.0);
        overlap.entries.resize(count, count);
        overlap.entries.setFromTriplets(trip.begin(), trip.end());
    }
    OperatorPair pair = make_operator_pair(std::move(sp), std::move(sm), std::move(overlap), m);
    pair.geometry = geom;
    if (n == 1) {
        ModeFamily f;
        f.kind = ModeFamily::Kind::torus;
        f.a = std::sqrt(g_plus(0, 0));
        f.b = std::sqrt(g_minus(0, 0));
        f.q_plus = q_plus;
        f.q_minus = q_minus;
        f.cutoff = cutoff;
        pair.family = f;
    }
    return pair;
}

namespace {

struct CircleEigen {
    VectorXd values;          // ascending
    Eigen::MatrixXcd vectors;  // columns in plane-wave basis, same order
};

CircleEigen circle_eigen(const FourierPotential& v, int cutoff)
{
    const int P = static_cast<int>(v.size()) - 1;
    if (!v.empty() && std::abs(v[0].imag()) > 0)
        throw DomainError("schrodinger pair: v_0 must be real");
    if (P >= 0 && cutoff < P + 1)
        throw DomainError("schrodinger pair: cutoff must exceed the largest Fourier index");
    const Index dim = 2 * cutoff + 1;
    const double v0 = v.empty() ? 0.0 : v[0].real();
    bool constant = true;
    for (int p = 1; p <= P; ++p) constant = constant && v[p] == std::complex<double>(0.0);

    CircleEigen out;
    if (constant) {
        // plane waves are eigenfunctions; order by k^2 with basis index tie-break
        std::vector<double> key(dim);
        for (Index i = 0; i < dim; ++i) {
            const double k = static_cast<double>(i - cutoff);
            key[i] = k * k + v0;
        }
        const auto order = stable_order(key);
        out.values.resize(dim);
        out.vectors = Eigen::MatrixXcd::Zero(dim, dim);
        for (Index r = 0; r < dim; ++r) {
            out.values[r] = key[order[r]];
            out.vectors(order[r], r) = 1.0;
        }
        return out;
    }
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        const double k = static_cast<double>(i - cutoff);
        H(i, i) = k * k + v0;
        for (int p = 1; p <= P; ++p) {
            // <e_k| V |e_{k'}> = v_{k-k'}
            if (i - p >= 0) {
                H(i, i - p) = v[p];
                H(i - p, i) = std::conj(v[p]);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericError("schrodinger pair: diagonalization failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    return out;
}

}  // namespace

OperatorPair build_schrodinger_circle_pair(const FourierPotential& v_plus,
                                           const FourierPotential& v_minus, int cutoff, double m)
{
    if (cutoff < 1) throw DomainError("schrodinger pair: cutoff must be >= 1");
    const auto ep = circle_eigen(v_plus, cutoff);
    const auto em = circle_eigen(v_minus, cutoff);
    const MatrixXd O = (em.vectors.adjoint() * ep.vectors).cwiseAbs2();

    Spectrum sp, sm;
    sp.values = ep.values;
    sm.values = em.values;
    sp.label = "schrodinger+";
    sm.label = "schrodinger-";
    OverlapMatrix overlap;
    const bool same_basis = (ep.vectors - em.vectors).cwiseAbs().maxCoeff() == 0.0;
    if (same_basis)
        overlap = OverlapMatrix::identity(ep.values.size());
    else
        overlap = OverlapMatrix::from_dense(O);
    OperatorPair pair = make_operator_pair(std::move(sp), std::move(sm), std::move(overlap), m);
    MatrixXd g = MatrixXd::Identity(1, 1);
    pair.geometry = make_geometry(g, g, 2 * M_PI, 1);
    return pair;
}

OperatorPair build_dirac_circle_pair(double scale_plus, double scale_minus, double shift,
                                     bool antiperiodic, int cutoff, double m)
{
    if (!(scale_plus > 0) || !(scale_minus > 0))
        throw DomainError("dirac pair: scales must be positive");
    if (cutoff < 1) throw DomainError("dirac pair: cutoff must be >= 1");
    if (shift != 0 && scale_plus != scale_minus)
        throw UnsupportedError("dirac pair: a shift requires equal scales");

    std::vector<double> ks;
    if (antiperiodic)
        for (int i = -cutoff; i < cutoff; ++i) ks.push_back(i + 0.5);
    else
        for (int i = -cutoff; i <= cutoff; ++i) ks.push_back(i);
    const Index dim = 2 * static_cast<Index>(ks.size());

    // basis element 2i + c: Fourier mode ks[i], fiber component c
    std::vector<double> mu_minus(dim), mu_plus(dim);
    std::vector<double> mix_cos2(ks.size(), 1.0);  // |<e_0, v_+>|^2 per mode
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double k = ks[i];
        mu_minus[2 * i] = scale_minus * k;
        mu_minus[2 * i + 1] = -scale_minus * k;
        if (shift == 0) {
            mu_plus[2 * i] = scale_plus * k;
            mu_plus[2 * i + 1] = -scale_plus * k;
        } else {
            // A_+ = [[a k, M0], [M0, -a k]]: eigenvalues +-r, rotation by theta/2
            const double ak = scale_plus * k;
            const double r = std::hypot(ak, shift);
            const double theta = std::atan2(shift, ak);
            mu_plus[2 * i] = r;
            mu_plus[2 * i + 1] = -r;
            mix_cos2[i] = std::pow(std::cos(0.5 * theta), 2);
        }
    }
    std::vector<double> key_p(dim), key_m(dim);
    for (Index b = 0; b < dim; ++b) {
        key_p[b] = std::abs(mu_plus[b]);
        key_m[b] = std::abs(mu_minus[b]);
    }
    const auto op = stable_order(key_p), om = stable_order(key_m);
    const auto pp = inverse_permutation(op), pm = inverse_permutation(om);

    Spectrum sp, sm;
    sp.kind = sm.kind = SpectrumKind::dirac;
    sp.fiber_dim = sm.fiber_dim = 2;
    sp.values.resize(dim);
    sm.values.resize(dim);
    for (Index r = 0; r < dim; ++r) {
        sp.values[r] = mu_plus[op[r]];
        sm.values[r] = mu_minus[om[r]];
    }
    sp.label = "dirac+";
    sm.label = "dirac-";

    OverlapMatrix overlap;
    if (shift == 0 && op == om) {
        overlap = OverlapMatrix::identity(dim);
    } else {
        std::vector<Eigen::Triplet<double>> trip;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const Index b0 = 2 * static_cast<Index>(i), b1 = b0 + 1;
            if (shift == 0) {
                trip.emplace_back(pm[b0], pp[b0], 1.0);
                trip.emplace_back(pm[b1], pp[b1], 1.0);
                continue;
            }
            const double c2 = mix_cos2[i], s2 = 1.0 - c2;
            // rows: minus components e_0, e_1; columns: plus eigenvectors v_+, v_-
            trip.emplace_back(pm[b0], pp[b0], c2);
            trip.emplace_back(pm[b1], pp[b0], s2);
            trip.emplace_back(pm[b0], pp[b1], s2);
            trip.emplace_back(pm[b1], pp[b1], c2);
        }
        overlap.entries.resize(dim, dim);
        overlap.entries.setFromTriplets(trip.begin(), trip.end());
        overlap.entries.prune(0.0);
    }
    OperatorPair pair = make_operator_pair(std::move(sp), std::move(sm), std::move(overlap), m);
    MatrixXd gp(1, 1), gm(1, 1);
    gp(0, 0) = scale_plus * scale_plus;
    gm(0, 0) = scale_minus * scale_minus;
    GeometryPair geom = make_geometry(gp, gm, 2 * M_PI, 2);
    geom.vielbein_plus(0, 0) = scale_plus;
    geom.vielbein_minus(0, 0) = scale_minus;
    pair.geometry = geom;
    if (shift == 0) {
        ModeFamily f;
        f.kind = ModeFamily::Kind::dirac;
        f.a = scale_plus;
        f.b = scale_minus;
        f.antiperiodic = antiperiodic;
        f.cutoff = cutoff;
        pair.family = f;
    }
    return pair;
}

OperatorPair constant_shift_pair(const Spectrum& base, double M_sq, double m,
                                 const std::optional<ModeFamily>& base_family)
{
    if (base.kind != SpectrumKind::laplace)
        throw DomainError("constant_shift_pair: base spectrum must be of Laplace kind");
    if (M_sq < 0) throw DomainError("constant_shift_pair: M_sq must be nonnegative");
    Spectrum plus = base;
    plus.values = (base.values.array() + M_sq).matrix();
    plus.label = base.label + "+shift";
    OperatorPair pair =
        make_operator_pair(std::move(plus), base, OverlapMatrix::identity(base.size()), m);
    if (base_family && base_family->kind == ModeFamily::Kind::torus) {
        ModeFamily f = *base_family;
        f.a = f.b;
        f.q_plus = f.q_minus + M_sq;
        pair.family = f;
    }
    return pair;
}

ValidationReport validate(const OperatorPair& pair, double edge_fraction)
{
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    if (!(pair.m > 0)) fail("mass m must be positive");
    if (pair.plus.kind != pair.minus.kind) fail("spectra have different kinds");
    if (pair.plus.n != pair.minus.n) fail("spectra have different dimensions");
    if (pair.plus.fiber_dim != pair.minus.fiber_dim) fail("spectra have different fiber dimensions");

    for (const Spectrum* s : {&pair.plus, &pair.minus}) {
        const std::string name = s == &pair.plus ? "plus" : "minus";
        if (!s->values.allFinite()) fail(name + ": non-finite eigenvalue");
        for (Index i = 1; i < s->size(); ++i) {
            const double prev = s->kind == SpectrumKind::laplace ? s->values[i - 1]
                                                                 : std::abs(s->values[i - 1]);
            const double cur = s->kind == SpectrumKind::laplace ? s->values[i]
                                                                : std::abs(s->values[i]);
            if (cur < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
                fail(name + ": eigenvalues out of order at index " + std::to_string(i));
                break;
            }
        }
    }
    const auto& O = pair.overlap.entries;
    if (O.rows() != pair.minus.size() || O.cols() != pair.plus.size()) {
        fail("overlap shape does not match the spectra");
        return rep;
    }
    if (pair.omega_plus.size() == pair.plus.size() && pair.omega_minus.size() == pair.minus.size()) {
        const double lo = pair.m * (1 - 1e-12);
        if ((pair.omega_plus.array() < lo).any() || (pair.omega_minus.array() < lo).any())
            fail("omega below m");
    }

    VectorXd row = VectorXd::Zero(O.rows()), col = VectorXd::Zero(O.cols());
    bool range_ok = true;
    for (Index j = 0; j < O.outerSize(); ++j)
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            if (it.value() < -1e-12 || it.value() > 1 + 1e-12) range_ok = false;
            row[it.row()] += it.value();
            col[it.col()] += it.value();
        }
    if (!range_ok) fail("overlap entries outside [0, 1]");
    if (O.rows() > 0) {
        if (row.maxCoeff() > 1 + 1e-9) fail("overlap row sum exceeds 1");
        rep.worst_row_deviation = (row.array() - 1).abs().maxCoeff();
    }
    if (O.cols() > 0) {
        if (col.maxCoeff() > 1 + 1e-9) fail("overlap column sum exceeds 1");
        rep.worst_column_deviation = (col.array() - 1).abs().maxCoeff();
    }
    const Index interior =
        static_cast<Index>(std::ceil((1.0 - edge_fraction) * static_cast<double>(O.rows())));
    for (Index j = 0; j < O.rows(); ++j) {
        if (j < interior)
            rep.worst_interior_row_deviation =
                std::max(rep.worst_interior_row_deviation, std::abs(row[j] - 1));
        else
            rep.edge_rows.push_back(j);
    }
    if (pair.overlap.is_identity) {
        bool id = O.rows() == O.cols() && O.nonZeros() == O.rows();
        for (Index j = 0; id && j < O.rows(); ++j) id = O.coeff(j, j) == 1.0;
        if (!id) fail("overlap flagged identity but is not the unit matrix");
    }
    if (pair.geometry) {
        const auto& g = *pair.geometry;
        if (!is_spd(g.g_plus) || !is_spd(g.g_minus)) fail("geometry: metrics not SPD");
        else {
            auto check = [&](const MatrixXd& E, const MatrixXd& gm, const char* name) {
                if (E.rows() != gm.rows() || E.cols() != gm.cols() ||
                    (E * E.transpose() - gm).cwiseAbs().maxCoeff() >
                        1e-12 * std::max(1.0, gm.cwiseAbs().maxCoeff()))
                    fail(std::string("geometry: vielbein does not reproduce ") + name);
            };
            check(g.vielbein_plus, g.g_plus, "g_plus");
            check(g.vielbein_minus, g.g_minus, "g_minus");
        }
        if (!(g.volume > 0)) fail("geometry: volume must be positive");
    }
    return rep;
}

}  // namespace bogo
