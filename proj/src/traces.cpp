#include "bogo/traces.hpp"

#include <cmath>

#include "bogo/errors.hpp"

namespace bogo {

namespace {

void require_dirac(const OperatorPair& pair, const char* what)
{
    if (!pair.is_dirac()) throw DomainError(std::string(what) + ": needs a Dirac pair");
}

void require_dirac(const Spectrum& s, const char* what)
{
    if (s.kind != SpectrumKind::dirac) throw DomainError(std::string(what) + ": needs a Dirac spectrum");
}

// sum over overlap entries of O(j,k) * term(k, j), accumulated per row
template <class F>
double overlap_sum(const OperatorPair& pair, F term)
{
    const auto& O = pair.overlap.entries;
    std::vector<double> rows(static_cast<std::size_t>(O.rows()));
    for (Index j = 0; j < O.outerSize(); ++j) {
        double r = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) r += it.value() * term(it.col(), j);
        rows[static_cast<std::size_t>(j)] = r;
    }
    return pairwise_sum(rows);
}

}  // namespace

double theta(const Spectrum& s, double t, double m)
{
    if (!(t > 0)) throw DomainError("theta: t must be positive");
    const VectorXd lam = s.squared();
    std::vector<double> terms(static_cast<std::size_t>(lam.size()));
    for (Index k = 0; k < lam.size(); ++k)
        terms[static_cast<std::size_t>(k)] = std::exp(-t * (lam[k] + m * m));
    return pairwise_sum(terms);
}

double theta_derivative(const Spectrum& s, double t)
{
    if (!(t > 0)) throw DomainError("theta_derivative: t must be positive");
    const VectorXd lam = s.squared();
    std::vector<double> terms(static_cast<std::size_t>(lam.size()));
    for (Index k = 0; k < lam.size(); ++k)
        terms[static_cast<std::size_t>(k)] = -lam[k] * std::exp(-t * lam[k]);
    return pairwise_sum(terms);
}

double X_trace(const OperatorPair& pair, double t, double s)
{
    if (!(t > 0 && s > 0)) throw DomainError("X_trace: t and s must be positive");
    const VectorXd lp = pair.plus.squared(), lm = pair.minus.squared();
    return overlap_sum(pair, [&](Index k, Index j) { return std::exp(-t * lp[k] - s * lm[j]); });
}

double Y_trace(const OperatorPair& pair, double t, double s)
{
    require_dirac(pair, "Y_trace");
    if (!(t > 0 && s > 0)) throw DomainError("Y_trace: t and s must be positive");
    const auto& mp = pair.plus.values;
    const auto& mm = pair.minus.values;
    return overlap_sum(pair, [&](Index k, Index j) {
        return mp[k] * mm[j] * std::exp(-t * mp[k] * mp[k] - s * mm[j] * mm[j]);
    });
}

double Psi(const OperatorPair& pair, double t, double s)
{
    if (!(t > 0 && s > 0)) throw DomainError("Psi: t and s must be positive");
    const VectorXd lp = pair.plus.squared(), lm = pair.minus.squared();
    // X(t,s) + X(s,t) term by term keeps Psi exactly symmetric
    const double cross = overlap_sum(pair, [&](Index k, Index j) {
        return std::exp(-t * lp[k] - s * lm[j]) + std::exp(-s * lp[k] - t * lm[j]);
    });
    return theta(pair.plus, t + s) + theta(pair.minus, t + s) - cross;
}

double Phi(const OperatorPair& pair, double t, double s)
{
    require_dirac(pair, "Phi");
    if (!(t > 0 && s > 0)) throw DomainError("Phi: t and s must be positive");
    const auto& mp = pair.plus.values;
    const auto& mm = pair.minus.values;
    const double cross = overlap_sum(pair, [&](Index k, Index j) {
        const double a = mp[k] * mp[k], b = mm[j] * mm[j];
        return mp[k] * mm[j] * (std::exp(-t * a - s * b) + std::exp(-s * a - t * b));
    });
    return -theta_derivative(pair.plus, t + s) - theta_derivative(pair.minus, t + s) - cross;
}

RelativeTraceSlice::RelativeTraceSlice(const OperatorPair& pair, double sigma, double w_psi,
                                       double w_phi)
{
    if (w_phi != 0) require_dirac(pair, "RelativeTraceSlice");
    const double m2 = pair.m * pair.m;
    const VectorXd lp = pair.plus.squared(), lm = pair.minus.squared();
    omega2_plus_ = (lp.array() + m2).matrix();
    omega2_minus_ = (lm.array() + m2).matrix();
    const VectorXd ep = (-sigma * omega2_plus_.array()).exp().matrix();
    const VectorXd em = (-sigma * omega2_minus_.array()).exp().matrix();

    // overlap-weighted partners of each mode at sigma
    const auto& O = pair.overlap.entries;
    VectorXd wp = VectorXd::Zero(lp.size()), wm = VectorXd::Zero(lm.size());
    VectorXd yp = VectorXd::Zero(lp.size()), ym = VectorXd::Zero(lm.size());
    const bool dirac = pair.is_dirac();
    for (Index j = 0; j < O.outerSize(); ++j)
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            const Index k = it.col();
            const double o = it.value();
            wp[k] += o * em[j];
            wm[j] += o * ep[k];
            if (dirac) {
                yp[k] += o * pair.minus.values[j] * em[j];
                ym[j] += o * pair.plus.values[k] * ep[k];
            }
        }
    coef_plus_ = w_psi * (ep - wp);
    coef_minus_ = w_psi * (em - wm);
    if (w_phi != 0) {
        const auto& mp = pair.plus.values;
        const auto& mm = pair.minus.values;
        coef_plus_ += w_phi * (lp.cwiseProduct(ep) - mp.cwiseProduct(yp));
        coef_minus_ += w_phi * (lm.cwiseProduct(em) - mm.cwiseProduct(ym));
    }
}

double RelativeTraceSlice::operator()(double tau) const
{
    const double a = ((-tau * omega2_plus_.array()).exp() * coef_plus_.array()).sum();
    const double b = ((-tau * omega2_minus_.array()).exp() * coef_minus_.array()).sum();
    return a + b;
}

double psi_shift_oracle(const Spectrum& minus, double M_sq, double t, double s)
{
    return std::expm1(-t * M_sq) * std::expm1(-s * M_sq) * theta(minus, t + s);
}

double phi_dirac_shift_oracle(const Spectrum& minus, double M_sq, double t, double s)
{
    require_dirac(minus, "phi_dirac_shift_oracle");
    return -std::expm1(-t * M_sq) * std::expm1(-s * M_sq) * theta_derivative(minus, t + s) +
           M_sq * std::exp(-(t + s) * M_sq) * theta(minus, t + s);
}

double Y_dirac_shift_oracle(const Spectrum& minus, double M_sq, double t, double s)
{
    require_dirac(minus, "Y_dirac_shift_oracle");
    return -std::exp(-t * M_sq) * theta_derivative(minus, t + s);
}

}  // namespace bogo
