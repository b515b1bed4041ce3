#pragma once

// Heat traces of truncated spectra: classical Theta, combined X and Y,
// generalized Xi and W, and the relative traces Psi and Phi.
// The mass factor e^{-(t+s) m^2} is left to the caller.

#include <complex>
#include <vector>

#include "bogo/spectral.hpp"

namespace bogo {

// Pairwise (tree) summation.
template <class T>
T pairwise_sum(const T* v, Index n)
{
    if (n <= 8) {
        T s = T(0);
        for (Index i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const Index h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v)
{
    return pairwise_sum(v.data(), static_cast<Index>(v.size()));
}

// Sum of e^{-t (lambda + m^2)} over the Laplace type eigenvalues (mu^2 for Dirac).
double theta(const Spectrum& s, double t, double m = 0.0);
// d/dt of theta(s, t, 0), summed term-wise.
double theta_derivative(const Spectrum& s, double t);

double X_trace(const OperatorPair& pair, double t, double s);
double Y_trace(const OperatorPair& pair, double t, double s);

double Psi(const OperatorPair& pair, double t, double s);
double Phi(const OperatorPair& pair, double t, double s);

// sum_k exp(-t mu_k^2 + i alpha mu_k); alpha may be real or complex.
template <class A>
std::complex<double> Xi_trace(const Spectrum& s, double t, A alpha)
{
    using C = std::complex<double>;
    const C ia = C(0, 1) * C(alpha);
    std::vector<C> terms(static_cast<std::size_t>(s.size()));
    for (Index k = 0; k < s.size(); ++k) {
        const double mu = s.values[k];
        terms[static_cast<std::size_t>(k)] = std::exp(-t * mu * mu + ia * mu);
    }
    return pairwise_sum(terms);
}

// sum_{j,k} exp(-t mu+_k^2 + i alpha mu+_k) exp(-s mu-_j^2 + i beta mu-_j) O(j, k)
template <class A>
std::complex<double> W_trace(const OperatorPair& pair, double t, double s, A alpha, A beta)
{
    using C = std::complex<double>;
    const C ia = C(0, 1) * C(alpha), ib = C(0, 1) * C(beta);
    const auto& mp = pair.plus.values;
    const auto& mm = pair.minus.values;
    const auto& O = pair.overlap.entries;
    std::vector<C> rows(static_cast<std::size_t>(O.rows()));
    for (Index j = 0; j < O.outerSize(); ++j) {
        C r = 0;
        for (SparseRowMatrix::InnerIterator it(O, j); it; ++it) {
            const double mu = mp[it.col()];
            r += it.value() * std::exp(-t * mu * mu + ia * mu);
        }
        const double nu = mm[j];
        rows[static_cast<std::size_t>(j)] = r * std::exp(-s * nu * nu + ib * nu);
    }
    return pairwise_sum(rows);
}

// Psi and Phi at fixed second argument sigma, as functions of tau, with the mass
// factor e^{-(tau + sigma) m^2} folded in:
//   slice(tau) = e^{-(tau+sigma) m^2} [w_psi Psi(tau, sigma) + w_phi Phi(tau, sigma)]
// The O(J K) overlap work is done once per sigma; each tau costs O(J + K).
class RelativeTraceSlice {
public:
    RelativeTraceSlice(const OperatorPair& pair, double sigma, double w_psi, double w_phi);
    double operator()(double tau) const;

private:
    VectorXd omega2_plus_, omega2_minus_;
    VectorXd coef_plus_, coef_minus_;
};

// Closed forms for the solvable shift families, built from the minus spectrum.
// Constant shift H+ = H- + M^2 (Laplace) or the anticommuting Dirac shift.
double psi_shift_oracle(const Spectrum& minus, double M_sq, double t, double s);
double phi_dirac_shift_oracle(const Spectrum& minus, double M_sq, double t, double s);
double Y_dirac_shift_oracle(const Spectrum& minus, double M_sq, double t, double s);

}  // namespace bogo
