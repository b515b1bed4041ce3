#pragma once

// Bosonic and fermionic Bogolyubov invariants B(beta) of an operator pair:
// spectral sums, heat-trace kernel integrals, the beta -> 0 and beta -> inf
// limits at fixed truncation, the zeta function and the momentum integrals V_b, V_f.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bogo/quadrature.hpp"
#include "bogo/specfun.hpp"
#include "bogo/spectral.hpp"

namespace bogo {

enum class Flavor { bose, fermi };
enum class Route { spectral, heat };

const char* to_string(Flavor f);
const char* to_string(Route r);

// `expanded` is the literal E-function sum. `paired` regroups it per overlap entry
// into sinh^2 / squared-difference terms plus row and column defects; the two are
// algebraically identical but `paired` has no cancellation and is nonnegative
// whenever row and column sums are <= 1.
enum class SpectralForm { paired, expanded };

double B_b_spectral(const OperatorPair& pair, double beta, SpectralForm form = SpectralForm::paired);
double B_f_spectral(const OperatorPair& pair, double beta, SpectralForm form = SpectralForm::paired);
double B_spectral(const OperatorPair& pair, Flavor flavor, double beta,
                  SpectralForm form = SpectralForm::paired);

// One mode on each side with unit overlap, sinh^2 form.
double B_b_single_mode(double omega_plus, double omega_minus, double beta);
// Fermionic single-mode term: beta^2 [w+^2 E0^2 + w-^2 E0^2 - 2 (mu+ mu- + m^2) E0 E0].
double B_f_single_mode(double mu_plus, double mu_minus, double m, double beta);

Tolerance heat_tolerance();

QuadratureResult B_b_heat(const OperatorPair& pair, double beta, const Tolerance& tol = heat_tolerance());
QuadratureResult B_f_heat(const OperatorPair& pair, double beta, const Tolerance& tol = heat_tolerance());

// Heat route with caller-supplied relative traces (e.g. closed-form oracles).
using RelativeTrace = std::function<double(double t, double s)>;
QuadratureResult B_b_heat(const RelativeTrace& psi, double m, double beta,
                          const Tolerance& tol = heat_tolerance());
QuadratureResult B_f_heat(const RelativeTrace& phi, const RelativeTrace& psi, double m, double beta,
                          const Tolerance& tol = heat_tolerance());

// Limit of B as beta -> 0 at fixed truncation.
double N_truncated(const OperatorPair& pair, Flavor flavor);
// Leading large-beta form.
double adiabatic_oracle(const OperatorPair& pair, Flavor flavor, double beta);

// Z(s) = 1/Gamma(s) int_0^inf beta^{s-1} B(beta) dbeta from the truncated spectral B, s > n.
double zeta(const OperatorPair& pair, Flavor flavor, double s, const Tolerance& tol = {});
// Same for a pair with a mode family: the modes beyond the cutoff are added through
// their leading homogeneous profile, 2 Z_0(s) zeta_H(s, K+1) (times the fiber count),
// which restores the pole at s = n = 1.
double zeta_completed(const OperatorPair& pair, Flavor flavor, double s, const Tolerance& tol = {});
// (s-1) Gamma(s) Z(s) linearly extrapolated to s = 1 from s1 > s2 > 1.
double zeta_pole_residue(const OperatorPair& pair, Flavor flavor, double s1 = 1.1, double s2 = 1.05,
                         const Tolerance& tol = {});

// Momentum-space leading coefficients, n in {1, 2}.
double V_b(const GeometryPair& geom, const Tolerance& tol = {1e-13, 1e-11});
double V_f(const GeometryPair& geom, const Tolerance& tol = {1e-13, 1e-11});
// Integrands as functions of x = |xi_+|, y = |xi_-| and p = |xi_+ xi_-| (without N/(2pi)^n).
double V_b_integrand(double x, double y);
double V_f_integrand(double x, double y, double p);

struct BetaRecord {
    double beta = 0;
    Route route = Route::spectral;
    double value = 0;
    double error_estimate = 0;
    bool ok = true;
    std::string message;
};

struct BetaSweep {
    Flavor flavor = Flavor::bose;
    std::vector<double> betas;      // strictly increasing
    std::vector<BetaRecord> records;  // ordered by beta, then route

    bool ok() const;
    // value of the first record with the given route at betas[i]
    double value(std::size_t i, Route route = Route::spectral) const;
};

// BOGO_THREADS if set, otherwise the hardware concurrency.
int default_thread_count();

// Betas are sorted and deduplicated; rows are computed in parallel.
BetaSweep run_sweep(const OperatorPair& pair, Flavor flavor, std::vector<double> betas,
                    const std::vector<Route>& routes, int threads = 0,
                    const Tolerance& tol = heat_tolerance());
// Same with a pair rebuilt per beta (e.g. cutoff scaled with 1/beta).
BetaSweep run_sweep(const std::function<OperatorPair(double beta)>& make_pair, Flavor flavor,
                    std::vector<double> betas, const std::vector<Route>& routes, int threads = 0,
                    const Tolerance& tol = heat_tolerance());

// Fixed columns: beta,value,route,error_estimate[,discrepancy]
std::string sweep_csv(const BetaSweep& sweep);
nlohmann::json sweep_json(const BetaSweep& sweep);

}  // namespace bogo
