#pragma once

// Truncated spectral data of operator pairs and the solvable model families.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace bogo {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class SpectrumKind { laplace, dirac };

struct Spectrum {
    SpectrumKind kind = SpectrumKind::laplace;
    VectorXd values;  // lambda nondecreasing, or signed mu ordered by |mu|
    int n = 1;
    int fiber_dim = 1;
    std::string label;

    Index size() const { return values.size(); }
    // Eigenvalues of the Laplace type operator: lambda, or mu^2 for Dirac spectra.
    VectorXd squared() const;
};

// entries(j, k) = |(phi^-_j, phi^+_k)|^2; rows follow the minus spectrum.
struct OverlapMatrix {
    SparseRowMatrix entries;
    bool is_identity = false;

    static OverlapMatrix identity(Index size);
    static OverlapMatrix from_dense(const MatrixXd& m, double drop_below = 0.0);
    Index rows() const { return entries.rows(); }
    Index cols() const { return entries.cols(); }
};

// Inverse metrics g^{ij}, vielbeins E(i, a) = e^i_a with g = E E^T.
struct GeometryPair {
    int n = 1;
    MatrixXd g_plus, g_minus;
    MatrixXd vielbein_plus, vielbein_minus;
    double volume = 1.0;
    int fiber_dim = 1;
};

// Symmetric square root of an SPD matrix, used as the default vielbein.
MatrixXd symmetric_vielbein(const MatrixXd& g);
GeometryPair make_geometry(const MatrixXd& g_plus, const MatrixXd& g_minus, double volume,
                           int fiber_dim);

// One-dimensional commuting families whose modes are labelled by an integer
// (or half-integer) k, so that per-mode quantities are known in closed form.
//   torus:  lambda^+_k = a^2 k^2 + q_plus, lambda^-_k = b^2 k^2 + q_minus
//   dirac:  mu^+ = +-a k, mu^- = +-b k, two fiber components per k
struct ModeFamily {
    enum class Kind { torus, dirac } kind = Kind::torus;
    double a = 1, b = 1;
    double q_plus = 0, q_minus = 0;
    bool antiperiodic = false;
    int cutoff = 0;
};

struct OperatorPair {
    Spectrum plus, minus;
    OverlapMatrix overlap;
    double m = 1.0;
    VectorXd omega_plus, omega_minus;  // sqrt(lambda + m^2)
    std::optional<GeometryPair> geometry;
    std::optional<ModeFamily> family;

    bool is_dirac() const { return plus.kind == SpectrumKind::dirac; }
};

// Validates shapes and m > 0 and fills the omega lists.
OperatorPair make_operator_pair(Spectrum plus, Spectrum minus, OverlapMatrix overlap, double m);

// Swap the roles of the two operators (transposes the overlap).
OperatorPair swapped(const OperatorPair& pair);

OperatorPair build_torus_pair(int n, const MatrixXd& g_plus, const MatrixXd& g_minus,
                              double q_plus, double q_minus, int cutoff, double m);

// Fourier coefficients v_p, p = 0..P, of a real potential (v_{-p} = conj(v_p)).
using FourierPotential = std::vector<std::complex<double>>;

OperatorPair build_schrodinger_circle_pair(const FourierPotential& v_plus,
                                           const FourierPotential& v_minus, int cutoff, double m);

OperatorPair build_dirac_circle_pair(double scale_plus, double scale_minus, double shift,
                                     bool antiperiodic, int cutoff, double m);

OperatorPair constant_shift_pair(const Spectrum& base, double M_sq, double m,
                                 const std::optional<ModeFamily>& base_family = std::nullopt);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    double worst_row_deviation = 0;     // max |row sum - 1|
    double worst_column_deviation = 0;  // max |column sum - 1|
    double worst_interior_row_deviation = 0;
    std::vector<Index> edge_rows;  // rows near the truncation edge
};

// `edge_fraction` of the rows with the largest eigenvalues count as edge rows.
ValidationReport validate(const OperatorPair& pair, double edge_fraction = 0.5);

}  // namespace bogo
