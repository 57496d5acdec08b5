#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace gmps {

/// Default numerical tolerances (double precision with Schur-complement chains).
namespace tol {
inline constexpr double sym = 1e-12;       // symmetry of CM entries
inline constexpr double psd = 1e-9;        // uncertainty relation slack
inline constexpr double purity = 1e-8;     // |det - 1| gate; the (sigma*gamma)^2 gate is 10x
inline constexpr double pinv_rel = 1e-10;  // relative eigenvalue cutoff for pseudo-inverses
inline constexpr double critical_margin = 1e-8;  // unit-circle distance below which residues are refused
inline constexpr double root_cluster = 1e-6;     // radius for clustering polynomial root multiplicities
}  // namespace tol

/// Layout of the 2n canonical operators inside a covariance matrix.
enum class Ordering { Interleaved, Blocked };

std::string to_string(Ordering o);

/// Covariance matrix of an n-mode Gaussian state, vacuum-normalized
/// (single-mode vacuum = identity). `critical` is set when the matrix came out
/// of a near-singular collapse and a pseudo-inverse was used.
struct CovMat {
  int n_modes = 0;
  Ordering ordering = Ordering::Interleaved;
  Eigen::MatrixXd entries;
  bool critical = false;

  int dim() const { return 2 * n_modes; }

  static CovMat vacuum(int n_modes, Ordering ordering = Ordering::Interleaved);
  static CovMat from_entries(Eigen::MatrixXd m, Ordering ordering = Ordering::Interleaved);
};

/// Skew-symmetric realization of the canonical commutation relations for the
/// given operator layout.
struct SymplecticForm {
  int n_modes = 0;
  Ordering ordering = Ordering::Interleaved;
  Eigen::MatrixXd matrix;
};

SymplecticForm symplectic_form(int n_modes, Ordering ordering = Ordering::Interleaved);
Eigen::MatrixXd symplectic_form_matrix(int n_modes, Ordering ordering = Ordering::Interleaved);

/// Permutation taking interleaved coordinates (Q1,P1,...,Qn,Pn) to blocked
/// coordinates (Q1..Qn, P1..Pn).
Eigen::PermutationMatrix<Eigen::Dynamic> interleaved_to_blocked(int n_modes);

CovMat to_ordering(const CovMat& g, Ordering target);

struct ValidityReport {
  bool valid = false;
  double min_eigenvalue = 0.0;  // of gamma + i*sigma
};

/// Heisenberg uncertainty check: valid iff min eig(gamma + i sigma) >= -tau_psd.
ValidityReport validate_state(const CovMat& g, double tau_psd = tol::psd);

struct PurityReport {
  bool pure = false;
  double det = 0.0;
  double max_ccr_dev = 0.0;  // max-norm of (sigma*gamma)^2 + 1
};

/// Purity test: |det gamma - 1| <= tau and ||(sigma gamma)^2 + 1||_max <= 10*tau.
/// Both conditions are always evaluated and reported.
PurityReport purity(const CovMat& g, double tau = tol::purity);

struct SchurResult {
  Eigen::MatrixXd matrix;
  bool critical = false;
};

/// Schur complement of the rows/columns `block_x` of a symmetric matrix:
/// U_YY - U_YX U_XX^{-1} U_XY on the complement Y. A near-singular U_XX falls
/// back to an eigenvalue-thresholded pseudo-inverse and flags the result.
SchurResult schur_complement(const Eigen::MatrixXd& m, const std::vector<int>& block_x);

/// Pseudo-inverse of a symmetric matrix; eigenvalues below
/// rel_threshold * max|eig| are dropped and the result flagged critical.
SchurResult pinv_symmetric(const Eigen::MatrixXd& a, double rel_threshold = tol::pinv_rel);

/// Sign flip of the P rows/columns of the listed modes (theta = diag(1,-1)
/// per mode). Involution.
CovMat partial_transpose(const CovMat& g, const std::vector<int>& modes);

/// Ideal EPR projection of mode set A against mode set B (|A| = |B|,
/// matched positionally): partial-transpose B, merge the A and B blocks
/// entrywise, Schur-complement the merged block away. Returns the CM of the
/// remaining modes in their original order.
CovMat collapse_epr(const CovMat& g, const std::vector<int>& modes_a,
                    const std::vector<int>& modes_b);

/// Q-P description of a pure state in blocked partitioning: gamma =
/// (X, XY; YX, X^{-1}+YXY) with X = gamma_Q > 0, Y = X^{-1} gamma_QP.
struct XYDecomposition {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  double reassembly_error = 0.0;  // max-norm against the source CM
  double qp_asymmetry = 0.0;      // ||gamma_QP - gamma_QP^T||_max (0 for point-symmetric states)
};

XYDecomposition xy_decompose(const CovMat& g, double tau_purity = tol::purity);

/// Symplectic S with S gamma S^T = diag(nu_1, nu_1, ..., nu_n, nu_n),
/// nu sorted descending (interleaved layout, gamma positive definite).
struct WilliamsonResult {
  Eigen::MatrixXd s;
  Eigen::VectorXd nu;
};

WilliamsonResult williamson(const Eigen::MatrixXd& gamma_interleaved);

/// Symplectic eigenvalues alone (|spec(i sigma gamma)|, one per mode, descending).
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& gamma_interleaved);

/// Von Neumann entropy of a Gaussian state from its symplectic eigenvalues.
double entanglement_entropy(const Eigen::VectorXd& nu);

/// Direct sum on entries; both operands must share the ordering convention.
CovMat direct_sum(const CovMat& a, const CovMat& b);

namespace detail {
void require_symmetric(const Eigen::MatrixXd& m, double tau = tol::sym);
std::vector<int> mode_rows(const std::vector<int>& modes);  // interleaved row indices

/// yy - yx xx^+ xy for symmetric xx, evaluated in extended precision: the
/// O(cosh) intermediates of regularized EPR resources would otherwise eat six
/// decimal digits of the O(1) result.
SchurResult schur_correction(const Eigen::MatrixXd& yy, const Eigen::MatrixXd& yx,
                             const Eigen::MatrixXd& xx, double rel_threshold = tol::pinv_rel);
}  // namespace detail

}  // namespace gmps
