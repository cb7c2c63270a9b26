#pragma once

#include "calderon/matrix.hpp"

#include <string>

namespace calderon {

/// Eigen decomposition of a symmetric matrix, eigenvalues ascending.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  ///< columns; empty when not requested
  std::string provenance;
};

/// Lower-triangular L with L L^T = S (blocked right-looking Cholesky).
/// Throws FactorizationError on a non-positive pivot.
Eigen::MatrixXd spd_factor(const SymMatrix& s);

/// Householder tridiagonalization followed by implicit-shift QL.
Spectrum sym_eig(const SymMatrix& s, bool with_vectors = true);

/// Eigenvalues only, ascending.
Eigen::VectorXd sym_eigvals(const SymMatrix& s);

/// Reduction of a symmetric matrix to tridiagonal form A = Q T Q^T.
struct Tridiagonal {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;  ///< size n - 1
  Eigen::MatrixXd q;             ///< empty unless requested
};
Tridiagonal tridiagonalize(const SymMatrix& s, bool with_q);

/// Eigenvalues (and optionally rotates `vectors`) of a symmetric tridiagonal
/// matrix by the implicit QL method.
Eigen::VectorXd tridiagonal_ql(Eigen::VectorXd diagonal, Eigen::VectorXd off_diagonal,
                               Eigen::MatrixXd* vectors = nullptr);

/// Spectral condition numbers kappa_S(G A) = rho(GA) rho((GA)^{-1}) for SPD
/// G and a fixed SPD A. GA is similar to L^T G L with A = L L^T; A is
/// diagonally equilibrated before factorization (a similarity as well).
class ConditionEvaluator {
 public:
  explicit ConditionEvaluator(const SymMatrix& a);

  [[nodiscard]] Eigen::Index size() const { return factor_.rows(); }
  /// Ascending eigenvalues of G A.
  [[nodiscard]] Eigen::VectorXd eigenvalues(const SymMatrix& g) const;
  [[nodiscard]] double kappa(const SymMatrix& g) const;

 private:
  Eigen::VectorXd scale_;   ///< diag(A)^{-1/2}
  Eigen::MatrixXd factor_;  ///< Cholesky factor of the equilibrated A
};

/// kappa_S(G A).
double kappa(const SymMatrix& g, const SymMatrix& a);

}  // namespace calderon
