#pragma once

#include "calderon/matrix.hpp"

#include <Eigen/SparseCore>
#include <string>
#include <string_view>
#include <vector>

namespace calderon {

class ConditionEvaluator;

enum class PrecondKind { lumped, mass, richardson, jacobi };

/// A requested preconditioner, e.g. "richardson:4".
struct PrecondSpec {
  PrecondKind kind = PrecondKind::lumped;
  int iterations = 0;  ///< Richardson steps, richardson only

  [[nodiscard]] std::string name() const;
};

PrecondSpec parse_precond(std::string_view text);
/// Comma separated list.
std::vector<PrecondSpec> parse_precond_list(std::string_view text);

/// Extremal generalized eigenvalues of the reference-simplex pair (M, D) and
/// the Richardson weight 2 / (lambda_min + lambda_max).
struct RichardsonWeight {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double omega = 0.0;
};
RichardsonWeight richardson_weight(int dimension, int degree);

struct Precond {
  PrecondSpec spec;
  SymMatrix g;
  double omega = 0.0;  ///< richardson only
};

/// D^{-1} B D^{-1}.
Precond lumped_precond(const SymMatrix& b, const DiagMatrix& d);
/// M^{-1} B M^{-1}.
Precond mass_precond(const SymMatrix& b, const SymMatrix& m);
/// k steps of R <- R + omega D^{-1} (I - M R) from R = 0.
Eigen::MatrixXd richardson_inverse(const SymMatrix& m, const DiagMatrix& d, int k, double omega);
/// R B R with R from richardson_inverse.
Precond richardson_precond(const SymMatrix& b, const SymMatrix& m, const DiagMatrix& d, int k, double omega);
/// diag(M)^{-1} B diag(M)^{-1}.
Precond jacobi_precond(const SymMatrix& b, const SymMatrix& m);

/// Spectral radius of I - omega D^{-1/2} M D^{-1/2} by power iteration.
double richardson_contraction(const SymMatrix& m, const DiagMatrix& d, double omega);

/// Structurally nonzero entries of a dense symmetric matrix.
Eigen::SparseMatrix<double> sparse_view(const SymMatrix& s);

double kappa(const Precond& g, const SymMatrix& a);
double kappa(const Precond& g, const ConditionEvaluator& a);

}  // namespace calderon
