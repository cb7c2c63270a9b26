#pragma once

#include "calderon/fespace.hpp"
#include "calderon/gram.hpp"

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

namespace calderon {

// Functions here live in the holding space H: continuous piecewise
// polynomials of degree 2l + 2 on the same mesh, which contains both S and
// all bubbles, so every identity can be checked in coefficients.

/// Bubbles theta_v = sum over panels T in supp phi_v of theta_{T,v}, where
/// theta_{T,v} vanishes at the ends of T, has minimal H1 seminorm, and
/// <theta_{T,v}, phi_w>_T = delta_vw ||phi_v||_T^2 for the nodes w of T.
struct BubbleSet {
  FeSpace holding;
  InnerProductKind kind = InnerProductKind::exact;
  /// Per panel, (2l+3) x (l+1): column a holds theta_{T,a} in local H coordinates.
  std::vector<Eigen::MatrixXd> panel_bubbles;
  /// Per panel, the S element mass matrix used for the constraints.
  std::vector<Eigen::MatrixXd> panel_mass;
  Eigen::SparseMatrix<double> theta;  ///< H x S
};

BubbleSet build_bubbles(const FeSpace& s, InnerProductKind kind = InnerProductKind::exact);

/// phi~_v = phi_v + sum over T of (D_{T,v} / c_{T,v}) theta_{T,v}
///                 - sum_w (M_{T,vw} / c_{T,w}) theta_{T,w}.
struct DualBasis {
  FeSpace holding;
  InnerProductKind kind = InnerProductKind::exact;
  Eigen::SparseMatrix<double> coeff;      ///< H x S, column v = phi~_v
  Eigen::SparseMatrix<double> embedding;  ///< H x S, column v = phi_v
  Eigen::SparseMatrix<double> mass;       ///< H mass matrix
  Eigen::SparseMatrix<double> stiffness;  ///< H1 seminorm Gram matrix of H
  Eigen::VectorXd lumped;                 ///< <1, phi_v>
};

DualBasis build_dual_basis(const FeSpace& s, const BubbleSet& b);

/// P u = sum_v <u, phi_v> / <phi~_v, phi_v> phi~_v, as an H x H matrix.
Eigen::SparseMatrix<double> fortin_matrix(const DualBasis& d);

/// I phi_v = phi~_v (H x S) and its left inverse on the range (S x H).
struct Bijection {
  Eigen::SparseMatrix<double> forward;
  Eigen::SparseMatrix<double> inverse;
};
Bijection bijection_matrix(const DualBasis& d);

/// Coefficients in S of the L2 projection of u(panel, local x).
Eigen::VectorXd l2_project(const FeSpace& s, InnerProductKind kind, const std::function<double(int, double)>& u);

/// Embedding of S into a higher-degree continuous space on the same mesh.
Eigen::SparseMatrix<double> embedding_matrix(const FeSpace& from, const FeSpace& to);

/// int d_s u d_s v ds.
Eigen::SparseMatrix<double> sparse_stiffness_matrix(const FeSpace& s, InnerProductKind kind);

/// Value of sum_i c_i phi_i at local coordinate x of a panel.
double evaluate(const FeSpace& s, const Eigen::VectorXd& c, int panel, double x);

/// Largest value of ||op x||_{range} / ||x||_{domain}, norms given by SPD Gram matrices.
double gram_operator_norm(const Eigen::SparseMatrix<double>& op, const Eigen::SparseMatrix<double>& domain,
                          const Eigen::SparseMatrix<double>& range);

/// Extremes over nodes of ||f_v|| / ||phi_v|| in L2 and full H1 norms.
struct NormBracket {
  double l2_min = 0.0;
  double l2_max = 0.0;
  double h1_min = 0.0;
  double h1_max = 0.0;
};
/// f = phi~ (dual) or theta (bubbles).
NormBracket dual_norm_bracket(const DualBasis& d);
NormBracket bubble_norm_bracket(const DualBasis& d, const BubbleSet& b);

}  // namespace calderon
