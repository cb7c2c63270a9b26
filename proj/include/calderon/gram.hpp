#pragma once

#include "calderon/fespace.hpp"
#include "calderon/matrix.hpp"

#include <Eigen/SparseCore>

#include <string_view>
#include <vector>

namespace calderon {

/// exact: the L2(Gamma) product. mesh_averaged: the Jacobian on every panel
/// replaced by its mean |T| / |chi^{-1}(T)|.
enum class InnerProductKind { exact, mesh_averaged };

InnerProductKind parse_inner_product(std::string_view name);
std::string_view to_string(InnerProductKind kind);

/// Local coordinates and weights (including the Jacobian) of a panel rule.
struct PanelQuadrature {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss points used for products on curved panels.
inline constexpr int kCurvedMassPoints = 30;

PanelQuadrature panel_quadrature(const Mesh& m, int panel, InnerProductKind kind, int points = kCurvedMassPoints);

/// Element matrix <phi_a, phi_b> on one panel for two reference bases.
Eigen::MatrixXd element_mass(const Mesh& m, int panel, InnerProductKind kind, const LagrangeBasis& row,
                             const LagrangeBasis& col);

/// M[v, v'] = <phi_v, phi_v'>.
SymMatrix mass_matrix(const FeSpace& s, InnerProductKind kind);
Eigen::SparseMatrix<double> sparse_mass_matrix(const FeSpace& s, InnerProductKind kind);

/// D[v] = <1, phi_v>, computed as the row sums of the mass matrix.
DiagMatrix lumped_matrix(const FeSpace& s, InnerProductKind kind);
DiagMatrix lumped_from_mass(const SymMatrix& mass);

/// D^{-1/2} A D^{-1/2}.
SymMatrix scaled_basis(const SymMatrix& a, const DiagMatrix& d);

}  // namespace calderon
