#pragma once

#include "calderon/mesh.hpp"

#include <vector>

namespace calderon {

/// Lagrange polynomials of degree l on the equispaced nodes j / l of [0, 1].
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int size() const { return degree_ + 1; }
  [[nodiscard]] double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }

  /// Values of all basis polynomials at x (size degree + 1).
  void values(double x, double* out) const;
  /// d/dx of all basis polynomials at x.
  void derivatives(double x, double* out) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

/// Basis data on one panel at one local coordinate.
struct BasisEval {
  std::vector<int> nodes;          ///< global node ids, local order
  std::vector<double> values;
  std::vector<double> derivatives; ///< w.r.t. the local coordinate in [0, 1]
};

/// Continuous piecewise polynomials of degree l on a closed mesh with the
/// canonical nodal basis. Node ids: panel i owns l * i (its start vertex)
/// and l * i + j for the interior nodes j = 1..l-1.
class FeSpace {
 public:
  FeSpace(Mesh mesh, int degree);

  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] const Geometry& geometry() const { return mesh_.geometry(); }
  [[nodiscard]] const LagrangeBasis& reference() const { return basis_; }
  [[nodiscard]] int degree() const { return basis_.degree(); }
  [[nodiscard]] int dofs() const { return degree() * mesh_.size(); }
  [[nodiscard]] int panel_count() const { return mesh_.size(); }

  /// Global id of local node j (0..l) of panel p.
  [[nodiscard]] int node(int panel, int j) const {
    return j == degree() ? degree() * mesh_.next(panel) : degree() * panel + j;
  }
  /// Chart location of a global node.
  [[nodiscard]] CurveLocation node_location(int node) const;
  /// Panels whose closure holds the node (2 for vertices, 1 otherwise).
  [[nodiscard]] std::vector<int> support(int node) const;

  /// Chart parameter of the local coordinate x on panel p.
  [[nodiscard]] double parameter(int panel, double x) const {
    const Panel& q = mesh_.panel(panel);
    return q.t0 + x * (q.t1 - q.t0);
  }

 private:
  Mesh mesh_;
  LagrangeBasis basis_;
};

FeSpace build_space(const Mesh& m, int degree);

/// Requires x in [0, 1].
BasisEval eval_basis(const FeSpace& s, int panel, double x);

}  // namespace calderon
