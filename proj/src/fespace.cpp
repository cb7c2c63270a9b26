#include "calderon/fespace.hpp"

#include "calderon/errors.hpp"

namespace calderon {

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1) throw ParameterError("polynomial degree must be at least 1");
  for (int j = 0; j <= degree; ++j) nodes_.push_back(static_cast<double>(j) / degree);
  for (int j = 0; j <= degree; ++j) {
    double d = 1.0;
    for (int m = 0; m <= degree; ++m)
      if (m != j) d *= nodes_[static_cast<std::size_t>(j)] - nodes_[static_cast<std::size_t>(m)];
    denominators_.push_back(d);
  }
}

void LagrangeBasis::values(double x, double* out) const {
  const int n = size();
  for (int j = 0; j < n; ++j) {
    double p = 1.0;
    for (int m = 0; m < n; ++m)
      if (m != j) p *= x - nodes_[static_cast<std::size_t>(m)];
    out[j] = p / denominators_[static_cast<std::size_t>(j)];
  }
}

void LagrangeBasis::derivatives(double x, double* out) const {
  const int n = size();
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      double p = 1.0;
      for (int m = 0; m < n; ++m)
        if (m != j && m != k) p *= x - nodes_[static_cast<std::size_t>(m)];
      sum += p;
    }
    out[j] = sum / denominators_[static_cast<std::size_t>(j)];
  }
}

FeSpace::FeSpace(Mesh mesh, int degree) : mesh_(std::move(mesh)), basis_(degree) {}

CurveLocation FeSpace::node_location(int node) const {
  if (node < 0 || node >= dofs()) throw DomainError("node id out of range");
  const int panel = node / degree();
  const int j = node % degree();
  return {mesh_.panel(panel).chart, parameter(panel, basis_.node(j))};
}

std::vector<int> FeSpace::support(int node) const {
  if (node < 0 || node >= dofs()) throw DomainError("node id out of range");
  const int panel = node / degree();
  if (node % degree() != 0) return {panel};
  return {mesh_.prev(panel), panel};
}

FeSpace build_space(const Mesh& m, int degree) { return FeSpace(m, degree); }

BasisEval eval_basis(const FeSpace& s, int panel, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("local coordinate outside [0, 1]");
  if (panel < 0 || panel >= s.panel_count()) throw DomainError("panel id out of range");
  const int n = s.degree() + 1;
  BasisEval e;
  e.nodes.resize(static_cast<std::size_t>(n));
  e.values.resize(static_cast<std::size_t>(n));
  e.derivatives.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) e.nodes[static_cast<std::size_t>(j)] = s.node(panel, j);
  s.reference().values(x, e.values.data());
  s.reference().derivatives(x, e.derivatives.data());
  return e;
}

}  // namespace calderon
