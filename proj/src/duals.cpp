#include "calderon/duals.hpp"

#include "calderon/errors.hpp"
#include "calderon/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace calderon {

namespace {

using Sparse = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

int holding_degree(int degree) { return 2 * degree + 2; }

// int phi_a'(x) phi_b'(x) / J(x) dx on one panel, J the local Jacobian.
Eigen::MatrixXd element_stiffness(const Mesh& m, int panel, InnerProductKind kind, const LagrangeBasis& basis) {
  const Panel& p = m.panel(panel);
  const bool constant_jacobian = kind == InnerProductKind::mesh_averaged || m.geometry().is_polygonal();
  const QuadRule g = gauss_rule(constant_jacobian ? basis.degree() : kCurvedMassPoints);
  const int n = basis.size();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd d(n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double jac = kind == InnerProductKind::mesh_averaged
                           ? p.length
                           : m.geometry().speed(p.chart, p.t0 + g.nodes[i] * (p.t1 - p.t0)) * (p.t1 - p.t0);
    basis.derivatives(g.nodes[i], d.data());
    e.noalias() += (g.weights[i] / jac) * d * d.transpose();
  }
  return e;
}

void require_factored(const Eigen::SimplicialLLT<Sparse>& llt, const char* what) {
  if (llt.info() != Eigen::Success) throw FactorizationError(std::string(what) + " is not positive definite");
}

NormBracket bracket(const DualBasis& d, const Sparse& f) {
  const Sparse& e = d.embedding;
  const Sparse h1 = d.mass + d.stiffness;
  NormBracket b{1e300, 0.0, 1e300, 0.0};
  for (Eigen::Index v = 0; v < e.cols(); ++v) {
    const Eigen::VectorXd fv = f.col(v);
    const Eigen::VectorXd pv = e.col(v);
    const double l2 = std::sqrt(fv.dot(d.mass * fv) / pv.dot(d.mass * pv));
    const double hh = std::sqrt(fv.dot(h1 * fv) / pv.dot(h1 * pv));
    b.l2_min = std::min(b.l2_min, l2);
    b.l2_max = std::max(b.l2_max, l2);
    b.h1_min = std::min(b.h1_min, hh);
    b.h1_max = std::max(b.h1_max, hh);
  }
  return b;
}

}  // namespace

Sparse embedding_matrix(const FeSpace& from, const FeSpace& to) {
  if (from.panel_count() != to.panel_count())
    throw ParameterError("embedding_matrix: spaces live on different meshes");
  if (to.degree() < from.degree())
    throw ParameterError("embedding_matrix: target degree too low");
  const int l = from.degree();
  const int p = to.degree();
  Triplets t;
  std::vector<double> vals(static_cast<std::size_t>(l + 1));
  for (int panel = 0; panel < from.panel_count(); ++panel) {
    // Vertices of the target are owned by the panel that starts there.
    for (int j = 0; j < p; ++j) {
      from.reference().values(to.reference().node(j), vals.data());
      for (int a = 0; a <= l; ++a)
        if (vals[static_cast<std::size_t>(a)] != 0.0)
          t.emplace_back(to.node(panel, j), from.node(panel, a), vals[static_cast<std::size_t>(a)]);
    }
  }
  Sparse e(to.dofs(), from.dofs());
  e.setFromTriplets(t.begin(), t.end());
  return e;
}

Sparse sparse_stiffness_matrix(const FeSpace& s, InnerProductKind kind) {
  const int l = s.degree();
  Triplets t;
  for (int p = 0; p < s.panel_count(); ++p) {
    const Eigen::MatrixXd e = element_stiffness(s.mesh(), p, kind, s.reference());
    for (int a = 0; a <= l; ++a)
      for (int b = 0; b <= l; ++b) t.emplace_back(s.node(p, a), s.node(p, b), e(a, b));
  }
  Sparse k(s.dofs(), s.dofs());
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

double evaluate(const FeSpace& s, const Eigen::VectorXd& c, int panel, double x) {
  const BasisEval b = eval_basis(s, panel, x);
  double v = 0.0;
  for (std::size_t i = 0; i < b.nodes.size(); ++i) v += c(b.nodes[i]) * b.values[i];
  return v;
}

BubbleSet build_bubbles(const FeSpace& s, InnerProductKind kind) {
  const int l = s.degree();
  const int p = holding_degree(l);
  BubbleSet out{build_space(s.mesh(), p), kind, {}, {}, {}};
  const LagrangeBasis& hb = out.holding.reference();
  const int nb = p - 1;  // interior H nodes of a panel
  Triplets t;
  for (int panel = 0; panel < s.panel_count(); ++panel) {
    const Eigen::MatrixXd k = element_stiffness(s.mesh(), panel, kind, hb).block(1, 1, nb, nb);
    const Eigen::MatrixXd c = element_mass(s.mesh(), panel, kind, s.reference(), hb).middleCols(1, nb);
    const Eigen::MatrixXd ms = element_mass(s.mesh(), panel, kind, s.reference(), s.reference());

    // Minimizer of theta^T K theta subject to C theta = r: theta = K^-1 C^T lambda
    // with (C K^-1 C^T) lambda = r. Both blocks scale homogeneously in h.
    const Eigen::LLT<Eigen::MatrixXd> kf(k);
    if (kf.info() != Eigen::Success) throw EnrichmentError("bubble stiffness is not positive definite");
    const Eigen::MatrixXd y = kf.solve(c.transpose());
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(c * y);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "bubble constraints on panel " << panel << " are singular (rank " << lu.rank() << " of " << l + 1
         << "); the degree " << p << " enrichment is insufficient";
      throw EnrichmentError(os.str());
    }
    const Eigen::MatrixXd sol = y * lu.solve(Eigen::MatrixXd(ms.diagonal().asDiagonal()));
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(p + 1, l + 1);
    local.middleRows(1, nb) = sol;
    for (int a = 0; a <= l; ++a)
      for (int j = 1; j < p; ++j) t.emplace_back(out.holding.node(panel, j), s.node(panel, a), local(j, a));
    out.panel_bubbles.push_back(std::move(local));
    out.panel_mass.push_back(ms);
  }
  out.theta.resize(out.holding.dofs(), s.dofs());
  out.theta.setFromTriplets(t.begin(), t.end());
  return out;
}

DualBasis build_dual_basis(const FeSpace& s, const BubbleSet& b) {
  const int l = s.degree();
  const int p = b.holding.degree();
  if (b.panel_bubbles.size() != static_cast<std::size_t>(s.panel_count()))
    throw ParameterError("build_dual_basis: bubble set does not match the space");
  DualBasis d{b.holding, b.kind, {}, embedding_matrix(s, b.holding), sparse_mass_matrix(b.holding, b.kind),
              sparse_stiffness_matrix(b.holding, b.kind), Eigen::VectorXd::Zero(s.dofs())};
  Triplets t;
  for (int panel = 0; panel < s.panel_count(); ++panel) {
    const Eigen::MatrixXd& ms = b.panel_mass[static_cast<std::size_t>(panel)];
    const Eigen::MatrixXd& th = b.panel_bubbles[static_cast<std::size_t>(panel)];
    const Eigen::VectorXd dl = ms.rowwise().sum();
    // Column a: coefficients of the bubbles theta_{T,w} in phi~_a on T.
    Eigen::MatrixXd mix(l + 1, l + 1);
    for (int a = 0; a <= l; ++a)
      for (int w = 0; w <= l; ++w) mix(w, a) = ((a == w ? dl(a) : 0.0) - ms(a, w)) / ms(w, w);
    const Eigen::MatrixXd local = th * mix;
    for (int a = 0; a <= l; ++a) {
      d.lumped(s.node(panel, a)) += dl(a);
      for (int j = 1; j < p; ++j)
        if (local(j, a) != 0.0) t.emplace_back(b.holding.node(panel, j), s.node(panel, a), local(j, a));
    }
  }
  Sparse corr(b.holding.dofs(), s.dofs());
  corr.setFromTriplets(t.begin(), t.end());
  d.coeff = d.embedding + corr;
  return d;
}

Sparse fortin_matrix(const DualBasis& d) {
  const Eigen::VectorXd inv = d.lumped.cwiseInverse();
  const Sparse weighted = d.coeff * inv.asDiagonal();
  const Sparse test = Sparse(d.embedding.transpose()) * d.mass;
  return weighted * test;
}

Bijection bijection_matrix(const DualBasis& d) {
  const Eigen::VectorXd inv = d.lumped.cwiseInverse();
  const Sparse test = Sparse(d.embedding.transpose()) * d.mass;
  return {d.coeff, inv.asDiagonal() * test};
}

Eigen::VectorXd l2_project(const FeSpace& s, InnerProductKind kind, const std::function<double(int, double)>& u) {
  const int l = s.degree();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.dofs());
  std::vector<double> vals(static_cast<std::size_t>(l + 1));
  for (int panel = 0; panel < s.panel_count(); ++panel) {
    const PanelQuadrature q = panel_quadrature(s.mesh(), panel, kind);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      const double ui = u(panel, q.x[i]);
      s.reference().values(q.x[i], vals.data());
      for (int a = 0; a <= l; ++a) rhs(s.node(panel, a)) += q.w[i] * ui * vals[static_cast<std::size_t>(a)];
    }
  }
  const Eigen::SimplicialLLT<Sparse> llt(sparse_mass_matrix(s, kind));
  require_factored(llt, "mass matrix");
  return llt.solve(rhs);
}

double gram_operator_norm(const Sparse& op, const Sparse& domain, const Sparse& range) {
  if (op.cols() != domain.rows() || op.rows() != range.rows())
    throw ParameterError("gram_operator_norm: dimension mismatch");
  const Eigen::SimplicialLLT<Sparse> llt(domain);
  require_factored(llt, "domain Gram matrix");
  const Sparse opt = op.transpose();
  Eigen::VectorXd x(op.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 1.0 + 0.5 * std::sin(2.0 + static_cast<double>(i));
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    x /= std::sqrt(x.dot(domain * x));
    const Eigen::VectorXd y = op * x;
    const double est = y.dot(range * y);
    x = llt.solve(opt * (range * y));
    const bool settled = std::abs(est - lambda) <= 1e-12 * est;
    lambda = est;
    if (settled) break;
  }
  return std::sqrt(lambda);
}

NormBracket dual_norm_bracket(const DualBasis& d) { return bracket(d, d.coeff); }

NormBracket bubble_norm_bracket(const DualBasis& d, const BubbleSet& b) { return bracket(d, b.theta); }

}  // namespace calderon
