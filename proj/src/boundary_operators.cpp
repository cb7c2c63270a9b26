#include "calderon/boundary_operators.hpp"

#include "calderon/errors.hpp"
#include "calderon/gram.hpp"
#include "calderon/quadrature.hpp"
#include "calderon/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace calderon {

StabilizationWeight::StabilizationWeight(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0))
    throw ParameterError("stabilization weight alpha must be positive: the hypersingular form alone is only "
                         "semi-coercive");
}

namespace {

constexpr double kKernelScale = -0.5 / std::numbers::pi;

// Basis values and derivatives tabulated at the nodes of a pair rule.
struct Tabulated {
  PairRule rule;
  Eigen::MatrixXd phi_s, dphi_s, phi_t, dphi_t;  // nodes x (l+1)
};

Tabulated tabulate(PairRule rule, const LagrangeBasis& basis) {
  Tabulated t{std::move(rule), {}, {}, {}, {}};
  const auto n = static_cast<Eigen::Index>(t.rule.size());
  t.phi_s.resize(n, basis.size());
  t.dphi_s.resize(n, basis.size());
  t.phi_t.resize(n, basis.size());
  t.dphi_t.resize(n, basis.size());
  Eigen::VectorXd buf(basis.size());
  for (Eigen::Index q = 0; q < n; ++q) {
    const PairNode& node = t.rule.nodes[static_cast<std::size_t>(q)];
    basis.values(node.s, buf.data());
    t.phi_s.row(q) = buf;
    basis.derivatives(node.s, buf.data());
    t.dphi_s.row(q) = buf;
    basis.values(node.t, buf.data());
    t.phi_t.row(q) = buf;
    basis.derivatives(node.t, buf.data());
    t.dphi_t.row(q) = buf;
  }
  return t;
}

}  // namespace

struct PanelPairIntegrator::Impl {
  const FeSpace& space;
  const Geometry& geo;
  const Mesh& mesh;
  QuadRule gauss;
  Tabulated identical;
  Tabulated adjacent;

  Impl(const FeSpace& s, const QuadratureConfig& c)
      : space(s),
        geo(s.geometry()),
        mesh(s.mesh()),
        gauss(gauss_rule(c.base_n)),
        identical(tabulate(pair_rule(PanelRelation::identical, c.base_n), s.reference())),
        adjacent(tabulate(pair_rule(PanelRelation::adjacent, c.base_n), s.reference())) {}

  [[nodiscard]] double speed_factor(const Panel& p, double x) const {
    return geo.speed(p.chart, p.t0 + x * p.parameter_length()) * p.parameter_length();
  }

  // Accumulates a rule whose per-node kernel values are known.
  static void accumulate(const Tabulated& tab, const Eigen::VectorXd& kernel_w, const Eigen::VectorXd& js,
                         const Eigen::VectorXd& jt, PanelPairBlock& out) {
    const Eigen::VectorXd ka = kernel_w.cwiseProduct(js).cwiseProduct(jt);
    out.single_layer.noalias() += tab.phi_s.transpose() * ka.asDiagonal() * tab.phi_t;
    out.hypersingular.noalias() += tab.dphi_s.transpose() * kernel_w.asDiagonal() * tab.dphi_t;
  }

  void identical_block(int p, PanelPairBlock& out) const {
    const Panel& panel = mesh.panel(p);
    const double dt = panel.parameter_length();
    const auto n = static_cast<Eigen::Index>(identical.rule.size());
    Eigen::VectorXd kw(n), js(n), jt(n);
    for (Eigen::Index q = 0; q < n; ++q) {
      const PairNode& node = identical.rule.nodes[static_cast<std::size_t>(q)];
      const double tt = panel.t0 + node.t * dt;
      const double r = geo.displacement(panel.chart, tt, node.gap * dt).norm();
      kw[q] = node.weight * kKernelScale * std::log(r);
      js[q] = speed_factor(panel, node.s);
      jt[q] = speed_factor(panel, node.t);
    }
    accumulate(identical, kw, js, jt, out);
    out.single_layer = 0.5 * (out.single_layer + out.single_layer.transpose()).eval();
    out.hypersingular = 0.5 * (out.hypersingular + out.hypersingular.transpose()).eval();
  }

  // Test panel p ends where trial panel q starts.
  void adjacent_block(int p, int q, PanelPairBlock& out) const {
    const Panel& a = mesh.panel(p);
    const Panel& b = mesh.panel(q);
    const double da = a.parameter_length();
    const double db = b.parameter_length();
    const auto n = static_cast<Eigen::Index>(adjacent.rule.size());
    Eigen::VectorXd kw(n), js(n), jt(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const PairNode& node = adjacent.rule.nodes[static_cast<std::size_t>(k)];
      const Point2 xv = geo.displacement(a.chart, a.t1, -node.gap * da);
      const Point2 yv = geo.displacement(b.chart, b.t0, node.t * db);
      kw[k] = node.weight * kKernelScale * std::log((xv - yv).norm());
      js[k] = speed_factor(a, node.s);
      jt[k] = speed_factor(b, node.t);
    }
    accumulate(adjacent, kw, js, jt, out);
  }

  struct Piece {
    double lo, hi;
    Point2 center;
    double radius;
  };

  [[nodiscard]] Piece piece(const Panel& p, double lo, double hi) const {
    const double dt = p.parameter_length();
    const Point2 c = geo.eval(p.chart, p.t0 + 0.5 * (lo + hi) * dt);
    const Point2 e0 = geo.eval(p.chart, p.t0 + lo * dt);
    const Point2 e1 = geo.eval(p.chart, p.t0 + hi * dt);
    return {lo, hi, c, std::max((e0 - c).norm(), (e1 - c).norm())};
  }

  // Tensor Gauss on sub-boxes, bisecting until the pieces are well separated
  // relative to their size.
  void separated_block(const Panel& a, const Panel& b, const Piece& pa, const Piece& pb, int depth,
                       PanelPairBlock& out) const {
    const double dist = (pa.center - pb.center).norm();
    const bool admissible = dist >= pa.radius + pb.radius + std::max(pa.radius, pb.radius);
    if (!admissible && depth < 60) {
      if (pa.radius >= pb.radius) {
        const double mid = 0.5 * (pa.lo + pa.hi);
        separated_block(a, b, piece(a, pa.lo, mid), pb, depth + 1, out);
        separated_block(a, b, piece(a, mid, pa.hi), pb, depth + 1, out);
      } else {
        const double mid = 0.5 * (pb.lo + pb.hi);
        separated_block(a, b, pa, piece(b, pb.lo, mid), depth + 1, out);
        separated_block(a, b, pa, piece(b, mid, pb.hi), depth + 1, out);
      }
      return;
    }
    const LagrangeBasis& basis = space.reference();
    const auto m = static_cast<Eigen::Index>(gauss.size());
    const int nb = basis.size();
    Eigen::MatrixXd fa(m, nb), dfa(m, nb), fb(m, nb), dfb(m, nb);
    std::vector<Point2> xa(static_cast<std::size_t>(m)), xb(static_cast<std::size_t>(m));
    Eigen::VectorXd buf(nb);
    const double la = pa.hi - pa.lo;
    const double lb = pb.hi - pb.lo;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double w = gauss.weights[static_cast<std::size_t>(i)];
      const double sa = pa.lo + la * gauss.nodes[static_cast<std::size_t>(i)];
      const double sb = pb.lo + lb * gauss.nodes[static_cast<std::size_t>(i)];
      xa[static_cast<std::size_t>(i)] = geo.eval(a.chart, a.t0 + sa * a.parameter_length());
      xb[static_cast<std::size_t>(i)] = geo.eval(b.chart, b.t0 + sb * b.parameter_length());
      basis.values(sa, buf.data());
      fa.row(i) = buf * (w * la * speed_factor(a, sa));
      basis.derivatives(sa, buf.data());
      dfa.row(i) = buf * (w * la);
      basis.values(sb, buf.data());
      fb.row(i) = buf * (w * lb * speed_factor(b, sb));
      basis.derivatives(sb, buf.data());
      dfb.row(i) = buf * (w * lb);
    }
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        k(i, j) = kKernelScale * std::log((xa[static_cast<std::size_t>(i)] - xb[static_cast<std::size_t>(j)]).norm());
    out.single_layer.noalias() += fa.transpose() * k * fb;
    out.hypersingular.noalias() += dfa.transpose() * k * dfb;
  }

  [[nodiscard]] PanelPairBlock block(int p, int q) const {
    const int nb = space.reference().size();
    PanelPairBlock out{Eigen::MatrixXd::Zero(nb, nb), Eigen::MatrixXd::Zero(nb, nb)};
    if (p == q) {
      identical_block(p, out);
    } else if (mesh.next(p) == q) {
      adjacent_block(p, q, out);
    } else if (mesh.next(q) == p) {
      PanelPairBlock swapped{Eigen::MatrixXd::Zero(nb, nb), Eigen::MatrixXd::Zero(nb, nb)};
      adjacent_block(q, p, swapped);
      out.single_layer = swapped.single_layer.transpose();
      out.hypersingular = swapped.hypersingular.transpose();
    } else {
      const Panel& a = mesh.panel(p);
      const Panel& b = mesh.panel(q);
      separated_block(a, b, piece(a, 0.0, 1.0), piece(b, 0.0, 1.0), 0, out);
    }
    return out;
  }
};

PanelPairIntegrator::PanelPairIntegrator(const FeSpace& space, const QuadratureConfig& config)
    : impl_(std::make_unique<Impl>(space, config)) {}

PanelPairIntegrator::~PanelPairIntegrator() = default;

PanelPairBlock PanelPairIntegrator::block(int test_panel, int trial_panel) const {
  if (test_panel < 0 || test_panel >= impl_->mesh.size() || trial_panel < 0 || trial_panel >= impl_->mesh.size())
    throw DomainError("panel id out of range");
  return impl_->block(test_panel, trial_panel);
}

namespace {

void require_spd(const SymMatrix& m, const char* what, const Geometry& g) {
  try {
    (void)spd_factor(m);
  } catch (const FactorizationError&) {
    std::ostringstream os;
    os << what << " is not positive definite on the " << to_string(g.kind()) << " (diameter " << g.diameter()
       << "); the single layer operator needs diameter <= 1";
    throw CoercivityError(os.str());
  }
}

}  // namespace

BoundaryOperators assemble_operators(const FeSpace& s, const QuadratureConfig& q, StabilizationWeight alpha) {
  if (s.geometry().diameter() > 1.0 + 1e-12) throw CoercivityError("geometry diameter exceeds 1");
  const int n = s.dofs();
  const int l = s.degree();
  const int panels = s.panel_count();
  PanelPairIntegrator integrator(s, q);
  // Strictly lower pairs go to `lower`, diagonal pairs to `diag`; the
  // result lower + lower^T + diag is exactly symmetric.
  Eigen::MatrixXd lower_a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd lower_b = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd diag_a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd diag_b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < panels; ++i) {
    for (int j = 0; j <= i; ++j) {
      const PanelPairBlock blk = integrator.block(i, j);
      Eigen::MatrixXd& ta = (i == j) ? diag_a : lower_a;
      Eigen::MatrixXd& tb = (i == j) ? diag_b : lower_b;
      for (int a = 0; a <= l; ++a) {
        const int r = s.node(i, a);
        for (int b = 0; b <= l; ++b) {
          const int c = s.node(j, b);
          ta(r, c) += blk.single_layer(a, b);
          tb(r, c) += blk.hypersingular(a, b);
        }
      }
    }
  }
  Eigen::MatrixXd a_full = lower_a + lower_a.transpose() + diag_a;
  Eigen::MatrixXd b_full = lower_b + lower_b.transpose() + diag_b;
  const Eigen::VectorXd m = lumped_matrix(s, InnerProductKind::exact).entries();
  BoundaryOperators ops{SymMatrix(a_full), SymMatrix(b_full + alpha.value() * m * m.transpose()), SymMatrix(b_full)};
  if (q.check_spd) {
    require_spd(ops.single_layer, "single layer matrix", s.geometry());
    require_spd(ops.hypersingular, "stabilized hypersingular matrix", s.geometry());
  }
  return ops;
}

SymMatrix assemble_single_layer(const FeSpace& s, const QuadratureConfig& q) {
  return assemble_operators(s, q, StabilizationWeight()).single_layer;
}

SymMatrix assemble_hypersingular(const FeSpace& s, const QuadratureConfig& q, StabilizationWeight alpha) {
  return assemble_operators(s, q, alpha).hypersingular;
}

}  // namespace calderon
