#include "calderon/verify.hpp"

#include "calderon/duals.hpp"
#include "calderon/errors.hpp"
#include "calderon/experiment.hpp"
#include "calderon/mesh.hpp"
#include "calderon/spectral.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace calderon {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* label, double v) {
  std::ostringstream os;
  os << label << '=' << v;
  return os.str();
}

struct Suite {
  std::vector<CheckResult> results;

  // fn returns a detail string and sets ok.
  void run(const std::string& name, const std::function<std::string(bool&)>& fn) {
    CheckResult r{name, false, {}};
    try {
      r.detail = fn(r.passed);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
};

ExperimentConfig config(GeometryKind g, int degree, InnerProductKind kind, int quad_n) {
  ExperimentConfig c;
  c.geometry = g;
  c.degree = degree;
  c.inner_product = kind;
  c.quad_n = quad_n;
  return c;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt) {
  Suite s;
  const GeometryKind geometries[] = {GeometryKind::square, GeometryKind::circle, GeometryKind::ellipse};

  s.run("richardson weight reference values", [](bool& ok) {
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) worst = std::max(worst, rel(richardson_weight(d, 1).omega, 2.0 * (d + 2) / (d + 3)));
    const double w23 = richardson_weight(2, 3).omega;
    ok = worst <= 1e-12 && std::abs(w23 - 0.836) <= 1e-3;
    return fmt("linear_rel_err", worst) + " " + fmt("omega(d=2,l=3)", w23);
  });

  s.run("mesh invariants on corner schedule", [&](bool& ok) {
    ok = true;
    for (GeometryKind gk : geometries) {
      const Geometry g = make_geometry(gk, 0.5);
      for (int k = 1; k <= opt.max_level; ++k) corner_schedule(g, k).check_invariants();
    }
    return std::string("K <= 2, closed tiling");
  });

  s.run("lumped matrix equals mass row sums and tiles the curve", [&](bool& ok) {
    double worst = 0.0;
    for (GeometryKind gk : geometries)
      for (int l : {1, 3})
        for (InnerProductKind kind : {InnerProductKind::exact, InnerProductKind::mesh_averaged}) {
          const Geometry g = make_geometry(gk, 0.5);
          const FeSpace sp = build_space(corner_schedule(g, opt.max_level), l);
          const SymMatrix m = mass_matrix(sp, kind);
          const DiagMatrix d = lumped_matrix(sp, kind);
          const Eigen::VectorXd rows = m.dense().rowwise().sum();
          worst = std::max(worst, ((d.entries() - rows).array().abs() / rows.array().abs()).maxCoeff());
          worst = std::max(worst, rel(d.entries().sum(), g.length()));
        }
    ok = worst <= 1e-12;
    return fmt("max_rel_err", worst);
  });

  s.run("symmetric eigensolver residual", [&](bool& ok) {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    const int n = 60;
    Eigen::MatrixXd x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = nd(rng);
    const SymMatrix a(x + x.transpose());
    const Spectrum sp = sym_eig(a);
    const double res = (a.dense() * sp.vectors - sp.vectors * sp.values.asDiagonal()).norm() / a.dense().norm();
    const double orth = (sp.vectors.transpose() * sp.vectors - Eigen::MatrixXd::Identity(n, n)).norm();
    ok = res <= 1e-12 && orth <= 1e-12;
    return fmt("residual", res) + " " + fmt("orthogonality", orth);
  });

  for (int l : {1, 3}) {
    const ExperimentConfig cfg = config(GeometryKind::square, l, InnerProductKind::exact, opt.quad_n);
    const Geometry g = make_geometry(cfg);
    const LevelSystem sys = build_level(cfg, g, opt.max_level);
    const ConditionEvaluator eval(sys.ops.single_layer);
    const Precond gd = lumped_precond(sys.ops.hypersingular, sys.lumped);
    const double kd = kappa(gd, eval);
    const std::string tag = " (l=" + std::to_string(l) + ")";

    s.run("kappa(GA) equals kappa(AG)" + tag, [&](bool& ok) {
      const double swapped = ConditionEvaluator(gd.g).kappa(sys.ops.single_layer);
      ok = rel(swapped, kd) <= 1e-8;
      return fmt("kappa_GA", kd) + " " + fmt("kappa_AG", swapped);
    });

    s.run("kappa invariant under positive scaling" + tag, [&](bool& ok) {
      const double scaled = kappa(SymMatrix(10.0 * gd.g.dense()), SymMatrix(0.5 * sys.ops.single_layer.dense()));
      ok = rel(scaled, kd) <= 1e-8;
      return fmt("kappa", kd) + " " + fmt("scaled", scaled);
    });

    s.run("scaled basis equivalence" + tag, [&](bool& ok) {
      const double k = kappa(scaled_basis(sys.ops.hypersingular, sys.lumped),
                             scaled_basis(sys.ops.single_layer, sys.lumped));
      ok = rel(k, kd) <= 1e-8;
      return fmt("kappa_scaled", k) + " " + fmt("kappa_lumped", kd);
    });

    s.run("one Richardson step matches lumped" + tag, [&](bool& ok) {
      const double omega = richardson_weight(1, l).omega;
      const double k1 = kappa(richardson_precond(sys.ops.hypersingular, sys.mass, sys.lumped, 1, omega), eval);
      ok = rel(k1, kd) <= 1e-8;
      return fmt("kappa_r1", k1) + " " + fmt("kappa_lumped", kd);
    });

    s.run("Richardson inverse symmetric" + tag, [&](bool& ok) {
      const double omega = richardson_weight(1, l).omega;
      const Eigen::MatrixXd r = richardson_inverse(sys.mass, sys.lumped, 64, omega);
      const double asym = (r - r.transpose()).cwiseAbs().maxCoeff() / r.cwiseAbs().maxCoeff();
      ok = asym <= 1e-12;
      return fmt("relative_asymmetry", asym);
    });

    if (l == 1) {
      s.run("Jacobi equals lumped for linears", [&](bool& ok) {
        const double kj = kappa(jacobi_precond(sys.ops.hypersingular, sys.mass), eval);
        ok = rel(kj, kd) <= 1e-10;
        return fmt("kappa_jacobi", kj) + " " + fmt("kappa_lumped", kd);
      });
    }
  }

  s.run("dual basis properties", [&](bool& ok) {
    const Geometry g = make_geometry(GeometryKind::ellipse, 0.5);
    const FeSpace sp = build_space(corner_schedule(g, std::min(opt.max_level, 2)), 3);
    const BubbleSet b = build_bubbles(sp, InnerProductKind::exact);
    const DualBasis d = build_dual_basis(sp, b);
    const Eigen::MatrixXd bio = Eigen::MatrixXd(d.coeff.transpose() * d.mass * d.embedding);
    const Eigen::VectorXd sq = d.lumped.cwiseSqrt();
    const Eigen::MatrixXd dev = (bio - Eigen::MatrixXd(d.lumped.asDiagonal())).cwiseQuotient(sq * sq.transpose());
    const double bio_err = dev.cwiseAbs().maxCoeff();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sp.dofs());
    const double pou = (d.coeff * ones - Eigen::VectorXd::Ones(d.holding.dofs())).cwiseAbs().maxCoeff();
    const Eigen::SparseMatrix<double> p = fortin_matrix(d);
    const double idem = Eigen::MatrixXd(p * p - p).cwiseAbs().maxCoeff();
    ok = bio_err <= 1e-10 && pou <= 1e-10 && idem <= 1e-10;
    return fmt("biorthogonality", bio_err) + " " + fmt("partition_of_unity", pou) + " " + fmt("idempotence", idem);
  });

  return s.results;
}

}  // namespace calderon
