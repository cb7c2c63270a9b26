#include "calderon/precond.hpp"

#include "calderon/errors.hpp"
#include "calderon/spectral.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCholesky>
#include <charconv>
#include <cmath>
#include <sstream>

namespace calderon {

namespace {

using MultiIndex = std::vector<int>;

void collect_indices(int dim, int budget, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  for (int a = 0; a <= budget; ++a) {
    cur.push_back(a);
    collect_indices(dim, budget - a, cur, out);
    cur.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// int over the unit simplex of x^alpha = alpha! / (|alpha| + d)!
double simplex_moment(const MultiIndex& alpha) {
  double num = 1.0;
  int total = 0;
  for (int a : alpha) {
    num *= factorial(a);
    total += a;
  }
  return num / factorial(total + static_cast<int>(alpha.size()));
}

void require_square(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw ParameterError("preconditioner: dimension mismatch");
}

}  // namespace

std::string PrecondSpec::name() const {
  switch (kind) {
    case PrecondKind::lumped: return "lumped";
    case PrecondKind::mass: return "mass";
    case PrecondKind::richardson: return "richardson:" + std::to_string(iterations);
    case PrecondKind::jacobi: return "jacobi";
  }
  return "?";
}

PrecondSpec parse_precond(std::string_view text) {
  if (text == "lumped") return {PrecondKind::lumped, 0};
  if (text == "mass") return {PrecondKind::mass, 0};
  if (text == "jacobi") return {PrecondKind::jacobi, 0};
  constexpr std::string_view prefix = "richardson:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view digits = text.substr(prefix.size());
    int k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && k >= 1) return {PrecondKind::richardson, k};
  }
  throw ParameterError("unknown preconditioner '" + std::string(text) + "'");
}

std::vector<PrecondSpec> parse_precond_list(std::string_view text) {
  std::vector<PrecondSpec> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_precond(text.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

RichardsonWeight richardson_weight(int dimension, int degree) {
  if (dimension < 1 || dimension > 3 || degree < 1 || degree > 6) {
    std::ostringstream os;
    os << "richardson_weight: unsupported (d, l) = (" << dimension << ", " << degree << ")";
    throw ParameterError(os.str());
  }
  std::vector<MultiIndex> idx;
  MultiIndex cur;
  collect_indices(dimension, degree, cur, idx);
  const auto n = static_cast<Eigen::Index>(idx.size());

  // Vandermonde of the monomials at the equispaced Lagrange nodes.
  Eigen::MatrixXd v(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double p = 1.0;
      for (int c = 0; c < dimension; ++c)
        p *= std::pow(static_cast<double>(idx[i][c]) / degree, idx[j][c]);
      v(i, j) = p;
    }
  Eigen::MatrixXd moments(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      MultiIndex sum(idx[i]);
      for (int c = 0; c < dimension; ++c) sum[c] += idx[j][c];
      moments(i, j) = simplex_moment(sum);
    }
  const Eigen::MatrixXd coeff = Eigen::FullPivLU<Eigen::MatrixXd>(v).inverse();
  const Eigen::MatrixXd mass = coeff.transpose() * moments * coeff;
  const Eigen::VectorXd lumped = mass.rowwise().sum();
  if ((lumped.array() <= 0.0).any()) {
    std::ostringstream os;
    os << "richardson_weight: lumped reference mass is not positive for (d, l) = (" << dimension << ", " << degree
       << ")";
    throw ParameterError(os.str());
  }
  const Eigen::VectorXd s = lumped.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd ev = sym_eigvals(SymMatrix(s.asDiagonal() * mass * s.asDiagonal()));
  RichardsonWeight w;
  w.lambda_min = ev(0);
  w.lambda_max = ev(n - 1);
  w.omega = 2.0 / (w.lambda_min + w.lambda_max);
  return w;
}

Eigen::SparseMatrix<double> sparse_view(const SymMatrix& s) {
  return s.dense().sparseView(0.0, 0.0);
}

Precond lumped_precond(const SymMatrix& b, const DiagMatrix& d) {
  if (b.size() != d.size()) throw ParameterError("lumped_precond: dimension mismatch");
  const Eigen::VectorXd inv = d.entries().cwiseInverse();
  return {{PrecondKind::lumped, 0}, SymMatrix(inv.asDiagonal() * b.dense() * inv.asDiagonal()), 0.0};
}

Precond mass_precond(const SymMatrix& b, const SymMatrix& m) {
  require_square(b, m);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sparse_view(m));
  if (llt.info() != Eigen::Success) throw FactorizationError("mass matrix is not positive definite");
  const Eigen::MatrixXd y = llt.solve(b.dense());
  const Eigen::MatrixXd yt = y.transpose();
  return {{PrecondKind::mass, 0}, SymMatrix(llt.solve(yt)), 0.0};
}

double richardson_contraction(const SymMatrix& m, const DiagMatrix& d, double omega) {
  if (m.size() != d.size()) throw ParameterError("richardson_contraction: dimension mismatch");
  const Eigen::VectorXd s = d.entries().cwiseSqrt().cwiseInverse();
  const Eigen::SparseMatrix<double> sm = sparse_view(m);
  const Eigen::Index n = m.size();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  x.normalize();
  double rho = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd y = x - omega * s.cwiseProduct(sm * s.cwiseProduct(x));
    const double est = y.norm();
    if (est == 0.0) return 0.0;
    x = y / est;
    const bool settled = std::abs(est - rho) <= 1e-10 * est;
    rho = est;
    if (settled || rho >= 1.0) break;
  }
  return rho;
}

Eigen::MatrixXd richardson_inverse(const SymMatrix& m, const DiagMatrix& d, int k, double omega) {
  if (k < 1) throw ParameterError("richardson_inverse: k must be at least 1");
  if (!(omega > 0.0)) throw ParameterError("richardson_inverse: omega must be positive");
  if (m.size() != d.size()) throw ParameterError("richardson_inverse: dimension mismatch");
  const double rho = richardson_contraction(m, d, omega);
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "Richardson iteration diverges: spectral radius of I - omega D^-1 M is " << rho << " for omega = " << omega;
    throw DivergenceError(os.str());
  }
  const Eigen::VectorXd wd = omega * d.entries().cwiseInverse();
  const Eigen::SparseMatrix<double> sm = sparse_view(m);
  Eigen::MatrixXd r = wd.asDiagonal().toDenseMatrix();
  Eigen::MatrixXd mr(m.size(), m.size());
  for (int step = 1; step < k; ++step) {
    mr.noalias() = sm * r;
    r -= wd.asDiagonal() * mr;
    r.diagonal() += wd;
  }
  const double scale = r.cwiseAbs().maxCoeff();
  const double asym = (r - r.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "Richardson inverse lost symmetry: relative asymmetry " << asym / scale;
    throw Error(os.str());
  }
  return r;
}

Precond richardson_precond(const SymMatrix& b, const SymMatrix& m, const DiagMatrix& d, int k, double omega) {
  require_square(b, m);
  const Eigen::MatrixXd r = richardson_inverse(m, d, k, omega);
  const Eigen::MatrixXd rb = r * b.dense();
  return {{PrecondKind::richardson, k}, SymMatrix(rb * r), omega};
}

Precond jacobi_precond(const SymMatrix& b, const SymMatrix& m) {
  require_square(b, m);
  const Eigen::VectorXd diag = m.dense().diagonal();
  if ((diag.array() <= 0.0).any()) throw FactorizationError("jacobi_precond: non-positive mass diagonal");
  const Eigen::VectorXd inv = diag.cwiseInverse();
  return {{PrecondKind::jacobi, 0}, SymMatrix(inv.asDiagonal() * b.dense() * inv.asDiagonal()), 0.0};
}

double kappa(const Precond& g, const SymMatrix& a) { return kappa(g.g, a); }

double kappa(const Precond& g, const ConditionEvaluator& a) { return a.kappa(g.g); }

}  // namespace calderon
