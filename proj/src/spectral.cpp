#include "calderon/spectral.hpp"

#include "calderon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace calderon {

namespace {

constexpr Eigen::Index kBlock = 64;

[[noreturn]] void pivot_failure(Eigen::Index j, double value) {
  std::ostringstream os;
  os << "Cholesky pivot " << j << " is " << value << ": matrix is not positive definite";
  throw FactorizationError(os.str());
}

}  // namespace

Eigen::MatrixXd spd_factor(const SymMatrix& s) {
  Eigen::MatrixXd a = s.dense();
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; k += kBlock) {
    const Eigen::Index b = std::min(kBlock, n - k);
    auto a11 = a.block(k, k, b, b);
    for (Eigen::Index j = 0; j < b; ++j) {
      double d = a11(j, j) - a11.row(j).head(j).squaredNorm();
      if (!(d > 0.0) || !std::isfinite(d)) pivot_failure(k + j, d);
      d = std::sqrt(d);
      a11(j, j) = d;
      for (Eigen::Index i = j + 1; i < b; ++i)
        a11(i, j) = (a11(i, j) - a11.row(i).head(j).dot(a11.row(j).head(j))) / d;
    }
    const Eigen::Index rest = n - k - b;
    if (rest > 0) {
      auto a21 = a.block(k + b, k, rest, b);
      a11.triangularView<Eigen::Lower>().transpose().solveInPlace<Eigen::OnTheRight>(a21);
      a.block(k + b, k + b, rest, rest).selfadjointView<Eigen::Lower>().rankUpdate(a21, -1.0);
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return a;
}

Tridiagonal tridiagonalize(const SymMatrix& s, bool with_q) {
  Eigen::MatrixXd a = s.dense();
  const Eigen::Index n = a.rows();
  Tridiagonal out;
  out.off_diagonal = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
  Eigen::VectorXd taus = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
  Eigen::VectorXd v, p, w;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Eigen::Index m = n - i - 1;
    auto x = a.col(i).tail(m);
    const double alpha = x(0);
    const double sigma = x.tail(m - 1).squaredNorm();
    double tau = 0.0;
    double beta = alpha;
    if (sigma > 0.0) {
      const double mu = std::sqrt(alpha * alpha + sigma);
      beta = (alpha <= 0.0) ? mu : -mu;
      tau = (beta - alpha) / beta;
      x.tail(m - 1) /= (alpha - beta);
    }
    x(0) = 1.0;
    out.off_diagonal(i) = beta;
    taus(i) = tau;
    if (tau != 0.0) {
      v = x;
      auto a22 = a.block(i + 1, i + 1, m, m);
      p.noalias() = tau * (a22.selfadjointView<Eigen::Lower>() * v);
      w = p - (0.5 * tau * p.dot(v)) * v;
      a22.selfadjointView<Eigen::Lower>().rankUpdate(v, w, -1.0);
    }
  }
  out.diagonal = a.diagonal();
  if (with_q) {
    out.q = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = n - 2; i >= 0; --i) {
      const double tau = taus(i);
      if (tau == 0.0) continue;
      const Eigen::Index m = n - i - 1;
      v = a.col(i).tail(m);
      auto qs = out.q.block(i + 1, i + 1, m, m);
      const Eigen::RowVectorXd vq = v.transpose() * qs;
      qs.noalias() -= tau * v * vq;
    }
  }
  return out;
}

Eigen::VectorXd tridiagonal_ql(Eigen::VectorXd d, Eigen::VectorXd off, Eigen::MatrixXd* z) {
  const Eigen::Index n = d.size();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  if (n > 1) e.head(n - 1) = off;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw Error("implicit QL iteration did not converge");
      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (Eigen::Index i = m - 1; i >= l; --i) {
        double f = s * e(i);
        const double b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        if (z) {
          auto zi = z->col(i);
          auto zj = z->col(i + 1);
          for (Eigen::Index k = 0; k < z->rows(); ++k) {
            f = zj(k);
            zj(k) = s * zi(k) + c * f;
            zi(k) = c * zi(k) - s * f;
          }
        }
      }
      if (deflated) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    } while (m != l);
  }
  return d;
}

Spectrum sym_eig(const SymMatrix& s, bool with_vectors) {
  Tridiagonal t = tridiagonalize(s, with_vectors);
  Spectrum out;
  out.provenance = "symmetric eigenproblem";
  Eigen::MatrixXd* z = with_vectors ? &t.q : nullptr;
  Eigen::VectorXd values = tridiagonal_ql(t.diagonal, t.off_diagonal, z);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  out.values.resize(values.size());
  if (with_vectors) out.vectors.resize(values.size(), values.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.values(kk) = values(order[k]);
    if (with_vectors) out.vectors.col(kk) = t.q.col(order[k]);
  }
  return out;
}

Eigen::VectorXd sym_eigvals(const SymMatrix& s) { return sym_eig(s, false).values; }

ConditionEvaluator::ConditionEvaluator(const SymMatrix& a) {
  const Eigen::Index n = a.size();
  scale_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(a(i, i) > 0.0)) throw FactorizationError("operator has a non-positive diagonal entry");
    scale_(i) = 1.0 / std::sqrt(a(i, i));
  }
  factor_ = spd_factor(SymMatrix(scale_.asDiagonal() * a.dense() * scale_.asDiagonal()));
}

Eigen::VectorXd ConditionEvaluator::eigenvalues(const SymMatrix& g) const {
  if (g.size() != size()) throw ParameterError("kappa: dimension mismatch");
  const Eigen::VectorXd inv = scale_.cwiseInverse();
  const Eigen::MatrixXd gs = inv.asDiagonal() * g.dense() * inv.asDiagonal();
  const Eigen::MatrixXd t = gs * factor_.triangularView<Eigen::Lower>();
  const Eigen::MatrixXd c = factor_.triangularView<Eigen::Lower>().transpose() * t;
  return sym_eigvals(SymMatrix(0.5 * (c + c.transpose())));
}

double ConditionEvaluator::kappa(const SymMatrix& g) const {
  const Eigen::VectorXd ev = eigenvalues(g);
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "preconditioned system has a non-positive eigenvalue " << lo << ": preconditioner is not SPD";
    throw FactorizationError(os.str());
  }
  return hi / lo;
}

double kappa(const SymMatrix& g, const SymMatrix& a) { return ConditionEvaluator(a).kappa(g); }

}  // namespace calderon
