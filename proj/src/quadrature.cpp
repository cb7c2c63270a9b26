#include "calderon/quadrature.hpp"

#include "calderon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>

namespace calderon {

QuadRule gauss_rule(int n) {
  if (n < 1 || n > 64) throw ParameterError("gauss_rule: point count must lie in [1, 64]");
  // (P_n(x), P_n'(x)) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  rule.exactness = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    // x is the i-th largest root on [-1, 1]
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.5;
  return rule;
}

int grading_depth() {
  return static_cast<int>(std::ceil(std::log(1e-12) / std::log(kGradingRatio)));
}

QuadRule graded_rule(int n, double ratio, int depth) {
  if (!(ratio > 0.0 && ratio < 1.0) || depth < 0) throw ParameterError("graded_rule: bad grading");
  if (n < 1) throw ParameterError("graded_rule: need at least one point per layer");
  // Every layer [r^(j+1), r^j] sees the singularity at the same relative
  // distance, so Gauss converges like rho^(-2n) with one rho for all layers
  // while the layer weight shrinks like r^j. Points per layer therefore drop
  // by log(1/r) / (2 log rho) per layer, starting above n on the outer layer.
  const double delta = ratio / (1.0 - ratio);
  const double x = 1.0 + 2.0 * delta;
  const double rho = x + std::sqrt(x * x - 1.0);
  const double slope = std::log(1.0 / ratio) / (2.0 * std::log(rho));
  const int floor_n = std::min(n, kGradedMinPoints);
  QuadRule rule;
  int fewest = n + kGradedOuterBoost;
  auto append = [&](double a, double b, int count) {
    const QuadRule base = gauss_rule(count);
    fewest = std::min(fewest, count);
    for (std::size_t q = 0; q < base.size(); ++q) {
      rule.nodes.push_back(a + (b - a) * base.nodes[q]);
      rule.weights.push_back((b - a) * base.weights[q]);
    }
  };
  auto layer_points = [&](int j) {
    return std::max(floor_n, n + kGradedOuterBoost - static_cast<int>(std::ceil(slope * j)));
  };
  double hi = 1.0;
  for (int j = 0; j < depth; ++j) {
    const double lo = hi * ratio;
    append(lo, hi, layer_points(j));
    hi = lo;
  }
  append(0.0, hi, layer_points(depth));
  rule.exactness = 2 * fewest - 1;
  return rule;
}

namespace {

PairRule tensor_rule(int n) {
  const QuadRule g = gauss_rule(n);
  PairRule rule;
  rule.relation = PanelRelation::separated;
  rule.nodes.reserve(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      rule.nodes.push_back({g.nodes[i], g.nodes[j], 0.0, g.weights[i] * g.weights[j]});
  return rule;
}

// Triangle {t <= s}: s = x, s - t = x v. The Jacobian x and the factor
// log(x v) are both resolved by grading x and v towards 0.
PairRule identical_rule(int n) {
  const QuadRule g = graded_rule(n, kGradingRatio, grading_depth());
  PairRule rule;
  rule.relation = PanelRelation::identical;
  rule.nodes.reserve(2 * g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.nodes[i];
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double v = g.nodes[j];
      const double gap = x * v;
      const double w = g.weights[i] * g.weights[j] * x;
      rule.nodes.push_back({x, x - gap, gap, w});
      rule.nodes.push_back({x - gap, x, -gap, w});
    }
  }
  return rule;
}

// Corner at u = 1 - s = 0, t = 0. Triangle {t <= u}: t = u v, and its mirror.
PairRule adjacent_rule(int n) {
  const QuadRule g = graded_rule(n, kGradingRatio, grading_depth());
  const QuadRule h = gauss_rule(n);
  PairRule rule;
  rule.relation = PanelRelation::adjacent;
  rule.nodes.reserve(2 * g.size() * h.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes[i];
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double v = h.nodes[j];
      const double w = g.weights[i] * h.weights[j] * r;
      const double other = r * v;
      rule.nodes.push_back({1.0 - r, other, r, w});
      rule.nodes.push_back({1.0 - other, r, other, w});
    }
  }
  return rule;
}

}  // namespace

PairRule pair_rule(PanelRelation relation, int base_n) {
  if (base_n < 4) throw ParameterError("pair_rule: base_n must be at least 4");
  switch (relation) {
    case PanelRelation::separated:
      return tensor_rule(base_n);
    case PanelRelation::identical:
      return identical_rule(base_n);
    case PanelRelation::adjacent:
      return adjacent_rule(base_n);
  }
  throw ParameterError("pair_rule: unknown relation");
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace

AdaptiveResult adaptive_integrate_detailed(const std::function<double(double)>& f, double a, double b,
                                           double rel_tol, double abs_tol, int max_intervals) {
  std::priority_queue<Segment> queue;
  Segment first = gk15(f, a, b);
  double value = first.value;
  double error = first.error;
  queue.push(first);
  int count = 1;
  while (error > std::max(rel_tol * std::abs(value), abs_tol) && count < max_intervals) {
    const Segment worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    queue.pop();
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  // Re-sum to remove drift from incremental updates.
  double sum_value = 0.0;
  double sum_error = 0.0;
  std::vector<Segment> all;
  all.reserve(queue.size());
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : all) {
    sum_value += s.value;
    sum_error += s.error;
  }
  return {sum_value, sum_error, count, sum_error <= std::max(rel_tol * std::abs(sum_value), abs_tol)};
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  return adaptive_integrate_detailed(f, a, b, rel_tol).value;
}

double adaptive_integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                             double ay, double by, double rel_tol) {
  const double inner_tol = 0.1 * rel_tol;
  auto inner = [&](double x) {
    return adaptive_integrate_detailed([&](double y) { return f(x, y); }, ay, by, inner_tol, 1e-300).value;
  };
  return adaptive_integrate_detailed(inner, ax, bx, rel_tol).value;
}

}  // namespace calderon
