#pragma once

#include <functional>
#include <vector>

namespace calderon {

/// Quadrature rule on [0, 1].
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness = 0;  ///< highest polynomial degree integrated exactly

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1], 1 <= n <= 64.
QuadRule gauss_rule(int n);

/// Composite Gauss rule on [0, 1] geometrically graded towards 0: the
/// intervals [ratio^(j+1), ratio^j] for j < depth plus [0, ratio^depth].
/// The outer layer gets n + kGradedOuterBoost points and deeper layers
/// linearly fewer, down to kGradedMinPoints.
QuadRule graded_rule(int n, double ratio, int depth);

inline constexpr int kGradedOuterBoost = 5;
inline constexpr int kGradedMinPoints = 4;

/// Grading used by the singular pair rules.
inline constexpr double kGradingRatio = 0.15;
/// ceil(log(1e-12) / log(0.15)).
int grading_depth();

enum class PanelRelation { separated, adjacent, identical };

/// One node of a rule on the product square [0,1]^2 of two panel coordinates
/// (s on the test panel, t on the trial panel).
///
/// `gap` carries the coordinate offset that the kernel is singular in, so it
/// can be formed without cancellation: identical -> s - t; adjacent ->
/// 1 - s (the test panel ends where the trial panel starts); separated -> 0.
struct PairNode {
  double s = 0.0;
  double t = 0.0;
  double gap = 0.0;
  double weight = 0.0;
};

struct PairRule {
  PanelRelation relation = PanelRelation::separated;
  std::vector<PairNode> nodes;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Rules for integrands with a logarithmic singularity on the diagonal
/// (identical) or at the corner s = 1, t = 0 (adjacent). Singular rules use a
/// Duffy split of the square into two triangles combined with graded_rule in
/// the directions that carry the log factor. Requires base_n >= 4.
PairRule pair_rule(PanelRelation relation, int base_n);

/// Outcome of an adaptive integration.
struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Stops when the summed error estimate drops below
/// max(rel_tol * |value|, abs_tol) or after max_intervals subdivisions.
AdaptiveResult adaptive_integrate_detailed(const std::function<double(double)>& f, double a, double b,
                                           double rel_tol, double abs_tol = 0.0, int max_intervals = 20000);

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double rel_tol);

/// Iterated adaptive integration over the box [ax, bx] x [ay, by].
double adaptive_integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                             double ay, double by, double rel_tol);

}  // namespace calderon
