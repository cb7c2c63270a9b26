#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace calderon {

using Point2 = Eigen::Vector2d;

/// Straight chart t -> origin + (t - t0) * velocity on [t0, t1].
struct SegmentChart {
  Point2 origin;
  Point2 velocity;
  double t0 = 0.0;
  double t1 = 1.0;
};

/// Elliptic arc t -> center + (a cos t, b sin t) on [t0, t1].
struct EllipseChart {
  Point2 center;
  double a = 1.0;
  double b = 1.0;
  double t0 = 0.0;
  double t1 = 0.0;
};

using Chart = std::variant<SegmentChart, EllipseChart>;

enum class GeometryKind { square, circle, ellipse };

GeometryKind parse_geometry_kind(std::string_view name);
std::string_view to_string(GeometryKind kind);

/// A point of the curve addressed by chart index and parameter.
struct CurveLocation {
  int chart = 0;
  double t = 0.0;
};

/// Closed curve glued from charts in cyclic order: the end of chart i is the
/// start of chart (i + 1) mod p. Immutable after construction.
class Geometry {
 public:
  Geometry(GeometryKind kind, double scale, double ellipse_ratio, std::vector<Chart> charts);

  [[nodiscard]] GeometryKind kind() const { return kind_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double ellipse_ratio() const { return ellipse_ratio_; }
  [[nodiscard]] int chart_count() const { return static_cast<int>(charts_.size()); }
  [[nodiscard]] const Chart& chart(int i) const { return charts_.at(static_cast<std::size_t>(i)); }

  /// Closed parameter interval of a chart.
  [[nodiscard]] double t_begin(int chart) const;
  [[nodiscard]] double t_end(int chart) const;

  [[nodiscard]] Point2 eval(int chart, double t) const;
  [[nodiscard]] Point2 derivative(int chart, double t) const;
  [[nodiscard]] double speed(int chart, double t) const;

  /// chi(t + dt) - chi(t), evaluated without cancellation for small dt.
  [[nodiscard]] Point2 displacement(int chart, double t, double dt) const;

  /// Arc length of chi([ta, tb]) on one chart.
  [[nodiscard]] double arc_length(int chart, double ta, double tb) const;
  [[nodiscard]] double length() const;
  [[nodiscard]] double chart_length(int chart) const { return chart_lengths_.at(static_cast<std::size_t>(chart)); }

  /// Parameter t of the point at normalized arc length u in [0, 1] of a chart.
  [[nodiscard]] double parameter_at(int chart, double u) const;
  [[nodiscard]] double diameter() const { return diameter_; }

  /// Vertices refined towards by the corner schedule: chart junctions for
  /// polygons, four equispaced parameters for the single-chart curves.
  [[nodiscard]] std::vector<CurveLocation> corners() const;

  /// True when every chart has constant speed.
  [[nodiscard]] bool is_polygonal() const;

 private:
  void check_parameter(int chart, double t) const;

  GeometryKind kind_;
  double scale_;
  double ellipse_ratio_;
  double diameter_ = 0.0;
  std::vector<Chart> charts_;
  std::vector<double> chart_lengths_;
};

/// Square boundary of side `scale`, circle of diameter `scale`, or ellipse
/// with major axis `scale` and a / b = `ellipse_ratio`.
/// Throws CoercivityError when the diameter exceeds 1.
Geometry make_geometry(GeometryKind kind, double scale, double ellipse_ratio = 2.0);

}  // namespace calderon
