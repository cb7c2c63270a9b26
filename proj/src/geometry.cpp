#include "calderon/geometry.hpp"

#include "calderon/errors.hpp"
#include "calderon/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace calderon {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

GeometryKind parse_geometry_kind(std::string_view name) {
  if (name == "square") return GeometryKind::square;
  if (name == "circle") return GeometryKind::circle;
  if (name == "ellipse") return GeometryKind::ellipse;
  throw ParameterError("unknown geometry '" + std::string(name) + "'");
}

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::square:
      return "square";
    case GeometryKind::circle:
      return "circle";
    case GeometryKind::ellipse:
      return "ellipse";
  }
  return "?";
}

Geometry::Geometry(GeometryKind kind, double scale, double ellipse_ratio, std::vector<Chart> charts)
    : kind_(kind), scale_(scale), ellipse_ratio_(ellipse_ratio), charts_(std::move(charts)) {
  if (charts_.empty()) throw ParameterError("geometry needs at least one chart");
  for (int c = 0; c < chart_count(); ++c) chart_lengths_.push_back(arc_length(c, t_begin(c), t_end(c)));
  // Diameter of the closed curve: charts are convex pieces of a convex curve
  // for every shipped shape, so sampled point pairs converge quickly.
  std::vector<Point2> samples;
  for (int c = 0; c < chart_count(); ++c) {
    constexpr int kSamples = 256;
    for (int i = 0; i <= kSamples; ++i) {
      const double t = t_begin(c) + (t_end(c) - t_begin(c)) * i / kSamples;
      samples.push_back(eval(c, t));
    }
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      diameter_ = std::max(diameter_, (samples[i] - samples[j]).norm());
}

double Geometry::t_begin(int c) const {
  return std::visit([](const auto& ch) { return ch.t0; }, chart(c));
}

double Geometry::t_end(int c) const {
  return std::visit([](const auto& ch) { return ch.t1; }, chart(c));
}

void Geometry::check_parameter(int c, double t) const {
  if (c < 0 || c >= chart_count()) throw DomainError("chart index out of range");
  const double lo = t_begin(c);
  const double hi = t_end(c);
  const double slack = 1e-12 * (hi - lo);
  if (!(t >= lo - slack && t <= hi + slack)) {
    std::ostringstream os;
    os << "parameter " << t << " outside chart " << c << " interval [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
}

Point2 Geometry::eval(int c, double t) const {
  check_parameter(c, t);
  return std::visit(Overloaded{[t](const SegmentChart& s) -> Point2 { return s.origin + (t - s.t0) * s.velocity; },
                               [t](const EllipseChart& e) -> Point2 {
                                 return e.center + Point2(e.a * std::cos(t), e.b * std::sin(t));
                               }},
                    chart(c));
}

Point2 Geometry::derivative(int c, double t) const {
  check_parameter(c, t);
  return std::visit(Overloaded{[](const SegmentChart& s) -> Point2 { return s.velocity; },
                               [t](const EllipseChart& e) -> Point2 {
                                 return {-e.a * std::sin(t), e.b * std::cos(t)};
                               }},
                    chart(c));
}

double Geometry::speed(int c, double t) const { return derivative(c, t).norm(); }

Point2 Geometry::displacement(int c, double t, double dt) const {
  return std::visit(Overloaded{[dt](const SegmentChart& s) -> Point2 { return dt * s.velocity; },
                               [t, dt](const EllipseChart& e) -> Point2 {
                                 const double half = std::sin(0.5 * dt);
                                 const double mid = t + 0.5 * dt;
                                 return {-2.0 * e.a * std::sin(mid) * half, 2.0 * e.b * std::cos(mid) * half};
                               }},
                    chart(c));
}

double Geometry::arc_length(int c, double ta, double tb) const {
  check_parameter(c, ta);
  check_parameter(c, tb);
  return std::visit(Overloaded{[&](const SegmentChart& s) { return std::abs(tb - ta) * s.velocity.norm(); },
                               [&](const EllipseChart& e) {
                                 if (e.a == e.b) return std::abs(tb - ta) * e.a;
                                 auto f = [&e](double t) {
                                   return std::hypot(e.a * std::sin(t), e.b * std::cos(t));
                                 };
                                 const double lo = std::min(ta, tb);
                                 const double hi = std::max(ta, tb);
                                 return adaptive_integrate_detailed(f, lo, hi, 1e-15, 1e-300, 2000).value;
                               }},
                    chart(c));
}

double Geometry::length() const {
  double sum = 0.0;
  for (double l : chart_lengths_) sum += l;
  return sum;
}

double Geometry::parameter_at(int c, double u) const {
  if (c < 0 || c >= chart_count()) throw DomainError("chart index out of range");
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("normalized arc length outside [0, 1]");
  const double lo = t_begin(c);
  const double hi = t_end(c);
  if (u == 0.0) return lo;
  if (u == 1.0) return hi;
  const auto* e = std::get_if<EllipseChart>(&chart(c));
  if (e == nullptr || e->a == e->b) return lo + u * (hi - lo);
  // a full turn has its quarter points at quarter arc lengths
  const bool full_turn = hi - lo == 2.0 * std::numbers::pi;
  if (full_turn && 4.0 * u == std::floor(4.0 * u)) return lo + u * (hi - lo);
  double base = lo;
  double target = u * chart_length(c);
  if (full_turn) {
    const double quarter = std::floor(4.0 * u);
    base = lo + 0.5 * std::numbers::pi * quarter;
    target = (u - 0.25 * quarter) * chart_length(c);
  }
  // safeguarded Newton on s(t) = target with s increasing
  double a = base;
  double b = full_turn ? base + 0.5 * std::numbers::pi : hi;
  double t = base + target / chart_length(c) * (hi - lo);
  if (!(t > a && t < b)) t = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double f = arc_length(c, base, t) - target;
    if (f > 0.0) b = t;
    else a = t;
    double next = t - f / speed(c, t);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t) || b - a <= 0.0) return next;
    t = next;
  }
  throw Error("parameter_at: Newton iteration did not converge");
}

std::vector<CurveLocation> Geometry::corners() const {
  std::vector<CurveLocation> out;
  if (chart_count() > 1) {
    for (int c = 0; c < chart_count(); ++c) out.push_back({c, t_begin(c)});
  } else {
    const double lo = t_begin(0);
    const double span = t_end(0) - lo;
    for (int j = 0; j < 4; ++j) out.push_back({0, lo + span * j / 4.0});
  }
  return out;
}

bool Geometry::is_polygonal() const {
  for (const auto& ch : charts_)
    if (!std::holds_alternative<SegmentChart>(ch)) return false;
  return true;
}

Geometry make_geometry(GeometryKind kind, double scale, double ellipse_ratio) {
  if (!(scale > 0.0)) throw ParameterError("geometry scale must be positive");
  if (!(ellipse_ratio > 0.0)) throw ParameterError("ellipse ratio must be positive");
  std::vector<Chart> charts;
  switch (kind) {
    case GeometryKind::square: {
      const Point2 corner[4] = {{0.0, 0.0}, {scale, 0.0}, {scale, scale}, {0.0, scale}};
      for (int i = 0; i < 4; ++i) {
        // parameter intervals [2i, 2i + 1] keep the chart closures disjoint
        SegmentChart s;
        s.t0 = 2.0 * i;
        s.t1 = 2.0 * i + 1.0;
        s.origin = corner[i];
        s.velocity = corner[(i + 1) % 4] - corner[i];
        charts.emplace_back(s);
      }
      break;
    }
    case GeometryKind::circle:
    case GeometryKind::ellipse: {
      EllipseChart e;
      e.center = Point2::Zero();
      e.a = 0.5 * scale;
      e.b = (kind == GeometryKind::circle) ? e.a : e.a / ellipse_ratio;
      e.t0 = 0.0;
      e.t1 = 2.0 * std::numbers::pi;
      charts.emplace_back(e);
      break;
    }
  }
  Geometry g(kind, scale, kind == GeometryKind::ellipse ? ellipse_ratio : 1.0, std::move(charts));
  if (g.diameter() > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "geometry diameter " << g.diameter()
       << " exceeds 1: the log-kernel single layer operator may lose coercivity";
    throw CoercivityError(os.str());
  }
  return g;
}

}  // namespace calderon
