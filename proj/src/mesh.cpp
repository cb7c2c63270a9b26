#include "calderon/mesh.hpp"

#include "calderon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace calderon {

namespace {

constexpr double kRatioSlack = 1e-12;

Panel make_panel(const Geometry& g, int chart, double u0, double u1, int generation, bool corner_start) {
  Panel p;
  p.chart = chart;
  p.u0 = u0;
  p.u1 = u1;
  p.t0 = g.parameter_at(chart, u0);
  p.t1 = g.parameter_at(chart, u1);
  p.length = g.chart_length(chart) * (u1 - u0);
  p.generation = generation;
  p.corner_start = corner_start;
  return p;
}

std::vector<Panel> bisect(const Geometry& g, const std::vector<Panel>& panels, const std::vector<char>& mark) {
  std::vector<Panel> out;
  out.reserve(panels.size() * 2);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    if (!mark[i]) {
      out.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.u0 + p.u1);
    Panel left = make_panel(g, p.chart, p.u0, mid, p.generation + 1, p.corner_start);
    Panel right = make_panel(g, p.chart, mid, p.u1, p.generation + 1, false);
    // shared endpoints keep their exact parameters
    left.t0 = p.t0;
    right.t1 = p.t1;
    out.push_back(left);
    out.push_back(right);
  }
  return out;
}

// Bisects until neighbouring lengths differ by at most kMeshRatio.
std::vector<Panel> close_kmesh(const Geometry& g, std::vector<Panel> panels) {
  for (;;) {
    const std::size_t n = panels.size();
    std::vector<char> mark(n, 0);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      const double limit = kMeshRatio * (1.0 + kRatioSlack);
      if (panels[i].length > limit * panels[j].length) mark[i] = any = true;
      if (panels[j].length > limit * panels[i].length) mark[j] = any = true;
    }
    if (!any) return panels;
    panels = bisect(g, panels, mark);
  }
}

}  // namespace

Mesh::Mesh(Geometry geometry, std::vector<Panel> panels)
    : geometry_(std::move(geometry)), panels_(std::move(panels)) {
  if (panels_.size() < 3) throw ParameterError("a mesh needs at least three panels");
}

double Mesh::h_min() const {
  return std::min_element(panels_.begin(), panels_.end(),
                          [](const Panel& a, const Panel& b) { return a.length < b.length; })
      ->length;
}

double Mesh::h_max() const {
  return std::max_element(panels_.begin(), panels_.end(),
                          [](const Panel& a, const Panel& b) { return a.length < b.length; })
      ->length;
}

double Mesh::total_length() const {
  double sum = 0.0;
  for (const auto& p : panels_) sum += p.length;
  return sum;
}

double Mesh::max_neighbor_ratio() const {
  double r = 1.0;
  for (int i = 0; i < size(); ++i) {
    const double a = panels_[static_cast<std::size_t>(i)].length;
    const double b = panels_[static_cast<std::size_t>(next(i))].length;
    r = std::max({r, a / b, b / a});
  }
  return r;
}

void Mesh::check_invariants() const {
  const Geometry& g = geometry_;
  for (int i = 0; i < size(); ++i) {
    const Panel& p = panel(i);
    const Panel& q = panel(next(i));
    if (!(p.t1 > p.t0)) throw Error("mesh: empty panel");
    const bool same_chart = p.chart == q.chart && p.t1 == q.t0;
    const bool chart_step = p.t1 == g.t_end(p.chart) && q.t0 == g.t_begin(q.chart) &&
                            q.chart == (p.chart + 1) % g.chart_count();
    if (!same_chart && !chart_step) {
      std::ostringstream os;
      os << "mesh: panels " << i << " and " << next(i) << " do not share an endpoint";
      throw Error(os.str());
    }
  }
  const double total = total_length();
  const double expected = g.length();
  if (std::abs(total - expected) > 1e-12 * expected) throw Error("mesh: panels do not tile the curve");
  if (max_neighbor_ratio() > kMeshRatio * (1.0 + kRatioSlack)) throw Error("mesh: K-mesh ratio exceeds 2");
}

int default_panels_per_chart(const Geometry& g) { return g.chart_count() > 1 ? 2 : 8; }

Mesh initial_mesh(const Geometry& g, int panels_per_chart) {
  if (panels_per_chart < 1) throw ParameterError("panels_per_chart must be at least 1");
  std::vector<CurveLocation> corners;
  for (const auto& v : g.corners())
    corners.push_back({v.chart, g.arc_length(v.chart, g.t_begin(v.chart), v.t) / g.chart_length(v.chart)});
  std::vector<Panel> panels;
  for (int c = 0; c < g.chart_count(); ++c) {
    for (int i = 0; i < panels_per_chart; ++i) {
      const double u0 = static_cast<double>(i) / panels_per_chart;
      const double u1 = static_cast<double>(i + 1) / panels_per_chart;
      const bool corner = std::any_of(corners.begin(), corners.end(), [&](const CurveLocation& v) {
        return v.chart == c && std::abs(v.t - u0) < 1e-12;
      });
      panels.push_back(make_panel(g, c, u0, u1, 0, corner));
    }
  }
  return Mesh(g, close_kmesh(g, std::move(panels)));
}

Mesh refine(const Mesh& m, const std::set<int>& marked) {
  if (marked.empty()) throw ParameterError("refine: no panels marked");
  std::vector<char> mark(static_cast<std::size_t>(m.size()), 0);
  for (int id : marked) {
    if (id < 0 || id >= m.size()) throw ParameterError("refine: panel id out of range");
    mark[static_cast<std::size_t>(id)] = 1;
  }
  const Geometry& g = m.geometry();
  return Mesh(g, close_kmesh(g, bisect(g, m.panels(), mark)));
}

Mesh uniform_refine(const Mesh& m) {
  std::set<int> all;
  for (int i = 0; i < m.size(); ++i) all.insert(i);
  return refine(m, all);
}

Mesh uniform_schedule(const Geometry& g, int k, int panels_per_chart) {
  if (k < 0) throw ParameterError("level must be non-negative");
  Mesh m = initial_mesh(g, panels_per_chart > 0 ? panels_per_chart : default_panels_per_chart(g));
  for (int i = 0; i < k; ++i) m = uniform_refine(m);
  return m;
}

Mesh corner_schedule(const Geometry& g, int k, const CornerSchedule& options) {
  if (k < 1) throw ParameterError("corner_schedule: level must be at least 1");
  Mesh m = uniform_schedule(g, k, options.panels_per_chart);
  bool has_corner = false;
  for (const auto& p : m.panels()) has_corner = has_corner || p.corner_start;
  if (!has_corner) throw ParameterError("corner_schedule: no corner vertex lies on the initial mesh");
  for (int round = 0; round < options.rounds_per_level * k; ++round) {
    std::set<int> marked;
    for (int i = 0; i < m.size(); ++i) {
      if (m.panel(i).corner_start) {
        marked.insert(i);
        marked.insert(m.prev(i));
      }
    }
    m = refine(m, marked);
  }
  return m;
}

void write_mesh(std::ostream& out, const Mesh& m) {
  const auto flags = out.flags();
  out << std::setprecision(17);
  for (int i = 0; i < m.size(); ++i) {
    const Panel& p = m.panel(i);
    out << i << ' ' << p.chart << ' ' << p.t0 << ' ' << p.t1 << ' ' << p.length << '\n';
  }
  out.flags(flags);
}

}  // namespace calderon
