#pragma once

#include "calderon/geometry.hpp"

#include <iosfwd>
#include <set>
#include <vector>

namespace calderon {

/// One panel chi([t0, t1]) of a chart. u0, u1 are the endpoints in
/// normalized chart arc length; refinement halves [u0, u1], which keeps
/// the arc lengths exactly dyadic on curved charts too.
struct Panel {
  int chart = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double u0 = 0.0;
  double u1 = 0.0;
  double length = 0.0;  ///< arc length |T| = h_T
  int generation = 0;
  bool corner_start = false;  ///< the vertex chi(t0) is a refinement corner

  [[nodiscard]] double parameter_length() const { return t1 - t0; }
};

/// Conforming partition of a closed curve into a cyclic list of panels:
/// panel i ends where panel (i + 1) mod n starts. Immutable; refinement
/// returns a new mesh.
class Mesh {
 public:
  Mesh(Geometry geometry, std::vector<Panel> panels);

  [[nodiscard]] const Geometry& geometry() const { return geometry_; }
  [[nodiscard]] const std::vector<Panel>& panels() const { return panels_; }
  [[nodiscard]] const Panel& panel(int i) const { return panels_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] int size() const { return static_cast<int>(panels_.size()); }
  [[nodiscard]] int next(int i) const { return (i + 1) % size(); }
  [[nodiscard]] int prev(int i) const { return (i + size() - 1) % size(); }

  [[nodiscard]] double h_min() const;
  [[nodiscard]] double h_max() const;
  [[nodiscard]] double total_length() const;
  /// max over neighbouring panels of h_T / h_T'.
  [[nodiscard]] double max_neighbor_ratio() const;

  /// Throws Error unless the panels tile the curve, consecutive panels share
  /// their endpoint, and the K-mesh ratio is at most 2.
  void check_invariants() const;

 private:
  Geometry geometry_;
  std::vector<Panel> panels_;
};

/// K-mesh constant enforced by refinement.
inline constexpr double kMeshRatio = 2.0;

/// Each chart split into `panels_per_chart` equal parameter intervals, then
/// closed under the K-mesh condition.
Mesh initial_mesh(const Geometry& g, int panels_per_chart);

/// Bisects the marked panels at their parameter midpoints, then bisects
/// neighbours recursively until the K-mesh ratio holds everywhere.
Mesh refine(const Mesh& m, const std::set<int>& marked);

/// refine() with every panel marked.
Mesh uniform_refine(const Mesh& m);

struct CornerSchedule {
  int panels_per_chart = 0;   ///< 0 selects the geometry default (2 for the square, 8 otherwise)
  int rounds_per_level = 4;   ///< local marking rounds per level k (4 gives 4k rounds)
};

/// k uniform bisections of the initial mesh followed by rounds_per_level * k
/// rounds of refining every panel that touches a corner vertex.
Mesh corner_schedule(const Geometry& g, int k, const CornerSchedule& options = {});

/// k uniform bisections of the initial mesh.
Mesh uniform_schedule(const Geometry& g, int k, int panels_per_chart = 0);

int default_panels_per_chart(const Geometry& g);

/// Text dump, one line `panel_id chart t0 t1 length` per panel.
void write_mesh(std::ostream& out, const Mesh& m);

}  // namespace calderon
