#pragma once

#include "calderon/boundary_operators.hpp"
#include "calderon/geometry.hpp"
#include "calderon/gram.hpp"
#include "calderon/precond.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace calderon {

enum class RefineMode { uniform, corner };
RefineMode parse_refine_mode(std::string_view name);
std::string_view to_string(RefineMode mode);

enum class TableFormat { csv, md };
TableFormat parse_table_format(std::string_view name);

struct ExperimentConfig {
  GeometryKind geometry = GeometryKind::square;
  double scale = 0.5;
  double ellipse_ratio = 2.0;
  int degree = 1;
  int levels = 6;
  RefineMode refine = RefineMode::corner;
  int panels_per_chart = 0;  ///< 0: geometry default
  int corner_rounds = 4;     ///< marking rounds per level k
  std::vector<PrecondSpec> preconds{PrecondSpec{}};
  double alpha = 0.05;
  std::optional<double> omega_override;
  int quad_n = 12;
  InnerProductKind inner_product = InnerProductKind::exact;
  std::uint64_t seed = 0;
  std::string dump_matrices;  ///< directory, empty to skip
  std::string dump_mesh;      ///< directory, empty to skip

  /// Throws ParameterError for unsupported combinations.
  void validate() const;
};

/// Everything assembled on one mesh of the family.
struct LevelSystem {
  int level = 0;
  FeSpace space;
  BoundaryOperators ops;
  SymMatrix mass;
  DiagMatrix lumped;
};

Geometry make_geometry(const ExperimentConfig& cfg);
Mesh level_mesh(const ExperimentConfig& cfg, const Geometry& g, int level);
LevelSystem build_level(const ExperimentConfig& cfg, const Geometry& g, int level);
double richardson_omega(const ExperimentConfig& cfg);
Precond build_precond(const PrecondSpec& spec, const LevelSystem& sys, double omega);

struct ReportRow {
  int level = 0;
  double h_min = 0.0;
  double h_max = 0.0;
  int dofs = 0;
  std::vector<double> kappa;
};

struct Report {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;
};

/// Called after each level with the finished row.
using RowCallback = std::function<void(const ReportRow&)>;

/// Levels 1..K in order. Errors are rethrown with the level prepended.
Report run_experiment(const ExperimentConfig& cfg, const RowCallback& on_row = {});

/// CSV: header level,h_min,h_max,dofs,<names>, values %.3e. md: pipe table.
void emit_table(std::ostream& out, const Report& report, TableFormat format);
void emit_table(std::ostream& out, const std::vector<std::string>& columns, const std::vector<ReportRow>& rows,
                TableFormat format);

}  // namespace calderon
