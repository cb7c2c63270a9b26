#include "calderon/experiment.hpp"

#include "calderon/errors.hpp"
#include "calderon/mesh.hpp"
#include "calderon/spectral.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace calderon {

namespace {

std::string level_prefix(int level) { return "level " + std::to_string(level) + ": "; }

// Rethrows the active exception with the level prepended, keeping its type.
[[noreturn]] void rethrow_at_level(int level) {
  const std::string at = level_prefix(level);
  try {
    throw;
  } catch (const DomainError& e) {
    throw DomainError(at + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(at + e.what());
  } catch (const CoercivityError& e) {
    throw CoercivityError(at + e.what());
  } catch (const FactorizationError& e) {
    throw FactorizationError(at + e.what());
  } catch (const DivergenceError& e) {
    throw DivergenceError(at + e.what());
  } catch (const EnrichmentError& e) {
    throw EnrichmentError(at + e.what());
  } catch (const Error& e) {
    throw Error(at + e.what());
  }
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void dump_level(const ExperimentConfig& cfg, const LevelSystem& sys) {
  namespace fs = std::filesystem;
  const std::string tag = "level" + std::to_string(sys.level);
  if (!cfg.dump_matrices.empty()) {
    fs::create_directories(cfg.dump_matrices);
    const fs::path dir(cfg.dump_matrices);
    write_dense((dir / (tag + "_A.txt")).string(), sys.ops.single_layer.dense());
    write_dense((dir / (tag + "_B.txt")).string(), sys.ops.hypersingular.dense());
    write_dense((dir / (tag + "_M.txt")).string(), sys.mass.dense());
    write_diagonal((dir / (tag + "_D.txt")).string(), sys.lumped);
  }
  if (!cfg.dump_mesh.empty()) {
    fs::create_directories(cfg.dump_mesh);
    const fs::path path = fs::path(cfg.dump_mesh) / (tag + "_mesh.txt");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_mesh(out, sys.space.mesh());
  }
}

}  // namespace

RefineMode parse_refine_mode(std::string_view name) {
  if (name == "uniform") return RefineMode::uniform;
  if (name == "corner") return RefineMode::corner;
  throw ParameterError("unknown refinement mode '" + std::string(name) + "'");
}

std::string_view to_string(RefineMode mode) { return mode == RefineMode::uniform ? "uniform" : "corner"; }

TableFormat parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "md") return TableFormat::md;
  throw ParameterError("unknown table format '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (!(scale > 0.0)) throw ParameterError("scale must be positive");
  if (!(ellipse_ratio >= 1.0)) throw ParameterError("ellipse ratio must be at least 1");
  if (degree < 1 || degree > 6) throw ParameterError("degree must be in 1..6");
  if (levels < 1 || levels > 12) throw ParameterError("levels must be in 1..12");
  if (panels_per_chart < 0) throw ParameterError("panels per chart must be non-negative");
  if (corner_rounds < 0) throw ParameterError("corner rounds must be non-negative");
  if (preconds.empty()) throw ParameterError("no preconditioner requested");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (omega_override && !(*omega_override > 0.0)) throw ParameterError("omega must be positive");
  if (quad_n < 4 || quad_n > 64) throw ParameterError("quadrature order must be in 4..64");
}

Geometry make_geometry(const ExperimentConfig& cfg) {
  return make_geometry(cfg.geometry, cfg.scale, cfg.ellipse_ratio);
}

Mesh level_mesh(const ExperimentConfig& cfg, const Geometry& g, int level) {
  if (cfg.refine == RefineMode::uniform) return uniform_schedule(g, level, cfg.panels_per_chart);
  return corner_schedule(g, level, CornerSchedule{cfg.panels_per_chart, cfg.corner_rounds});
}

LevelSystem build_level(const ExperimentConfig& cfg, const Geometry& g, int level) {
  try {
    FeSpace space = build_space(level_mesh(cfg, g, level), cfg.degree);
    BoundaryOperators ops = assemble_operators(space, QuadratureConfig{cfg.quad_n, true}, StabilizationWeight(cfg.alpha));
    SymMatrix mass = mass_matrix(space, cfg.inner_product);
    DiagMatrix lumped = lumped_from_mass(mass);
    return {level, std::move(space), std::move(ops), std::move(mass), std::move(lumped)};
  } catch (const Error&) {
    rethrow_at_level(level);
  }
}

double richardson_omega(const ExperimentConfig& cfg) {
  return cfg.omega_override ? *cfg.omega_override : richardson_weight(1, cfg.degree).omega;
}

Precond build_precond(const PrecondSpec& spec, const LevelSystem& sys, double omega) {
  const SymMatrix& b = sys.ops.hypersingular;
  switch (spec.kind) {
    case PrecondKind::lumped: return lumped_precond(b, sys.lumped);
    case PrecondKind::mass: return mass_precond(b, sys.mass);
    case PrecondKind::richardson: return richardson_precond(b, sys.mass, sys.lumped, spec.iterations, omega);
    case PrecondKind::jacobi: return jacobi_precond(b, sys.mass);
  }
  throw ParameterError("unknown preconditioner kind");
}

Report run_experiment(const ExperimentConfig& cfg, const RowCallback& on_row) {
  cfg.validate();
  Report report{cfg, {}, {}};
  for (const PrecondSpec& p : cfg.preconds) report.columns.push_back(p.name());
  const Geometry g = make_geometry(cfg);
  const double omega = richardson_omega(cfg);
  for (int level = 1; level <= cfg.levels; ++level) {
    const LevelSystem sys = build_level(cfg, g, level);
    try {
      dump_level(cfg, sys);
      const ConditionEvaluator eval(sys.ops.single_layer);
      ReportRow row{level, sys.space.mesh().h_min(), sys.space.mesh().h_max(), sys.space.dofs(), {}};
      for (const PrecondSpec& p : cfg.preconds) row.kappa.push_back(kappa(build_precond(p, sys, omega), eval));
      if (on_row) on_row(row);
      report.rows.push_back(std::move(row));
    } catch (const Error&) {
      rethrow_at_level(level);
    }
  }
  return report;
}

void emit_table(std::ostream& out, const std::vector<std::string>& columns, const std::vector<ReportRow>& rows,
                TableFormat format) {
  if (format == TableFormat::csv) {
    out << "level,h_min,h_max,dofs";
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    for (const ReportRow& r : rows) {
      out << r.level << ',' << sci(r.h_min) << ',' << sci(r.h_max) << ',' << r.dofs;
      for (double k : r.kappa) out << ',' << sci(k);
      out << '\n';
    }
    return;
  }
  out << "| level | h_min | h_max | dofs |";
  for (const auto& c : columns) out << ' ' << c << " |";
  out << "\n|---:|---:|---:|---:|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---:|";
  out << '\n';
  for (const ReportRow& r : rows) {
    out << "| " << r.level << " | " << sci(r.h_min) << " | " << sci(r.h_max) << " | " << r.dofs << " |";
    for (double k : r.kappa) out << ' ' << sci(k) << " |";
    out << '\n';
  }
}

void emit_table(std::ostream& out, const Report& report, TableFormat format) {
  if (format == TableFormat::md) {
    const ExperimentConfig& c = report.config;
    out << "Spectral condition numbers kappa_S(G A), s = 1/2, " << to_string(c.geometry) << ", degree "
        << c.degree << ", " << to_string(c.refine) << " refinement, " << to_string(c.inner_product)
        << " inner product\n\n";
  }
  emit_table(out, report.columns, report.rows, format);
}

}  // namespace calderon
