#pragma once

#include "calderon/fespace.hpp"
#include "calderon/matrix.hpp"

#include <memory>

namespace calderon {

struct QuadratureConfig {
  int base_n = 12;        ///< Gauss points per direction (--quad-n)
  bool check_spd = true;  ///< verify positive definiteness by Cholesky
};

/// Weight of the rank-one term alpha <u,1><v,1> added to the hypersingular
/// form.
class StabilizationWeight {
 public:
  explicit StabilizationWeight(double alpha = 0.05);
  [[nodiscard]] double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Element blocks of one (test panel, trial panel) pair.
struct PanelPairBlock {
  Eigen::MatrixXd single_layer;   ///< int int G(x,y) phi_a(x) phi_b(y) ds ds
  Eigen::MatrixXd hypersingular;  ///< int int G(x,y) d_s phi_a(x) d_s phi_b(y) ds ds
};

/// Laplace fundamental solution G(x, y) = -log|x - y| / (2 pi) on the
/// panels of a space.
class PanelPairIntegrator {
 public:
  PanelPairIntegrator(const FeSpace& space, const QuadratureConfig& config);
  ~PanelPairIntegrator();
  PanelPairIntegrator(const PanelPairIntegrator&) = delete;
  PanelPairIntegrator& operator=(const PanelPairIntegrator&) = delete;

  [[nodiscard]] PanelPairBlock block(int test_panel, int trial_panel) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct BoundaryOperators {
  SymMatrix single_layer;
  SymMatrix hypersingular;            ///< stabilized: includes alpha m m^T
  SymMatrix hypersingular_unstabilized;
};

/// Assembles both Galerkin matrices from one sweep over panel pairs.
BoundaryOperators assemble_operators(const FeSpace& s, const QuadratureConfig& q, StabilizationWeight alpha);

/// A[v, v'] = int int G(x, y) phi_v(y) phi_v'(x) ds(y) ds(x).
SymMatrix assemble_single_layer(const FeSpace& s, const QuadratureConfig& q);

/// B = V(d_s u)(d_s v) + alpha m m^T with m[v] = <phi_v, 1>.
SymMatrix assemble_hypersingular(const FeSpace& s, const QuadratureConfig& q, StabilizationWeight alpha);

}  // namespace calderon
