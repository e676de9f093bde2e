#pragma once

#include <array>

#include "instanton/family.hpp"

namespace instanton {

// (G^-1)_ij = <X_i, X_j>, the Killing-field block of the 4-metric.
struct FiberMatrix {
  double g11;
  double g12;
  double g22;

  double det() const noexcept { return g11 * g22 - g12 * g12; }
  double quadratic_form(double w1, double w2) const noexcept {
    return g11 * w1 * w1 + 2.0 * g12 * w1 * w2 + g22 * w2 * w2;
  }
  // Ascending.
  std::array<double, 2> eigenvalues() const noexcept;
};

struct Metric4Block {
  double conformal_factor;
  FiberMatrix fiber;
};

double conformal_factor(const InstantonParams& params, double u, double v);
FiberMatrix fiber_matrix(const InstantonParams& params, double u, double v);
Metric4Block metric_block(const InstantonParams& params, double u, double v);

// 4-volume density per du dv dtheta1 dtheta2.
double volume_density(const InstantonParams& params, double u, double v);

struct CollapsingNorms {
  double collapsed_norm_sq;
  double complement_norm_sq;
};

// Norms of w = (1-k, -(1+k)) and w_perp = (1+k, 1-k) under the fiber matrix.
CollapsingNorms collapsing_direction_norms(const InstantonParams& params, double u, double v);

}  // namespace instanton
