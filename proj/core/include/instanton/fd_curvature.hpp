#pragma once

#include <functional>
#include <vector>

namespace instanton {

// Row-major components of a metric on (u, v, t_1, ..., t_{n-2}) that depend on
// (u, v) only. Used for torus-invariant 3- and 4-metrics.
using MetricComponents = std::function<std::vector<double>(double u, double v)>;

struct FdCurvature {
  int dim = 0;
  double scalar = 0.0;
  std::vector<double> ricci;       // lower indices, row-major
  double ricci_tensor_norm_sq = 0.0;  // Ric_ab Ric^ab
  double riemann_norm_sq = 0.0;       // Rm_abcd Rm^abcd
};

// Christoffel symbols, Riemann and Ricci tensors from fourth-order central
// differences of the metric components in (u, v).
FdCurvature fd_curvature(int dim, const MetricComponents& metric, double u, double v, double step);

}  // namespace instanton
