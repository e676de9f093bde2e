#include "instanton/metrics.hpp"

#include <cmath>
#include <numbers>

#include "instanton/error.hpp"

namespace instanton {

std::array<double, 2> FiberMatrix::eigenvalues() const noexcept {
  const double mean = 0.5 * (g11 + g22);
  const double radius = std::hypot(0.5 * (g11 - g22), g12);
  return {mean - radius, mean + radius};
}

double conformal_factor(const InstantonParams& params, double u, double v) {
  const SeparatedProfile p = separated_profile(params);
  return p.c * (1.0 + p.a * p.a * u * u + p.b * p.b * v * v);
}

FiberMatrix fiber_matrix(const InstantonParams& params, double u, double v) {
  const double u2 = u * u;
  const double v2 = v * v;
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double scale = std::numbers::sqrt2 / params.M();
      const double D = 1.0 + (1.0 + k) * u2 + (1.0 - k) * v2;
      const double p = 1.0 + (1.0 + k) * u2;
      const double q = 1.0 + (1.0 - k) * v2;
      return {scale * v2 * (p * p + (1.0 + k) * (1.0 + k) * u2 * v2) / D,
              scale * u2 * v2 * (2.0 + (1.0 - k * k) * (u2 + v2)) / D,
              scale * u2 * (q * q + (1.0 - k) * (1.0 - k) * u2 * v2) / D};
    }
    case Family::ExceptionalTN: {
      const double w = 1.0 + u2;
      return {0.5 * v2 * (w * w + u2 * v2) / w, 0.5 * u2 * v2 / w, 0.5 * u2 / w};
    }
    case Family::ExceptionalHalfPlane: {
      const double w = 1.0 + u2;
      return {u2 / w, 2.0 * u2 * v / w, (w * w + 4.0 * u2 * v2) / w};
    }
    case Family::Flat:
      return {u2, 0.0, 1.0};
  }
  return {0.0, 0.0, 0.0};
}

Metric4Block metric_block(const InstantonParams& params, double u, double v) {
  return {conformal_factor(params, u, v), fiber_matrix(params, u, v)};
}

double volume_density(const InstantonParams& params, double u, double v) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double M = params.M();
      return 4.0 / (M * M) * (1.0 + (1.0 + k) * u * u + (1.0 - k) * v * v) * u * v;
    }
    case Family::ExceptionalTN:
      return 0.5 * u * v * (1.0 + u * u);
    case Family::ExceptionalHalfPlane:
      return u * (1.0 + u * u);
    case Family::Flat:
      return u;
  }
  return 0.0;
}

CollapsingNorms collapsing_direction_norms(const InstantonParams& params, double u, double v) {
  if (!params.is_generalized()) {
    throw Error(ErrorCode::WrongFamily, "collapsing directions are defined for the generalized family");
  }
  const double k = params.k();
  const FiberMatrix G = fiber_matrix(params, u, v);
  // Expanded form of G(w, w); the quadratic form cancels catastrophically for large (u, v).
  const double a2u2 = (1.0 + k) * (1.0 + k) * u * u;
  const double b2v2 = (1.0 - k) * (1.0 - k) * v * v;
  const double D = 1.0 + (1.0 + k) * u * u + (1.0 - k) * v * v;
  const double collapsed = std::numbers::sqrt2 / params.M() * (a2u2 + b2v2) / D;
  return {collapsed, G.quadratic_form(1.0 + k, 1.0 - k)};
}

}  // namespace instanton
