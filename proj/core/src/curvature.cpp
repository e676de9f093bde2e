#include "instanton/curvature.hpp"

#include <cmath>
#include <numbers>

#include "instanton/error.hpp"
#include "instanton/fd_curvature.hpp"
#include "instanton/geodesics.hpp"
#include "instanton/metrics.hpp"
#include "instanton/parallel.hpp"

namespace instanton {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

PlanarDomain chart_domain(const InstantonParams& params) {
  if (params.uses_xy_chart()) return {0.0, std::nullopt};
  return {0.0, 0.0};
}

double gtn_denominator(double k, double u2, double v2) { return 1.0 + (1.0 + k) * u2 + (1.0 - k) * v2; }

// Partial energies over the almost-balls {u^2/2 + |v| <= R} of the exceptional families.
std::vector<std::pair<double, double>> almost_ball_energies(const InstantonParams& params, const Tolerance& tol) {
  const std::vector<double> radii{50.0, 100.0, 200.0, 400.0};
  const bool two_sided = params.uses_xy_chart();
  return parallel_map<std::pair<double, double>>(radii.size(), [&](std::size_t i) {
    const double R = radii[i];
    auto f = [&](double u, double v) { return kFourPiSq * ricci_pseudo_volume_density(params, u, v); };
    auto upper = [R](double u) { return std::max(0.0, R - 0.5 * u * u); };
    auto lower = [&](double u) { return two_sided ? -upper(u) : 0.0; };
    const QuadratureResult q = integrate_2d_region(f, 0.0, std::sqrt(2.0 * R), lower, upper, tol);
    return std::pair{R, q.value};
  });
}

}  // namespace

double polytope_curvature(const InstantonParams& params, double u, double v) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const XY xy = uv_to_xy(params, u, v);
      const double r = std::hypot(xy.x, xy.y);
      const double M = params.M();
      const double k = params.k();
      const double den = 1.0 + kSqrt2 * M * (r + k * xy.y);
      return M / kSqrt2 * (-1.0 + kSqrt2 * M * k * (k * r + xy.y)) / (den * den * den);
    }
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane: {
      const double w = 1.0 + u * u;
      return -(1.0 - u * u) / (w * w * w);
    }
    case Family::Flat:
      return 0.0;
  }
  return 0.0;
}

double polytope_curvature(const InstantonParams& params, const ChartPoint& point) {
  const ChartPoint uv = convert(params, point, Chart::UV);
  return polytope_curvature(params, uv.c1, uv.c2);
}

double polytope_curvature_fd(const InstantonParams& params, double u, double v, double step) {
  auto log_lambda = [&](double a, double b) { return std::log(conformal_factor(params, a, b)); };
  return -fd_laplacian(log_lambda, u, v, step, chart_domain(params)) / (2.0 * conformal_factor(params, u, v));
}

RicciPotentials ricci_potentials(const InstantonParams& params, double u, double v) {
  const double u2 = u * u;
  const double v2 = v * v;
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double D = gtn_denominator(k, u2, v2);
      return {(1.0 + (1.0 + k) * (u2 + v2)) / (kSqrt2 * D), (1.0 + (1.0 - k) * (u2 + v2)) / (kSqrt2 * D)};
    }
    case Family::ExceptionalTN:
      return {(1.0 + u2 + v2) / (kSqrt2 * (1.0 + u2)), 1.0 / (kSqrt2 * (1.0 + u2))};
    case Family::ExceptionalHalfPlane:
      return {1.0 / (1.0 + u2), 2.0 * v / (1.0 + u2)};
    case Family::Flat:
      return {1.0, 0.0};
  }
  return {0.0, 0.0};
}

double ricci_pseudo_volume_density(const InstantonParams& params, double u, double v) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double D = gtn_denominator(k, u * u, v * v);
      return 8.0 * k * k * u * v / (D * D * D);
    }
    case Family::ExceptionalTN: {
      const double w = 1.0 + u * u;
      return 2.0 * u * v / (w * w * w);
    }
    case Family::ExceptionalHalfPlane: {
      const double w = 1.0 + u * u;
      return 4.0 * u / (w * w * w);
    }
    case Family::Flat:
      return 0.0;
  }
  return 0.0;
}

double ricci_pseudo_volume_density_fd(const InstantonParams& params, double u, double v, double step) {
  const PlanarDomain domain = chart_domain(params);
  const Gradient2 g1 = fd_gradient([&](double a, double b) { return ricci_potentials(params, a, b).r1; }, u, v,
                                   step, domain);
  const Gradient2 g2 = fd_gradient([&](double a, double b) { return ricci_potentials(params, a, b).r2; }, u, v,
                                   step, domain);
  return -chart_orientation(params) * (g1.dx * g2.dy - g1.dy * g2.dx);
}

double ricci_norm(const InstantonParams& params, double u, double v) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double D = gtn_denominator(params.k(), u * u, v * v);
      return kSqrt2 * std::abs(params.k()) * params.M() / (D * D);
    }
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane: {
      const double w = 1.0 + u * u;
      return 2.0 / (w * w);
    }
    case Family::Flat:
      return 0.0;
  }
  return 0.0;
}

EnergyReport l2_ricci(const InstantonParams& params, const Tolerance& tol) {
  tol.validate();
  EnergyReport report;
  switch (params.family()) {
    case Family::GeneralizedTN:
    case Family::Flat: {
      const double k = params.k();
      const double closed = kFourPiSq * k * k / (1.0 - k * k);
      // 8 k^2 uv / D^3 <= 4 k^2 / ((1 - |k|)^3 (1 + u^2 + v^2)^2)
      const double c = 1.0 - std::abs(k);
      const PowerLawMajorant majorant{kFourPiSq * 4.0 * k * k / (c * c * c), 2.0};
      auto f = [&](double u, double v) { return kFourPiSq * ricci_pseudo_volume_density(params, u, v); };
      report.closed_form = closed;
      report.quadrature = integrate_2d_improper(f, majorant, tol);
      const double err = std::abs(report.quadrature.value - closed);
      report.rel_error = closed > 0.0 ? err / closed : err;
      return report;
    }
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane: {
      report.growth_samples = almost_ball_energies(params, tol);
      report.quadrature.value = report.growth_samples.back().second;
      report.growth_exponent = fit_power_law(report.growth_samples).exponent;
      return report;
    }
  }
  return report;
}

std::optional<double> l2_riemann(const InstantonParams& params) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double pi2 = std::numbers::pi * std::numbers::pi;
      return 32.0 * pi2 + 4.0 * (4.0 * pi2 * k * k / (1.0 - k * k));
    }
    case Family::Flat:
      return 0.0;
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane:
      return std::nullopt;
  }
  return std::nullopt;
}

Curvature4Sample curvature4_fd(const InstantonParams& params, double u, double v, std::optional<double> step) {
  const double h = step.value_or(2e-3 * (1.0 + std::hypot(u, v)));
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (!(u > 2.0 * h) || (!params.uses_xy_chart() && !(v > 2.0 * h))) {
    throw Error(ErrorCode::BoundaryTooClose, "curvature4_fd needs the stencil inside the open chart");
  }
  auto metric = [&](double a, double b) {
    const Metric4Block m = metric_block(params, a, b);
    const double l = m.conformal_factor;
    const FiberMatrix& f = m.fiber;
    return std::vector<double>{l, 0, 0, 0, 0, l, 0, 0, 0, 0, f.g11, f.g12, 0, 0, f.g12, f.g22};
  };
  const FdCurvature c = fd_curvature(4, metric, u, v, h);
  return {c.scalar, kRicciNormCalibration * std::sqrt(std::max(0.0, c.ricci_tensor_norm_sq)), c.riemann_norm_sq,
          {params.uses_xy_chart() ? Chart::XY : Chart::UV, u, v}};
}

std::string_view to_string(DecayQuantity quantity) noexcept {
  switch (quantity) {
    case DecayQuantity::KSigma: return "K_sigma";
    case DecayQuantity::Ric: return "Ric";
    case DecayQuantity::RmFd: return "Rm_fd";
  }
  return "?";
}

DecayQuantity parse_decay_quantity(std::string_view name) {
  if (name == "K_sigma" || name == "k_sigma" || name == "K") return DecayQuantity::KSigma;
  if (name == "Ric" || name == "ric") return DecayQuantity::Ric;
  if (name == "Rm_fd" || name == "rm_fd" || name == "Rm") return DecayQuantity::RmFd;
  throw Error(ErrorCode::InvalidArgument, "unknown decay quantity: " + std::string(name));
}

PowerLawFit decay_rate_along_geodesic(const InstantonParams& params, double eta, DecayQuantity quantity,
                                      std::span<const double> R_samples, const Tolerance& tol) {
  if (R_samples.size() < 4) throw Error(ErrorCode::InsufficientSamples, "need at least 4 radii");
  const auto samples = parallel_map<std::pair<double, double>>(R_samples.size(), [&](std::size_t i) {
    const double R = R_samples[i];
    const GeodesicRecord rec = point_from_polar(params, R, eta, tol);
    double value = 0.0;
    switch (quantity) {
      case DecayQuantity::KSigma: value = std::abs(polytope_curvature(params, rec.u, rec.v)); break;
      case DecayQuantity::Ric: value = ricci_norm(params, rec.u, rec.v); break;
      case DecayQuantity::RmFd: value = std::sqrt(std::abs(curvature4_fd(params, rec.u, rec.v).rm_norm_sq)); break;
    }
    return std::pair{R, value};
  });
  return fit_power_law(samples);
}

}  // namespace instanton
