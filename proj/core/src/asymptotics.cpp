#include "instanton/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "instanton/error.hpp"
#include "instanton/geodesics.hpp"
#include "instanton/metrics.hpp"
#include "instanton/parallel.hpp"

namespace instanton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

void require_taub_nut(const InstantonParams& params) {
  if (params.family() != Family::GeneralizedTN && params.family() != Family::ExceptionalTN) {
    throw Error(ErrorCode::WrongFamily, "almost-balls are defined for the Taub-NUT families");
  }
}

std::vector<double> eta_grid(int count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "eta grid needs at least 2 points");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = 0.5 * kPi * i / (count - 1);
  grid.back() = 0.5 * kPi;
  return grid;
}

struct RatioSample {
  double R_tilde;
  double R;
};

std::vector<RatioSample> sphere_ratios(const InstantonParams& params, double R, int eta_samples,
                                       const Tolerance& tol) {
  const std::vector<double> grid = eta_grid(eta_samples);
  return parallel_map<RatioSample>(grid.size(), [&](std::size_t i) {
    const GeodesicRecord rec = point_from_polar(params, R, grid[i], tol);
    return RatioSample{almost_distance(params, rec.u, rec.v), R};
  });
}

}  // namespace

double almost_ball_volume(const InstantonParams& params, double R) {
  require_taub_nut(params);
  if (!(R >= 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be nonnegative");
  if (params.family() == Family::ExceptionalTN) return kPi * kPi / 6.0 * (R * R * R * R + 2.0 * R * R * R);
  const double M = params.M();
  const double k = params.k();
  const double a = std::sqrt(1.0 + k);
  const double b = std::sqrt(1.0 - k);
  const double lead = 2.0 * std::numbers::sqrt2 * kPi * kPi / (M * a * b);
  return lead * (R * R + (a + b) * std::sqrt(std::numbers::sqrt2 * M) * R * R * R / 3.0);
}

QuadratureResult almost_ball_volume_quadrature(const InstantonParams& params, double R, const Tolerance& tol) {
  require_taub_nut(params);
  if (!(R >= 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be nonnegative");
  // Integrate over (rho, psi) in [0, R] x [0, pi/2] with a parametrization of the
  // almost-ball that is smooth up to its boundary.
  std::function<double(double, double)> f;
  if (params.family() == Family::ExceptionalTN) {
    // u = sqrt(2 rho) cos psi, v = rho sin^2 psi; Jacobian sqrt(2 rho) sin psi.
    f = [&](double rho, double psi) {
      const double root = std::sqrt(2.0 * rho);
      const double s = std::sin(psi);
      return volume_density(params, root * std::cos(psi), rho * s * s) * root * s;
    };
  } else {
    const double scale = std::numbers::sqrt2 * params.M();
    const double alpha = std::pow(scale / (1.0 + params.k()), 0.25);
    const double beta = std::pow(scale / (1.0 - params.k()), 0.25);
    // u = alpha sqrt(rho) cos psi, v = beta sqrt(rho) sin psi; Jacobian alpha beta / 2.
    f = [&, alpha, beta](double rho, double psi) {
      const double root = std::sqrt(rho);
      return volume_density(params, alpha * root * std::cos(psi), beta * root * std::sin(psi)) * 0.5 * alpha * beta;
    };
  }
  QuadratureResult q = integrate_2d_region(
      f, 0.0, R, [](double) { return 0.0; }, [](double) { return 0.5 * kPi; }, tol);
  q.value *= kFourPiSq;
  q.error_estimate *= kFourPiSq;
  return q;
}

double almost_distance_epsilon(const InstantonParams& params, double R, int eta_samples, const Tolerance& tol) {
  require_taub_nut(params);
  double eps = 0.0;
  for (const RatioSample& s : sphere_ratios(params, R, eta_samples, tol)) {
    eps = std::max(eps, std::max(s.R_tilde / s.R, s.R / s.R_tilde) - 1.0);
  }
  return eps;
}

VolumeBracket ball_volume_bracket(const InstantonParams& params, double R, const Tolerance& tol) {
  require_taub_nut(params);
  if (!(R >= 10.0)) throw Error(ErrorCode::SmallRadius, "the bracket needs R >= 10", R);
  const double eps = almost_distance_epsilon(params, R, 33, tol);
  return {almost_ball_volume(params, R / (1.0 + eps)), almost_ball_volume(params, R * (1.0 + eps)), eps};
}

PowerLawFit volume_growth_exponent(const InstantonParams& params, std::span<const double> radii) {
  if (radii.size() < 4) throw Error(ErrorCode::InsufficientSamples, "need at least 4 radii");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(radii.size());
  for (double R : radii) samples.emplace_back(R, almost_ball_volume(params, R));
  return fit_power_law(samples);
}

std::vector<AlmostSphereSample> almost_sphere_samples(const InstantonParams& params, double R_tilde, int count,
                                                      const Tolerance& tol) {
  require_taub_nut(params);
  if (!(R_tilde > 0.0)) throw Error(ErrorCode::InvalidArgument, "R_tilde must be positive");
  const std::vector<double> grid = eta_grid(count);
  return parallel_map<AlmostSphereSample>(grid.size(), [&](std::size_t i) {
    const UV uv = uv_from_almost_polar(params, R_tilde, grid[i]);
    return AlmostSphereSample{grid[i], uv.u, uv.v, distance(params, uv.u, uv.v, tol)};
  });
}

double almost_distance_constant(const InstantonParams& params, double R, int eta_samples, const Tolerance& tol) {
  require_taub_nut(params);
  if (!(R > 1.0)) throw Error(ErrorCode::InvalidArgument, "R must exceed 1");
  double worst = 0.0;
  for (const RatioSample& s : sphere_ratios(params, R, eta_samples, tol)) {
    worst = std::max(worst, std::abs(s.R_tilde / s.R - 1.0));
  }
  return worst * R / std::log(R);
}

}  // namespace instanton
