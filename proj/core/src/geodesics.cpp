#include "instanton/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "instanton/error.hpp"
#include "instanton/metrics.hpp"

namespace instanton {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Angle {
  double c;
  double s;
};

// pi/2 in double precision has cos ~ 6e-17, which long exceptional geodesics
// amplify by e^R; snap the representable endpoints to the exact axis.
Angle angle_of(double eta) {
  if (std::abs(std::abs(eta) - kHalfPi) <= 4.0 * kEps) return {0.0, eta > 0.0 ? 1.0 : -1.0};
  if (eta == 0.0) return {1.0, 0.0};
  return {std::cos(eta), std::sin(eta)};
}

void check_eta(const InstantonParams& params, double eta) {
  const double lo = params.uses_xy_chart() ? -kHalfPi : 0.0;
  if (!(eta >= lo - 4.0 * kEps && eta <= kHalfPi + 4.0 * kEps)) {
    throw Error(ErrorCode::InvalidArgument, "eta out of range");
  }
}

void check_point(const InstantonParams& params, double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v) || u < 0.0 || (!params.uses_xy_chart() && v < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "point outside the chart domain");
  }
}

double sinhc(double a, double s) {
  const double x = a * s;
  if (std::abs(x) < 1e-4) return s * (1.0 + x * x / 6.0 * (1.0 + x * x / 20.0));
  return std::sinh(x) / a;
}

double asinhc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0 + 0.075 * z * z * z * z;
  return std::asinh(z) / z;
}

// Integral of cosh^2(a t) over [0, s].
double cosh2_integral(double a, double s) { return 0.5 * s + 0.5 * sinhc(2.0 * a, s); }

// sign(alpha) * integral of sqrt(alpha^2 + beta^2 t^2) over [0, s].
double separated_term(double alpha, double beta, double s) {
  const double m = std::abs(alpha);
  const double value = m == 0.0 ? 0.5 * beta * s * std::abs(s)
                                : 0.5 * s * std::sqrt(m * m + beta * beta * s * s) + 0.5 * m * s * asinhc(beta * s / m);
  return alpha < 0.0 ? -value : value;
}

double S_of(const SeparatedProfile& p, Angle ang, double u, double v) {
  return std::sqrt(p.c) * (separated_term(ang.c, p.a, u) + separated_term(ang.s, p.b, v));
}

double radius_at(const SeparatedProfile& p, Angle ang, double s) {
  double total = 0.0;
  if (ang.c != 0.0) total += ang.c * ang.c * cosh2_integral(p.a, s);
  if (ang.s != 0.0) total += ang.s * ang.s * cosh2_integral(p.b, s);
  return std::sqrt(p.c) * total;
}

double radius_slope(const SeparatedProfile& p, Angle ang, double s) {
  double total = 0.0;
  if (ang.c != 0.0) total += ang.c * ang.c * std::pow(std::cosh(p.a * s), 2);
  if (ang.s != 0.0) total += ang.s * ang.s * std::pow(std::cosh(p.b * s), 2);
  return std::sqrt(p.c) * total;
}

UV curve_at(const SeparatedProfile& p, Angle ang, double s) {
  return {ang.c == 0.0 ? 0.0 : ang.c * sinhc(p.a, s), ang.s == 0.0 ? 0.0 : ang.s * sinhc(p.b, s)};
}

struct Inversion {
  double log_F;
  Angle angle;
};

// The geodesic through (u, v) has parameter s with
// (u / sinhc(a, s))^2 + (v / sinhc(b, s))^2 = 1, strictly decreasing in s.
Inversion invert(const SeparatedProfile& p, double u, double v) {
  const double r = std::hypot(u, v);
  if (r == 0.0) return {0.0, {1.0, 0.0}};
  const double m = std::max(p.a, p.b);
  const double lo = m > 0.0 ? r * asinhc(m * r) : r;
  const double hi = r;
  double s = hi;
  if (hi - lo > 4.0 * kEps * hi) {
    auto h = [&](double t) {
      const double cu = u / sinhc(p.a, t);
      const double sv = v / sinhc(p.b, t);
      return cu * cu + sv * sv - 1.0;
    };
    // On an axis the root sits on a bracket end and rounding may flip its sign.
    if (h(lo) <= 0.0) {
      s = lo;
    } else if (h(hi) < 0.0) {
      s = find_root_monotone(h, lo, hi, {1e-16, 2.0 * kEps, 400});
    }
  }
  double c = u / sinhc(p.a, s);
  double sn = v / sinhc(p.b, s);
  const double n = std::hypot(c, sn);
  c /= n;
  sn /= n;
  if (u == 0.0) c = 0.0;
  if (v == 0.0) sn = 0.0;
  return {s, {c, sn}};
}

double angle_to_eta(Angle ang) { return std::atan2(ang.s, ang.c); }

double v_of_u(const SeparatedProfile& p, Angle ang, double u) {
  const double q = u / ang.c;
  const double s = q * asinhc(p.a * q);
  return ang.s * sinhc(p.b, s);
}

double geodesic_residual_at(const SeparatedProfile& p, Angle ang, double u, double v) {
  if (ang.c == 0.0) return std::abs(u);
  if (ang.s == 0.0) return std::abs(v);
  return std::abs(v - v_of_u(p, ang, u)) / std::max(1.0, std::abs(v));
}

PlanarDomain chart_domain(const InstantonParams& params) {
  if (params.uses_xy_chart()) return {0.0, std::nullopt};
  return {0.0, 0.0};
}

Tolerance solver_tolerance(const Tolerance& tol, double scale) {
  return {std::max(4.0 * kEps * scale, std::numeric_limits<double>::min()), 4.0 * kEps,
          std::max(tol.max_iter, 400)};
}

}  // namespace

double eikonal_S(const InstantonParams& params, double eta, double u, double v) {
  check_eta(params, eta);
  return S_of(separated_profile(params), angle_of(eta), u, v);
}

Gradient2 eikonal_gradient(const InstantonParams& params, double eta, double u, double v) {
  check_eta(params, eta);
  const SeparatedProfile p = separated_profile(params);
  const Angle ang = angle_of(eta);
  const double root = std::sqrt(p.c);
  const double su = root * std::sqrt(ang.c * ang.c + p.a * p.a * u * u);
  const double sv = root * std::sqrt(ang.s * ang.s + p.b * p.b * v * v);
  return {su, ang.s < 0.0 ? -sv : sv};
}

double eikonal_residual(const InstantonParams& params, double eta, double u, double v, double step) {
  check_eta(params, eta);
  auto S = [&](double uu, double vv) { return eikonal_S(params, eta, uu, vv); };
  const Gradient2 g = fd_gradient(S, u, v, step, chart_domain(params));
  return std::abs((g.dx * g.dx + g.dy * g.dy) / conformal_factor(params, u, v) - 1.0);
}

double unparam_geodesic_v_of_u(const InstantonParams& params, double eta, double u) {
  check_eta(params, eta);
  if (u < 0.0) throw Error(ErrorCode::InvalidArgument, "u must be nonnegative");
  const Angle ang = angle_of(eta);
  if (ang.s == 0.0) return 0.0;
  if (ang.c == 0.0) throw Error(ErrorCode::ChartAxis, "the eta = pi/2 geodesic is the axis u = 0");
  return v_of_u(separated_profile(params), ang, u);
}

double solve_eta(const InstantonParams& params, double u, double v, const Tolerance& tol) {
  tol.validate();
  check_point(params, u, v);
  if (u == 0.0) throw Error(ErrorCode::AxisPoint, "point on the axis u = 0", v < 0.0 ? -kHalfPi : kHalfPi);
  if (v == 0.0) throw Error(ErrorCode::AxisPoint, "point on the axis v = 0", 0.0);
  return angle_to_eta(invert(separated_profile(params), u, v).angle);
}

double radius_from_log_F(const InstantonParams& params, double log_F, double eta) {
  check_eta(params, eta);
  return radius_at(separated_profile(params), angle_of(eta), log_F);
}

double radius_from_F(const InstantonParams& params, double F, double eta) {
  if (!(F >= 1.0)) throw Error(ErrorCode::InvalidArgument, "F must be at least 1");
  return radius_from_log_F(params, std::log(F), eta);
}

double solve_log_F(const InstantonParams& params, double R, double eta, const Tolerance& tol) {
  tol.validate();
  check_eta(params, eta);
  if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be finite and nonnegative");
  if (R == 0.0) return 0.0;
  const SeparatedProfile p = separated_profile(params);
  const Angle ang = angle_of(eta);
  // cosh^2 >= 1 gives radius(s) >= sqrt(c) s, so [0, R / sqrt(c)] brackets the root.
  const double hi = R / std::sqrt(p.c);
  std::optional<double> start;
  if (params.is_generalized()) {
    const double guess = std::log(approx_F(params, R, eta).value);
    if (guess > 0.0 && guess < hi) start = guess;
  }
  auto f = [&](double s) -> ValueAndSlope { return {radius_at(p, ang, s) - R, radius_slope(p, ang, s)}; };
  return find_root_newton(f, 0.0, hi, solver_tolerance(tol, R), start);
}

double solve_F(const InstantonParams& params, double R, double eta, const Tolerance& tol) {
  return std::exp(solve_log_F(params, R, eta, tol));
}

GeodesicRecord point_from_polar(const InstantonParams& params, double R, double eta, const Tolerance& tol) {
  const double s = solve_log_F(params, R, eta, tol);
  const SeparatedProfile p = separated_profile(params);
  const Angle ang = angle_of(eta);
  const UV uv = curve_at(p, ang, s);
  GeodesicRecord rec{};
  rec.eta = eta;
  rec.R = R;
  rec.u = uv.u;
  rec.v = uv.v;
  rec.log_F = s;
  rec.F = std::exp(s);
  rec.eikonal_residual = std::abs(S_of(p, ang, uv.u, uv.v) - R) / std::max(1.0, R);
  rec.geodesic_residual = geodesic_residual_at(p, ang, uv.u, uv.v);
  return rec;
}

PolarLocation polar_from_uv(const InstantonParams& params, double u, double v, const Tolerance& tol) {
  tol.validate();
  check_point(params, u, v);
  const SeparatedProfile p = separated_profile(params);
  const Inversion inv = invert(p, u, v);
  return {S_of(p, inv.angle, u, v), angle_to_eta(inv.angle)};
}

ApproxF approx_F(const InstantonParams& params, double R, double eta) {
  if (!params.is_generalized()) throw Error(ErrorCode::WrongFamily, "approx_F is defined for the generalized family");
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  check_eta(params, eta);
  const double k = params.k();
  const double a = std::sqrt(1.0 + k);
  const double b = std::sqrt(1.0 - k);
  const double p = a / b;
  const double rho = std::sqrt(params.M() / (2.0 * std::numbers::sqrt2)) * R;
  const double lead = std::pow(rho, p - 1.0);
  const double threshold = std::asin(lead / (lead + 0.75 * 8.0 * a / std::pow(8.0 * b, p)));
  const Angle ang = angle_of(eta);
  if (eta < threshold) {
    return {std::pow(8.0 * a / (ang.c * ang.c) * rho, 1.0 / (2.0 * a)), 0, threshold};
  }
  return {std::pow(8.0 * b / (ang.s * ang.s) * rho, 1.0 / (2.0 * b)), 1, threshold};
}

double distance(const InstantonParams& params, double u, double v, const Tolerance& tol) {
  return polar_from_uv(params, u, v, tol).R;
}

double almost_distance(const InstantonParams& params, double u, double v) {
  check_point(params, u, v);
  return almost_polar_from_uv(params, u, v).R_tilde;
}

PolarMetricSample polar_metric_coefficient(const InstantonParams& params, double R, double eta,
                                           const Tolerance& tol) {
  const double s = solve_log_F(params, R, eta, tol);
  const SeparatedProfile p = separated_profile(params);
  const Angle ang = angle_of(eta);
  double X = 0.0;
  if (ang.s != 0.0) X += ang.s * ang.s * sinhc(p.a, s) * std::cosh(p.b * s);
  if (ang.c != 0.0) X += ang.c * ang.c * std::cosh(p.a * s) * sinhc(p.b, s);
  return {R, eta, p.c * X * X};
}

std::vector<ShotSample> geodesic_shoot(const InstantonParams& params, double eta, double t_end,
                                       const Tolerance& tol) {
  check_eta(params, eta);
  const SeparatedProfile p = separated_profile(params);
  const Angle ang = angle_of(eta);
  OdeField field = [&](const OdeState& y) -> OdeState {
    const Gradient2 g = eikonal_gradient(params, eta, y[0], y[1]);
    const double lambda = conformal_factor(params, y[0], y[1]);
    return {g.dx / lambda, g.dy / lambda};
  };
  const std::vector<OdeSample> path = ode_solve(field, {0.0, 0.0}, t_end, tol);
  std::vector<ShotSample> out;
  out.reserve(path.size());
  for (const OdeSample& sample : path) {
    const double u = std::max(0.0, sample.state[0]);
    const double v = params.uses_xy_chart() ? sample.state[1] : std::max(0.0, sample.state[1]);
    out.push_back({sample.t, u, v, distance(params, u, v), geodesic_residual_at(p, ang, u, v)});
  }
  return out;
}

ChartPoint convert(const InstantonParams& params, const ChartPoint& point, Chart target, const Tolerance& tol) {
  validate_chart_point(params, point);
  if (point.chart == target) return point;

  UV uv{};
  switch (point.chart) {
    case Chart::UV: uv = {point.c1, point.c2}; break;
    case Chart::XY:
      uv = params.uses_xy_chart() ? UV{point.c1, point.c2} : xy_to_uv(params, point.c1, point.c2);
      break;
    case Chart::MomentPhi: uv = uv_from_moment(params, {point.c1, point.c2}); break;
    case Chart::GeodesicPolar: {
      const GeodesicRecord rec = point_from_polar(params, point.c1, point.c2, tol);
      uv = {rec.u, rec.v};
      break;
    }
    case Chart::AlmostPolar: uv = uv_from_almost_polar(params, point.c1, point.c2); break;
  }

  switch (target) {
    case Chart::UV: return {Chart::UV, uv.u, uv.v};
    case Chart::XY: {
      if (params.uses_xy_chart()) return {Chart::XY, uv.u, uv.v};
      const XY xy = uv_to_xy(params, uv.u, uv.v);
      return {Chart::XY, xy.x, xy.y};
    }
    case Chart::MomentPhi: {
      const MomentPair m = moment_map_uv(params, uv.u, uv.v);
      return {Chart::MomentPhi, m.phi1, m.phi2};
    }
    case Chart::GeodesicPolar: {
      const PolarLocation loc = polar_from_uv(params, uv.u, uv.v, tol);
      return {Chart::GeodesicPolar, loc.R, loc.eta};
    }
    case Chart::AlmostPolar: {
      const AlmostPolar ap = almost_polar_from_uv(params, uv.u, uv.v);
      return {Chart::AlmostPolar, ap.R_tilde, ap.psi};
    }
  }
  return point;
}

}  // namespace instanton
