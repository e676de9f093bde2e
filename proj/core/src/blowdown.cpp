#include "instanton/blowdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "instanton/error.hpp"
#include "instanton/numerics.hpp"

namespace instanton {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_k(double k) {
  if (!(std::abs(k) < 1.0)) throw Error(ErrorCode::InvalidParams, "|k| must be below 1");
}

double conifold_P(double k, double u, double v) { return (1.0 + k) * u * u + (1.0 - k) * v * v; }

// Limit coordinates (u, v) sit at u = s u~ with s^4 = M / (2 sqrt2).
double blowdown_scale(double M) { return std::pow(M / (2.0 * kSqrt2), 0.25); }

double max_entry_gap(const FiberMatrix& a, const FiberMatrix& b) {
  return std::max({std::abs(a.g11 - b.g11), std::abs(a.g12 - b.g12), std::abs(a.g22 - b.g22)});
}

// T F T^T for a 2x2 transform acting on the Killing fields.
FiberMatrix transform(const std::array<double, 4>& T, const FiberMatrix& F) {
  const double a = T[0], b = T[1], c = T[2], d = T[3];
  const double m11 = a * F.g11 + b * F.g12;
  const double m12 = a * F.g12 + b * F.g22;
  const double m21 = c * F.g11 + d * F.g12;
  const double m22 = c * F.g12 + d * F.g22;
  return {m11 * a + m12 * b, m11 * c + m12 * d, m21 * c + m22 * d};
}

FiberMatrix halfplane_limit(double u, double v) {
  const double w = 1.0 + u * u;
  return {(w * w + 4.0 * u * u * v * v) / w, 2.0 * u * u * v / w, u * u / w};
}

PointedLimitSample pointed_sample(double A, double u, double v, bool stated) {
  if (!(A > 0.0)) throw Error(ErrorCode::InvalidArgument, "A must be positive");
  const InstantonParams etn = InstantonParams::exceptional_taub_nut();
  const double vv = A + v;
  if (u < 0.0 || vv < 0.0) throw Error(ErrorCode::InvalidArgument, "point outside the exceptional chart");
  const std::array<double, 4> T = stated ? std::array{1.0 / (2.0 * A), -kSqrt2 * A, 0.0, kSqrt2}
                                          : std::array{kSqrt2 / A, -kSqrt2 * A, 0.0, kSqrt2};
  PointedLimitSample out{};
  out.A = A;
  out.conformal = conformal_factor(etn, u, vv);
  out.fiber = transform(T, fiber_matrix(etn, u, vv));
  out.limit = halfplane_limit(u, v);
  out.residual = max_entry_gap(out.fiber, out.limit);
  const MomentPair phi = moment_map_uv(etn, u, vv);
  const double phi1 = stated ? (phi.phi1 - A * A * (1.0 + 2.0 * kSqrt2 * phi.phi2)) / (2.0 * A)
                              : T[0] * phi.phi1 + T[1] * phi.phi2 - 0.5 * A;
  out.moments = {phi1, kSqrt2 * phi.phi2};
  out.topology = FiberTopology::Cylinder;
  return out;
}

}  // namespace

ConifoldMetric conifold_metric(double k, double u, double v) {
  check_k(k);
  const double P = conifold_P(k, u, v);
  if (P == 0.0) return {0.0, 0.0};
  return {P, u * u * v * v * (u * u + v * v) / P};
}

ConifoldCurvatures conifold_curvatures(double k, double u, double v) {
  check_k(k);
  const double P = conifold_P(k, u, v);
  const double P3 = P * P * P;
  const double K = 2.0 * k * ((1.0 + k) * u * u - (1.0 - k) * v * v) / P3;
  const double r = 4.0 * kSqrt2 * k / P;
  const double r3 = 2.0 * kSqrt2 * k * (1.0 + k) * (1.0 + k) * u * u * v * v * (u * u - v * v) / P3;
  return {K, {-r, r, r3}};
}

double conifold_curvature_fd(double k, double u, double v, double step) {
  check_k(k);
  auto log_P = [k](double a, double b) { return std::log(conifold_P(k, a, b)); };
  return -fd_laplacian(log_P, u, v, step, {0.0, 0.0}) / (2.0 * conifold_P(k, u, v));
}

FdCurvature conifold_ricci_fd(double k, double u, double v, double step) {
  check_k(k);
  if (!(u > 2.0 * step) || !(v > 2.0 * step)) {
    throw Error(ErrorCode::BoundaryTooClose, "conifold oracle needs the stencil inside the quadrant");
  }
  auto metric = [k](double a, double b) {
    const ConifoldMetric g = conifold_metric(k, a, b);
    return std::vector<double>{g.conformal, 0, 0, 0, g.conformal, 0, 0, 0, g.fiber};
  };
  return fd_curvature(3, metric, u, v, step);
}

BlowdownMetric4 second_blowdown_metric(double k, double u, double v) {
  check_k(k);
  const double P = conifold_P(k, u, v);
  const double uv2 = u * u * v * v;
  if (P == 0.0) return {0.0, {0.0, 0.0, 0.0}};
  return {P,
          {uv2 * (u * u + v * v) / P, -2.0 * k * uv2 / P,
           ((1.0 + k) * (1.0 + k) * u * u + (1.0 - k) * (1.0 - k) * v * v) / P}};
}

MomentPair second_blowdown_moments(double k, double u, double v) {
  check_k(k);
  return {0.5 * u * u * v * v, -0.5 * (1.0 + k) * u * u + 0.5 * (1.0 - k) * v * v};
}

XY second_blowdown_xy(double u, double v) { return {u * v, 0.5 * (u * u - v * v)}; }

double second_blowdown_conformal_xy(double k, double x, double y) {
  check_k(k);
  const double r = std::hypot(x, y);
  if (r == 0.0) throw Error(ErrorCode::SingularAxis, "the (x~, y~) form is singular at the origin");
  return (k * y + r) / r;
}

double blowdown_distance(double k, double u, double v) {
  check_k(k);
  return 0.5 * std::sqrt(1.0 + k) * u * u + 0.5 * std::sqrt(1.0 - k) * v * v;
}

UV blowdown_geodesic(double k, double c1, double c2, double t) {
  check_k(k);
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be nonnegative");
  return {c1 * std::pow(t, std::sqrt(1.0 + k)), c2 * std::pow(t, std::sqrt(1.0 - k))};
}

BlowdownMetric4 exceptional_blowdown_metric(double u, double v) {
  if (!(u > 0.0)) throw Error(ErrorCode::SingularAxis, "the exceptional blowdown degenerates at u = 0");
  const double v2 = v * v;
  return {u * u, {0.5 * v2 * (u * u + v2), 0.5 * v2, 0.5}};
}

double exceptional_blowdown_curvature(double u, double v) {
  (void)v;
  if (!(u > 0.0)) throw Error(ErrorCode::SingularAxis, "the exceptional blowdown degenerates at u = 0");
  return 1.0 / (u * u * u * u);
}

PointedLimitSample pointed_limit_halfplane(double A, double u, double v_shifted) {
  return pointed_sample(A, u, v_shifted, false);
}

PointedLimitSample pointed_limit_halfplane_as_stated(double A, double u, double v_shifted) {
  return pointed_sample(A, u, v_shifted, true);
}

ConvergenceTable make_table(std::string name, std::vector<ResidualRow> rows) {
  ConvergenceTable table;
  table.name = std::move(name);
  table.rows = std::move(rows);
  bool monotone = !table.rows.empty();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].residual < table.rows[i - 1].residual)) monotone = false;
  }
  table.monotone = monotone;
  std::vector<std::pair<double, double>> samples;
  for (const ResidualRow& r : table.rows) {
    samples.emplace_back(r.parameter, std::max(r.residual, std::numeric_limits<double>::min()));
  }
  if (samples.size() >= 3) table.rate = fit_power_law(samples).exponent;
  table.converging = monotone && table.rate <= -0.25;
  return table;
}

ConvergenceTable conifold_conformal_table(double k, double u, double v, std::span<const double> scales) {
  check_k(k);
  std::vector<ResidualRow> rows;
  for (double M : scales) {
    const InstantonParams p = InstantonParams::generalized(k, M);
    const double s = blowdown_scale(M);
    const double scaled = conformal_factor(p, s * u, s * v) * s * s;
    rows.push_back({M, std::abs(scaled - conifold_P(k, u, v))});
  }
  return make_table("conifold conformal factor", std::move(rows));
}

ConvergenceTable conifold_fiber_table(double k, double u, double v, std::span<const double> scales,
                                      double coefficient) {
  check_k(k);
  const double P = conifold_P(k, u, v);
  const double q = coefficient * u * u * v * v * (u * u + v * v) / P;
  const FiberMatrix limit{q * (1.0 + k) * (1.0 + k), q * (1.0 - k * k), q * (1.0 - k) * (1.0 - k)};
  std::vector<ResidualRow> rows;
  for (double M : scales) {
    const InstantonParams p = InstantonParams::generalized(k, M);
    const double s = blowdown_scale(M);
    rows.push_back({M, max_entry_gap(fiber_matrix(p, s * u, s * v), limit)});
  }
  return make_table("conifold fiber", std::move(rows));
}

ConvergenceTable second_blowdown_table(double k, double u, double v, std::span<const double> scales) {
  check_k(k);
  const BlowdownMetric4 limit = second_blowdown_metric(k, u, v);
  std::vector<ResidualRow> rows;
  for (double M : scales) {
    const InstantonParams p = InstantonParams::generalized(k, M);
    const double s = blowdown_scale(M);
    const double c = std::pow(2.0, 0.75) * std::sqrt(M);
    const std::array<double, 4> T{kSqrt2 / (1.0 + k), 0.0, c * 0.5 * (1.0 - k), -c * 0.5 * (1.0 + k)};
    const FiberMatrix F = transform(T, fiber_matrix(p, s * u, s * v));
    const double conformal = conformal_factor(p, s * u, s * v) * s * s;
    rows.push_back({M, std::max(max_entry_gap(F, limit.fiber), std::abs(conformal - limit.conformal))});
  }
  return make_table("second blowdown", std::move(rows));
}

ConvergenceTable exceptional_blowdown_table(double u, double v, std::span<const double> scales) {
  const BlowdownMetric4 limit = exceptional_blowdown_metric(u, v);
  const InstantonParams etn = InstantonParams::exceptional_taub_nut();
  std::vector<ResidualRow> rows;
  for (double M : scales) {
    const double inv2 = 1.0 / (M * M);
    const double conformal = conformal_factor(etn, M * u, M * v) * inv2;
    const FiberMatrix F = transform({inv2, 0.0, 0.0, 1.0}, fiber_matrix(etn, M * u, M * v));
    rows.push_back({M, std::max(max_entry_gap(F, limit.fiber), std::abs(conformal - limit.conformal))});
  }
  return make_table("exceptional blowdown", std::move(rows));
}

ConvergenceTable pointed_limit_table(double u, double v, std::span<const double> shifts, bool as_stated) {
  std::vector<ResidualRow> rows;
  for (double A : shifts) rows.push_back({A, pointed_sample(A, u, v, as_stated).residual});
  return make_table(as_stated ? "pointed limit (stated recombination)" : "pointed limit", std::move(rows));
}

std::string_view to_string(FiberTopology topology) noexcept {
  return topology == FiberTopology::Torus ? "torus" : "cylinder";
}

}  // namespace instanton
