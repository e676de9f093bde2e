#include "instanton/family.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "instanton/error.hpp"
#include "instanton/numerics.hpp"

namespace instanton {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

void require_taub_nut_chart(const InstantonParams& params, const char* op) {
  if (params.uses_xy_chart()) {
    throw Error(ErrorCode::WrongFamily, std::string(op) + ": this family's chart is (x, y) itself");
  }
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::GeneralizedTN: return "generalized";
    case Family::ExceptionalTN: return "exceptional-taub-nut";
    case Family::ExceptionalHalfPlane: return "half-plane";
    case Family::Flat: return "flat";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "generalized" || s == "generalizedtn" || s == "gtn" || s == "taub-nut") return Family::GeneralizedTN;
  if (s == "exceptional-taub-nut" || s == "exceptionaltn" || s == "etn" || s == "exceptional") {
    return Family::ExceptionalTN;
  }
  if (s == "half-plane" || s == "exceptionalhalfplane" || s == "hp") return Family::ExceptionalHalfPlane;
  if (s == "flat") return Family::Flat;
  throw Error(ErrorCode::InvalidParams, "unknown family '" + std::string(name) + "'");
}

std::string_view to_string(Chart chart) noexcept {
  switch (chart) {
    case Chart::XY: return "xy";
    case Chart::UV: return "uv";
    case Chart::MomentPhi: return "moment";
    case Chart::GeodesicPolar: return "polar";
    case Chart::AlmostPolar: return "almost-polar";
  }
  return "unknown";
}

Chart parse_chart(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "xy") return Chart::XY;
  if (s == "uv") return Chart::UV;
  if (s == "moment" || s == "momentphi" || s == "phi") return Chart::MomentPhi;
  if (s == "polar" || s == "geodesicpolar" || s == "geodesic-polar") return Chart::GeodesicPolar;
  if (s == "almost-polar" || s == "almostpolar") return Chart::AlmostPolar;
  throw Error(ErrorCode::InvalidArgument, "unknown chart '" + std::string(name) + "'");
}

InstantonParams InstantonParams::generalized(double k, double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw Error(ErrorCode::InvalidParams, "M must be positive");
  if (!(std::abs(k) < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "generalized Taub-NUT needs |k| < 1; use the exceptional family");
  }
  return {Family::GeneralizedTN, M, k};
}

InstantonParams InstantonParams::exceptional_taub_nut() { return {Family::ExceptionalTN, kSqrt2, 1.0}; }
InstantonParams InstantonParams::half_plane() { return {Family::ExceptionalHalfPlane, 2.0, 1.0}; }
InstantonParams InstantonParams::flat() { return {Family::Flat, 1.0, 0.0}; }

std::string InstantonParams::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(family_));
  j["M"] = M_;
  j["k"] = k_;
  return j.dump();
}

InstantonParams InstantonParams::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParams, std::string("bad params JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw Error(ErrorCode::InvalidParams, "params JSON needs a string 'family'");
  }
  const Family family = parse_family(j["family"].get<std::string>());
  auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number()) throw Error(ErrorCode::InvalidParams, std::string("'") + key + "' must be a number");
    return j[key].get<double>();
  };
  const std::optional<double> M = number("M");
  const std::optional<double> k = number("k");
  if (family == Family::GeneralizedTN) return generalized(k.value_or(0.0), M.value_or(kStandardScale));

  InstantonParams fixed = family == Family::ExceptionalTN          ? exceptional_taub_nut()
                          : family == Family::ExceptionalHalfPlane ? half_plane()
                                                                   : flat();
  if ((M && std::abs(*M - fixed.M()) > 1e-8 * fixed.M()) || (k && std::abs(*k - fixed.k()) > 1e-12)) {
    throw Error(ErrorCode::InvalidParams, "this family has a fixed normalization; drop M and k");
  }
  return fixed;
}

SeparatedProfile separated_profile(const InstantonParams& params) {
  switch (params.family()) {
    case Family::GeneralizedTN:
      return {2.0 * kSqrt2 / params.M(), std::sqrt(1.0 + params.k()), std::sqrt(1.0 - params.k())};
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane:
      return {1.0, 1.0, 0.0};
    case Family::Flat:
      return {1.0, 0.0, 0.0};
  }
  return {1.0, 0.0, 0.0};
}

void validate_chart_point(const InstantonParams& params, const ChartPoint& p) {
  auto fail = [](const char* why) { throw Error(ErrorCode::InvalidArgument, why); };
  if (!std::isfinite(p.c1) || !std::isfinite(p.c2)) fail("chart coordinates must be finite");
  switch (p.chart) {
    case Chart::XY:
      if (p.c1 < 0.0) fail("x must be nonnegative");
      break;
    case Chart::UV:
      if (p.c1 < 0.0) fail("u must be nonnegative");
      if (!params.uses_xy_chart() && p.c2 < 0.0) fail("v must be nonnegative");
      break;
    case Chart::MomentPhi:
      if (p.c1 < 0.0) fail("phi1 must be nonnegative");
      if (!params.uses_xy_chart() && p.c2 < 0.0) fail("phi2 must be nonnegative");
      break;
    case Chart::GeodesicPolar:
    case Chart::AlmostPolar: {
      const double lo = params.uses_xy_chart() ? -std::numbers::pi / 2 : 0.0;
      if (p.c1 < 0.0) fail("radius must be nonnegative");
      if (p.c2 < lo || p.c2 > std::numbers::pi / 2) fail("angle out of range");
      break;
    }
  }
}

UV xy_to_uv(const InstantonParams& params, double x, double y) {
  require_taub_nut_chart(params, "xy_to_uv");
  if (x < 0.0) throw Error(ErrorCode::InvalidArgument, "x must be nonnegative");
  const double r = std::hypot(x, y);
  const double scale = params.is_generalized() ? std::sqrt(params.M() / kSqrt2) : kSqrt2;
  // r - y loses precision when y > 0 dominates; use x^2 / (r + y) instead.
  const double plus = y >= 0.0 ? r + y : x * x / (r - y);
  const double minus = y >= 0.0 ? (r + y > 0.0 ? x * x / (r + y) : 0.0) : r - y;
  return {scale * std::sqrt(plus), scale * std::sqrt(minus)};
}

XY uv_to_xy(const InstantonParams& params, double u, double v) {
  require_taub_nut_chart(params, "uv_to_xy");
  if (params.is_generalized()) {
    const double M = params.M();
    return {kSqrt2 / M * u * v, (u * u - v * v) / (kSqrt2 * M)};
  }
  return {0.5 * u * v, 0.25 * (u * u - v * v)};
}

double volumetric_x(const InstantonParams& params, double u, double v) {
  if (params.uses_xy_chart()) return u;
  return uv_to_xy(params, u, v).x;
}

MomentPair moment_map_uv(const InstantonParams& params, double u, double v) {
  const double u2 = u * u;
  const double v2 = v * v;
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double M = params.M();
      const double k = params.k();
      return {v2 / M * (1.0 + (1.0 + k) * u2), u2 / M * (1.0 + (1.0 - k) * v2)};
    }
    case Family::ExceptionalTN:
      return {v2 * (1.0 + u2) / (2.0 * kSqrt2), u2 / (2.0 * kSqrt2)};
    case Family::ExceptionalHalfPlane:
    case Family::Flat:
      return moment_map_xy(params, u, v);
  }
  return {0.0, 0.0};
}

MomentPair moment_map_xy(const InstantonParams& params, double x, double y) {
  switch (params.family()) {
    case Family::GeneralizedTN:
    case Family::ExceptionalTN: {
      const double r = std::hypot(x, y);
      return {(r - y) / kSqrt2 + 0.5 * params.alpha() * x * x, (r + y) / kSqrt2 + 0.5 * params.beta() * x * x};
    }
    case Family::ExceptionalHalfPlane:
      return {0.5 * x * x, y + y * x * x};
    case Family::Flat:
      return {0.5 * x * x, y};
  }
  return {0.0, 0.0};
}

MomentPair moment_map(const InstantonParams& params, const ChartPoint& point) {
  validate_chart_point(params, point);
  switch (point.chart) {
    case Chart::UV: return moment_map_uv(params, point.c1, point.c2);
    case Chart::XY: return moment_map_xy(params, point.c1, point.c2);
    case Chart::MomentPhi: return {point.c1, point.c2};
    default: throw Error(ErrorCode::InvalidArgument, "moment_map takes a UV or XY point");
  }
}

UV uv_from_moment(const InstantonParams& params, const MomentPair& m) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double M = params.M();
      const double k = params.k();
      const double p1 = M * m.phi1;
      const double p2 = M * m.phi2;
      double A = 0.0;
      if (p2 > 0.0) {
        auto g = [&](double a) { return a * (1.0 + (1.0 - k) * p1 / (1.0 + (1.0 + k) * a)) - p2; };
        A = find_root_monotone(g, 0.0, p2, {1e-300, 1e-15, 400});
      }
      const double B = p1 / (1.0 + (1.0 + k) * A);
      return {std::sqrt(A), std::sqrt(B)};
    }
    case Family::ExceptionalTN: {
      const double u2 = 2.0 * kSqrt2 * m.phi2;
      return {std::sqrt(u2), std::sqrt(2.0 * kSqrt2 * m.phi1 / (1.0 + u2))};
    }
    case Family::ExceptionalHalfPlane: {
      const double x = std::sqrt(2.0 * m.phi1);
      return {x, m.phi2 / (1.0 + x * x)};
    }
    case Family::Flat:
      return {std::sqrt(2.0 * m.phi1), m.phi2};
  }
  return {0.0, 0.0};
}

MomentPdeResidual moment_pde_residual(const InstantonParams& params, double x, double y, double step) {
  const PlanarDomain half_plane{0.0, std::nullopt};
  auto residual = [&](auto component) {
    auto phi = [&](double xx, double yy) { return component(moment_map_xy(params, xx, yy)); };
    return x * fd_laplacian(phi, x, y, step, half_plane) - fd_gradient(phi, x, y, step, half_plane).dx;
  };
  return {residual([](const MomentPair& m) { return m.phi1; }),
          residual([](const MomentPair& m) { return m.phi2; })};
}

AlmostPolar almost_polar_from_uv(const InstantonParams& params, double u, double v) {
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double root = std::sqrt(kSqrt2 * params.M());
      const double a = std::sqrt(1.0 + k);
      const double b = std::sqrt(1.0 - k);
      const double R_tilde = (a * u * u + b * v * v) / root;
      if (R_tilde == 0.0) return {0.0, 0.0};
      // cos psi = u (a / root)^(1/2) / sqrt(R~), sin psi likewise with b.
      return {R_tilde, std::atan2(std::sqrt(b) * v, std::sqrt(a) * u)};
    }
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane: {
      const double R_tilde = 0.5 * u * u + std::abs(v);
      if (R_tilde == 0.0) return {0.0, 0.0};
      const double psi = std::asin(std::sqrt(std::abs(v) / R_tilde));
      return {R_tilde, v < 0.0 ? -psi : psi};
    }
    case Family::Flat: {
      const double R_tilde = std::hypot(u, v);
      return {R_tilde, R_tilde == 0.0 ? 0.0 : std::atan2(v, u)};
    }
  }
  return {0.0, 0.0};
}

UV uv_from_almost_polar(const InstantonParams& params, double R_tilde, double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  switch (params.family()) {
    case Family::GeneralizedTN: {
      const double k = params.k();
      const double scale = kSqrt2 * params.M();
      return {std::pow(scale / (1.0 + k), 0.25) * std::sqrt(R_tilde) * c,
              std::pow(scale / (1.0 - k), 0.25) * std::sqrt(R_tilde) * s};
    }
    case Family::ExceptionalTN:
    case Family::ExceptionalHalfPlane:
      return {kSqrt2 * c * std::sqrt(R_tilde), (psi < 0.0 ? -1.0 : 1.0) * s * s * R_tilde};
    case Family::Flat:
      return {R_tilde * c, R_tilde * s};
  }
  return {0.0, 0.0};
}

double chart_orientation(const InstantonParams& params) { return params.uses_xy_chart() ? 1.0 : -1.0; }

}  // namespace instanton
