#include "instanton/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include "instanton/asymptotics.hpp"
#include "instanton/blowdown.hpp"
#include "instanton/curvature.hpp"
#include "instanton/error.hpp"
#include "instanton/geodesics.hpp"
#include "instanton/metrics.hpp"

namespace instanton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

std::string format(const char* fmt, ...) {
  char buffer[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof buffer, fmt, args);
  va_end(args);
  return buffer;
}

CheckOutcome outcome(bool ok, std::string detail) { return {ok, std::move(detail)}; }

std::vector<InstantonParams> all_families() {
  return {InstantonParams::generalized(0.0), InstantonParams::generalized(0.5), InstantonParams::generalized(-0.3, 2.0),
          InstantonParams::exceptional_taub_nut(), InstantonParams::half_plane(), InstantonParams::flat()};
}

std::string name_of(const InstantonParams& p) {
  if (p.is_generalized()) return format("generalized(k=%g,M=%g)", p.k(), p.M());
  return std::string(to_string(p.family()));
}

const std::array<double, 7> kEtaGrid{0.0, 0.2, 0.5, 0.785, 1.1, 1.4, 0.5 * kPi};

// Fiber matrix from FD Jacobian of the moment map: J J^T / lambda.
FiberMatrix fiber_from_moments(const InstantonParams& p, double u, double v) {
  const double h = 1e-5;
  auto phi = [&](double a, double b) { return moment_map_uv(p, a, b); };
  const MomentPair pu1 = phi(u + h, v), pu0 = phi(u - h, v), pv1 = phi(u, v + h), pv0 = phi(u, v - h);
  const double j11 = (pu1.phi1 - pu0.phi1) / (2 * h), j12 = (pv1.phi1 - pv0.phi1) / (2 * h);
  const double j21 = (pu1.phi2 - pu0.phi2) / (2 * h), j22 = (pv1.phi2 - pv0.phi2) / (2 * h);
  const double l = conformal_factor(p, u, v);
  return {(j11 * j11 + j12 * j12) / l, (j11 * j21 + j12 * j22) / l, (j21 * j21 + j22 * j22) / l};
}

double fiber_gap(const FiberMatrix& a, const FiberMatrix& b) {
  return std::max({std::abs(a.g11 - b.g11), std::abs(a.g12 - b.g12), std::abs(a.g22 - b.g22)});
}

// ---- numerics ----

CheckOutcome check_roots() {
  const double r1 = find_root_monotone([](double x) { return x - 1.0; }, 0.0, 2.0);
  const double r2 = find_root_monotone([](double x) { return x + std::log(x) - 1.0; }, 0.1, 2.0);
  const double r3 = find_root_monotone([](double x) { return x * x * x - 2.0; }, 1.0, 2.0);
  const double err = std::max({std::abs(r1 - 1.0), std::abs(r2 - 1.0), std::abs(r3 - std::cbrt(2.0))});
  return outcome(err < 1e-9, format("max root error %.3g", err));
}

CheckOutcome check_quadrature() {
  const QuadratureResult e = integrate_2d_improper([](double u, double v) { return std::exp(-u - v); }, {130.0, 3.0});
  const QuadratureResult r = integrate_2d_improper(
      [](double u, double v) { return 8.0 * u * v / std::pow(1.0 + u * u + v * v, 4); }, {4.0, 3.0},
      {1e-12, 1e-10, 200});
  const double err = std::max(std::abs(e.value - 1.0), std::abs(r.value - 1.0 / 3.0));
  return outcome(err < 1e-7, format("exp: %.12g, rational: %.12g (1/3)", e.value, r.value));
}

CheckOutcome check_ode() {
  const auto path = ode_solve([](const OdeState& y) { return OdeState{y[0]}; }, {1.0}, 1.0, {1e-12, 1e-12, 200});
  const double err = std::abs(path.back().state[0] - std::numbers::e);
  return outcome(err < 1e-9 && path.back().t == 1.0, format("x(1) - e = %.3g", err));
}

CheckOutcome check_laplacian_order() {
  auto f = [](double x, double y) { return std::exp(x) * std::sin(2.0 * y); };
  const double exact = -3.0 * std::exp(1.0) * std::sin(1.0);
  const double e1 = std::abs(fd_laplacian(f, 1.0, 0.5, 1e-2) - exact);
  const double e2 = std::abs(fd_laplacian(f, 1.0, 0.5, 5e-3) - exact);
  const double ratio = e2 / e1;
  return outcome(ratio >= 0.2 && ratio <= 0.3, format("error ratio on halving %.4f", ratio));
}

CheckOutcome check_fit() {
  const std::vector<std::pair<double, double>> s{{1, 1}, {2, 8}, {4, 64}};
  const PowerLawFit f = fit_power_law(s);
  return outcome(std::abs(f.exponent - 3.0) < 1e-12 && std::abs(f.r_squared - 1.0) < 1e-12,
                 format("exponent %.15g", f.exponent));
}

// ---- family / metrics ----

CheckOutcome check_chart_roundtrip() {
  double worst = 0.0;
  const std::array<Chart, 4> charts{Chart::XY, Chart::MomentPhi, Chart::GeodesicPolar, Chart::AlmostPolar};
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.3, 1.0, 2.5}) {
      for (double v : {0.4, 1.0, 3.0}) {
        for (Chart c : charts) {
          const ChartPoint there = convert(p, {Chart::UV, u, v}, c);
          const ChartPoint back = convert(p, there, Chart::UV);
          worst = std::max(worst, std::hypot(back.c1 - u, back.c2 - v) / std::hypot(u, v));
        }
      }
    }
  }
  return outcome(worst < 1e-9, format("max relative round-trip error %.3g", worst));
}

CheckOutcome check_moment_pde_order() {
  double worst = 0.0;
  std::string detail;
  for (const InstantonParams& p : all_families()) {
    auto size = [&](double h) {
      const MomentPdeResidual r = moment_pde_residual(p, 1.0, 0.5, h);
      return std::max(std::abs(r.res1), std::abs(r.res2));
    };
    const double a = size(2e-2), b = size(1e-2);
    if (a < 1e-11 && b < 1e-11) continue;
    const double ratio = b / a;
    if (std::abs(ratio - 0.25) > worst) {
      worst = std::abs(ratio - 0.25);
      detail = name_of(p) + format(" ratio %.4f", ratio);
    }
  }
  return outcome(worst <= 0.05, detail.empty() ? "residuals vanish identically" : detail);
}

CheckOutcome check_fiber_determinant() {
  double worst = 0.0;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.2, 1.0, 3.0}) {
      for (double v : {0.3, 1.0, 4.0}) {
        const double x = volumetric_x(p, u, v);
        worst = std::max(worst, std::abs(fiber_matrix(p, u, v).det() - x * x) / (x * x));
      }
    }
  }
  return outcome(worst <= 1e-10, format("max relative |det - x^2| %.3g", worst));
}

CheckOutcome check_fiber_from_moments() {
  double worst = 0.0;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.5, 1.5}) {
      for (double v : {0.5, 1.5}) {
        const FiberMatrix a = fiber_matrix(p, u, v);
        const FiberMatrix b = fiber_from_moments(p, u, v);
        worst = std::max(worst, fiber_gap(a, b) / std::max(1.0, std::abs(a.g11) + std::abs(a.g22)));
      }
    }
  }
  return outcome(worst <= 1e-7, format("max |G^-1 - J J^T / lambda| %.3g", worst));
}

CheckOutcome check_collapsing_dichotomy() {
  std::string detail;
  bool ok = true;
  for (double k : {0.0, 0.3, 0.7}) {
    const InstantonParams p = InstantonParams::generalized(k);
    const CollapsingNorms n1 = collapsing_direction_norms(p, 10.0, 10.0);
    const CollapsingNorms n2 = collapsing_direction_norms(p, 1000.0, 1000.0);
    const bool bounded = n2.collapsed_norm_sq < 2.0 * n1.collapsed_norm_sq;
    const bool grows = n2.complement_norm_sq > 1e3 * n1.complement_norm_sq;
    ok = ok && bounded && grows;
    detail += format("k=%g: |w|^2 %.4g -> %.4g, |w_perp|^2 %.4g -> %.4g; ", k, n1.collapsed_norm_sq,
                     n2.collapsed_norm_sq, n1.complement_norm_sq, n2.complement_norm_sq);
  }
  return outcome(ok, detail);
}

// ---- geodesics ----

CheckOutcome check_roundtrip() {
  double worst = 0.0;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    for (double R : {0.1, 1.0, 10.0, 100.0}) {
      for (double eta : kEtaGrid) {
        const GeodesicRecord rec = point_from_polar(p, R, eta);
        worst = std::max(worst, std::abs(distance(p, rec.u, rec.v) - R) / R);
      }
    }
  }
  return outcome(worst <= 1e-8, format("max relative distance error %.3g", worst));
}

CheckOutcome check_exceptional_roundtrip() {
  double worst = 0.0;
  for (const InstantonParams& p :
       {InstantonParams::exceptional_taub_nut(), InstantonParams::half_plane(), InstantonParams::flat()}) {
    for (double R : {0.1, 1.0, 100.0, 1e4}) {
      for (double eta : kEtaGrid) {
        const GeodesicRecord rec = point_from_polar(p, R, eta);
        worst = std::max(worst, std::abs(distance(p, rec.u, rec.v) - R) / R);
      }
    }
  }
  return outcome(worst <= 1e-8, format("max relative distance error %.3g", worst));
}

CheckOutcome check_eta_roundtrip() {
  double worst = 0.0;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    for (double R : {0.5, 5.0, 50.0}) {
      for (double eta : {0.1, 0.7, 1.3}) {
        const GeodesicRecord rec = point_from_polar(p, R, eta);
        worst = std::max(worst, std::abs(solve_eta(p, rec.u, rec.v) - eta));
      }
    }
  }
  return outcome(worst <= 1e-9, format("max |eta error| %.3g", worst));
}

CheckOutcome check_shooting() {
  double geo = 0.0, speed = 0.0;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    for (double eta : {0.3, 0.8, 1.3}) {
      for (const ShotSample& s : geodesic_shoot(p, eta, 10.0, {1e-12, 1e-12, 200})) {
        geo = std::max(geo, s.geodesic_residual);
        speed = std::max(speed, std::abs(s.distance - s.t));
      }
    }
  }
  return outcome(geo <= 1e-8 && speed <= 1e-6, format("geodesic residual %.3g, speed error %.3g", geo, speed));
}

CheckOutcome check_eikonal() {
  double worst = 0.0;
  std::string where;
  for (const InstantonParams& p : all_families()) {
    for (double eta : {0.0, 0.4, 0.8, 1.2, 0.5 * kPi}) {
      for (double u : {0.5, 1.0, 2.0}) {
        for (double v : {0.5, 1.0, 2.0}) {
          const double r = eikonal_residual(p, eta, u, v, default_fd_step(u, v));
          if (r > worst) {
            worst = r;
            where = name_of(p);
          }
        }
      }
    }
  }
  return outcome(worst <= 1e-6, format("max ||grad S|^2 - 1| %.3g at ", worst) + where);
}

CheckOutcome check_polar_coefficient() {
  double worst = 0.0;
  for (const InstantonParams& p :
       {InstantonParams::generalized(0.0), InstantonParams::generalized(0.5), InstantonParams::exceptional_taub_nut()}) {
    for (double R : {0.5, 3.0}) {
      for (double eta : {0.3, 0.9, 1.3}) {
        const double h = 1e-5;
        const GeodesicRecord a = point_from_polar(p, R, eta + h), b = point_from_polar(p, R, eta - h);
        const GeodesicRecord c = point_from_polar(p, R, eta);
        const double du = (a.u - b.u) / (2 * h), dv = (a.v - b.v) / (2 * h);
        const double fd = conformal_factor(p, c.u, c.v) * (du * du + dv * dv);
        const double A2 = polar_metric_coefficient(p, R, eta).A_squared;
        worst = std::max(worst, std::abs(A2 - fd) / A2);
      }
    }
  }
  return outcome(worst <= 1e-6, format("max relative error vs FD %.3g", worst));
}

// ---- curvature ----

CheckOutcome check_gauss_curvature() {
  double worst = 0.0;
  std::string where;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.3, 0.7, 1.6, 2.5}) {
      for (double v : {0.3, 0.7, 1.6, 2.5}) {
        const double K = polytope_curvature(p, u, v);
        const double fd = polytope_curvature_fd(p, u, v, 1e-3 * (1.0 + std::hypot(u, v)));
        const double err = std::abs(K - fd) / (std::abs(K) + 1e-5);
        if (err > worst) {
          worst = err;
          where = name_of(p) + format(" (%g,%g)", u, v);
        }
      }
    }
  }
  return outcome(worst <= 1e-4, format("max relative error %.3g at ", worst) + where);
}

CheckOutcome check_pseudo_volume() {
  double worst = 0.0;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.3, 0.8, 1.3, 2.0, 3.0}) {
      for (double v : {0.3, 0.8, 1.3, 2.0, 3.0}) {
        const double a = ricci_pseudo_volume_density(p, u, v);
        const double b = ricci_pseudo_volume_density_fd(p, u, v, 1e-4);
        worst = std::max(worst, std::abs(a - b));
      }
    }
  }
  return outcome(worst <= 1e-5, format("max |density - FD Jacobian| %.3g", worst));
}

CheckOutcome check_norm_identity() {
  double worst = 0.0;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.4, 1.7}) {
      for (double v : {0.6, 2.2}) {
        const double r = ricci_norm(p, u, v);
        const double a = r * r * volume_density(p, u, v);
        worst = std::max(worst, std::abs(a - ricci_pseudo_volume_density(p, u, v)) / std::max(1e-300, std::abs(a) + 1e-12));
      }
    }
  }
  return outcome(worst <= 1e-10, format("max relative |Ric|^2 dVol - pseudo-volume %.3g", worst));
}

CheckOutcome check_l2_ricci() {
  std::string detail;
  bool ok = true;
  for (double k : {0.0, 0.3, 0.5, 1.0 / kSqrt2, 0.9}) {
    const EnergyReport r = l2_ricci(InstantonParams::generalized(k));
    ok = ok && r.rel_error <= 1e-6;
    detail += format("k=%.4g: %.10g vs %.10g; ", k, r.quadrature.value, *r.closed_form);
  }
  return outcome(ok, detail);
}

CheckOutcome check_energy_identity() {
  double worst = 0.0;
  for (double k : {0.0, 0.3, 1.0 / kSqrt2, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    const double rm = *l2_riemann(p);
    const double closed = 16.0 * kPi * kPi * (2.0 - k * k) / (1.0 - k * k);
    const double ric = 4.0 * kPi * kPi * k * k / (1.0 - k * k);
    worst = std::max({worst, std::abs(rm - 4.0 * ric - 32.0 * kPi * kPi) / rm, std::abs(rm - closed) / closed});
  }
  return outcome(worst <= 1e-14, format("max relative deviation %.3g", worst));
}

CheckOutcome check_exceptional_energy_growth() {
  const EnergyReport e = l2_ricci(InstantonParams::exceptional_taub_nut());
  const EnergyReport h = l2_ricci(InstantonParams::half_plane());
  const bool ok = !e.closed_form && !h.closed_form && std::abs(*e.growth_exponent - 2.0) <= 0.05 &&
                  std::abs(*h.growth_exponent - 1.0) <= 0.05;
  return outcome(ok, format("partial-energy growth: exceptional Taub-NUT %.4f, half-plane %.4f",
                            *e.growth_exponent, *h.growth_exponent));
}

CheckOutcome check_scalar_flat() {
  double worst = 0.0;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.5, 1.0, 2.0}) {
      for (double v : {0.5, 1.0, 2.0}) worst = std::max(worst, std::abs(curvature4_fd(p, u, v).scalar));
    }
  }
  return outcome(worst <= 1e-3, format("max |scalar| %.3g", worst));
}

CheckOutcome check_ricci_calibration() {
  double worst = 0.0;
  for (const InstantonParams& p : {InstantonParams::generalized(0.5), InstantonParams::generalized(0.0),
                                   InstantonParams::exceptional_taub_nut(), InstantonParams::half_plane()}) {
    for (auto [u, v] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{2.0, 0.7}}) {
      const Curvature4Sample s = curvature4_fd(p, u, v);
      worst = std::max(worst, std::abs(s.ricci_norm - ricci_norm(p, u, v)));
    }
  }
  return outcome(worst <= 1e-4, format("max |FD |Ric| - closed form| %.3g", worst));
}

CheckOutcome check_riemann_lower_bound() {
  bool ok = true;
  double slack = 1e300;
  for (const InstantonParams& p : all_families()) {
    for (double u : {0.5, 1.5}) {
      for (double v : {0.5, 1.5}) {
        const Curvature4Sample s = curvature4_fd(p, u, v);
        const double ric_sq = std::pow(s.ricci_norm / kRicciNormCalibration, 2);
        const double bound = 2.0 * ric_sq - s.scalar * s.scalar / 3.0;
        slack = std::min(slack, s.rm_norm_sq - bound);
        ok = ok && s.rm_norm_sq >= bound - 1e-6;
      }
    }
  }
  return outcome(ok, format("min |Rm|^2 - (2|Ric|^2 - s^2/3) = %.4g", slack));
}

CheckOutcome check_decay(const InstantonParams& p, std::vector<double> etas, DecayQuantity q, double target,
                         double tol) {
  const std::array<double, 4> radii{1e3, 1e4, 1e5, 1e6};
  double worst = 0.0;
  std::string detail;
  for (double eta : etas) {
    const PowerLawFit f = decay_rate_along_geodesic(p, eta, q, radii);
    worst = std::max(worst, std::abs(f.exponent - target));
    detail += format("eta=%.4g: %.4f; ", eta, f.exponent);
  }
  return outcome(worst <= tol, detail);
}

CheckOutcome check_exceptional_loci() {
  const InstantonParams etn = InstantonParams::exceptional_taub_nut();
  const InstantonParams hp = InstantonParams::half_plane();
  double worst = 0.0;
  std::vector<std::pair<double, double>> circle_etn, circle_hp;
  for (double d : {1.0, 10.0, 100.0, 1000.0}) {
    const GeodesicRecord a = point_from_polar(etn, d, 0.5 * kPi);
    const GeodesicRecord b = point_from_polar(hp, d, 0.5 * kPi);
    worst = std::max({worst, std::abs(polytope_curvature(etn, a.u, a.v) + 1.0),
                      std::abs(polytope_curvature(hp, b.u, b.v) + 1.0)});
    circle_etn.emplace_back(d, std::sqrt(fiber_matrix(etn, a.u, a.v).g11));
    circle_hp.emplace_back(d, std::sqrt(fiber_matrix(hp, b.u, b.v).g22));
  }
  const double ge = fit_power_law(circle_etn).exponent;
  const double gh = fit_power_law(circle_hp).exponent;
  const bool ok = worst <= 1e-12 && std::abs(ge - 1.0) <= 1e-6 && std::abs(gh) <= 1e-6;
  return outcome(ok, format("K = -1 on both loci (max gap %.3g); orbit length growth: Taub-NUT axis %.4f, "
                            "half-plane axis %.4f",
                            worst, ge, gh));
}

// ---- asymptotics ----

CheckOutcome check_volume_quadrature() {
  double worst = 0.0;
  for (const InstantonParams& p : {InstantonParams::generalized(0.0), InstantonParams::generalized(0.5),
                                   InstantonParams::generalized(0.9), InstantonParams::exceptional_taub_nut()}) {
    for (double R : {1.0, 50.0, 400.0}) {
      const double c = almost_ball_volume(p, R);
      worst = std::max(worst, std::abs(almost_ball_volume_quadrature(p, R, {1e-14, 1e-12, 200}).value - c) / c);
    }
  }
  const double unit = almost_ball_volume(InstantonParams::exceptional_taub_nut(), 1.0);
  const bool ok = worst <= 1e-8 && std::abs(unit - 0.5 * kPi * kPi) <= 1e-14;
  return outcome(ok, format("max relative error %.3g; exceptional Vol AB(1) = %.15g", worst, unit));
}

CheckOutcome check_volume_growth() {
  const std::array<double, 4> radii{50.0, 100.0, 200.0, 400.0};
  std::string detail;
  bool ok = true;
  for (double k : {0.0, 0.5, 0.9}) {
    const double e = volume_growth_exponent(InstantonParams::generalized(k), radii).exponent;
    ok = ok && std::abs(e - 3.0) <= 0.05;
    detail += format("k=%g: %.4f; ", k, e);
  }
  const double e = volume_growth_exponent(InstantonParams::exceptional_taub_nut(), radii).exponent;
  ok = ok && std::abs(e - 4.0) <= 0.05;
  return outcome(ok, detail + format("exceptional: %.4f", e));
}

CheckOutcome check_volume_bracket() {
  const InstantonParams g = InstantonParams::generalized(0.0);
  const InstantonParams e = InstantonParams::exceptional_taub_nut();
  const VolumeBracket bg = ball_volume_bracket(g, 100.0);
  const VolumeBracket be = ball_volume_bracket(e, 100.0);
  const double lead_g = 2.0 * kPi * kPi * (2.0 * kSqrt2 / 3.0) * 1e6;
  const double lead_e = kPi * kPi / 6.0 * 1e8;
  const bool ok = bg.lower <= lead_g && lead_g <= bg.upper && be.lower <= lead_e && lead_e <= be.upper;
  return outcome(ok, format("generalized [%.6g, %.6g] eps %.4f; exceptional [%.6g, %.6g] eps %.4f", bg.lower,
                            bg.upper, bg.epsilon, be.lower, be.upper, be.epsilon));
}

CheckOutcome check_volume_scaling() {
  double worst = 0.0;
  for (double k : {0.0, 0.5}) {
    const double a = almost_ball_volume(InstantonParams::generalized(k, kSqrt2), 7.0 / std::sqrt(kSqrt2)) * 2.0;
    const double b = almost_ball_volume(InstantonParams::generalized(k, 2.0 * kSqrt2), 7.0 / std::sqrt(2.0 * kSqrt2)) * 8.0;
    worst = std::max(worst, std::abs(a - b) / a);
  }
  return outcome(worst <= 1e-13, format("M^2 Vol(R = rho / sqrt M) spread %.3g", worst));
}

CheckOutcome check_exceptional_ratio() {
  double lo = 1e300, hi = 0.0;
  for (double Rt : {1e2, 1e3}) {
    for (const AlmostSphereSample& s : almost_sphere_samples(InstantonParams::exceptional_taub_nut(), Rt, 50)) {
      lo = std::min(lo, s.R / Rt);
      hi = std::max(hi, s.R / Rt);
    }
  }
  return outcome(lo >= 1.0 - 1e-12 && hi <= 2.7, format("R/R~ in [%.6f, %.6f]", lo, hi));
}

CheckOutcome check_approx_F(double k) {
  const InstantonParams p = InstantonParams::generalized(k);
  double lo = 1e300, hi = 0.0;
  for (double R : {1e2, 1e3, 1e4}) {
    for (int i = 0; i <= 200; ++i) {
      const double eta = 0.5 * kPi * i / 200.0;
      if (i == 0 || i == 200) continue;  // F~ blows up on the axes
      const ApproxF a = approx_F(p, R, eta);
      const double ratio = radius_from_log_F(p, std::log(a.value), eta) / R;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return outcome(lo >= 0.999 && hi <= 2.2, format("k=%g: R(F~)/R in [%.4f, %.4f]", k, lo, hi));
}

CheckOutcome check_almost_distance_constant() {
  std::string detail;
  bool ok = true;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    std::array<double, 3> c{};
    const std::array<double, 3> radii{1e2, 1e3, 1e4};
    for (int i = 0; i < 3; ++i) c[i] = almost_distance_constant(p, radii[i]);
    const double spread = *std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end());
    ok = ok && spread <= 1.5;
    detail += format("k=%g: C = %.4f, %.4f, %.4f; ", k, c[0], c[1], c[2]);
  }
  return outcome(ok, detail);
}

CheckOutcome check_almost_sphere_sandwich() {
  std::string detail;
  bool ok = true;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    std::array<double, 2> c{};
    int i = 0;
    for (double Rt : {1e2, 1e3}) {
      for (const AlmostSphereSample& s : almost_sphere_samples(p, Rt, 50)) {
        c[i] = std::max(c[i], std::abs(Rt - s.R) / std::log(s.R));
      }
      ++i;
    }
    ok = ok && std::max(c[0], c[1]) / std::min(c[0], c[1]) <= 1.5;
    detail += format("k=%g: max |R~ - R| / log R = %.4f, %.4f; ", k, c[0], c[1]);
  }
  return outcome(ok, detail);
}

// ---- blowdown ----

const std::array<double, 3> kScales{1e2, 1e3, 1e4};

CheckOutcome table_outcome(const ConvergenceTable& t) {
  std::string detail = t.name + ":";
  for (const ResidualRow& r : t.rows) detail += format(" %.3g", r.residual);
  detail += format(" (rate %.3f)", t.rate);
  return outcome(t.converging, detail);
}

CheckOutcome check_conifold_conformal() {
  return table_outcome(conifold_conformal_table(0.5, 1.0, 1.3, kScales));
}

CheckOutcome check_conifold_fiber_stated() {
  return table_outcome(conifold_fiber_table(0.5, 1.0, 1.3, kScales, 0.25));
}

CheckOutcome check_conifold_fiber_measured() {
  return table_outcome(conifold_fiber_table(0.5, 1.0, 1.3, kScales, 0.5));
}

CheckOutcome check_conifold_gauss() {
  double worst = 0.0;
  for (double k : {0.0, 0.3, 0.5, -0.6}) {
    for (double u : {0.5, 1.0, 2.0}) {
      for (double v : {0.5, 1.3}) {
        const double K = conifold_curvatures(k, u, v).K_sigma;
        const double fd = conifold_curvature_fd(k, u, v, 2e-4);
        worst = std::max(worst, std::abs(K - fd) / (std::abs(K) + 1e-2));
      }
    }
  }
  return outcome(worst <= 1e-4, format("max relative error %.3g", worst));
}

CheckOutcome check_conifold_ricci() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(0.4, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double u = coord(rng), v = coord(rng);
    const FdCurvature fd = conifold_ricci_fd(0.5, u, v);
    const ConifoldCurvatures stated = conifold_curvatures(0.5, u, v);
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(fd.ricci[j * 4] - stated.ric_diag[j]));
  }
  return outcome(worst <= 1e-4, format("max |FD Ric_jj - stated| %.4g over 10 points", worst));
}

CheckOutcome check_conifold_scalar() {
  const FdCurvature a = conifold_ricci_fd(0.5, 1.0, 1.3);
  const FdCurvature b = conifold_ricci_fd(0.0, 1.0, 1.3);
  return outcome(std::abs(a.scalar) > 1e-3 && std::abs(b.scalar) < 1e-6,
                 format("scalar curvature k=0.5: %.6g, k=0: %.3g", a.scalar, b.scalar));
}

CheckOutcome check_conifold_distance() {
  double worst = 0.0;
  for (double k : {0.0, 0.5, -0.4}) {
    for (double u : {0.5, 1.0, 2.0}) {
      for (double v : {0.5, 1.5}) {
        const Gradient2 g = fd_gradient([&](double a, double b) { return blowdown_distance(k, a, b); }, u, v,
                                        default_fd_step(u, v), {0.0, 0.0});
        worst = std::max(worst, std::abs((g.dx * g.dx + g.dy * g.dy) / conifold_metric(k, u, v).conformal - 1.0));
      }
    }
  }
  return outcome(worst <= 1e-6, format("max ||grad S| - 1| %.3g", worst));
}

CheckOutcome check_blowdown_geodesics() {
  double worst = 0.0;
  for (double k : {0.0, 0.5, -0.4}) {
    const double ratio = std::sqrt((1.0 - k) / (1.0 + k));
    const double ref = 0.7;  // c2 / c1^ratio with c1 = 1
    for (double t : {0.1, 1.0, 5.0, 20.0}) {
      const UV g = blowdown_geodesic(k, 1.0, 0.7, t);
      worst = std::max(worst, std::abs(g.v / std::pow(g.u, ratio) - ref) / ref);
    }
    // Characteristic direction: (u', v') parallel to grad S / P.
    const double t = 2.0, h = 1e-5;
    const UV a = blowdown_geodesic(k, 1.0, 0.7, t + h), b = blowdown_geodesic(k, 1.0, 0.7, t - h);
    const UV c = blowdown_geodesic(k, 1.0, 0.7, t);
    const double du = a.u - b.u, dv = a.v - b.v;
    const double su = std::sqrt(1.0 + k) * c.u, sv = std::sqrt(1.0 - k) * c.v;
    worst = std::max(worst, std::abs(du * sv - dv * su) / std::hypot(du, dv) / std::hypot(su, sv) * 1e-3);
  }
  return outcome(worst <= 1e-10, format("max deviation %.3g", worst));
}

CheckOutcome check_second_blowdown() { return table_outcome(second_blowdown_table(0.5, 1.0, 1.3, kScales)); }

CheckOutcome check_second_blowdown_structure() {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(0.2, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double k = 0.7 * (coord(rng) - 1.6) / 1.4;
    const double u = coord(rng), v = coord(rng);
    const BlowdownMetric4 m = second_blowdown_metric(k, u, v);
    const XY xy = second_blowdown_xy(u, v);
    const MomentPair phi = second_blowdown_moments(k, u, v);
    // Pullback of (x~, y~) form: dx^2 + dy^2 = (u^2 + v^2)(du^2 + dv^2).
    const double pulled = second_blowdown_conformal_xy(k, xy.x, xy.y) * (u * u + v * v);
    worst = std::max({worst, std::abs(m.fiber.det() - u * u * v * v) / (u * u * v * v),
                      std::abs(pulled - m.conformal) / m.conformal,
                      std::abs(phi.phi1 - 0.5 * xy.x * xy.x) / phi.phi1,
                      std::abs(phi.phi2 - (-(xy.y + k * std::hypot(xy.x, xy.y)))) / (1.0 + std::abs(phi.phi2))});
  }
  return outcome(worst <= 1e-12, format("max relative deviation over 20 points %.3g", worst));
}

CheckOutcome check_exceptional_blowdown() {
  return table_outcome(exceptional_blowdown_table(1.0, 1.3, kScales));
}

CheckOutcome check_exceptional_blowdown_curvature(bool stated_sign) {
  double worst = 0.0;
  for (double u : {0.5, 1.0, 2.0}) {
    auto log_l = [](double a, double) { return std::log(a * a); };
    const double fd = -fd_laplacian(log_l, u, 0.7, 1e-3, {0.0, std::nullopt}) / (2.0 * u * u);
    const double K = exceptional_blowdown_curvature(u, 0.7) * (stated_sign ? -1.0 : 1.0);
    worst = std::max(worst, std::abs(K - fd) / std::abs(K));
  }
  return outcome(worst <= 1e-4, format("max relative error vs conformal FD %.3g", worst));
}

CheckOutcome check_pointed_limit() {
  const std::array<double, 3> shifts{10.0, 100.0, 1000.0};
  return table_outcome(pointed_limit_table(1.0, 0.5, shifts));
}

CheckOutcome check_pointed_limit_stated_diverges() {
  const std::array<double, 3> shifts{10.0, 100.0, 1000.0};
  const ConvergenceTable t = pointed_limit_table(1.0, 0.5, shifts, true);
  const bool diverges = t.rows.back().residual > t.rows.front().residual && t.rate > 1.5;
  return outcome(diverges, format("stated recombination residuals %.3g %.3g %.3g (rate %.3f)", t.rows[0].residual,
                                  t.rows[1].residual, t.rows[2].residual, t.rate));
}

CheckOutcome check_pointed_moments() {
  double worst = 0.0;
  for (double u : {0.0, 0.5, 1.5}) {
    for (double v : {-0.5, 0.0, 0.8}) {
      const PointedLimitSample s = pointed_limit_halfplane(1e6, u, v);
      worst = std::max({worst, std::abs(s.moments.phi1 - (v + v * u * u)), std::abs(s.moments.phi2 - 0.5 * u * u)});
    }
  }
  return outcome(worst <= 1e-5, format("max moment deviation at A = 1e6: %.3g", worst));
}

CheckOutcome check_halfplane_identification() {
  const InstantonParams hp = InstantonParams::half_plane();
  double worst = 0.0;
  for (double u : {0.0, 0.4, 1.0, 2.5}) {
    for (double v : {-1.0, 0.0, 0.5, 3.0}) {
      const PointedLimitSample s = pointed_limit_halfplane(10.0, u, v);
      const FiberMatrix f = fiber_matrix(hp, u, v);
      const FiberMatrix swapped{f.g22, f.g12, f.g11};
      worst = std::max({worst, fiber_gap(s.limit, swapped) / (1.0 + std::abs(f.g22)),
                        std::abs(s.conformal - conformal_factor(hp, u, v))});
      if (s.topology != FiberTopology::Cylinder) worst = 1.0;
    }
  }
  return outcome(worst <= 1e-12, format("max deviation %.3g", worst));
}

std::vector<Check> build_registry() {
  std::vector<Check> c;
  auto add = [&](std::string id, std::string suite, std::function<CheckOutcome()> fn, bool xfail = false) {
    c.push_back({std::move(id), std::move(suite), xfail, std::move(fn)});
  };
  add("numerics.root-examples", "numerics", check_roots);
  add("numerics.quadrature-2d-improper", "numerics", check_quadrature);
  add("numerics.ode-exponential", "numerics", check_ode);
  add("numerics.laplacian-order-2", "numerics", check_laplacian_order);
  add("numerics.power-law-fit", "numerics", check_fit);

  add("family.chart-roundtrip", "family", check_chart_roundtrip);
  add("family.moment-pde-order-2", "family", check_moment_pde_order);

  add("metrics.fiber-det-x2", "metrics", check_fiber_determinant);
  add("metrics.fiber-from-moments", "metrics", check_fiber_from_moments);
  add("metrics.collapsing-dichotomy", "metrics", check_collapsing_dichotomy);

  add("geodesics.polar-roundtrip", "geodesics", check_roundtrip);
  add("geodesics.polar-roundtrip-exceptional", "geodesics", check_exceptional_roundtrip);
  add("geodesics.eta-roundtrip", "geodesics", check_eta_roundtrip);
  add("geodesics.ode-shot", "geodesics", check_shooting);
  add("geodesics.eikonal", "geodesics", check_eikonal);
  add("geodesics.polar-coefficient-fd", "geodesics", check_polar_coefficient);

  add("curvature.gauss-vs-conformal-fd", "curvature", check_gauss_curvature);
  add("curvature.pseudo-volume-jacobian", "curvature", check_pseudo_volume);
  add("curvature.norm-volume-identity", "curvature", check_norm_identity);
  add("curvature.l2-ricci", "curvature", check_l2_ricci);
  add("curvature.energy-identity", "curvature", check_energy_identity);
  add("curvature.exceptional-energy-growth", "curvature", check_exceptional_energy_growth);
  add("curvature.scalar-flat", "curvature", check_scalar_flat);
  add("curvature.ricci-calibration", "curvature", check_ricci_calibration);
  add("curvature.riemann-lower-bound", "curvature", check_riemann_lower_bound);
  add("curvature.decay-k0", "curvature", [] {
    return check_decay(InstantonParams::generalized(0.0), {0.0, 0.3, 0.785, 1.2, 0.5 * kPi}, DecayQuantity::KSigma,
                       -3.0, 0.1);
  });
  add("curvature.decay-k05", "curvature", [] {
    return check_decay(InstantonParams::generalized(0.5), {kPi / 8, kPi / 4, 1.2}, DecayQuantity::KSigma, -2.0, 0.1);
  });
  add("curvature.decay-ric-k05", "curvature", [] {
    return check_decay(InstantonParams::generalized(0.5), {kPi / 4}, DecayQuantity::Ric, -2.0, 0.1);
  });
  add("curvature.decay-exceptional-axis", "curvature", [] {
    const CheckOutcome a =
        check_decay(InstantonParams::exceptional_taub_nut(), {0.5 * kPi}, DecayQuantity::KSigma, 0.0, 0.05);
    const CheckOutcome b = check_decay(InstantonParams::half_plane(), {0.5 * kPi}, DecayQuantity::KSigma, 0.0, 0.05);
    return outcome(a.ok && b.ok, "taub-nut " + a.detail + "half-plane " + b.detail);
  });
  add("curvature.exceptional-loci", "curvature", check_exceptional_loci);

  add("asymptotics.volume-quadrature", "asymptotics", check_volume_quadrature);
  add("asymptotics.volume-growth", "asymptotics", check_volume_growth);
  add("asymptotics.volume-bracket", "asymptotics", check_volume_bracket);
  add("asymptotics.volume-scaling", "asymptotics", check_volume_scaling);
  add("asymptotics.exceptional-ratio", "asymptotics", check_exceptional_ratio);
  add("asymptotics.approx-F-k0", "asymptotics", [] { return check_approx_F(0.0); }, true);
  add("asymptotics.approx-F-k05", "asymptotics", [] { return check_approx_F(0.5); }, true);
  add("asymptotics.approx-F-k09", "asymptotics", [] { return check_approx_F(0.9); });
  add("asymptotics.almost-distance-constant", "asymptotics", check_almost_distance_constant);
  add("asymptotics.almost-sphere-sandwich", "asymptotics", check_almost_sphere_sandwich);

  add("blowdown.conifold-conformal", "blowdown", check_conifold_conformal);
  add("blowdown.conifold-fiber-stated", "blowdown", check_conifold_fiber_stated, true);
  add("blowdown.conifold-fiber-measured", "blowdown", check_conifold_fiber_measured);
  add("blowdown.conifold-gauss", "blowdown", check_conifold_gauss);
  add("blowdown.conifold-ricci-stated", "blowdown", check_conifold_ricci, true);
  add("blowdown.conifold-scalar", "blowdown", check_conifold_scalar);
  add("blowdown.conifold-distance", "blowdown", check_conifold_distance);
  add("blowdown.power-geodesics", "blowdown", check_blowdown_geodesics);
  add("blowdown.second-limit", "blowdown", check_second_blowdown);
  add("blowdown.second-structure", "blowdown", check_second_blowdown_structure);
  add("blowdown.exceptional-limit", "blowdown", check_exceptional_blowdown);
  add("blowdown.exceptional-curvature", "blowdown", [] { return check_exceptional_blowdown_curvature(false); });
  add("blowdown.exceptional-curvature-stated-sign", "blowdown",
      [] { return check_exceptional_blowdown_curvature(true); }, true);
  add("blowdown.pointed-limit", "blowdown", check_pointed_limit);
  add("blowdown.pointed-limit-stated-diverges", "blowdown", check_pointed_limit_stated_diverges);
  add("blowdown.pointed-moments", "blowdown", check_pointed_moments);
  add("blowdown.halfplane-identification", "blowdown", check_halfplane_identification);
  return c;
}

}  // namespace

std::string_view to_string(CheckStatus status) noexcept {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::ExpectedFail: return "xfail";
  }
  return "?";
}

const std::vector<Check>& check_registry() {
  static const std::vector<Check> registry = build_registry();
  return registry;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const Check& c : check_registry()) {
    if (std::find(names.begin(), names.end(), c.suite) == names.end()) names.push_back(c.suite);
  }
  return names;
}

std::vector<CheckResult> run_suite(std::string_view suite) {
  const std::vector<std::string> names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown suite: " + std::string(suite));
  }
  std::vector<CheckResult> results;
  for (const Check& c : check_registry()) {
    if (suite != "all" && c.suite != suite) continue;
    CheckOutcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    CheckStatus status = o.ok ? CheckStatus::Pass : CheckStatus::Fail;
    if (!o.ok && c.expected_failure) status = CheckStatus::ExpectedFail;
    results.push_back({c.id, c.suite, status, std::move(o.detail)});
  }
  return results;
}

bool suite_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == CheckStatus::Fail; });
}

}  // namespace instanton
