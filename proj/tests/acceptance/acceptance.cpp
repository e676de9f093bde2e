// One line per acceptance criterion. Exits nonzero on any failure unless --report is given.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "instanton/asymptotics.hpp"
#include "instanton/blowdown.hpp"
#include "instanton/curvature.hpp"
#include "instanton/geodesics.hpp"
#include "instanton/metrics.hpp"

using namespace instanton;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    ok = ok && cond;
    if (!detail.empty()) detail += "; ";
    detail += (cond ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<InstantonParams> families() {
  return {InstantonParams::generalized(0.0), InstantonParams::generalized(0.5), InstantonParams::generalized(0.9),
          InstantonParams::generalized(-0.4, 3.0), InstantonParams::exceptional_taub_nut(),
          InstantonParams::half_plane(), InstantonParams::flat()};
}

const std::array<double, 7> kEtas{0.0, 0.15, 0.45, 0.785, 1.05, 1.35, 0.5 * kPi};

Verdict criterion1() {
  Verdict v;
  for (double k : {0.3, 0.5, 1.0 / kSqrt2, 0.9}) {
    const auto start = std::chrono::steady_clock::now();
    const EnergyReport r = l2_ricci(InstantonParams::generalized(k));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double exact = 4.0 * kPi * kPi * k * k / (1.0 - k * k);
    const double rel = std::abs(r.quadrature.value - exact) / exact;
    v.require(rel <= 1e-6 && secs <= 5.0, fmt("k=%.4g rel %.2g in %.3gs", k, rel, secs));
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  const InstantonParams p = InstantonParams::generalized(0.0);
  double pseudo = 0.0, ric = 0.0;
  for (double u : {0.3, 0.8, 1.5, 2.5, 4.0}) {
    for (double w : {0.3, 0.8, 1.5, 2.5, 4.0}) {
      pseudo = std::max(pseudo, std::abs(ricci_pseudo_volume_density(p, u, w)));
      ric = std::max(ric, curvature4_fd(p, u, w).ricci_norm);
    }
  }
  v.require(pseudo == 0.0, fmt("max |pseudo-volume| %.3g", pseudo));
  v.require(ric <= 1e-4, fmt("max FD |Ric| %.3g", ric));
  const double rm = *l2_riemann(p);
  const double rel = std::abs(rm - 32.0 * kPi * kPi) / (32.0 * kPi * kPi);
  v.require(rel <= 4.0 * std::numeric_limits<double>::epsilon(), fmt("|Rm|^2 energy %.17g (rel %.2g)", rm, rel));
  return v;
}

Verdict criterion3() {
  Verdict v;
  const std::array<double, 4> radii{50.0, 100.0, 200.0, 400.0};
  for (double k : {0.0, 0.5, 0.9}) {
    const double e = volume_growth_exponent(InstantonParams::generalized(k), radii).exponent;
    v.require(std::abs(e - 3.0) <= 0.05, fmt("k=%g exponent %.4f", k, e));
  }
  const InstantonParams etn = InstantonParams::exceptional_taub_nut();
  const double e = volume_growth_exponent(etn, radii).exponent;
  v.require(std::abs(e - 4.0) <= 0.05, fmt("exceptional exponent %.4f", e));
  double worst = 0.0;
  for (const InstantonParams& p : {InstantonParams::generalized(0.0), InstantonParams::generalized(0.5),
                                   InstantonParams::generalized(0.9), etn}) {
    for (double R : {1.0, 50.0, 100.0, 200.0, 400.0}) {
      const double closed = almost_ball_volume(p, R);
      worst = std::max(worst, std::abs(almost_ball_volume_quadrature(p, R).value - closed) / closed);
    }
  }
  v.require(worst <= 1e-8, fmt("max quadrature rel error %.2g", worst));
  const double unit = almost_ball_volume_quadrature(etn, 1.0).value;
  v.require(std::abs(unit - 0.5 * kPi * kPi) / (0.5 * kPi * kPi) <= 1e-8, fmt("exceptional Vol AB(1) %.12g", unit));
  return v;
}

Verdict criterion4() {
  Verdict v;
  const std::array<double, 4> radii{1e3, 1e4, 1e5, 1e6};
  auto worst_exponent = [&](const InstantonParams& p, std::vector<double> etas, double target) {
    double worst = 0.0;
    for (double eta : etas) {
      const double e = decay_rate_along_geodesic(p, eta, DecayQuantity::KSigma, radii).exponent;
      worst = std::max(worst, std::abs(e - target));
    }
    return worst;
  };
  const double k0 = worst_exponent(InstantonParams::generalized(0.0), {kEtas.begin(), kEtas.end()}, -3.0);
  v.require(k0 <= 0.1, fmt("k=0 max |exponent + 3| %.3g over 7 angles", k0));
  const double k5 = worst_exponent(InstantonParams::generalized(0.5), {0.2, 0.45, 0.785, 1.05, 1.35}, -2.0);
  v.require(k5 <= 0.1, fmt("k=0.5 max |exponent + 2| %.3g over 5 angles", k5));
  const double etn = worst_exponent(InstantonParams::exceptional_taub_nut(), {0.5 * kPi}, 0.0);
  v.require(etn <= 0.05, fmt("exceptional axis |exponent| %.3g", etn));
  const InstantonParams hp = InstantonParams::half_plane();
  double off_axis = 0.0;
  for (double R : radii) off_axis = std::max(off_axis, std::abs(point_from_polar(hp, R, 0.5 * kPi).u));
  const double h = worst_exponent(hp, {0.5 * kPi}, 0.0);
  v.require(h <= 0.05 && off_axis == 0.0, fmt("half-plane x=0 |exponent| %.3g", h));
  return v;
}

Verdict criterion5() {
  Verdict v;
  double worst = 0.0;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    for (double R : {0.1, 1.0, 10.0, 100.0}) {
      for (double eta : kEtas) {
        const GeodesicRecord r = point_from_polar(p, R, eta);
        worst = std::max(worst, std::abs(distance(p, r.u, r.v) - R) / R);
      }
    }
  }
  v.require(worst <= 1e-8, fmt("round-trip max rel error %.2g", worst));
  double geo = 0.0, speed = 0.0;
  for (double k : {0.0, 0.5, 0.9}) {
    for (double eta : {0.2, 0.785, 1.35}) {
      for (const ShotSample& s : geodesic_shoot(InstantonParams::generalized(k), eta, 20.0)) {
        geo = std::max(geo, s.geodesic_residual);
        if (s.t > 0.0) speed = std::max(speed, std::abs(s.distance - s.t) / s.t);
      }
    }
  }
  v.require(geo <= 1e-8, fmt("shot geodesic residual %.2g", geo));
  v.require(speed <= 1e-6, fmt("shot speed error %.2g", speed));
  return v;
}

Verdict criterion6() {
  Verdict v;
  double worst = 0.0;
  for (const InstantonParams& p : families()) {
    for (double eta : {0.0, 0.4, 0.785, 1.2, 0.5 * kPi}) {
      for (double u : {0.25, 0.6, 1.0, 1.8, 3.0}) {
        for (double w : {0.25, 0.6, 1.0, 1.8, 3.0}) {
          worst = std::max(worst, eikonal_residual(p, eta, u, w, default_fd_step(u, w)));
        }
      }
    }
  }
  v.require(worst <= 1e-6, fmt("max eikonal residual %.2g", worst));
  return v;
}

Verdict criterion7() {
  Verdict v;
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    double lo = 1e300, hi = 0.0;
    for (double R : {1e2, 1e3, 1e4}) {
      for (int i = 1; i < 100; ++i) {
        const double eta = 0.5 * kPi * i / 100.0;
        const double ratio = radius_from_log_F(p, std::log(approx_F(p, R, eta).value), eta) / R;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    v.require(lo >= 0.999 && hi <= 2.2, fmt("k=%g R(F~)/R in [%.4f, %.4f]", k, lo, hi));
  }
  for (double k : {0.0, 0.5, 0.9}) {
    const InstantonParams p = InstantonParams::generalized(k);
    std::array<double, 3> c{};
    const std::array<double, 3> radii{1e2, 1e3, 1e4};
    for (int i = 0; i < 3; ++i) c[i] = almost_distance_constant(p, radii[i]);
    const double spread = *std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end());
    v.require(spread <= 1.5, fmt("k=%g C = %.4f, %.4f, %.4f", k, c[0], c[1], c[2]));
  }
  double lo = 1e300, hi = 0.0;
  for (double Rt : {1e2, 1e3}) {
    for (const AlmostSphereSample& s : almost_sphere_samples(InstantonParams::exceptional_taub_nut(), Rt, 60)) {
      lo = std::min(lo, s.R / Rt);
      hi = std::max(hi, s.R / Rt);
    }
  }
  v.require(lo >= 1.0 - 1e-12 && hi <= 2.7, fmt("exceptional R/R~ in [%.6f, %.6f]", lo, hi));
  return v;
}

Verdict criterion8() {
  Verdict v;
  double gauss = 0.0, pseudo = 0.0, det = 0.0, order = 0.0;
  for (const InstantonParams& p : families()) {
    for (double u : {0.3, 0.9, 1.7, 2.6}) {
      for (double w : {0.35, 0.8, 1.6, 2.4}) {
        const double K = polytope_curvature(p, u, w);
        const double fd = polytope_curvature_fd(p, u, w, 1e-3 * (1.0 + std::hypot(u, w)));
        gauss = std::max(gauss, std::abs(K - fd) / (std::abs(K) + 1e-5));
        pseudo = std::max(pseudo, std::abs(ricci_pseudo_volume_density(p, u, w) -
                                           ricci_pseudo_volume_density_fd(p, u, w, 1e-4)));
        const double x = volumetric_x(p, u, w);
        det = std::max(det, std::abs(fiber_matrix(p, u, w).det() - x * x) / (x * x));
      }
    }
    auto residual = [&](double h) {
      const MomentPdeResidual r = moment_pde_residual(p, 1.2, 0.7, h);
      return std::max(std::abs(r.res1), std::abs(r.res2));
    };
    const double a = residual(2e-2), b = residual(1e-2), c = residual(5e-3);
    if (a > 1e-11) order = std::max({order, std::abs(b / a - 0.25), std::abs(c / b - 0.25)});
  }
  v.require(gauss <= 1e-4, fmt("Gauss curvature vs FD %.2g", gauss));
  v.require(pseudo <= 1e-5, fmt("pseudo-volume vs FD Jacobian %.2g", pseudo));
  v.require(det <= 1e-10, fmt("det vs x^2 %.2g", det));
  v.require(order <= 0.05, fmt("moment PDE halving ratio off 1/4 by %.3g", order));
  return v;
}

Verdict criterion9() {
  Verdict v;
  const std::array<double, 3> scales{1e2, 1e3, 1e4};
  auto table = [&](const ConvergenceTable& t) {
    v.require(t.monotone && t.converging, t.name + fmt(" residual %.2g -> %.2g (rate %.3f)", t.rows.front().residual,
                                                       t.rows.back().residual, t.rate));
  };
  for (double k : {0.0, 0.5}) {
    table(conifold_conformal_table(k, 1.0, 1.3, scales));
    table(conifold_fiber_table(k, 1.0, 1.3, scales, 0.25));
    table(second_blowdown_table(k, 1.0, 1.3, scales));
  }
  table(exceptional_blowdown_table(1.0, 1.3, scales));
  table(pointed_limit_table(1.0, 0.5, scales));

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coord(0.4, 2.0);
  double ric = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double u = coord(rng), w = coord(rng);
    const FdCurvature fd = conifold_ricci_fd(0.5, u, w);
    const ConifoldCurvatures stated = conifold_curvatures(0.5, u, w);
    for (int j = 0; j < 3; ++j) ric = std::max(ric, std::abs(fd.ricci[j * 4] - stated.ric_diag[j]));
  }
  v.require(ric <= 1e-4, fmt("conifold Ric diagonal vs stated %.3g", ric));

  const InstantonParams hp = InstantonParams::half_plane();
  double ident = 0.0;
  for (double u : {0.0, 0.4, 1.0, 2.5}) {
    for (double w : {-1.0, 0.0, 0.5, 3.0}) {
      const PointedLimitSample s = pointed_limit_halfplane(10.0, u, w);
      const FiberMatrix f = fiber_matrix(hp, u, w);
      ident = std::max({ident, std::abs(s.limit.g11 - f.g22), std::abs(s.limit.g12 - f.g12),
                        std::abs(s.limit.g22 - f.g11), std::abs(s.conformal - conformal_factor(hp, u, w))});
    }
  }
  v.require(ident <= 1e-12, fmt("pointed limit vs half-plane under swap %.2g", ident));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const bool report = argc > 1 && std::strcmp(argv[1], "--report") == 0;
  const std::array<std::function<Verdict()>, 9> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.ok) ++failed;
    std::printf("criterion %zu: %s: %s\n", i + 1, v.ok ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return report || failed == 0 ? 0 : 1;
}
