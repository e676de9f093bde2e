#include <cmath>

#include "instanton/family.hpp"
#include "instanton/metrics.hpp"
#include "support.hpp"

using namespace instanton;
using testing::kSqrt2;

namespace {

const InstantonParams kStd = InstantonParams::generalized(0.0);
const InstantonParams kHalf = InstantonParams::generalized(0.5);
const InstantonParams kEtn = InstantonParams::exceptional_taub_nut();
const InstantonParams kHp = InstantonParams::half_plane();
const InstantonParams kFlat = InstantonParams::flat();

// G^-1 = J J^T / lambda with J the (u, v)-Jacobian of the moment map.
FiberMatrix fiber_oracle(const InstantonParams& p, double u, double v) {
  const double h = 1e-5 * (1.0 + u + std::abs(v));
  const MomentPair a = moment_map_uv(p, u + h, v), b = moment_map_uv(p, u - h, v);
  const MomentPair c = moment_map_uv(p, u, v + h), d = moment_map_uv(p, u, v - h);
  const double j11 = (a.phi1 - b.phi1) / (2 * h), j12 = (c.phi1 - d.phi1) / (2 * h);
  const double j21 = (a.phi2 - b.phi2) / (2 * h), j22 = (c.phi2 - d.phi2) / (2 * h);
  const double l = conformal_factor(p, u, v);
  return {(j11 * j11 + j12 * j12) / l, (j11 * j21 + j12 * j22) / l, (j21 * j21 + j22 * j22) / l};
}

}  // namespace

TEST_CASE("conformal factor") {
  for (double k : {-0.5, 0.0, 0.9}) {
    CHECK(conformal_factor(InstantonParams::generalized(k, 2.0 * kSqrt2), 0.0, 0.0) == doctest::Approx(1.0));
  }
  CHECK(conformal_factor(kHalf, 1.0, 1.0) == doctest::Approx(6.0));
  CHECK(conformal_factor(kEtn, 0.0, 7.0) == doctest::Approx(1.0));
  CHECK(conformal_factor(kHp, 2.0, -3.0) == doctest::Approx(5.0));
  CHECK(conformal_factor(kFlat, 2.0, -3.0) == 1.0);
}

TEST_CASE("fiber matrix values") {
  const FiberMatrix f = fiber_matrix(kStd, 1.0, 1.0);
  CHECK(f.g11 == doctest::Approx(5.0 / 3.0));
  CHECK(f.g12 == doctest::Approx(4.0 / 3.0));
  CHECK(f.g22 == doctest::Approx(5.0 / 3.0));
  CHECK(f.det() == doctest::Approx(1.0));

  const FiberMatrix h = fiber_matrix(kHp, 0.0, 3.0);
  CHECK(h.g11 == 0.0);
  CHECK(h.g12 == 0.0);
  CHECK(h.g22 == doctest::Approx(1.0));

  const FiberMatrix e = fiber_matrix(kEtn, 0.0, 3.0);
  CHECK(e.g11 == doctest::Approx(4.5));
  CHECK(e.g12 == 0.0);
  CHECK(e.g22 == 0.0);
}

TEST_CASE("fiber matrix matches the moment-map Jacobian") {
  for (const InstantonParams& p : {kStd, kHalf, InstantonParams::generalized(-0.8, 4.0), kEtn, kHp, kFlat}) {
    for (double u : {0.3, 1.0, 2.0}) {
      for (double v : {0.4, 1.2, 2.5}) {
        const FiberMatrix a = fiber_matrix(p, u, v);
        const FiberMatrix b = fiber_oracle(p, u, v);
        const double scale = 1.0 + std::abs(a.g11) + std::abs(a.g22);
        CHECK(std::abs(a.g11 - b.g11) < 1e-7 * scale);
        CHECK(std::abs(a.g12 - b.g12) < 1e-7 * scale);
        CHECK(std::abs(a.g22 - b.g22) < 1e-7 * scale);
      }
    }
  }
}

TEST_CASE("fiber determinant is x squared") {
  for (const InstantonParams& p : {kStd, kHalf, InstantonParams::generalized(0.3, 10.0), kEtn, kHp, kFlat}) {
    for (int i = 1; i <= 6; ++i) {
      for (int j = 1; j <= 6; ++j) {
        const double u = 0.45 * i, v = 0.6 * j;
        const double x = volumetric_x(p, u, v);
        CHECK(std::abs(fiber_matrix(p, u, v).det() - x * x) <= 1e-10 * x * x);
      }
    }
  }
}

TEST_CASE("fiber matrix is positive definite inside the chart") {
  for (const InstantonParams& p : {kHalf, kEtn, kHp}) {
    const auto ev = fiber_matrix(p, 0.7, 1.3).eigenvalues();
    CHECK(ev[0] > 0.0);
    CHECK(ev[0] <= ev[1]);
  }
}

TEST_CASE("volume density") {
  CHECK(volume_density(InstantonParams::generalized(0.0, 2.0), 1.0, 1.0) == doctest::Approx(3.0));
  CHECK(volume_density(kEtn, 1.0, 1.0) == doctest::Approx(1.0));
  for (const InstantonParams& p : {kStd, kHalf, kEtn, kHp, kFlat}) CHECK(volume_density(p, 0.0, 1.3) == 0.0);
}

TEST_CASE("metric block bundles both parts") {
  const Metric4Block b = metric_block(kHalf, 0.6, 0.9);
  CHECK(b.conformal_factor == conformal_factor(kHalf, 0.6, 0.9));
  CHECK(b.fiber.g12 == fiber_matrix(kHalf, 0.6, 0.9).g12);
}

TEST_CASE("collapsing directions") {
  CHECK(collapsing_direction_norms(kStd, 1.0, 1.0).collapsed_norm_sq == doctest::Approx(2.0 / 3.0));
  const CollapsingNorms o = collapsing_direction_norms(kHalf, 0.0, 0.0);
  CHECK(o.collapsed_norm_sq == 0.0);
  CHECK(o.complement_norm_sq == 0.0);
  // Limit along the diagonal at k = 0 is sqrt2 / M.
  CHECK(collapsing_direction_norms(kStd, 1e4, 1e4).collapsed_norm_sq == doctest::Approx(kSqrt2 / kStd.M()).epsilon(1e-6));
  CHECK_ERROR_CODE(collapsing_direction_norms(kEtn, 1.0, 1.0), WrongFamily);
}

TEST_CASE("collapsing norm dichotomy along the diagonal") {
  for (double k : {0.0, 0.3, 0.7}) {
    const InstantonParams p = InstantonParams::generalized(k);
    double prev_complement = 0.0;
    double max_collapsed = 0.0;
    for (double t : {1.0, 10.0, 100.0, 1000.0, 1e4}) {
      const CollapsingNorms n = collapsing_direction_norms(p, t, t);
      max_collapsed = std::max(max_collapsed, n.collapsed_norm_sq);
      CHECK(n.complement_norm_sq > prev_complement);
      prev_complement = n.complement_norm_sq;
    }
    CHECK(max_collapsed < 2.0);
    CHECK(prev_complement > 1e8);
  }
}
