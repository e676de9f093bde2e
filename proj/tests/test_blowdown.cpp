#include <array>
#include <cmath>

#include "instanton/blowdown.hpp"
#include "instanton/numerics.hpp"
#include "instanton/metrics.hpp"
#include "support.hpp"

using namespace instanton;
using testing::kSqrt2;

namespace {

const std::array<double, 3> kScales{1e2, 1e3, 1e4};
const std::array<double, 3> kShifts{10.0, 100.0, 1000.0};

double gap(const FiberMatrix& a, const FiberMatrix& b) {
  return std::max({std::abs(a.g11 - b.g11), std::abs(a.g12 - b.g12), std::abs(a.g22 - b.g22)});
}

}  // namespace

TEST_CASE("conifold metric") {
  const ConifoldMetric m = conifold_metric(0.0, 1.0, 1.0);
  CHECK(m.conformal == doctest::Approx(2.0));
  CHECK(m.fiber == doctest::Approx(1.0));
  CHECK(conifold_metric(0.4, 0.0, 2.0).fiber == 0.0);
  CHECK(conifold_metric(0.4, 2.0, 0.0).fiber == 0.0);
  CHECK_ERROR_CODE(conifold_metric(1.0, 1.0, 1.0), InvalidParams);
}

TEST_CASE("conifold curvatures") {
  const ConifoldCurvatures z = conifold_curvatures(0.0, 1.3, 0.4);
  CHECK(z.K_sigma == 0.0);
  CHECK(z.ric_diag[2] == 0.0);
  for (double k : {0.3, -0.6}) {
    for (double u : {0.5, 2.0}) {
      const double K = conifold_curvatures(k, u, 1.1).K_sigma;
      CHECK(conifold_curvature_fd(k, u, 1.1, 2e-4) == doctest::Approx(K).epsilon(1e-4));
    }
  }
}

TEST_CASE("conifold 3-metric through the finite-difference oracle") {
  // k = 0 is flat.
  const FdCurvature flat = conifold_ricci_fd(0.0, 1.0, 1.3);
  for (double r : flat.ricci) CHECK(std::abs(r) < 1e-6);
  // The stated Ricci diagonal does not match the metric.
  const FdCurvature fd = conifold_ricci_fd(0.5, 1.0, 1.3);
  const ConifoldCurvatures stated = conifold_curvatures(0.5, 1.0, 1.3);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(fd.ricci[j * 4] - stated.ric_diag[j]));
  CHECK(worst > 1e-2);
  CHECK(fd.dim == 3);
  CHECK_ERROR_CODE(conifold_ricci_fd(0.5, 1e-3, 1.0), BoundaryTooClose);
}

TEST_CASE("conifold convergence tables") {
  CHECK(conifold_conformal_table(0.5, 1.0, 1.3, kScales).converging);
  CHECK(conifold_conformal_table(0.5, 1.0, 1.3, kScales).rate == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(conifold_fiber_table(0.5, 1.0, 1.3, kScales, 0.5).converging);
  CHECK_FALSE(conifold_fiber_table(0.5, 1.0, 1.3, kScales, 0.25).converging);
}

TEST_CASE("second blowdown") {
  const BlowdownMetric4 m = second_blowdown_metric(0.0, 1.5, 0.7);
  CHECK(m.fiber.g11 == doctest::Approx(1.5 * 1.5 * 0.7 * 0.7));
  CHECK(m.fiber.g12 == 0.0);
  CHECK(m.fiber.g22 == doctest::Approx(1.0));
  CHECK(m.fiber.det() == doctest::Approx(1.5 * 1.5 * 0.7 * 0.7));
  for (double k : {-0.4, 0.3}) {
    const BlowdownMetric4 g = second_blowdown_metric(k, 0.8, 1.9);
    CHECK(g.fiber.det() == doctest::Approx(0.8 * 0.8 * 1.9 * 1.9));
  }
  const ConvergenceTable t = second_blowdown_table(0.5, 1.0, 1.3, kScales);
  CHECK(t.converging);
  CHECK(t.monotone);
}

TEST_CASE("blowdown distance and geodesics") {
  CHECK(blowdown_distance(0.3, 0.0, 0.0) == 0.0);
  for (double k : {0.0, 0.5}) {
    const Gradient2 g = fd_gradient([&](double a, double b) { return blowdown_distance(k, a, b); }, 0.9, 1.4, 1e-4);
    CHECK((g.dx * g.dx + g.dy * g.dy) / conifold_metric(k, 0.9, 1.4).conformal == doctest::Approx(1.0));
    const double ratio = std::sqrt((1.0 - k) / (1.0 + k));
    for (double t : {0.5, 2.0, 9.0}) {
      const UV p = blowdown_geodesic(k, 1.0, 0.7, t);
      CHECK(p.v / std::pow(p.u, ratio) == doctest::Approx(0.7));
    }
  }
  CHECK_ERROR_CODE(blowdown_geodesic(0.2, 1.0, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("exceptional blowdown") {
  const BlowdownMetric4 m = exceptional_blowdown_metric(1.0, 0.0);
  CHECK(m.conformal == doctest::Approx(1.0));
  CHECK(m.fiber.g11 == 0.0);
  CHECK(m.fiber.g12 == 0.0);
  CHECK(m.fiber.g22 == doctest::Approx(0.5));
  CHECK(exceptional_blowdown_curvature(1.0, 3.0) == doctest::Approx(1.0));
  CHECK(exceptional_blowdown_curvature(2.0, 0.0) == doctest::Approx(1.0 / 16.0));
  const double fd = -fd_laplacian([](double a, double) { return std::log(a * a); }, 2.0, 0.0, 1e-3) / (2.0 * 4.0);
  CHECK(exceptional_blowdown_curvature(2.0, 0.0) == doctest::Approx(fd).epsilon(1e-5));
  CHECK_ERROR_CODE(exceptional_blowdown_metric(0.0, 1.0), SingularAxis);
  CHECK_ERROR_CODE(exceptional_blowdown_curvature(0.0, 1.0), SingularAxis);
  CHECK(exceptional_blowdown_table(1.0, 1.3, kScales).converging);
}

TEST_CASE("pointed limit at the exceptional locus") {
  for (double A : {1.0, 10.0, 1e3}) {
    const PointedLimitSample s = pointed_limit_halfplane(A, 0.0, 0.0);
    CHECK(s.limit.g11 == 1.0);
    CHECK(s.limit.g12 == 0.0);
    CHECK(s.limit.g22 == 0.0);
    CHECK(s.residual == doctest::Approx(0.0));
    CHECK(s.topology == FiberTopology::Cylinder);
  }
  const PointedLimitSample far = pointed_limit_halfplane(1e6, 0.7, -0.4);
  CHECK(far.moments.phi1 == doctest::Approx(-0.4 - 0.4 * 0.49).epsilon(1e-5));
  CHECK(far.moments.phi2 == doctest::Approx(0.5 * 0.49));
  CHECK(pointed_limit_table(1.0, 0.5, kShifts).converging);
  CHECK_ERROR_CODE(pointed_limit_halfplane(0.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("stated recombination diverges") {
  const ConvergenceTable t = pointed_limit_table(1.0, 0.5, kShifts, true);
  CHECK_FALSE(t.converging);
  CHECK(t.rate > 1.5);
  CHECK(pointed_limit_halfplane_as_stated(1e3, 1.0, 0.5).residual > 1e4);
}

TEST_CASE("pointed limit is the half-plane instanton with indices swapped") {
  const InstantonParams hp = InstantonParams::half_plane();
  for (double u : {0.0, 0.5, 2.0}) {
    for (double v : {-1.0, 0.0, 1.5}) {
      const PointedLimitSample s = pointed_limit_halfplane(10.0, u, v);
      const FiberMatrix f = fiber_matrix(hp, u, v);
      CHECK(gap(s.limit, FiberMatrix{f.g22, f.g12, f.g11}) <= 1e-12 * (1.0 + f.g22));
      CHECK(s.conformal == doctest::Approx(conformal_factor(hp, u, v)));
    }
  }
}

TEST_CASE("convergence table bookkeeping") {
  const ConvergenceTable down = make_table("down", {{10, 1.0}, {100, 0.1}, {1000, 0.01}});
  CHECK(down.monotone);
  CHECK(down.converging);
  CHECK(down.rate == doctest::Approx(-1.0));
  const ConvergenceTable flat = make_table("flat", {{10, 1.0}, {100, 0.99}, {1000, 0.98}});
  CHECK(flat.monotone);
  CHECK_FALSE(flat.converging);
  const ConvergenceTable bump = make_table("bump", {{10, 1.0}, {100, 2.0}, {1000, 0.01}});
  CHECK_FALSE(bump.monotone);
  CHECK_FALSE(bump.converging);
  CHECK(std::string(to_string(FiberTopology::Torus)) == "torus");
}
