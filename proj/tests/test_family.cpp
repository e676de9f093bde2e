#include <cmath>

#include "instanton/family.hpp"
#include "instanton/metrics.hpp"
#include "support.hpp"

using namespace instanton;
using testing::kPi;
using testing::kSqrt2;

namespace {

const InstantonParams kStd = InstantonParams::generalized(0.0);
const InstantonParams kHalf = InstantonParams::generalized(0.5);
const InstantonParams kEtn = InstantonParams::exceptional_taub_nut();
const InstantonParams kHp = InstantonParams::half_plane();
const InstantonParams kFlat = InstantonParams::flat();

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_ERROR_CODE(InstantonParams::generalized(1.0), InvalidParams);
  CHECK_ERROR_CODE(InstantonParams::generalized(-1.2), InvalidParams);
  CHECK_ERROR_CODE(InstantonParams::generalized(0.2, 0.0), InvalidParams);
  CHECK_ERROR_CODE(InstantonParams::generalized(0.2, -1.0), InvalidParams);
  CHECK_ERROR_CODE(parse_family("kerr"), InvalidParams);
  CHECK_ERROR_CODE(parse_chart("spherical"), InvalidArgument);
  CHECK(kStd.M() == doctest::Approx(kSqrt2));
  CHECK(parse_family("ETN") == Family::ExceptionalTN);
  CHECK(parse_chart(to_string(Chart::AlmostPolar)) == Chart::AlmostPolar);
}

TEST_CASE("params json round trip") {
  for (const InstantonParams& p : {kHalf, InstantonParams::generalized(-0.3, 7.0), kEtn, kHp, kFlat}) {
    CHECK(InstantonParams::from_json(p.to_json()) == p);
  }
  CHECK(InstantonParams::from_json(R"({"family":"generalized","k":0.25})") == InstantonParams::generalized(0.25));
  CHECK_ERROR_CODE(InstantonParams::from_json(R"({"family":"exceptional-taub-nut","M":3})"), InvalidParams);
  CHECK_ERROR_CODE(InstantonParams::from_json("not json"), InvalidParams);
  CHECK_ERROR_CODE(InstantonParams::from_json(R"({"family":"generalized","k":2})"), InvalidParams);
}

TEST_CASE("volumetric and quadratic charts") {
  CHECK(xy_to_uv(kStd, 0.0, 0.0).u == 0.0);
  CHECK(xy_to_uv(kStd, 0.0, 0.0).v == 0.0);
  // (1,1) -> (1,0) under uv_to_xy, so (1,0) pulls back to (1,1).
  const UV one = xy_to_uv(kStd, 1.0, 0.0);
  CHECK(one.u == doctest::Approx(1.0));
  CHECK(one.v == doctest::Approx(1.0));
  const XY xy = uv_to_xy(kStd, 1.0, 1.0);
  CHECK(xy.x == doctest::Approx(1.0));
  CHECK(xy.y == doctest::Approx(0.0));

  const UV etn = xy_to_uv(kEtn, 0.0, 2.0);
  CHECK(etn.u == doctest::Approx(2.0 * kSqrt2));
  CHECK(etn.v == 0.0);
  const XY back = uv_to_xy(kEtn, 2.0, 0.0);
  CHECK(back.x == 0.0);
  CHECK(back.y == doctest::Approx(1.0));

  CHECK_ERROR_CODE(xy_to_uv(kStd, -1.0, 0.0), InvalidArgument);
  CHECK_ERROR_CODE(xy_to_uv(kHp, 1.0, 0.0), WrongFamily);
}

TEST_CASE("chart round trip is exact to rounding") {
  for (const InstantonParams& p : {kStd, kHalf, InstantonParams::generalized(-0.7, 3.0), kEtn}) {
    for (double x : {0.0, 1e-8, 0.5, 3.0, 1e4}) {
      for (double y : {-1e4, -2.0, 0.0, 0.3, 5.0}) {
        const UV uv = xy_to_uv(p, x, y);
        const XY back = uv_to_xy(p, uv.u, uv.v);
        CHECK(back.x == doctest::Approx(x).scale(1.0 + std::abs(y)).epsilon(1e-13));
        CHECK(back.y == doctest::Approx(y).scale(1.0 + x).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("moment maps") {
  const MomentPair a = moment_map_uv(kStd, 1.0, 1.0);
  CHECK(a.phi1 == doctest::Approx(kSqrt2));
  CHECK(a.phi2 == doctest::Approx(kSqrt2));
  for (const InstantonParams& p : {kStd, kHalf, kEtn, kHp, kFlat}) {
    const MomentPair o = moment_map_uv(p, 0.0, 0.0);
    CHECK(o.phi1 == 0.0);
    CHECK(o.phi2 == 0.0);
  }
  const MomentPair hp = moment_map(kHp, {Chart::XY, 1.0, 1.0});
  CHECK(hp.phi1 == doctest::Approx(0.5));
  CHECK(hp.phi2 == doctest::Approx(2.0));
  // The (x, y) and (u, v) forms agree.
  const XY xy = uv_to_xy(kHalf, 0.7, 1.9);
  const MomentPair m1 = moment_map_uv(kHalf, 0.7, 1.9);
  const MomentPair m2 = moment_map_xy(kHalf, xy.x, xy.y);
  CHECK(m1.phi1 == doctest::Approx(m2.phi1));
  CHECK(m1.phi2 == doctest::Approx(m2.phi2));
}

TEST_CASE("moment map inverse") {
  for (const InstantonParams& p : {kStd, kHalf, InstantonParams::generalized(-0.4, 5.0), kEtn}) {
    for (double u : {0.0, 0.3, 2.0}) {
      for (double v : {0.0, 0.8, 4.0}) {
        const UV back = uv_from_moment(p, moment_map_uv(p, u, v));
        CHECK(back.u == doctest::Approx(u).scale(1.0).epsilon(1e-10));
        CHECK(back.v == doctest::Approx(v).scale(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("moment functions solve the moment PDE") {
  const MomentPdeResidual r = moment_pde_residual(kHalf, 1.0, 1.0, 1e-4);
  CHECK(std::abs(r.res1) < 1e-6);
  CHECK(std::abs(r.res2) < 1e-6);
  const MomentPdeResidual h = moment_pde_residual(kHp, 2.0, -1.0, 1e-4);
  CHECK(std::abs(h.res1) < 1e-6);
  CHECK(std::abs(h.res2) < 1e-6);
  const MomentPdeResidual f = moment_pde_residual(kFlat, 0.7, 0.2, 1e-3);
  CHECK(std::abs(f.res1) < 1e-9);
  CHECK(std::abs(f.res2) < 1e-9);
  CHECK_ERROR_CODE(moment_pde_residual(kHalf, 1e-4, 1.0, 1e-3), BoundaryTooClose);
}

TEST_CASE("moment PDE residual converges at second order") {
  for (const InstantonParams& p : {kHalf, InstantonParams::generalized(-0.6, 3.0), kEtn, kHp}) {
    auto size = [&](double h) {
      const MomentPdeResidual r = moment_pde_residual(p, 1.0, 0.5, h);
      return std::max(std::abs(r.res1), std::abs(r.res2));
    };
    if (size(2e-2) < 1e-10) {
      CHECK(size(1e-2) < 1e-10);
      continue;
    }
    const double ratio = size(1e-2) / size(2e-2);
    CHECK(ratio >= 0.2);
    CHECK(ratio <= 0.3);
  }
}

TEST_CASE("almost-polar coordinates") {
  const AlmostPolar a = almost_polar_from_uv(kStd, 1.0, 0.0);
  CHECK(a.R_tilde == doctest::Approx(1.0 / kSqrt2));
  CHECK(a.psi == 0.0);
  const AlmostPolar b = almost_polar_from_uv(kEtn, 0.0, 5.0);
  CHECK(b.R_tilde == doctest::Approx(5.0));
  CHECK(b.psi == doctest::Approx(kPi / 2));
  const AlmostPolar c = almost_polar_from_uv(kEtn, kSqrt2, 0.0);
  CHECK(c.R_tilde == doctest::Approx(1.0));
  CHECK(c.psi == 0.0);
  const AlmostPolar o = almost_polar_from_uv(kHalf, 0.0, 0.0);
  CHECK(o.R_tilde == 0.0);
  CHECK(o.psi == 0.0);

  for (const InstantonParams& p : {kHalf, kEtn}) {
    for (double u : {0.2, 1.5}) {
      for (double v : {0.4, 3.0}) {
        const AlmostPolar ap = almost_polar_from_uv(p, u, v);
        const UV back = uv_from_almost_polar(p, ap.R_tilde, ap.psi);
        CHECK(back.u == doctest::Approx(u));
        CHECK(back.v == doctest::Approx(v));
      }
    }
  }
}

TEST_CASE("volumetric x is the fiber parallelogram volume") {
  for (const InstantonParams& p : {kStd, kHalf, kEtn, kHp, kFlat}) {
    for (double u : {0.1, 1.0, 2.7}) {
      for (double v : {0.2, 1.0, 3.3}) {
        CHECK(volumetric_x(p, u, v) == doctest::Approx(std::sqrt(fiber_matrix(p, u, v).det())).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("chart point validation") {
  CHECK_ERROR_CODE(validate_chart_point(kHalf, {Chart::UV, -1.0, 1.0}), InvalidArgument);
  CHECK_ERROR_CODE(validate_chart_point(kHalf, {Chart::UV, 1.0, -1.0}), InvalidArgument);
  CHECK_ERROR_CODE(validate_chart_point(kHalf, {Chart::GeodesicPolar, 1.0, 2.0}), InvalidArgument);
  CHECK_ERROR_CODE(validate_chart_point(kHalf, {Chart::XY, 1.0, std::nan("")}), InvalidArgument);
  validate_chart_point(kHp, {Chart::UV, 1.0, -1.0});
  validate_chart_point(kHp, {Chart::GeodesicPolar, 1.0, -1.0});
}
