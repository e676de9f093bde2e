#include "cli/app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli/contour.hpp"
#include "cli/output.hpp"
#include "instanton/asymptotics.hpp"
#include "instanton/blowdown.hpp"
#include "instanton/curvature.hpp"
#include "instanton/error.hpp"
#include "instanton/geodesics.hpp"
#include "instanton/metrics.hpp"
#include "instanton/verify.hpp"
#include "instanton/version.hpp"

namespace instanton::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

struct BadArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationFailed {};

struct Common {
  std::string family = "generalized";
  std::optional<double> M;
  std::optional<double> k;
  std::optional<double> tol;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c, const std::vector<std::string>& formats) {
  cmd->add_option("--family", c.family, "generalized | exceptional-taub-nut | half-plane | flat")
      ->capture_default_str();
  cmd->add_option("--M", c.M, "scale of the generalized family (default sqrt 2)");
  cmd->add_option("--k", c.k, "chirality number, |k| < 1 (default 0)");
  cmd->add_option("--tol", c.tol, "absolute and relative tolerance for quadrature and ODE work");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  c.format = formats.front();
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
}

InstantonParams make_params(const Common& c) {
  const Family family = parse_family(c.family);
  if (family == Family::GeneralizedTN) {
    return InstantonParams::generalized(c.k.value_or(0.0), c.M.value_or(InstantonParams::kStandardScale));
  }
  Json j{{"family", c.family}};
  if (c.M) j["M"] = *c.M;
  if (c.k) j["k"] = *c.k;
  return InstantonParams::from_json(j.dump());
}

Tolerance make_tolerance(const Common& c, Tolerance fallback = {}) {
  if (!c.tol) return fallback;
  if (!(*c.tol > 0.0)) throw BadArgument("--tol must be positive");
  return {*c.tol, *c.tol, std::max(fallback.max_iter, 400)};
}

Json params_json(const InstantonParams& p) { return Json::parse(p.to_json()); }

XY xy_of(const InstantonParams& p, double u, double v) {
  return p.uses_xy_chart() ? XY{u, v} : uv_to_xy(p, u, v);
}

// Quantities that are undefined at a point (axis, origin, wrong family) become null.
template <class F>
Json or_null(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return nullptr;
  }
}

Json table_json(const ConvergenceTable& t) {
  Json rows = Json::array();
  for (const ResidualRow& r : t.rows) rows.push_back({{"parameter", r.parameter}, {"residual", r.residual}});
  return {{"name", t.name}, {"rows", rows}, {"rate", t.rate}, {"monotone", t.monotone}, {"converging", t.converging}};
}

// ---- eval ----

struct EvalOptions {
  Common c;
  std::string chart = "uv";
  std::vector<double> point;
};

void cmd_eval(const EvalOptions& o, std::ostream& out) {
  const InstantonParams p = make_params(o.c);
  if (o.point.size() != 2) throw BadArgument("--point takes two numbers, e.g. --point 1,1");
  const ChartPoint input{parse_chart(o.chart), o.point[0], o.point[1]};
  const ChartPoint uvp = convert(p, input, Chart::UV, make_tolerance(o.c));
  const double u = uvp.c1, v = uvp.c2;
  const XY xy = xy_of(p, u, v);
  const MomentPair phi = moment_map_uv(p, u, v);
  const FiberMatrix G = fiber_matrix(p, u, v);
  const RicciPotentials rp = ricci_potentials(p, u, v);

  Json j;
  j["version"] = version();
  j["params"] = params_json(p);
  j["input"] = {{"chart", to_string(input.chart)}, {"point", {input.c1, input.c2}}};
  j["uv"] = {u, v};
  j["xy"] = {xy.x, xy.y};
  j["moment"] = {phi.phi1, phi.phi2};
  j["volumetric_x"] = volumetric_x(p, u, v);
  j["conformal_factor"] = conformal_factor(p, u, v);
  j["fiber_matrix"] = {{"g11", G.g11}, {"g12", G.g12}, {"g22", G.g22}, {"det", G.det()}};
  j["volume_density"] = volume_density(p, u, v);
  j["gauss_curvature"] = polytope_curvature(p, u, v);
  j["ricci_potentials"] = {rp.r1, rp.r2};
  j["ricci_norm"] = ricci_norm(p, u, v);
  j["ricci_pseudo_volume_density"] = ricci_pseudo_volume_density(p, u, v);
  j["geodesic_polar"] = or_null([&]() -> Json {
    const PolarLocation pl = polar_from_uv(p, u, v);
    return {{"R", pl.R}, {"eta", pl.eta}};
  });
  j["almost_distance"] = or_null([&]() -> Json { return almost_distance(p, u, v); });
  if (p.is_generalized()) {
    const CollapsingNorms n = collapsing_direction_norms(p, u, v);
    j["collapsing_norms"] = {{"collapsed", n.collapsed_norm_sq}, {"complement", n.complement_norm_sq}};
  }
  out << j.dump(2) << '\n';
}

// ---- geodesic ----

struct GeodesicOptions {
  Common c;
  std::vector<double> eta{0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2};
  double R = 5.0;
  int samples = 51;
  bool shoot = false;
};

struct TrajectoryRow {
  double eta, t, u, v, distance, residual;
};

void cmd_geodesic(const GeodesicOptions& o, std::ostream& out) {
  const InstantonParams p = make_params(o.c);
  if (!(o.R > 0.0)) throw BadArgument("--R must be positive");
  if (o.samples < 2) throw BadArgument("--samples must be at least 2");
  const Tolerance tol = make_tolerance(o.c, {1e-12, 1e-12, 400});

  std::vector<TrajectoryRow> rows;
  for (double eta : o.eta) {
    if (o.shoot) {
      for (const ShotSample& s : geodesic_shoot(p, eta, o.R, tol)) {
        rows.push_back({eta, s.t, s.u, s.v, s.distance, s.geodesic_residual});
      }
      continue;
    }
    for (int i = 0; i < o.samples; ++i) {
      const double R = o.R * i / (o.samples - 1);
      const GeodesicRecord g = point_from_polar(p, R, eta, tol);
      rows.push_back({eta, R, g.u, g.v, distance(p, g.u, g.v, tol), g.geodesic_residual});
    }
  }

  if (o.c.format == "json") {
    Json j{{"version", version()}, {"params", params_json(p)}, {"method", o.shoot ? "shoot" : "closed-form"}};
    Json traj = Json::array();
    for (const TrajectoryRow& r : rows) {
      const XY xy = xy_of(p, r.u, r.v);
      traj.push_back({{"eta", r.eta}, {"t", r.t}, {"u", r.u}, {"v", r.v}, {"x", xy.x}, {"y", xy.y},
                      {"distance", r.distance}, {"geodesic_residual", r.residual}});
    }
    j["samples"] = traj;
    out << j.dump(2) << '\n';
    return;
  }
  CsvWriter csv(out, {"eta", "t", "u", "v", "x", "y", "distance", "geodesic_residual"});
  for (const TrajectoryRow& r : rows) {
    const XY xy = xy_of(p, r.u, r.v);
    csv.cell(r.eta).cell(r.t).cell(r.u).cell(r.v).cell(xy.x).cell(xy.y).cell(r.distance).cell(r.residual);
    csv.end_row();
  }
}

// ---- contour ----

struct ContourCmd {
  Common c;
  ContourOptions opts;
};

void cmd_contour(const ContourCmd& o, std::ostream& out) {
  const InstantonParams p = make_params(o.c);
  const std::vector<Polyline> lines = contour_polylines(p, o.opts);
  if (o.c.format == "svg") {
    out << render_svg(lines, contour_window(p, o.opts.R), true);
    return;
  }
  if (o.c.format == "json") {
    Json j{{"version", version()}, {"params", params_json(p)}, {"eta", o.opts.eta}};
    Json arr = Json::array();
    for (const Polyline& l : lines) {
      Json pts = Json::array();
      for (const UV& q : l.points) pts.push_back({q.u, q.v});
      arr.push_back({{"kind", l.kind}, {"curve", l.id}, {"level", l.level}, {"points", pts}});
    }
    j["polylines"] = arr;
    out << j.dump(2) << '\n';
    return;
  }
  CsvWriter csv(out, {"kind", "curve", "level", "index", "u", "v", "x", "y", "phi1", "phi2"});
  for (const Polyline& l : lines) {
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      const UV q = l.points[i];
      const XY xy = xy_of(p, q.u, q.v);
      const MomentPair phi = moment_map_uv(p, q.u, q.v);
      csv.cell(l.kind).cell(static_cast<long>(l.id)).cell(l.level).cell(static_cast<long>(i));
      csv.cell(q.u).cell(q.v).cell(xy.x).cell(xy.y).cell(phi.phi1).cell(phi.phi2);
      csv.end_row();
    }
  }
}

// ---- energy ----

void cmd_energy(const Common& c, std::ostream& out) {
  const InstantonParams p = make_params(c);
  const EnergyReport r = l2_ricci(p, make_tolerance(c));
  const std::optional<double> rm = l2_riemann(p);
  if (c.format == "csv") {
    CsvWriter csv(out, {"quantity", "value"});
    auto row = [&](const std::string& name, std::optional<double> v) {
      csv.cell(name).cell(v ? num(*v) : std::string("")).end_row();
    };
    row("l2_ricci_closed_form", r.closed_form);
    row("l2_ricci_quadrature", r.closed_form ? std::optional(r.quadrature.value) : std::nullopt);
    row("l2_ricci_error_estimate", r.closed_form ? std::optional(r.quadrature.error_estimate) : std::nullopt);
    row("l2_ricci_rel_error", r.closed_form ? std::optional(r.rel_error) : std::nullopt);
    row("l2_ricci_growth_exponent", r.growth_exponent);
    row("l2_riemann", rm);
    for (const auto& [R, e] : r.growth_samples) row("partial_l2_ricci_R=" + num(R), e);
    return;
  }
  Json j{{"version", version()}, {"params", params_json(p)}};
  Json ric;
  ric["closed_form"] = r.closed_form ? Json(*r.closed_form) : Json(nullptr);
  if (r.closed_form) {
    ric["quadrature"] = {{"value", r.quadrature.value},
                         {"error_estimate", r.quadrature.error_estimate},
                         {"tail_bound", r.quadrature.tail_bound},
                         {"evaluations", r.quadrature.evaluations}};
    ric["rel_error"] = r.rel_error;
  }
  Json growth = Json::array();
  for (const auto& [R, e] : r.growth_samples) growth.push_back({{"R", R}, {"partial_energy", e}});
  ric["growth_samples"] = growth;
  ric["growth_exponent"] = r.growth_exponent ? Json(*r.growth_exponent) : Json(nullptr);
  j["l2_ricci"] = ric;
  j["l2_riemann"] = rm ? Json(*rm) : Json(nullptr);
  out << j.dump(2) << '\n';
}

// ---- volume ----

struct VolumeOptions {
  Common c;
  std::vector<double> R{50.0, 100.0, 200.0, 400.0};
};

void cmd_volume(const VolumeOptions& o, std::ostream& out) {
  const InstantonParams p = make_params(o.c);
  const Tolerance tol = make_tolerance(o.c, {1e-14, 1e-12, 200});
  struct Row {
    double R, closed, quad, rel;
    std::optional<VolumeBracket> bracket;
  };
  std::vector<Row> rows;
  for (double R : o.R) {
    const double closed = almost_ball_volume(p, R);
    const double quad = almost_ball_volume_quadrature(p, R, tol).value;
    std::optional<VolumeBracket> b;
    if (R >= 10.0) b = ball_volume_bracket(p, R, make_tolerance(o.c));
    rows.push_back({R, closed, quad, std::abs(quad - closed) / closed, b});
  }
  std::optional<PowerLawFit> fit;
  if (o.R.size() >= 4) fit = volume_growth_exponent(p, o.R);

  if (o.c.format == "json") {
    Json j{{"version", version()}, {"params", params_json(p)}};
    Json arr = Json::array();
    for (const Row& r : rows) {
      Json row{{"R", r.R}, {"almost_ball_volume", r.closed}, {"quadrature", r.quad}, {"rel_error", r.rel}};
      if (r.bracket) {
        row["ball_lower"] = r.bracket->lower;
        row["ball_upper"] = r.bracket->upper;
        row["epsilon"] = r.bracket->epsilon;
      }
      arr.push_back(row);
    }
    j["rows"] = arr;
    j["growth_exponent"] = fit ? Json(fit->exponent) : Json(nullptr);
    out << j.dump(2) << '\n';
    return;
  }
  CsvWriter csv(out, {"R", "almost_ball_volume", "quadrature", "rel_error", "ball_lower", "ball_upper", "epsilon",
                      "growth_exponent"});
  for (const Row& r : rows) {
    csv.cell(r.R).cell(r.closed).cell(r.quad).cell(r.rel);
    if (r.bracket) {
      csv.cell(r.bracket->lower).cell(r.bracket->upper).cell(r.bracket->epsilon);
    } else {
      csv.cell(std::string()).cell(std::string()).cell(std::string());
    }
    csv.cell(fit ? num(fit->exponent) : std::string()).end_row();
  }
}

// ---- blowdown ----

struct BlowdownOptions {
  Common c;
  std::string table = "all";
  std::vector<double> point{1.0, 1.3};
  std::vector<double> scales{1e2, 1e3, 1e4};
  std::vector<double> shifts{10.0, 100.0, 1000.0};
};

const std::vector<std::string> kTables{"conifold-conformal", "conifold-fiber", "conifold-fiber-measured",
                                       "second",             "exceptional",    "pointed",
                                       "pointed-stated"};

void cmd_blowdown(const BlowdownOptions& o, std::ostream& out) {
  if (o.point.size() != 2) throw BadArgument("--point takes two numbers");
  if (parse_family(o.c.family) != Family::GeneralizedTN || o.c.M) {
    throw BadArgument("blowdown tables take only --k; the scale is the table parameter");
  }
  const double k = o.c.k.value_or(0.5);
  const double u = o.point[0], v = o.point[1];
  std::vector<ConvergenceTable> tables;
  auto want = [&](const std::string& name) { return o.table == "all" || o.table == name; };
  if (want("conifold-conformal")) tables.push_back(conifold_conformal_table(k, u, v, o.scales));
  if (want("conifold-fiber")) tables.push_back(conifold_fiber_table(k, u, v, o.scales, 0.25));
  if (want("conifold-fiber-measured")) {
    ConvergenceTable t = conifold_fiber_table(k, u, v, o.scales, 0.5);
    t.name += " (coefficient 1/2)";
    tables.push_back(std::move(t));
  }
  if (want("second")) tables.push_back(second_blowdown_table(k, u, v, o.scales));
  if (want("exceptional")) tables.push_back(exceptional_blowdown_table(u, v, o.scales));
  if (want("pointed")) tables.push_back(pointed_limit_table(u, v, o.shifts));
  if (want("pointed-stated")) tables.push_back(pointed_limit_table(u, v, o.shifts, true));

  if (o.c.format == "json") {
    Json j{{"version", version()}, {"k", k}, {"point", {u, v}}};
    Json arr = Json::array();
    for (const ConvergenceTable& t : tables) arr.push_back(table_json(t));
    j["tables"] = arr;
    out << j.dump(2) << '\n';
    return;
  }
  CsvWriter csv(out, {"table", "parameter", "residual", "rate", "converging"});
  for (const ConvergenceTable& t : tables) {
    for (const ResidualRow& r : t.rows) {
      csv.cell(t.name).cell(r.parameter).cell(r.residual).cell(t.rate).cell(std::string(t.converging ? "1" : "0"));
      csv.end_row();
    }
  }
}

// ---- verify ----

void cmd_verify(const Common& c, const std::string& suite, std::ostream& out) {
  std::vector<CheckResult> results;
  try {
    results = run_suite(suite);
  } catch (const Error& e) {
    throw BadArgument(e.what());
  }
  if (c.format == "json") {
    Json arr = Json::array();
    for (const CheckResult& r : results) {
      arr.push_back({{"id", r.id}, {"suite", r.suite}, {"status", to_string(r.status)}, {"detail", r.detail}});
    }
    out << Json{{"version", version()}, {"suite", suite}, {"passed", suite_passed(results)}, {"checks", arr}}.dump(2)
        << '\n';
  } else {
    CsvWriter csv(out, {"id", "suite", "status", "detail"});
    for (const CheckResult& r : results) {
      csv.cell(r.id).cell(r.suite).cell(std::string(to_string(r.status))).cell(r.detail).end_row();
    }
  }
  if (!suite_passed(results)) throw VerificationFailed{};
}

bool is_bad_argument(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidParams:
    case ErrorCode::WrongFamily:
    case ErrorCode::SmallRadius:
    case ErrorCode::ChartAxis:
    case ErrorCode::SingularAxis:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toric gravitational instanton calculator", "instanton"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "pointwise metric and curvature quantities as JSON");
  add_common(eval_cmd, eval.c, {"json"});
  eval_cmd->add_option("--chart", eval.chart, "uv | xy | moment | polar | almost-polar")->capture_default_str();
  eval_cmd->add_option("--point", eval.point, "two coordinates, comma separated")->delimiter(',')->required();

  GeodesicOptions geo;
  CLI::App* geo_cmd = app.add_subcommand("geodesic", "radial geodesic trajectories");
  add_common(geo_cmd, geo.c, {"csv", "json"});
  geo_cmd->add_option("--eta", geo.eta, "initial angles, comma separated")->delimiter(',');
  geo_cmd->add_option("--R", geo.R, "largest distance / shooting time")->capture_default_str();
  geo_cmd->add_option("--samples", geo.samples, "samples per closed-form trajectory")->capture_default_str();
  geo_cmd->add_flag("--shoot", geo.shoot, "integrate the geodesic ODE instead of the closed form");

  ContourCmd contour;
  CLI::App* contour_cmd = app.add_subcommand("contour", "level sets of S_eta and the geodesic polar grid");
  add_common(contour_cmd, contour.c, {"csv", "json", "svg"});
  contour_cmd->add_option("--eta", contour.opts.eta, "angle of the distance function")->capture_default_str();
  contour_cmd->add_option("--levels", contour.opts.levels, "number of level sets, from 0 to R")
      ->capture_default_str();
  contour_cmd->add_option("--R", contour.opts.R, "largest level and geodesic radius")->capture_default_str();
  contour_cmd->add_option("--samples", contour.opts.samples, "points per curve")->capture_default_str();
  contour_cmd->add_option("--rays", contour.opts.rays, "radial geodesics")->capture_default_str();
  contour_cmd->add_option("--circles", contour.opts.circles, "geodesic circles")->capture_default_str();

  Common energy;
  CLI::App* energy_cmd = app.add_subcommand("energy", "L2 Ricci and Riemann energies");
  add_common(energy_cmd, energy, {"json", "csv"});

  VolumeOptions volume;
  CLI::App* volume_cmd = app.add_subcommand("volume", "almost-ball volumes, ball brackets and growth");
  add_common(volume_cmd, volume.c, {"csv", "json"});
  volume_cmd->add_option("--R", volume.R, "radii, comma separated")->delimiter(',');

  BlowdownOptions blow;
  CLI::App* blow_cmd = app.add_subcommand("blowdown", "residual tables for the blowdown limits");
  add_common(blow_cmd, blow.c, {"csv", "json"});
  std::vector<std::string> table_names = kTables;
  table_names.insert(table_names.begin(), "all");
  blow_cmd->add_option("--table", blow.table, "which table")->check(CLI::IsMember(table_names))->capture_default_str();
  blow_cmd->add_option("--point", blow.point, "limit-chart point u,v")->delimiter(',');
  blow_cmd->add_option("--scales", blow.scales, "scales M, comma separated")->delimiter(',');
  blow_cmd->add_option("--shifts", blow.shifts, "pointed-limit shifts A, comma separated")->delimiter(',');

  Common verify;
  std::string suite = "all";
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the invariant checks");
  add_common(verify_cmd, verify, {"csv", "json"});
  verify_cmd->add_option("--suite", suite, "suite name or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string* out_path = nullptr;
  std::ostringstream buffer;
  try {
    if (*eval_cmd) {
      out_path = &eval.c.out;
      cmd_eval(eval, buffer);
    } else if (*geo_cmd) {
      out_path = &geo.c.out;
      cmd_geodesic(geo, buffer);
    } else if (*contour_cmd) {
      out_path = &contour.c.out;
      cmd_contour(contour, buffer);
    } else if (*energy_cmd) {
      out_path = &energy.out;
      cmd_energy(energy, buffer);
    } else if (*volume_cmd) {
      out_path = &volume.c.out;
      cmd_volume(volume, buffer);
    } else if (*blow_cmd) {
      out_path = &blow.c.out;
      cmd_blowdown(blow, buffer);
    } else if (*verify_cmd) {
      out_path = &verify.out;
      cmd_verify(verify, suite, buffer);
    }
  } catch (const VerificationFailed&) {
    out << buffer.str();
    err << "instanton: verification failed\n";
    return 1;
  } catch (const BadArgument& e) {
    err << "instanton: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "instanton: " << e.what() << '\n';
    return is_bad_argument(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "instanton: " << e.what() << '\n';
    return 1;
  }

  if (out_path && !out_path->empty()) {
    std::ofstream file(*out_path, std::ios::binary);
    if (!file) {
      err << "instanton: cannot write " << *out_path << '\n';
      return 2;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return 0;
}

}  // namespace instanton::cli
