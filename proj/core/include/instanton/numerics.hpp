#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace instanton {

// max_iter bounds root-finder iterations directly; quadrature allows
// 50 * max_iter subintervals per 1D integral and the ODE solver 5000 * max_iter steps.
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_iter = 200;

  void validate() const;
};

// ---- roots ----

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const Tolerance& tol = {});

struct ValueAndSlope {
  double value;
  double slope;
};

// Newton steps safeguarded by the bracket; falls back to bisection whenever the
// Newton iterate leaves the bracket or stalls.
double find_root_newton(const std::function<ValueAndSlope(double)>& f, double lo, double hi,
                        const Tolerance& tol = {}, std::optional<double> start = std::nullopt);

// ---- quadrature ----

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_bound = 0.0;
  long evaluations = 0;
};

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const Tolerance& tol = {});

// f(u, v) <= constant * (1 + u^2 + v^2)^(-exponent) on the first quadrant.
struct PowerLawMajorant {
  double constant;
  double exponent;
};

// Tail mass of the majorant outside the quarter disk of radius rho.
double power_law_tail(const PowerLawMajorant& majorant, double rho);

QuadratureResult integrate_2d_improper(const std::function<double(double, double)>& f,
                                       const PowerLawMajorant& majorant, const Tolerance& tol = {});

// Iterated integral over {x0 <= x <= x1, lower(x) <= y <= upper(x)}.
QuadratureResult integrate_2d_region(const std::function<double(double, double)>& f, double x0,
                                     double x1, const std::function<double(double)>& lower,
                                     const std::function<double(double)>& upper,
                                     const Tolerance& tol = {});

// ---- ODE ----

using OdeState = std::vector<double>;
using OdeField = std::function<OdeState(const OdeState&)>;

struct OdeSample {
  double t;
  OdeState state;
};

// Dormand-Prince 5(4) with per-component mixed error control.
std::vector<OdeSample> ode_solve(const OdeField& field, const OdeState& initial, double t_end,
                                 const Tolerance& tol = {});

// ---- finite differences ----

// Open domain {x > x_min, y > y_min}; missing bounds are unbounded.
struct PlanarDomain {
  std::optional<double> x_min;
  std::optional<double> y_min;
};

double default_fd_step(double x, double y);

double fd_laplacian(const std::function<double(double, double)>& f, double x, double y,
                    double step, const PlanarDomain& domain = {});

struct Gradient2 {
  double dx;
  double dy;
};

Gradient2 fd_gradient(const std::function<double(double, double)>& f, double x, double y,
                      double step, const PlanarDomain& domain = {});

// ---- fitting ----

struct PowerLawFit {
  double exponent;
  double prefactor;
  double r_squared;
};

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples);

}  // namespace instanton
