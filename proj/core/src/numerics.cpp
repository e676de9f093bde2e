#include "instanton/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "instanton/error.hpp"

namespace instanton {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument, "tolerance needs abs_tol > 0, rel_tol > 0, max_iter >= 1");
  }
}

// ---------------------------------------------------------------------------
// Roots

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const Tolerance& tol) {
  tol.validate();
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) {
    throw Error(ErrorCode::NoBracket, "f(lo) and f(hi) have the same sign");
  }
  // Orient so that flo < 0 < fhi.
  const double sign = flo < 0.0 ? 1.0 : -1.0;
  flo *= sign;
  fhi *= sign;

  int side = 0;
  double width_checkpoint = hi - lo;
  bool bisect = false;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    double x = 0.5 * (lo + hi);
    if (!bisect) {
      const double xf = (lo * fhi - hi * flo) / (fhi - flo);
      if (xf > lo && xf < hi) x = xf;
    }
    const double fx = sign * f(x);
    if (std::abs(fx) <= tol.abs_tol) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;  // Illinois modification
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    const double width = hi - lo;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (width <= tol.rel_tol * std::abs(x) || width <= 4.0 * kEps * scale ||
        width <= std::numeric_limits<double>::min()) {
      return 0.5 * (lo + hi);
    }
    bisect = false;
    if (iter % 4 == 3) {
      if (width > 0.5 * width_checkpoint) bisect = true;
      width_checkpoint = width;
    }
  }
  throw Error(ErrorCode::MaxIterExceeded, "find_root_monotone did not converge");
}

double find_root_newton(const std::function<ValueAndSlope(double)>& f, double lo, double hi,
                        const Tolerance& tol, std::optional<double> start) {
  tol.validate();
  if (lo > hi) std::swap(lo, hi);
  const double flo = f(lo).value;
  const double fhi = f(hi).value;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) {
    throw Error(ErrorCode::NoBracket, "f(lo) and f(hi) have the same sign");
  }
  const double sign = flo < 0.0 ? 1.0 : -1.0;

  double x = start.value_or(0.5 * (lo + hi));
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  double previous_residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const ValueAndSlope e = f(x);
    const double fx = sign * e.value;
    const double dfx = sign * e.slope;
    if (std::abs(fx) <= tol.abs_tol) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - fx / dfx;
    if (dfx > 0.0 && std::abs(next - x) <= std::max(tol.rel_tol * std::abs(x), 4.0 * kEps * std::abs(x))) {
      return next > lo && next < hi ? next : x;
    }
    const bool stalled = std::abs(fx) > 0.25 * previous_residual;
    if (!(dfx > 0.0) || !(next > lo && next < hi) || stalled) next = 0.5 * (lo + hi);
    previous_residual = std::abs(fx);

    const double step = std::abs(next - x);
    x = next;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (step <= tol.rel_tol * std::abs(x) || hi - lo <= 4.0 * kEps * scale ||
        hi - lo <= std::numeric_limits<double>::min()) {
      return x;
    }
  }
  throw Error(ErrorCode::MaxIterExceeded, "find_root_newton did not converge");
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double abs_sum = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const Tolerance& tol) {
  tol.validate();
  QuadratureResult result;
  if (a == b) return result;
  const double orientation = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  const long max_segments = 50L * tol.max_iter;
  std::priority_queue<Segment> queue;
  Segment first = gauss_kronrod(f, a, b);
  result.evaluations += 15;
  double total = first.value;
  double total_error = first.error;
  double total_abs = first.abs_value;
  queue.push(first);

  long segments = 1;
  while (true) {
    const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(total));
    if (total_error <= target || total_error <= 50.0 * kEps * total_abs) break;
    Segment worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a <= 64.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      break;  // roundoff-limited; report the honest error estimate
    }
    if (segments >= max_segments) {
      throw Error(ErrorCode::MaxIterExceeded, "integrate_1d exceeded its subdivision budget");
    }
    queue.pop();
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    queue.push(left);
    queue.push(right);
    ++segments;
  }

  // Re-sum to shed accumulated cancellation in the running totals.
  double value = 0.0;
  double error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  result.value = orientation * value;
  result.error_estimate = error;
  return result;
}

double power_law_tail(const PowerLawMajorant& majorant, double rho) {
  const double p = majorant.exponent;
  return std::numbers::pi * majorant.constant * std::pow(1.0 + rho * rho, 1.0 - p) / (4.0 * (p - 1.0));
}

QuadratureResult integrate_2d_improper(const std::function<double(double, double)>& f,
                                       const PowerLawMajorant& majorant, const Tolerance& tol) {
  tol.validate();
  if (!(majorant.exponent > 1.0)) {
    throw Error(ErrorCode::SlowDecay, "decay exponent must exceed 1 for a finite tail");
  }
  if (!(majorant.constant >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "majorant constant must be nonnegative");
  }

  constexpr double kQuarter = 0.5 * std::numbers::pi;
  QuadratureResult result;

  // Geometric shells [0,1], [1,2], [2,4], ... in polar coordinates; stop once the
  // analytic tail beyond the current radius is a quarter of the error budget.
  double r0 = 0.0;
  double r1 = 1.0;
  for (int shell = 0;; ++shell) {
    if (shell >= tol.max_iter) {
      throw Error(ErrorCode::MaxIterExceeded, "integrate_2d_improper exceeded its shell budget");
    }
    const double abs_budget = 0.25 * tol.abs_tol * std::ldexp(1.0, -(shell + 1));
    const Tolerance inner_tol{0.1 * abs_budget / kQuarter, 0.025 * tol.rel_tol, tol.max_iter};
    double inner_error = 0.0;
    long inner_evaluations = 0;
    auto radial = [&](double theta) {
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      QuadratureResult q = integrate_1d([&](double r) { return f(r * c, r * s) * r; }, r0, r1, inner_tol);
      inner_error = std::max(inner_error, q.error_estimate);
      inner_evaluations += q.evaluations;
      return q.value;
    };
    QuadratureResult outer = integrate_1d(radial, 0.0, kQuarter, {abs_budget, 0.25 * tol.rel_tol, tol.max_iter});
    result.value += outer.value;
    result.error_estimate += outer.error_estimate + kQuarter * inner_error;
    result.evaluations += inner_evaluations;

    result.tail_bound = power_law_tail(majorant, r1);
    const double budget = std::max(tol.abs_tol, tol.rel_tol * std::abs(result.value));
    if (result.tail_bound <= 0.25 * budget) break;
    r0 = r1;
    r1 *= 2.0;
  }
  return result;
}

QuadratureResult integrate_2d_region(const std::function<double(double, double)>& f, double x0,
                                     double x1, const std::function<double(double)>& lower,
                                     const std::function<double(double)>& upper,
                                     const Tolerance& tol) {
  tol.validate();
  QuadratureResult result;
  const double width = std::abs(x1 - x0);
  const Tolerance inner_tol{0.1 * tol.abs_tol / std::max(width, 1.0), 0.1 * tol.rel_tol, tol.max_iter};
  double inner_error = 0.0;
  long inner_evaluations = 0;
  auto slice = [&](double x) {
    QuadratureResult q = integrate_1d([&](double y) { return f(x, y); }, lower(x), upper(x), inner_tol);
    inner_error = std::max(inner_error, q.error_estimate);
    inner_evaluations += q.evaluations;
    return q.value;
  };
  QuadratureResult outer = integrate_1d(slice, x0, x1, {0.5 * tol.abs_tol, 0.5 * tol.rel_tol, tol.max_iter});
  result.value = outer.value;
  result.error_estimate = outer.error_estimate + width * inner_error;
  result.evaluations = inner_evaluations;
  return result;
}

// ---------------------------------------------------------------------------
// ODE

namespace {

OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

}  // namespace

std::vector<OdeSample> ode_solve(const OdeField& field, const OdeState& initial, double t_end,
                                 const Tolerance& tol) {
  tol.validate();
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be positive");

  const long max_steps = 5000L * tol.max_iter;
  std::vector<OdeSample> samples;
  samples.push_back({0.0, initial});

  double t = 0.0;
  OdeState y = initial;
  OdeState k1 = field(y);
  double h = 1e-3 * t_end;
  long steps = 0;

  while (t < t_end) {
    if (++steps > max_steps) throw Error(ErrorCode::MaxIterExceeded, "ode_solve step budget exhausted");
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;
    if (h < 16.0 * kEps * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::StepUnderflow, "adaptive step collapsed");
    }

    const OdeState k2 = field(axpy(y, h, {{1.0 / 5, &k1}}));
    const OdeState k3 = field(axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const OdeState k4 = field(axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const OdeState k5 = field(axpy(
        y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2}, {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
    const OdeState k6 = field(axpy(y, h,
                                   {{9017.0 / 3168, &k1},
                                    {-355.0 / 33, &k2},
                                    {46732.0 / 5247, &k3},
                                    {49.0 / 176, &k4},
                                    {-5103.0 / 18656, &k5}}));
    const OdeState y_new = axpy(y, h,
                                {{35.0 / 384, &k1},
                                 {500.0 / 1113, &k3},
                                 {125.0 / 192, &k4},
                                 {-2187.0 / 6784, &k5},
                                 {11.0 / 84, &k6}});
    const OdeState k7 = field(y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double e = h * (71.0 / 57600 * k1[i] - 71.0 / 16695 * k3[i] + 71.0 / 1920 * k4[i] -
                            17253.0 / 339200 * k5[i] + 22.0 / 525 * k6[i] - 1.0 / 40 * k7[i]);
      const double scale = tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }

    if (err <= 1.0) {
      t = last ? t_end : t + h;
      y = y_new;
      k1 = k7;
      samples.push_back({t, y});
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Finite differences

namespace {

void check_clearance(double x, double y, double step, const PlanarDomain& domain) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if ((domain.x_min && x - *domain.x_min <= 2.0 * step) || (domain.y_min && y - *domain.y_min <= 2.0 * step)) {
    throw Error(ErrorCode::BoundaryTooClose, "stencil reaches the domain boundary");
  }
}

}  // namespace

double default_fd_step(double x, double y) { return 1e-4 * (1.0 + std::hypot(x, y)); }

double fd_laplacian(const std::function<double(double, double)>& f, double x, double y, double step,
                    const PlanarDomain& domain) {
  check_clearance(x, y, step, domain);
  const double center = f(x, y);
  return (f(x + step, y) + f(x - step, y) + f(x, y + step) + f(x, y - step) - 4.0 * center) / (step * step);
}

Gradient2 fd_gradient(const std::function<double(double, double)>& f, double x, double y, double step,
                      const PlanarDomain& domain) {
  check_clearance(x, y, step, domain);
  return {(f(x + step, y) - f(x - step, y)) / (2.0 * step), (f(x, y + step) - f(x, y - step)) / (2.0 * step)};
}

// ---------------------------------------------------------------------------
// Fitting

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw Error(ErrorCode::InsufficientSamples, "need at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [r, value] = samples[i];
    if (!(r > 0.0) || !(value > 0.0)) throw Error(ErrorCode::InvalidArgument, "samples must be positive");
    if (i > 0 && !(r > samples[i - 1].first)) {
      throw Error(ErrorCode::InvalidArgument, "radii must be strictly increasing");
    }
  }
  const double n = static_cast<double>(samples.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [r, value] : samples) {
    mx += std::log(r);
    my += std::log(value);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [r, value] : samples) {
    const double dx = std::log(r) - mx;
    const double dy = std::log(value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (const auto& [r, value] : samples) {
    const double d = std::log(value) - (intercept + slope * std::log(r));
    ss_res += d * d;
  }
  const double r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, std::exp(intercept), r_squared};
}

}  // namespace instanton
