#include "instanton/fd_curvature.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "instanton/error.hpp"

namespace instanton {

namespace {

using Matrix = Eigen::MatrixXd;

constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
constexpr std::array<double, 4> kFirst{1.0, -8.0, 8.0, -1.0};

class Grid {
 public:
  Grid(int dim, const MetricComponents& metric, double u, double v, double h) : dim_(dim) {
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const std::vector<double> g = metric(u + i * h, v + j * h);
        if (static_cast<int>(g.size()) != dim * dim) {
          throw Error(ErrorCode::InvalidArgument, "metric component count does not match the dimension");
        }
        at(i, j) = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            g.data(), dim, dim);
      }
    }
  }

  Matrix& at(int i, int j) { return values_[(i + 2) * 5 + (j + 2)]; }
  const Matrix& at(int i, int j) const { return values_[(i + 2) * 5 + (j + 2)]; }

  // Along axis 0 (u) or 1 (v).
  Matrix first(int axis, double h) const {
    Matrix d = Matrix::Zero(dim_, dim_);
    for (std::size_t n = 0; n < kOffsets.size(); ++n) {
      d += kFirst[n] * (axis == 0 ? at(kOffsets[n], 0) : at(0, kOffsets[n]));
    }
    return d / (12.0 * h);
  }

  Matrix second(int a, int b, double h) const {
    if (a != b) {
      Matrix d = Matrix::Zero(dim_, dim_);
      for (std::size_t n = 0; n < kOffsets.size(); ++n) {
        for (std::size_t m = 0; m < kOffsets.size(); ++m) {
          d += kFirst[n] * kFirst[m] * at(kOffsets[n], kOffsets[m]);
        }
      }
      return d / (144.0 * h * h);
    }
    auto line = [&](int t) -> const Matrix& { return a == 0 ? at(t, 0) : at(0, t); };
    return (-line(-2) + 16.0 * line(-1) - 30.0 * line(0) + 16.0 * line(1) - line(2)) / (12.0 * h * h);
  }

 private:
  int dim_;
  std::array<Matrix, 25> values_;
};

}  // namespace

FdCurvature fd_curvature(int dim, const MetricComponents& metric, double u, double v, double step) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 2");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const int n = dim;
  const Grid grid(n, metric, u, v, step);
  const Matrix& g = grid.at(0, 0);
  const Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible()) throw Error(ErrorCode::BoundaryTooClose, "metric is degenerate at the sample point");
  const Matrix gi = lu.inverse();

  const std::array<Matrix, 2> dg{grid.first(0, step), grid.first(1, step)};
  const std::array<std::array<Matrix, 2>, 2> ddg{{{grid.second(0, 0, step), grid.second(0, 1, step)},
                                                   {grid.second(1, 0, step), grid.second(1, 1, step)}}};
  std::array<Matrix, 2> dgi;
  for (int e = 0; e < 2; ++e) dgi[e] = -gi * dg[e] * gi;

  auto dmetric = [&](int c, int a, int b) { return c < 2 ? dg[c](a, b) : 0.0; };
  auto ddmetric = [&](int e, int c, int a, int b) { return (e < 2 && c < 2) ? ddg[e][c](a, b) : 0.0; };

  auto idx = [n](int a, int b, int c) { return (a * n + b) * n + c; };
  const int n3 = n * n * n;
  // Lowered symbols [d; bc] and their (u, v) derivatives.
  std::vector<double> low(n3), gamma(n3, 0.0);
  std::array<std::vector<double>, 2> dlow{std::vector<double>(n3), std::vector<double>(n3)};
  std::array<std::vector<double>, 2> dgamma{std::vector<double>(n3, 0.0), std::vector<double>(n3, 0.0)};
  for (int d = 0; d < n; ++d) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        low[idx(d, b, c)] = 0.5 * (dmetric(b, d, c) + dmetric(c, d, b) - dmetric(d, b, c));
        for (int e = 0; e < 2; ++e) {
          dlow[e][idx(d, b, c)] = 0.5 * (ddmetric(e, b, d, c) + ddmetric(e, c, d, b) - ddmetric(e, d, b, c));
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          gamma[idx(a, b, c)] += gi(a, d) * low[idx(d, b, c)];
          for (int e = 0; e < 2; ++e) {
            dgamma[e][idx(a, b, c)] += dgi[e](a, d) * low[idx(d, b, c)] + gi(a, d) * dlow[e][idx(d, b, c)];
          }
        }
      }
    }
  }
  auto dG = [&](int c, int a, int b, int d) { return c < 2 ? dgamma[c][idx(a, b, d)] : 0.0; };

  // R^a_{bcd}
  auto ridx = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
  const int n4 = n3 * n;
  std::vector<double> riem(n4, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          double r = dG(c, a, d, b) - dG(d, a, c, b);
          for (int e = 0; e < n; ++e) {
            r += gamma[idx(a, c, e)] * gamma[idx(e, d, b)] - gamma[idx(a, d, e)] * gamma[idx(e, c, b)];
          }
          riem[ridx(a, b, c, d)] = r;
        }
      }
    }
  }

  FdCurvature out;
  out.dim = n;
  Matrix ric = Matrix::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < n; ++a) ric(b, d) += riem[ridx(a, b, a, d)];
    }
  }
  ric = 0.5 * (ric + ric.transpose());
  out.ricci.assign(ric.data(), ric.data() + n * n);
  out.scalar = (gi * ric).trace();
  out.ricci_tensor_norm_sq = (gi * ric * gi * ric).trace();

  // Lower the first index, then contract against the fully raised tensor.
  std::vector<double> lowered(n4, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += g(a, e) * riem[ridx(e, b, c, d)];
          lowered[ridx(a, b, c, d)] = s;
        }
      }
    }
  }
  std::vector<double> raised = lowered;
  for (int slot = 0; slot < 4; ++slot) {
    std::vector<double> next(n4, 0.0);
    for (int i = 0; i < n4; ++i) {
      std::array<int, 4> ix{i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n};
      double s = 0.0;
      const int keep = ix[slot];
      for (int e = 0; e < n; ++e) {
        ix[slot] = e;
        s += gi(keep, e) * raised[ridx(ix[0], ix[1], ix[2], ix[3])];
      }
      next[i] = s;
    }
    raised = std::move(next);
  }
  double norm = 0.0;
  for (int i = 0; i < n4; ++i) norm += lowered[i] * raised[i];
  out.riemann_norm_sq = norm;
  return out;
}

}  // namespace instanton
