#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "instanton/family.hpp"
#include "instanton/numerics.hpp"

namespace instanton {

// Gauss curvature of the polytope metric, in the quadratic chart.
double polytope_curvature(const InstantonParams& params, double u, double v);
double polytope_curvature(const InstantonParams& params, const ChartPoint& point);

// -Laplacian(log lambda) / (2 lambda) with the five-point stencil.
double polytope_curvature_fd(const InstantonParams& params, double u, double v, double step);

struct RicciPotentials {
  double r1;
  double r2;
};

RicciPotentials ricci_potentials(const InstantonParams& params, double u, double v);

// dR1 ^ dR2 as a positive multiple of du ^ dv (dx ^ dy for the half-plane).
double ricci_pseudo_volume_density(const InstantonParams& params, double u, double v);
double ricci_pseudo_volume_density_fd(const InstantonParams& params, double u, double v, double step);

double ricci_norm(const InstantonParams& params, double u, double v);

struct EnergyReport {
  std::optional<double> closed_form;  // empty when the integral diverges
  QuadratureResult quadrature;
  double rel_error = 0.0;  // absolute error when the closed form is 0

  // Partial integrals over almost-balls, for divergent energies.
  std::vector<std::pair<double, double>> growth_samples;
  std::optional<double> growth_exponent;
};

EnergyReport l2_ricci(const InstantonParams& params, const Tolerance& tol = {});

// Integral of |Rm|^2 from the Chern-Gauss-Bonnet combination 32 pi^2 chi + 4 E_Ric.
// Empty when infinite.
std::optional<double> l2_riemann(const InstantonParams& params);

struct Curvature4Sample {
  double scalar;
  double ricci_norm;  // same normalization as ricci_norm()
  double rm_norm_sq;
  ChartPoint position;
};

// Default step is 2e-3 * (1 + |(u, v)|).
Curvature4Sample curvature4_fd(const InstantonParams& params, double u, double v,
                               std::optional<double> step = std::nullopt);

// The calibrated |Ric| of the oracle is half the tensor norm sqrt(Ric_ab Ric^ab).
inline constexpr double kRicciNormCalibration = 0.5;

enum class DecayQuantity { KSigma, Ric, RmFd };

std::string_view to_string(DecayQuantity quantity) noexcept;
DecayQuantity parse_decay_quantity(std::string_view name);

PowerLawFit decay_rate_along_geodesic(const InstantonParams& params, double eta, DecayQuantity quantity,
                                      std::span<const double> R_samples, const Tolerance& tol = {});

}  // namespace instanton
