#pragma once

#include <span>
#include <vector>

#include "instanton/family.hpp"
#include "instanton/numerics.hpp"

namespace instanton {

// Volume of the almost-ball {R~ <= R}, torus fibers included. Defined for the
// generalized and exceptional Taub-NUT metrics; other families raise WrongFamily.
double almost_ball_volume(const InstantonParams& params, double R);

// The same volume by quadrature of the 4-volume density over the almost-ball.
QuadratureResult almost_ball_volume_quadrature(const InstantonParams& params, double R, const Tolerance& tol = {});

// max over an eta-grid of max(R~/R, R/R~) - 1 on the geodesic sphere of radius R.
double almost_distance_epsilon(const InstantonParams& params, double R, int eta_samples = 33,
                               const Tolerance& tol = {});

struct VolumeBracket {
  double lower;
  double upper;
  double epsilon;
};

// Almost-ball volumes at R / (1 + eps) and R (1 + eps). Needs R >= 10.
VolumeBracket ball_volume_bracket(const InstantonParams& params, double R, const Tolerance& tol = {});

PowerLawFit volume_growth_exponent(const InstantonParams& params, std::span<const double> radii);

struct AlmostSphereSample {
  double psi;
  double u;
  double v;
  double R;  // geodesic distance from the origin
};

// Points of the almost-sphere {R~ = R_tilde} at evenly spaced psi, with their true distance.
std::vector<AlmostSphereSample> almost_sphere_samples(const InstantonParams& params, double R_tilde, int count,
                                                      const Tolerance& tol = {});

// Smallest C with |R~/R - 1| <= C log R / R on the eta-grid at radius R.
double almost_distance_constant(const InstantonParams& params, double R, int eta_samples = 33,
                                const Tolerance& tol = {});

}  // namespace instanton
