#pragma once

#include <vector>

#include "rilab/rng.hpp"

namespace rilab {

/// Law of sigma_1, the exit time of standard Brownian motion started at the
/// origin from the cube (-1, 1)^d. Coordinates are independent, so the cube
/// survival function is the d-th power of the interval one.
struct ExitLaw {
  int d = 3;
  int series_terms = 40;
  /// Below t_floor the large-time series is not used; P[sigma_1 <= 0.02] is
  /// below 1e-10 for d <= 8 and is carried as an error term.
  double t_floor = 0.02;
  double t_ceiling = 40.0;
};

/// P[tau > t] for the exit time of (-1, 1):
/// (4/pi) sum_{k<terms} (-1)^k/(2k+1) exp(-(2k+1)^2 pi^2 t/8).
double survival_1d(double t, int terms = 40);

double survival_cube(double t, int d, int terms = 40);

/// d f_tau(t) survival_1d(t)^{d-1}; throws InputError below t_floor.
double density_sigma1(double t, int d, int terms = 40, double t_floor = 0.02);

/// E[exp(-lambda sigma_1)] = exp(-lambda t_f) - lambda \int_{t_f}^{t_c} e^{-lambda t} S(t) dt.
double laplace_sigma1(double lambda, int d, double tol = 1e-12);

/// E[sigma_1] = \int_0^\infty S(t) dt.
double mean_sigma1(int d);

/// Inverse-survival sample by bisection to 1e-10 in t.
double sample_sigma1(int d, RandomStream& rng);

/// Fixed quadrature for integrals against the density of sigma_1: composite
/// Gauss-Legendre on graded panels over [t_floor, t_ceiling]. weights already
/// include the density, so E[h(sigma_1)] ~ sum_i weights[i] h(nodes[i]) +
/// mass_below * h(0).
struct MixtureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double mass_below = 0;

  static MixtureRule build(int d, const ExitLaw& law = {});
  double total_mass() const;
};

}  // namespace rilab
