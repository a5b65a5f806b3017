#include "rilab/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rilab/lattice.hpp"

namespace rilab {

namespace {

constexpr double kPi2Over8 = std::numbers::pi * std::numbers::pi / 8.0;

void check_series(double t, int terms) {
  if (terms <= 0) throw InputError("series needs at least one term");
  if (!(t > 0)) throw InputError("exit-time law evaluated at non-positive time");
}

double density_1d(double t, int terms) {
  double sum = 0;
  for (int k = 0; k < terms; ++k) {
    const double odd = 2.0 * k + 1;
    const double term = odd * std::exp(-odd * odd * kPi2Over8 * t);
    sum += (k & 1) ? -term : term;
    if (term < 1e-18) break;
  }
  return std::numbers::pi / 2.0 * sum;
}

}  // namespace

double survival_1d(double t, int terms) {
  check_series(t, terms);
  double sum = 0;
  for (int k = 0; k < terms; ++k) {
    const double odd = 2.0 * k + 1;
    const double term = std::exp(-odd * odd * kPi2Over8 * t) / odd;
    sum += (k & 1) ? -term : term;
    if (term < 1e-18) break;
  }
  return std::clamp(4.0 / std::numbers::pi * sum, 0.0, 1.0);
}

double survival_cube(double t, int d, int terms) {
  if (d < 1) throw InputError("dimension must be positive");
  return std::pow(survival_1d(t, terms), d);
}

double density_sigma1(double t, int d, int terms, double t_floor) {
  if (d < 1) throw InputError("dimension must be positive");
  if (t < t_floor) throw InputError("density requested below t_floor where the series is not used");
  check_series(t, terms);
  const double dens = d * density_1d(t, terms) * std::pow(survival_1d(t, terms), d - 1);
  return std::max(dens, 0.0);
}

double laplace_sigma1(double lambda, int d, double tol) {
  if (!(lambda >= 0)) throw InputError("Laplace transform needs lambda >= 0");
  if (d < 1) throw InputError("dimension must be positive");
  if (!(tol >= 1e-13)) throw NumericalError("requested Laplace tolerance below achievable 1e-13");
  if (lambda == 0) return 1.0;
  const ExitLaw law{d};
  auto f = [&](double t) { return std::exp(-lambda * t) * survival_cube(t, d, law.series_terms); };
  using boost::math::quadrature::gauss_kronrod;
  double integral = 0;
  // Panels [t_f, 0.5], [0.5, 2], [2, 8], [8, t_c] follow the survival decay scale.
  const double cuts[] = {law.t_floor, 0.5, 2.0, 8.0, law.t_ceiling};
  for (int i = 0; i + 1 < 5; ++i) {
    integral += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 15, tol * 1e-2);
  }
  return std::exp(-lambda * law.t_floor) - lambda * integral;
}

double mean_sigma1(int d) {
  const ExitLaw law{d};
  auto f = [&](double t) { return survival_cube(t, d, law.series_terms); };
  using boost::math::quadrature::gauss_kronrod;
  double integral = law.t_floor;  // S = 1 below t_floor up to the floor error term
  const double cuts[] = {law.t_floor, 0.5, 2.0, 8.0, law.t_ceiling};
  for (int i = 0; i + 1 < 5; ++i) {
    integral += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-14);
  }
  return integral;
}

double sample_sigma1(int d, RandomStream& rng) {
  if (d < 1) throw InputError("dimension must be positive");
  double u = rng.uniform();
  if (u <= 0) u = 0x1.0p-53;
  const ExitLaw law{d};
  double lo = law.t_floor / 4;
  if (survival_cube(lo, d) <= u) return lo;
  double hi = 1.0;
  while (survival_cube(hi, d) > u) hi *= 2;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (survival_cube(mid, d) > u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MixtureRule MixtureRule::build(int d, const ExitLaw& law) {
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  MixtureRule rule;
  rule.mass_below = 1.0 - survival_cube(law.t_floor, d, law.series_terms);
  // Geometric panel edges: fine where the density varies fastest (small t).
  constexpr int kPanels = 160;
  const double ratio = std::pow(law.t_ceiling / law.t_floor, 1.0 / kPanels);
  const auto& x = Gauss::abscissa();
  const auto& w = Gauss::weights();
  double a = law.t_floor;
  for (int p = 0; p < kPanels; ++p) {
    const double b = p + 1 == kPanels ? law.t_ceiling : a * ratio;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (const double sgn : {-1.0, 1.0}) {
        if (x[i] == 0 && sgn > 0) continue;
        const double t = mid + sgn * half * x[i];
        rule.nodes.push_back(t);
        rule.weights.push_back(half * w[i] * density_sigma1(t, d, law.series_terms, law.t_floor));
      }
    }
    a = b;
  }
  return rule;
}

double MixtureRule::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), mass_below);
}

}  // namespace rilab
