#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rilab/lattice.hpp"
#include "rilab/pattern.hpp"

namespace rilab {

/// Green's function of the (non-lazy) simple random walk on Z^d, d >= 3:
/// the expected number of visits to x starting from the origin.
///
/// Evaluated through the continuous-time representation
///   G(x) = \int_0^\infty \prod_j e^{-s/d} I_{x_j}(s/d) ds,
/// with adaptive Gauss-Kronrod quadrature up to s = d * 650 and an
/// exp-sinh quadrature of the large-argument Bessel expansion beyond.
/// Requires |x_j| <= 64 and tol >= 1e-13 (NumericalError otherwise).
double green_srw(const LatticePoint& x, double tol = 1e-11);

/// e^{-z} I_n(z), the exponentially scaled modified Bessel function.
double scaled_bessel_i(int n, double z);

enum class CapacityMethod { exact_green, monte_carlo };

struct CapacityResult {
  double value = 0;
  CapacityMethod method = CapacityMethod::exact_green;
  double std_error = 0;
  double r_used = 0;
  double condition_number = 0;  // exact method only
};

std::string to_string(CapacityMethod m);

/// Matrix [G(x - y)]_{x,y in K}; reuses values across symmetric differences.
std::vector<double> green_matrix(std::span<const LatticePoint> points, double tol = 1e-11);

/// Sum of the entries of the inverse Green matrix, via Cholesky. Throws
/// InputError for duplicate points, more than max_points points, or d < 3.
CapacityResult capacity_exact(std::span<const LatticePoint> points, std::size_t max_points = 24);
CapacityResult capacity_exact(const PatternSet& pattern, std::size_t max_points = 24);

/// Capacity from a precomputed Green matrix (row-major, size k*k) restricted to
/// the rows/columns selected by mask.
double capacity_from_green(std::span<const double> green, std::size_t k, std::uint64_t mask);

/// Outer lattice boundary of the Euclidean ball B_r(o) = {|y| < r}: points
/// outside the ball with a neighbour inside. Enumerated in a fixed order.
std::vector<LatticePoint> ball_boundary(int d, double r);

struct CapacityMcOptions {
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Monte Carlo capacity from the sphere-hitting identity for the lazy walk:
///   Cap(K) ~ 2 * sum_{y in dB_r} P_y[H_K < xi_{B_r}],
/// `samples` walks per boundary point, each on its own counter-based stream.
/// Throws InputError when samples == 0 or r <= 2R.
CapacityResult capacity_mc(const PatternSet& pattern, double r, std::uint64_t samples,
                           const CapacityMcOptions& options = {});

/// The serial reference of capacity_mc, kept for testing the OpenMP kernel.
CapacityResult capacity_mc_serial(const PatternSet& pattern, double r, std::uint64_t samples,
                                  std::uint64_t seed);

}  // namespace rilab
