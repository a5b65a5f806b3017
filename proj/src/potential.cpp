#include "rilab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "rilab/parallel.hpp"
#include "rilab/rng.hpp"
#include "rilab/walk.hpp"

namespace rilab {

namespace {

constexpr double kBesselSwitch = 650.0;  // e^z I_n(z) overflows doubles near z = 709
constexpr std::int64_t kMaxGreenCoord = 64;
constexpr double kMinGreenTol = 1e-13;

/// Hankel expansion e^{-z} I_n(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(n) / z^k.
double scaled_bessel_i_asymptotic(int n, double z) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term) && k > n) break;  // asymptotic regime ends
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

LatticePoint canonical_difference(LatticePoint x) {
  // G is invariant under coordinate permutations and sign flips.
  std::array<std::int64_t, kMaxDim> c{};
  for (int j = 0; j < x.dim(); ++j) c[static_cast<std::size_t>(j)] = std::abs(x[j]);
  std::sort(c.begin(), c.begin() + x.dim());
  for (int j = 0; j < x.dim(); ++j) x[j] = c[static_cast<std::size_t>(j)];
  return x;
}

}  // namespace

double scaled_bessel_i(int n, double z) {
  n = std::abs(n);
  if (z <= 0) return n == 0 ? 1.0 : 0.0;
  if (z > kBesselSwitch) return scaled_bessel_i_asymptotic(n, z);
  return boost::math::cyl_bessel_i(static_cast<double>(n), z) * std::exp(-z);
}

double green_srw(const LatticePoint& x, double tol) {
  const int d = x.dim();
  if (d < 3) throw InputError("the simple random walk Green's function needs d >= 3");
  if (!(tol >= kMinGreenTol)) {
    throw NumericalError("requested Green's function tolerance below achievable 1e-13");
  }
  if (x.norm_inf() > kMaxGreenCoord) {
    throw NumericalError("Green's function evaluated only for |x_j| <= 64");
  }
  std::array<int, kMaxDim> order{};
  for (int j = 0; j < d; ++j) order[static_cast<std::size_t>(j)] = static_cast<int>(std::abs(x[j]));

  auto integrand = [&](double s) {
    double p = 1.0;
    for (int j = 0; j < d; ++j) p *= scaled_bessel_i(order[static_cast<std::size_t>(j)], s / d);
    return p;
  };

  using boost::math::quadrature::gauss_kronrod;
  const double upper = kBesselSwitch * d;
  double total = 0;
  double a = 0;
  double b = 0.5;
  while (a < upper) {
    b = std::min(b, upper);
    double err = 0;
    total += gauss_kronrod<double, 31>::integrate(integrand, a, b, 20, tol * 1e-2, &err);
    a = b;
    b *= 2;
  }
  boost::math::quadrature::exp_sinh<double> tail;
  total += tail.integrate(integrand, upper, std::numeric_limits<double>::infinity(), tol * 1e-2);
  return total;
}

std::string to_string(CapacityMethod m) {
  return m == CapacityMethod::exact_green ? "exact_green" : "monte_carlo";
}

std::vector<double> green_matrix(std::span<const LatticePoint> points, double tol) {
  const std::size_t k = points.size();
  std::vector<double> g(k * k);
  std::map<LatticePoint, double> memo;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const LatticePoint key = canonical_difference(points[i] - points[j]);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, green_srw(key, tol)).first;
      g[i * k + j] = g[j * k + i] = it->second;
    }
  }
  return g;
}

double capacity_from_green(std::span<const double> green, std::size_t k, std::uint64_t mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < k; ++i) {
    if ((mask >> i) & 1U) idx.push_back(i);
  }
  if (idx.empty()) return 0.0;
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = green[idx[a] * k + idx[b]];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success) throw InputError("Green matrix is not positive definite");
  return llt.solve(Eigen::VectorXd::Ones(m)).sum();
}

CapacityResult capacity_exact(std::span<const LatticePoint> points, std::size_t max_points) {
  if (points.empty()) throw InputError("capacity of an empty set requested");
  if (points.size() > max_points) {
    throw InputError("exact capacity limited to " + std::to_string(max_points) + " points");
  }
  if (points.front().dim() < 3) throw InputError("capacity needs d >= 3");
  std::vector<LatticePoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("duplicate points make the Green matrix singular");
  }
  const std::size_t k = points.size();
  const auto g = green_matrix(points);
  Eigen::Map<const Eigen::MatrixXd> gm(g.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  Eigen::LLT<Eigen::MatrixXd> llt(gm);
  if (llt.info() != Eigen::Success) throw InputError("Green matrix is not positive definite");
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gm, Eigen::EigenvaluesOnly).eigenvalues();

  CapacityResult r;
  r.value = llt.solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k))).sum();
  r.method = CapacityMethod::exact_green;
  r.condition_number = eig.maxCoeff() / eig.minCoeff();
  return r;
}

CapacityResult capacity_exact(const PatternSet& pattern, std::size_t max_points) {
  return capacity_exact(std::span<const LatticePoint>(pattern.points()), max_points);
}

std::vector<LatticePoint> ball_boundary(int d, double r) {
  if (!(r > 0)) throw InputError("ball radius must be positive");
  const double r2 = r * r;
  const auto reach = static_cast<std::int64_t>(std::ceil(r)) + 1;
  std::vector<LatticePoint> out;
  LatticePoint y(d);
  for (int j = 0; j < d; ++j) y[j] = -reach;
  while (true) {
    const auto n2 = static_cast<double>(y.norm2());
    if (n2 >= r2) {
      bool touches = false;
      for (int j = 0; j < d && !touches; ++j) {
        for (const std::int64_t s : {-1, 1}) {
          LatticePoint z = y;
          z[j] += s;
          touches = touches || static_cast<double>(z.norm2()) < r2;
        }
      }
      if (touches) out.push_back(y);
    }
    int j = 0;
    while (j < d && y[j] == reach) y[j++] = -reach;
    if (j == d) break;
    ++y[j];
  }
  return out;
}

namespace {

struct SphereTally {
  std::uint64_t hits = 0;
};

class SphereHitting {
public:
  SphereHitting(const PatternSet& pattern, double r, std::uint64_t samples)
      : points_(pattern.points()),
        d_(pattern.dim()),
        r2_(r * r),
        inner2_(pattern.radius() * pattern.radius()),
        samples_(samples),
        boundary_(ball_boundary(pattern.dim(), r)) {
    if (samples == 0) throw InputError("capacity_mc needs at least one sample per boundary point");
    if (pattern.dim() < 3) throw InputError("capacity_mc needs d >= 3");
    if (!(r > 2 * pattern.radius())) {
      throw InputError("capacity_mc radius r must exceed twice the pattern radius");
    }
  }

  std::size_t boundary_size() const { return boundary_.size(); }

  SphereTally run_point(std::size_t b, std::uint64_t seed) const {
    RandomStream rng(seed, b, stream_tag::capacity);
    SphereTally tally;
    for (std::uint64_t s = 0; s < samples_; ++s) {
      LatticePoint y = boundary_[b];
      std::int64_t norm2 = y.norm2();
      while (true) {
        const Move mv = draw_move(d_, rng);
        if (mv.axis >= 0) {
          norm2 += 2 * mv.sign * y[mv.axis] + 1;
          y[mv.axis] += mv.sign;
        }
        if (static_cast<double>(norm2) >= r2_) break;  // xi: left B_r (or never entered)
        if (static_cast<double>(norm2) < inner2_ && std::find(points_.begin(), points_.end(), y) != points_.end()) {
          ++tally.hits;
          break;
        }
      }
    }
    return tally;
  }

  CapacityResult combine(const std::vector<SphereTally>& tallies, double r) const {
    double sum = 0;
    double var = 0;
    const auto n = static_cast<double>(samples_);
    for (const auto& t : tallies) {
      const double p = static_cast<double>(t.hits) / n;
      sum += p;
      var += p * (1 - p) / n;
    }
    CapacityResult res;
    res.method = CapacityMethod::monte_carlo;
    res.value = 2 * sum;
    res.std_error = 2 * std::sqrt(var);
    res.r_used = r;
    return res;
  }

private:
  const std::vector<LatticePoint>& points_;
  int d_;
  double r2_;
  double inner2_;
  std::uint64_t samples_;
  std::vector<LatticePoint> boundary_;
};

}  // namespace

CapacityResult capacity_mc(const PatternSet& pattern, double r, std::uint64_t samples,
                           const CapacityMcOptions& options) {
  const SphereHitting job(pattern, r, samples);
  const auto tallies = map_runs(job.boundary_size(), options.workers,
                                [&](std::uint64_t b) { return job.run_point(b, options.seed); });
  return job.combine(tallies, r);
}

CapacityResult capacity_mc_serial(const PatternSet& pattern, double r, std::uint64_t samples, std::uint64_t seed) {
  const SphereHitting job(pattern, r, samples);
  const auto tallies = map_runs_serial(job.boundary_size(), [&](std::uint64_t b) { return job.run_point(b, seed); });
  return job.combine(tallies, r);
}

}  // namespace rilab
