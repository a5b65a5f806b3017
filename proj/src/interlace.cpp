#include "rilab/interlace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>

#include "rilab/potential.hpp"

namespace rilab {

namespace {

void check_spec(const MixtureSpec& spec) {
  if (!(spec.level_multiplier() > 0)) throw InputError("mixture level multiplier d*A must be positive");
}

void check_size(const PatternSet& K) {
  if (K.size() > kMaxMarginalPoints) {
    throw InputError("pattern marginals limited to " + std::to_string(kMaxMarginalPoints) + " points");
  }
}

}  // namespace

double vacancy(double u, const PatternSet& K) {
  if (!(u >= 0)) throw InputError("interlacement level must be nonnegative");
  return std::exp(-u * capacity_exact(K).value);
}

double rhs_theorem(const PatternSet& K, const MixtureSpec& spec) {
  check_spec(spec);
  if (K.dim() != spec.d) throw DimensionError("pattern dimension differs from mixture dimension");
  return laplace_sigma1(spec.level_multiplier() * capacity_exact(K).value, spec.d);
}

std::vector<double> PatternLaw::capacities(const PatternSet& K) {
  check_size(K);
  const std::size_t k = K.size();
  const auto green = green_matrix(std::span<const LatticePoint>(K.points()));
  std::vector<double> caps(std::size_t{1} << k, 0.0);
  for (std::uint64_t mask = 1; mask < caps.size(); ++mask) caps[mask] = capacity_from_green(green, k, mask);
  return caps;
}

PatternLaw::PatternLaw(const PatternSet& K, std::vector<double> vacancy_of_subset)
    : k_(K.size()), vacancy_(std::move(vacancy_of_subset)) {
  const std::uint64_t full = (std::uint64_t{1} << k_) - 1;
  pmf_.assign(vacancy_.size(), 0.0);
  for (std::uint64_t B = 0; B <= full; ++B) {
    const std::uint64_t rest = full & ~B;
    double p = 0;
    // All submasks J of B, including the empty one.
    for (std::uint64_t J = B;; J = (J - 1) & B) {
      const double v = vacancy_[rest | J];
      p += (std::popcount(J) & 1) ? -v : v;
      if (J == 0) break;
    }
    if (p < 0) {
      if (p < -1e-10) throw NumericalError("pattern marginal negative beyond round-off");
      p = 0;
      ++clamped_;
    }
    pmf_[B] = p;
  }
  if (clamped_ > 0) {
    std::cerr << "warning: clamped " << clamped_ << " marginal(s) with round-off below zero\n";
  }
}

PatternLaw PatternLaw::mixed(const PatternSet& K, const MixtureSpec& spec) {
  check_spec(spec);
  if (K.dim() != spec.d) throw DimensionError("pattern dimension differs from mixture dimension");
  auto caps = capacities(K);
  const MixtureRule rule = MixtureRule::build(spec.d);
  const double c = spec.level_multiplier();
  std::vector<double> v(caps.size());
  for (std::size_t s = 0; s < caps.size(); ++s) {
    double acc = rule.mass_below;  // level ~ 0 below t_floor
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::exp(-c * rule.nodes[i] * caps[s]);
    v[s] = acc;
  }
  PatternLaw law(K, std::move(v));
  law.caps_ = std::move(caps);
  return law;
}

PatternLaw PatternLaw::fixed_level(const PatternSet& K, double u) {
  if (!(u >= 0)) throw InputError("interlacement level must be nonnegative");
  auto caps = capacities(K);
  std::vector<double> v(caps.size());
  for (std::size_t s = 0; s < caps.size(); ++s) v[s] = std::exp(-u * caps[s]);
  PatternLaw law(K, std::move(v));
  law.caps_ = std::move(caps);
  return law;
}

double PatternLaw::probability(std::uint64_t mask) const {
  if (mask >= pmf_.size()) throw InputError("subset mask is not a subset of K");
  return pmf_[mask];
}

std::uint64_t PatternLaw::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  double cum = 0;
  std::uint64_t last = 0;
  for (std::uint64_t B = 0; B < pmf_.size(); ++B) {
    if (pmf_[B] <= 0) continue;
    cum += pmf_[B];
    last = B;
    if (u < cum) return B;
  }
  return last;  // u above the rounded total mass
}

std::uint64_t subset_mask(const PatternSet& K, const std::vector<LatticePoint>& B) {
  std::uint64_t mask = 0;
  for (const auto& b : B) {
    const auto it = std::find(K.points().begin(), K.points().end(), b);
    if (it == K.points().end()) throw InputError("B is not a subset of K: " + b.to_string());
    mask |= std::uint64_t{1} << static_cast<std::size_t>(it - K.points().begin());
  }
  return mask;
}

double marginal_tilde(const PatternSet& K, std::uint64_t B_mask, const MixtureSpec& spec) {
  check_size(K);
  if (B_mask >> K.size()) throw InputError("B is not a subset of K");
  return PatternLaw::mixed(K, spec).probability(B_mask);
}

double marginal_tilde(const PatternSet& K, const std::vector<LatticePoint>& B, const MixtureSpec& spec) {
  return marginal_tilde(K, subset_mask(K, B), spec);
}

std::uint64_t sample_pattern(const PatternSet& K, const MixtureSpec& spec, RandomStream& rng) {
  return PatternLaw::mixed(K, spec).sample(rng);
}

}  // namespace rilab
