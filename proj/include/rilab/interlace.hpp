#pragma once

#include <cstdint>
#include <vector>

#include "rilab/brownian.hpp"
#include "rilab/pattern.hpp"
#include "rilab/rng.hpp"

namespace rilab {

/// Random interlacement level u = d A sigma_1.
struct MixtureSpec {
  int d = 3;
  double A = 1.0;
  double level_multiplier() const { return d * A; }
};

/// P[I^u ∩ K = ∅] = exp(-u Cap(K)).
double vacancy(double u, const PatternSet& K);

/// E[exp(-d A sigma_1 Cap(K))], through the survival-function form of the
/// Laplace transform.
double rhs_theorem(const PatternSet& K, const MixtureSpec& spec);

inline constexpr std::size_t kMaxMarginalPoints = 12;

/// Finite-dimensional law on subsets B ⊆ K (bit masks over K's point order).
///
/// Built by inclusion-exclusion over the vacancy functional of every subset:
///   P[· ∩ K = B] = sum_{J ⊆ B} (-1)^{|J|} V((K \ B) ∪ J),
/// where V(S) = E[exp(-u Cap(S))] under the level law. Subset capacities come
/// from one Green matrix for K.
class PatternLaw {
public:
  /// Mixed interlacement: level d A sigma_1, integrated against the density of
  /// sigma_1 on a fixed Gauss-Legendre rule.
  static PatternLaw mixed(const PatternSet& K, const MixtureSpec& spec);

  /// Interlacement at a fixed level u.
  static PatternLaw fixed_level(const PatternSet& K, double u);

  std::size_t pattern_size() const { return k_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double probability(std::uint64_t mask) const;
  /// Vacancy functional V(S) for every subset mask S.
  const std::vector<double>& vacancy_functional() const { return vacancy_; }
  const std::vector<double>& subset_capacities() const { return caps_; }
  /// Number of cells whose tiny negative round-off was clamped to zero.
  int clamped_cells() const { return clamped_; }

  /// Draws B from the pmf with one uniform.
  std::uint64_t sample(RandomStream& rng) const;

private:
  PatternLaw(const PatternSet& K, std::vector<double> vacancy_of_subset);
  static std::vector<double> capacities(const PatternSet& K);

  std::size_t k_ = 0;
  std::vector<double> caps_;
  std::vector<double> vacancy_;
  std::vector<double> pmf_;
  int clamped_ = 0;
};

/// Mask of the points of B inside K; throws InputError if B ⊄ K.
std::uint64_t subset_mask(const PatternSet& K, const std::vector<LatticePoint>& B);

double marginal_tilde(const PatternSet& K, std::uint64_t B_mask, const MixtureSpec& spec);
double marginal_tilde(const PatternSet& K, const std::vector<LatticePoint>& B, const MixtureSpec& spec);

std::uint64_t sample_pattern(const PatternSet& K, const MixtureSpec& spec, RandomStream& rng);

}  // namespace rilab
