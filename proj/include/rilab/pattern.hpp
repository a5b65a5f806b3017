#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rilab/lattice.hpp"

namespace rilab {

/// Finite nonempty set K of lattice points inside the open ball B_R(o), with a
/// distinguished anchor point.
class PatternSet {
public:
  /// Throws InputError on an empty list, duplicate points, mixed dimensions, or
  /// a point not strictly inside B_R(o). radius <= 0 picks the smallest integer
  /// radius that contains every point.
  explicit PatternSet(std::vector<LatticePoint> points, double radius = 0, std::size_t anchor = 0);

  /// Named presets: "origin", "pair" ({o, e1}), "plus" (o and its 2d
  /// neighbours), "cube2" ({0,1}^d). Anything else is parsed as an explicit
  /// list "x1,x2,...;y1,y2,...".
  static PatternSet preset(const std::string& name, int d);

  int dim() const { return points_.front().dim(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<LatticePoint>& points() const { return points_; }
  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
  const LatticePoint& anchor() const { return points_[anchor_]; }
  double radius() const { return radius_; }

  /// Sub-pattern selected by a bit mask over point indices; mask must be nonzero.
  PatternSet subset(std::uint64_t mask) const;
  PatternSet translated(const LatticePoint& z) const;

  std::string describe() const;

private:
  std::vector<LatticePoint> points_;
  double radius_ = 0;
  std::size_t anchor_ = 0;
};

/// Parses "a,b,c" into a lattice point.
LatticePoint parse_point(const std::string& text);

}  // namespace rilab
