#include "rilab/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rilab {

PatternSet::PatternSet(std::vector<LatticePoint> points, double radius, std::size_t anchor)
    : points_(std::move(points)), anchor_(anchor) {
  if (points_.empty()) throw InputError("pattern must be nonempty");
  if (points_.size() > 64) throw InputError("pattern limited to 64 points");
  if (anchor_ >= points_.size()) throw InputError("pattern anchor out of range");
  const int d = points_.front().dim();
  double max_norm = 0;
  for (const auto& p : points_) {
    if (p.dim() != d) throw DimensionError("pattern points differ in dimension");
    max_norm = std::max(max_norm, p.norm());
  }
  auto sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("pattern contains duplicate points");
  }
  radius_ = radius > 0 ? radius : std::floor(max_norm) + 1;
  if (!(max_norm < radius_)) {
    throw InputError("pattern point outside B_R(o) for R=" + std::to_string(radius_));
  }
}

LatticePoint parse_point(const std::string& text) {
  std::vector<std::int64_t> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      c.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError("cannot parse coordinate '" + item + "' in '" + text + "'");
    }
  }
  if (c.empty()) throw InputError("empty point '" + text + "'");
  return LatticePoint::from_span(c);
}

PatternSet PatternSet::preset(const std::string& name, int d) {
  std::vector<LatticePoint> pts;
  if (name == "origin") {
    pts.emplace_back(d);
  } else if (name == "pair") {
    pts = {LatticePoint(d), LatticePoint::unit(d, 0)};
  } else if (name == "plus" || name == "plus-shape") {
    pts.emplace_back(d);
    for (int a = 0; a < d; ++a) {
      pts.push_back(LatticePoint::unit(d, a, 1));
      pts.push_back(LatticePoint::unit(d, a, -1));
    }
  } else if (name == "cube2") {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      LatticePoint p(d);
      for (int a = 0; a < d; ++a) p[a] = static_cast<std::int64_t>((mask >> a) & 1U);
      pts.push_back(p);
    }
  } else {
    std::stringstream ss(name);
    std::string item;
    while (std::getline(ss, item, ';')) pts.push_back(parse_point(item));
    for (const auto& p : pts) {
      if (p.dim() != d) throw DimensionError("pattern point " + p.to_string() + " is not " + std::to_string(d) + "-dimensional");
    }
  }
  return PatternSet(std::move(pts));
}

PatternSet PatternSet::subset(std::uint64_t mask) const {
  std::vector<LatticePoint> pts;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if ((mask >> i) & 1U) pts.push_back(points_[i]);
  }
  return PatternSet(std::move(pts), radius_);
}

PatternSet PatternSet::translated(const LatticePoint& z) const {
  std::vector<LatticePoint> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(p + z);
  return PatternSet(std::move(pts), 0, anchor_);
}

std::string PatternSet::describe() const {
  std::string s;
  for (std::size_t i = 0; i < points_.size(); ++i) s += (i ? ";" : "") + points_[i].to_string();
  return s;
}

}  // namespace rilab
