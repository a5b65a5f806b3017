#include "rilab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rilab {

LatticePoint::LatticePoint(int d) : dim_(d) {
  if (d < 1 || d > kMaxDim) {
    throw DimensionError("lattice dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
}

LatticePoint::LatticePoint(std::initializer_list<std::int64_t> coords)
    : LatticePoint(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

LatticePoint LatticePoint::from_span(std::span<const std::int64_t> coords) {
  LatticePoint p(static_cast<int>(coords.size()));
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  return p;
}

LatticePoint LatticePoint::unit(int d, int axis, std::int64_t sign) {
  LatticePoint p(d);
  p[axis] = sign;
  return p;
}

std::int64_t LatticePoint::norm2() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

std::int64_t LatticePoint::norm_inf() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s = std::max(s, c_[i] < 0 ? -c_[i] : c_[i]);
  return s;
}

double LatticePoint::norm() const { return std::sqrt(static_cast<double>(norm2())); }

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  if (o.dim_ != dim_) throw DimensionError("lattice points of different dimension");
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) {
  if (o.dim_ != dim_) throw DimensionError("lattice points of different dimension");
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

LatticePoint LatticePoint::scaled(std::int64_t k) const {
  LatticePoint r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] *= k;
  return r;
}

std::string LatticePoint::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

TorusPoint::TorusPoint(LatticePoint coords, std::int64_t side) : p_(coords), side_(side) {
  if (side < 1) throw InputError("torus side must be positive");
  const std::int64_t lo = -(side / 2);
  const std::int64_t hi = side - side / 2;
  for (int i = 0; i < p_.dim(); ++i) {
    if (p_[i] < lo || p_[i] >= hi) {
      throw InputError("coordinate " + std::to_string(p_[i]) + " outside [-N/2, N/2) for N=" +
                       std::to_string(side));
    }
  }
}

std::int64_t wrap_coordinate(std::int64_t v, std::int64_t side) {
  std::int64_t r = v % side;
  if (r < 0) r += side;
  // ceil(N/2) == N - floor(N/2)
  if (r >= side - side / 2) r -= side;
  return r;
}

TorusPoint project(const LatticePoint& x, std::int64_t side) {
  if (side < 1) throw InputError("torus side must be positive");
  LatticePoint r(x.dim());
  for (int i = 0; i < x.dim(); ++i) r[i] = wrap_coordinate(x[i], side);
  return TorusPoint(r, side);
}

TorusPoint translate(const TorusPoint& y, const TorusPoint& x) {
  if (y.side() != x.side() || y.dim() != x.dim()) {
    throw DimensionError("translate: torus points differ in N or d");
  }
  return project(y.lattice() + x.lattice(), y.side());
}

TorusPoint negate(const TorusPoint& x) { return project(-x.lattice(), x.side()); }

std::uint64_t enumerate_index(const TorusPoint& y) {
  const auto side = static_cast<std::uint64_t>(y.side());
  const std::int64_t half = y.side() / 2;
  std::uint64_t idx = 0;
  std::uint64_t stride = 1;
  for (int j = 0; j < y.dim(); ++j) {
    idx += static_cast<std::uint64_t>(y[j] + half) * stride;
    stride *= side;
  }
  return idx;
}

TorusPoint torus_point_at(std::uint64_t index, int d, std::int64_t side) {
  LatticePoint p(d);
  const auto s = static_cast<std::uint64_t>(side);
  for (int j = 0; j < d; ++j) {
    p[j] = static_cast<std::int64_t>(index % s) - side / 2;
    index /= s;
  }
  return TorusPoint(p, side);
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::uint64_t torus_volume(int d, std::int64_t side) {
  if (side < 1) throw InputError("torus side must be positive");
  std::uint64_t v = 1;
  for (int i = 0; i < d; ++i) {
    if (v > (std::numeric_limits<std::uint64_t>::max() >> 1) / static_cast<std::uint64_t>(side)) {
      throw InputError("N^d does not fit in 63 bits");
    }
    v *= static_cast<std::uint64_t>(side);
  }
  return v;
}

std::int64_t WalkConfig::n() const {
  // Exact powers such as 16^2.625 = 2^10.5 must not lose the floor to round-off.
  const long double v = std::pow(static_cast<long double>(N), static_cast<long double>(delta));
  auto k = static_cast<std::int64_t>(std::floor(v));
  if (static_cast<long double>(k + 1) <= v * (1 + 1e-15L)) ++k;
  return k;
}

double WalkConfig::A() const {
  const double l = static_cast<double>(L());
  return l * l / std::pow(static_cast<double>(N), d);
}

std::pair<std::uint64_t, std::uint64_t> WalkConfig::A_rational() const {
  std::uint64_t num = static_cast<std::uint64_t>(m * m);
  std::uint64_t den = d >= 2 ? ipow(static_cast<std::uint64_t>(N), d - 2) : 1;
  if (d < 2) num *= ipow(static_cast<std::uint64_t>(N), 2 - d);
  const std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::int64_t WalkConfig::separation() const {
  return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(N), zeta) + 1e-12));
}

std::vector<Violation> validate_params(const WalkConfig& cfg) {
  std::vector<Violation> out;
  auto fail = [&](std::string name, std::string msg) { out.push_back({std::move(name), std::move(msg)}); };
  const double d = cfg.d;

  if (cfg.d < 3 || cfg.d > kMaxDim) {
    fail("d >= 3", "dimension must satisfy 3 <= d <= " + std::to_string(kMaxDim));
  }
  if (cfg.N < 1) fail("N >= 1", "torus side N must be positive");
  if (cfg.m < 1) fail("m >= 1", "multiplier m must be positive");
  if (cfg.N >= 1 && cfg.m >= 1 && cfg.L() > kMaxHalfSide) {
    fail("L <= 2^20", "half box side L = m*N exceeds 2^20");
  }
  if (cfg.workers < 1) fail("workers >= 1", "worker count must be positive");
  if (!(cfg.C1 > 0)) fail("C1 > 0", "C1 must be positive");
  if (!(cfg.delta > 2 && cfg.delta < d)) fail("2 < delta < d", "stretch exponent delta must lie in (2, d)");
  if (cfg.d >= 2 && !(2 * cfg.delta > d * d / (d - 1))) {
    fail("2δ > d²/(d−1)", "stretch exponent violates 2δ > d²/(d−1)");
  }
  if (!(cfg.zeta > 0 && cfg.zeta < cfg.delta / d)) {
    fail("0 < ζ < δ/d", "separation exponent violates 0 < ζ < δ/d");
  }
  if (!(cfg.zeta * (d - 2) > d - cfg.delta)) {
    fail("ζ(d−2) > d−δ", "separation exponent violates ζ(d−2) > d−δ");
  }
  if (out.empty()) {
    // A = L^2 / N^d must hold as an identity of the stored parameters.
    const auto [num, den] = cfg.A_rational();
    const double a = static_cast<double>(num) / static_cast<double>(den);
    if (std::abs(a - cfg.A()) > 4 * std::numeric_limits<double>::epsilon() * a) {
      fail("L² = A·N^d", "scaling constant does not match L^2 / N^d");
    }
  }
  return out;
}

void require_valid(const WalkConfig& cfg) {
  const auto v = validate_params(cfg);
  if (v.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : v) msg += " [" + e.name + "] " + e.message + ";";
  throw InputError(msg);
}

}  // namespace rilab
