#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rilab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside an operation's precondition.
class InputError : public Error {
public:
  using Error::Error;
};

/// Two lattice or torus values disagree on d or N.
class DimensionError : public InputError {
public:
  using InputError::InputError;
};

/// A requested numerical accuracy cannot be met.
class NumericalError : public Error {
public:
  using Error::Error;
};

inline constexpr int kMaxDim = 8;

/// Largest admissible half box side; keeps every coordinate and squared norm
/// far from int64 overflow.
inline constexpr std::int64_t kMaxHalfSide = std::int64_t{1} << 20;

/// Point of Z^d with d <= kMaxDim. Unused trailing coordinates are kept at zero
/// so that defaulted comparison and hashing only see meaningful data.
class LatticePoint {
public:
  LatticePoint() = default;
  explicit LatticePoint(int d);
  LatticePoint(std::initializer_list<std::int64_t> coords);
  static LatticePoint from_span(std::span<const std::int64_t> coords);
  static LatticePoint unit(int d, int axis, std::int64_t sign = 1);

  int dim() const { return dim_; }
  std::int64_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const std::int64_t> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  std::int64_t norm2() const;
  std::int64_t norm_inf() const;
  double norm() const;

  LatticePoint& operator+=(const LatticePoint& o);
  LatticePoint& operator-=(const LatticePoint& o);
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  LatticePoint operator-() const;
  LatticePoint scaled(std::int64_t k) const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  std::string to_string() const;

private:
  int dim_ = 0;
  std::array<std::int64_t, kMaxDim> c_{};
};

/// Point of T_N = [-N/2, N/2)^d ∩ Z^d.
class TorusPoint {
public:
  TorusPoint() = default;
  /// Throws InputError unless every coordinate already lies in [-N/2, N/2).
  TorusPoint(LatticePoint coords, std::int64_t side);

  int dim() const { return p_.dim(); }
  std::int64_t side() const { return side_; }
  std::int64_t operator[](int i) const { return p_[i]; }
  const LatticePoint& lattice() const { return p_; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  std::string to_string() const { return p_.to_string(); }

private:
  LatticePoint p_;
  std::int64_t side_ = 1;
};

/// Canonical residue of v modulo side, shifted into [-side/2, side/2).
std::int64_t wrap_coordinate(std::int64_t v, std::int64_t side);

/// The projection Z^d -> T_N.
TorusPoint project(const LatticePoint& x, std::int64_t side);

/// Torus translation y -> project(x + y).
TorusPoint translate(const TorusPoint& y, const TorusPoint& x);

TorusPoint negate(const TorusPoint& x);

/// Row-major index, least-significant coordinate first, offset floor(N/2).
std::uint64_t enumerate_index(const TorusPoint& y);

/// Inverse of enumerate_index.
TorusPoint torus_point_at(std::uint64_t index, int d, std::int64_t side);

/// N^d, throwing InputError if it does not fit in 63 bits.
std::uint64_t torus_volume(int d, std::int64_t side);

std::uint64_t ipow(std::uint64_t base, int exp);

struct WalkConfig {
  int d = 3;
  std::int64_t N = 16;
  std::int64_t m = 4;
  double delta = 2.625;
  double zeta = 0.5;
  double C1 = 3.0;
  std::uint64_t seed = 1;
  int workers = 1;

  std::int64_t L() const { return m * N; }
  /// Stretch length floor(N^delta).
  std::int64_t n() const;
  /// A = m^2 N^(2-d) = L^2 / N^d.
  double A() const;
  /// A as the exact rational m^2 / N^(d-2); only meaningful for d >= 2.
  std::pair<std::uint64_t, std::uint64_t> A_rational() const;
  /// Separation radius g = floor(N^zeta).
  std::int64_t separation() const;
  std::uint64_t volume() const { return torus_volume(d, N); }
};

struct Violation {
  std::string name;
  std::string message;
};

std::vector<Violation> validate_params(const WalkConfig& cfg);

/// Throws InputError listing every violation, if any.
void require_valid(const WalkConfig& cfg);

}  // namespace rilab
