#pragma once

#include <mpfr.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace comjac {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 200;
inline constexpr Precision kMinPrecision = 53;

/// Thread-local working precision in bits. Every Real constructed and every
/// arithmetic result on this thread uses this precision, so a whole call tree
/// runs at a single precision unless a PrecisionScope changes it.
Precision working_precision() noexcept;
void set_working_precision(Precision bits);

/// RAII guard: set the working precision for the current scope, restore on exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(Precision bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  Precision saved_;
};

/// Arbitrary-precision real backed by MPFR, round-to-nearest.
class Real {
 public:
  Real();  // zero at working precision
  Real(int v);
  Real(long v);
  explicit Real(double v);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parse a decimal string at working precision. Throws std::invalid_argument
  /// on malformed input.
  static Real from_string(std::string_view s);
  /// Exact power of two (2^e).
  static Real pow2(long e);
  static Real nan();
  static Real pi();

  /// Decimal string carrying ceil(precision*log10(2)) + 2 significant digits,
  /// enough for exact round-trip through from_string at the same precision.
  std::string to_string() const;
  std::string to_string(int significant_digits) const;
  double to_double() const noexcept;

  Precision precision() const noexcept;
  bool is_nan() const noexcept;
  bool is_finite() const noexcept;
  bool is_zero() const noexcept;
  int sign() const noexcept;  // -1, 0, +1 (0 for NaN)

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  mpfr_srcptr mp() const noexcept { return v_; }
  mpfr_ptr mp() noexcept { return v_; }

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator+(long a, const Real& b);
Real operator-(long a, const Real& b);
Real operator*(long a, const Real& b);
Real operator/(long a, const Real& b);

bool operator==(const Real& a, const Real& b) noexcept;
bool operator!=(const Real& a, const Real& b) noexcept;
bool operator<(const Real& a, const Real& b) noexcept;
bool operator<=(const Real& a, const Real& b) noexcept;
bool operator>(const Real& a, const Real& b) noexcept;
bool operator>=(const Real& a, const Real& b) noexcept;
bool operator==(const Real& a, long b) noexcept;
bool operator!=(const Real& a, long b) noexcept;
bool operator<(const Real& a, long b) noexcept;
bool operator<=(const Real& a, long b) noexcept;
bool operator>(const Real& a, long b) noexcept;
bool operator>=(const Real& a, long b) noexcept;

Real sqrt(const Real& x);
Real abs(const Real& x);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real atan2(const Real& y, const Real& x);
Real acos(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real pow_int(const Real& x, long n);

std::ostream& operator<<(std::ostream& os, const Real& x);

}  // namespace comjac
