#include "comjac/real.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace comjac {

namespace {

thread_local Precision tls_precision = kDefaultPrecision;

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

}  // namespace

Precision working_precision() noexcept { return tls_precision; }

void set_working_precision(Precision bits) {
  if (bits < kMinPrecision) {
    throw std::invalid_argument("working precision must be at least 53 bits");
  }
  tls_precision = bits;
}

PrecisionScope::PrecisionScope(Precision bits) : saved_(tls_precision) {
  set_working_precision(bits);
}

PrecisionScope::~PrecisionScope() { tls_precision = saved_; }

Real::Real() {
  mpfr_init2(v_, tls_precision);
  mpfr_set_zero(v_, 1);
}

Real::Real(int v) : Real(static_cast<long>(v)) {}

Real::Real(long v) {
  mpfr_init2(v_, tls_precision);
  mpfr_set_si(v_, v, kRound);
}

Real::Real(double v) {
  mpfr_init2(v_, tls_precision);
  mpfr_set_d(v_, v, kRound);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRound);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRound);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    mpfr_swap(v_, other.v_);
  }
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from_string(std::string_view s) {
  std::string buf(s);
  Real r;
  if (buf.empty() || mpfr_set_str(r.v_, buf.c_str(), 10, kRound) != 0) {
    throw std::invalid_argument("not a decimal number: '" + buf + "'");
  }
  return r;
}

Real Real::pow2(long e) {
  Real r;
  mpfr_set_si_2exp(r.v_, 1, e, kRound);
  return r;
}

Real Real::nan() {
  Real r;
  mpfr_set_nan(r.v_);
  return r;
}

Real Real::pi() {
  Real r;
  mpfr_const_pi(r.v_, kRound);
  return r;
}

std::string Real::to_string() const {
  const int digits =
      static_cast<int>(std::ceil(static_cast<double>(mpfr_get_prec(v_)) * 0.30102999566398120)) + 2;
  return to_string(digits);
}

std::string Real::to_string(int significant_digits) const {
  if (significant_digits < 2) significant_digits = 2;
  char* out = nullptr;
  // %Re prints one digit before the point, so ask for digits-1 after it.
  if (mpfr_asprintf(&out, "%.*Re", significant_digits - 1, v_) < 0) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

double Real::to_double() const noexcept { return mpfr_get_d(v_, kRound); }

Precision Real::precision() const noexcept { return mpfr_get_prec(v_); }

bool Real::is_nan() const noexcept { return mpfr_nan_p(v_) != 0; }

bool Real::is_finite() const noexcept { return mpfr_number_p(v_) != 0; }

bool Real::is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }

int Real::sign() const noexcept {
  if (mpfr_nan_p(v_)) return 0;
  return mpfr_sgn(v_);
}

Real Real::operator-() const {
  Real r;
  mpfr_neg(r.v_, v_, kRound);
  return r;
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(v_, v_, rhs.v_, kRound);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(v_, v_, rhs.v_, kRound);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(v_, v_, rhs.v_, kRound);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  mpfr_div(v_, v_, rhs.v_, kRound);
  return *this;
}

namespace {

using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

inline Real bin(BinOp op, const Real& a, const Real& b) {
  Real r;
  op(r.mp(), a.mp(), b.mp(), kRound);
  return r;
}

}  // namespace

Real operator+(const Real& a, const Real& b) { return bin(mpfr_add, a, b); }
Real operator-(const Real& a, const Real& b) { return bin(mpfr_sub, a, b); }
Real operator*(const Real& a, const Real& b) { return bin(mpfr_mul, a, b); }
Real operator/(const Real& a, const Real& b) { return bin(mpfr_div, a, b); }

Real operator+(const Real& a, long b) {
  Real r;
  mpfr_add_si(r.mp(), a.mp(), b, kRound);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r;
  mpfr_sub_si(r.mp(), a.mp(), b, kRound);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r;
  mpfr_mul_si(r.mp(), a.mp(), b, kRound);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r;
  mpfr_div_si(r.mp(), a.mp(), b, kRound);
  return r;
}
Real operator+(long a, const Real& b) { return b + a; }
Real operator-(long a, const Real& b) {
  Real r;
  mpfr_si_sub(r.mp(), a, b.mp(), kRound);
  return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(long a, const Real& b) {
  Real r;
  mpfr_si_div(r.mp(), a, b.mp(), kRound);
  return r;
}

bool operator==(const Real& a, const Real& b) noexcept {
  return !a.is_nan() && !b.is_nan() && mpfr_cmp(a.mp(), b.mp()) == 0;
}
bool operator!=(const Real& a, const Real& b) noexcept { return !(a == b); }
bool operator<(const Real& a, const Real& b) noexcept { return mpfr_less_p(a.mp(), b.mp()) != 0; }
bool operator<=(const Real& a, const Real& b) noexcept {
  return mpfr_lessequal_p(a.mp(), b.mp()) != 0;
}
bool operator>(const Real& a, const Real& b) noexcept {
  return mpfr_greater_p(a.mp(), b.mp()) != 0;
}
bool operator>=(const Real& a, const Real& b) noexcept {
  return mpfr_greaterequal_p(a.mp(), b.mp()) != 0;
}
bool operator==(const Real& a, long b) noexcept {
  return !a.is_nan() && mpfr_cmp_si(a.mp(), b) == 0;
}
bool operator!=(const Real& a, long b) noexcept { return !(a == b); }
bool operator<(const Real& a, long b) noexcept { return !a.is_nan() && mpfr_cmp_si(a.mp(), b) < 0; }
bool operator<=(const Real& a, long b) noexcept {
  return !a.is_nan() && mpfr_cmp_si(a.mp(), b) <= 0;
}
bool operator>(const Real& a, long b) noexcept { return !a.is_nan() && mpfr_cmp_si(a.mp(), b) > 0; }
bool operator>=(const Real& a, long b) noexcept {
  return !a.is_nan() && mpfr_cmp_si(a.mp(), b) >= 0;
}

Real sqrt(const Real& x) {
  Real r;
  mpfr_sqrt(r.mp(), x.mp(), kRound);
  return r;
}

Real abs(const Real& x) {
  Real r;
  mpfr_abs(r.mp(), x.mp(), kRound);
  return r;
}

Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.mp(), y.mp(), x.mp(), kRound);
  return r;
}

Real acos(const Real& x) {
  Real r;
  mpfr_acos(r.mp(), x.mp(), kRound);
  return r;
}

Real log(const Real& x) {
  Real r;
  mpfr_log(r.mp(), x.mp(), kRound);
  return r;
}

Real log2(const Real& x) {
  Real r;
  mpfr_log2(r.mp(), x.mp(), kRound);
  return r;
}

Real pow_int(const Real& x, long n) {
  Real r;
  mpfr_pow_si(r.mp(), x.mp(), n, kRound);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

}  // namespace comjac
