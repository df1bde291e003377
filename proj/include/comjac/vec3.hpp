#pragma once

#include "comjac/real.hpp"

namespace comjac {

/// 3-vector of arbitrary-precision reals (momentum units, c = 1).
struct Vec3 {
  Real x, y, z;

  Vec3() = default;
  Vec3(Real x_, Real y_, Real z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  static Vec3 zero() { return Vec3{Real(0), Real(0), Real(0)}; }

  const Real& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  Real& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline Vec3 operator*(const Real& c, const Vec3& a) { return {c * a.x, c * a.y, c * a.z}; }

inline Vec3 operator/(const Vec3& a, const Real& c) { return {a.x / c, a.y / c, a.z / c}; }

inline Real dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Real norm_sq(const Vec3& a) { return dot(a, a); }

inline Real norm(const Vec3& a) { return sqrt(norm_sq(a)); }

inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

}  // namespace comjac
