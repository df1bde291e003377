#include "comjac/rng.hpp"

#include <cmath>

namespace comjac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RngStream::derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd1342543de82ef95ULL + 1));
}

double RngStream::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::array<double, 3> RngStream::in_ball(double radius) {
  for (;;) {
    std::array<double, 3> v = {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (n2 <= 1.0) {
      return {v[0] * radius, v[1] * radius, v[2] * radius};
    }
  }
}

std::array<double, 3> RngStream::on_sphere() {
  for (;;) {
    std::array<double, 3> v = {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (n2 > 1e-12 && n2 <= 1.0) {
      double n = std::sqrt(n2);
      return {v[0] / n, v[1] / n, v[2] / n};
    }
  }
}

}  // namespace comjac
