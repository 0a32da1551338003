#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string_view>
#include <thread>
#include <vector>

namespace pklo {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline constexpr double sq(double v) { return v * v; }

/// Orthonormal in-plane basis for the plane orthogonal to n (|n| = 1).
/// Built so that negating n maps (e1, e2) to (-e1, e2); together with the
/// angular layout of PlaneRule this makes plane-rule node sets invariant
/// under n -> -n, which the kernel swap symmetries rely on.
inline std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  const double ax = std::fabs(n.x), ay = std::fabs(n.y), az = std::fabs(n.z);
  Vec3 axis{1.0, 0.0, 0.0};
  if (ay <= ax && ay <= az)
    axis = {0.0, 1.0, 0.0};
  else if (az <= ax && az <= ay)
    axis = {0.0, 0.0, 1.0};
  Vec3 e1 = axis.cross(n);
  const double inv = 1.0 / e1.norm();
  e1 = e1 * inv;
  const Vec3 e2 = n.cross(e1);
  return {e1, e2};
}

// ---------------------------------------------------------------------------
// Deterministic RNG: xoshiro256++ seeded through splitmix64. Distributions are
// hand-rolled on top of 64-bit draws so streams reproduce bit-for-bit across
// runs and platforms.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  /// Stream derived from a global seed and a label; one independent stream per check.
  static Rng stream(std::uint64_t seed, std::string_view label) {
    return Rng(seed ^ fnv1a64(label));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t uniform_index(std::uint64_t n) { return next() % n; }

  /// Standard normal via Box-Muller (two uniforms per draw, no cached state).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Vec3 normal3() { return {normal(), normal(), normal()}; }

  Vec3 on_sphere() {
    Vec3 v = normal3();
    double n = v.norm();
    while (n < 1e-300) {
      v = normal3();
      n = v.norm();
    }
    return v * (1.0 / n);
  }

  Vec3 in_ball(double radius) {
    const Vec3 dir = on_sphere();
    const double r = radius * std::cbrt(uniform());
    return dir * r;
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

// ---------------------------------------------------------------------------
// Deterministic parallelism: fixed block partition, results reduced in block
// order, so numbers are independent of the worker count.
// ---------------------------------------------------------------------------

inline int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(first, last) over [0, n) split into contiguous blocks. Writes into
/// disjoint output slots are race-free; any reductions must be done by the
/// caller over per-block storage, in block order.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  const int nt = effective_threads(threads);
  if (nt <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  const std::size_t nblocks = static_cast<std::size_t>(nt);
  std::vector<std::thread> pool;
  pool.reserve(nblocks);
  const std::size_t chunk = (n + nblocks - 1) / nblocks;
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * chunk;
    if (lo >= n) break;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pklo
