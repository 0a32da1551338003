#pragma once

#include <cstddef>
#include <vector>

#include "pklo/common.hpp"

namespace pklo {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Gauss-Legendre mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Unit-sphere product rule: `order` Gauss-Legendre nodes in cos(theta) times
/// 2*order uniform azimuthal nodes. Exact for spherical polynomials up to
/// degree 2*order - 1; node set is antipodally symmetric.
struct SphereRule {
  int order = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;  // sum to 4*pi

  std::size_t size() const { return nodes.size(); }
};

SphereRule sphere_rule(int order);

/// Polar rule on the plane orthogonal to a unit vector n, with a radial mesh
/// graded toward the origin (r = r_max * u^grading, Gauss-Legendre in u) so
/// that integrands with an r^(gamma-2) singularity are resolved. Angular
/// layout theta_q = 2*pi*(q + 1/2)/n_angular with n_angular even keeps the
/// in-plane node set invariant under n -> -n.
struct PlaneRule {
  double r_max = 0.0;
  double gamma = 0.0;
  double grading = 0.0;
  std::vector<double> r;         // radial nodes, ascending, in (0, r_max]
  std::vector<double> r_weight;  // includes the polar area factor r * dr
  std::vector<double> cos_theta;
  std::vector<double> sin_theta;
  double theta_weight = 0.0;  // 2*pi / n_angular

  std::size_t radial_size() const { return r.size(); }
  std::size_t angular_size() const { return cos_theta.size(); }

  /// Integrates f over the full rule; f takes in-plane coordinates (w1, w2).
  template <class F>
  double integrate(F&& f) const {
    double total = 0.0;
    for (std::size_t p = 0; p < r.size(); ++p) {
      double ring = 0.0;
      for (std::size_t q = 0; q < cos_theta.size(); ++q)
        ring += f(r[p] * cos_theta[q], r[p] * sin_theta[q]);
      total += r_weight[p] * ring;
    }
    return total * theta_weight;
  }
};

PlaneRule plane_rule(int n_radial, int n_angular, double r_max, double gamma);
PlaneRule plane_rule(int n_radial, int n_angular, double r_max, double gamma, double grading);

/// Uniform Cartesian midpoint grid on [-R, R]^3. N must be even so the node
/// set is symmetric under xi -> -xi and contains no node at the origin.
struct VelocityGrid {
  int n = 0;
  double extent = 0.0;  // R
  double spacing = 0.0;
  double weight = 0.0;  // spacing^3, equal for all nodes

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

  Vec3 node(std::size_t idx) const {
    const std::size_t nn = static_cast<std::size_t>(n);
    const std::size_t a = idx % nn, b = (idx / nn) % nn, c = idx / (nn * nn);
    return {coord(a), coord(b), coord(c)};
  }

  std::size_t index(int a, int b, int c) const {
    const std::size_t nn = static_cast<std::size_t>(n);
    return static_cast<std::size_t>(a) + nn * (static_cast<std::size_t>(b) + nn * c);
  }

  /// Index of the reflected node -xi.
  std::size_t reflect(std::size_t idx) const {
    const std::size_t nn = static_cast<std::size_t>(n);
    const std::size_t a = idx % nn, b = (idx / nn) % nn, c = idx / (nn * nn);
    return (nn - 1 - a) + nn * ((nn - 1 - b) + nn * (nn - 1 - c));
  }

 private:
  // (i + 0.5 - N/2) * h is exactly antisymmetric under i -> N-1-i, so the
  // node set maps to itself under negation bit-for-bit.
  double coord(std::size_t i) const {
    return (static_cast<double>(i) + 0.5 - 0.5 * n) * spacing;
  }
};

VelocityGrid build_grid(int n, double extent);

/// Radial Gauss-Legendre panels over [0, r_end] split at `breakpoints`
/// (breakpoints outside (0, r_end) are ignored). Used to keep integrands with
/// square-root kinks at channel thresholds piecewise smooth.
GaussRule segmented_radial_rule(std::vector<double> breakpoints, double r_end,
                                int nodes_per_segment, double max_segment_length);

}  // namespace pklo
