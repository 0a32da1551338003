#include "pklo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pklo {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-based initial guess.
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = w;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

SphereRule sphere_rule(int order) {
  if (order < 1) throw std::invalid_argument("sphere_rule: unsupported order (must be >= 1)");
  const GaussRule polar = gauss_legendre(order);
  const int n_az = 2 * order;
  SphereRule rule;
  rule.order = order;
  rule.nodes.reserve(static_cast<std::size_t>(order) * n_az);
  rule.weights.reserve(rule.nodes.capacity());
  const double wphi = two_pi / n_az;
  for (int i = 0; i < order; ++i) {
    const double c = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_az; ++j) {
      const double phi = wphi * (j + 0.5);
      rule.nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
      rule.weights.push_back(polar.weights[i] * wphi);
    }
  }
  return rule;
}

PlaneRule plane_rule(int n_radial, int n_angular, double r_max, double gamma, double grading) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("plane_rule: gamma must be in (0, 1)");
  if (r_max <= 0.0) throw std::invalid_argument("plane_rule: r_max must be positive");
  if (n_radial < 1 || n_angular < 2) throw std::invalid_argument("plane_rule: too few nodes");
  if (n_angular % 2 != 0) throw std::invalid_argument("plane_rule: n_angular must be even");
  if (grading < 1.0) throw std::invalid_argument("plane_rule: grading must be >= 1");

  PlaneRule rule;
  rule.r_max = r_max;
  rule.gamma = gamma;
  rule.grading = grading;
  const GaussRule gl = gauss_legendre(n_radial, 0.0, 1.0);
  rule.r.resize(n_radial);
  rule.r_weight.resize(n_radial);
  for (int p = 0; p < n_radial; ++p) {
    const double u = gl.nodes[p];
    const double r = r_max * std::pow(u, grading);
    const double dr_du = r_max * grading * std::pow(u, grading - 1.0);
    rule.r[p] = r;
    rule.r_weight[p] = gl.weights[p] * r * dr_du;  // area element r dr
  }
  rule.cos_theta.resize(n_angular);
  rule.sin_theta.resize(n_angular);
  for (int q = 0; q < n_angular; ++q) {
    const double theta = two_pi * (q + 0.5) / n_angular;
    rule.cos_theta[q] = std::cos(theta);
    rule.sin_theta[q] = std::sin(theta);
  }
  rule.theta_weight = two_pi / n_angular;
  return rule;
}

PlaneRule plane_rule(int n_radial, int n_angular, double r_max, double gamma) {
  return plane_rule(n_radial, n_angular, r_max, gamma, 2.0 / gamma);
}

VelocityGrid build_grid(int n, double extent) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("build_grid: N must be even and >= 2 (midpoint grid symmetric under xi -> -xi)");
  if (extent <= 0.0) throw std::invalid_argument("build_grid: extent must be positive");
  VelocityGrid grid;
  grid.n = n;
  grid.extent = extent;
  grid.spacing = 2.0 * extent / n;
  grid.weight = grid.spacing * grid.spacing * grid.spacing;
  return grid;
}

GaussRule segmented_radial_rule(std::vector<double> breakpoints, double r_end,
                                int nodes_per_segment, double max_segment_length) {
  if (r_end <= 0.0) throw std::invalid_argument("segmented_radial_rule: r_end must be positive");
  std::vector<double> cuts{0.0, r_end};
  for (double b : breakpoints)
    if (b > 1e-12 && b < r_end - 1e-12) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
             cuts.end());

  GaussRule rule;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const int parts =
        max_segment_length > 0.0
            ? std::max(1, static_cast<int>(std::ceil((b - a) / max_segment_length)))
            : 1;
    for (int p = 0; p < parts; ++p) {
      const double pa = a + (b - a) * p / parts;
      const double pb = a + (b - a) * (p + 1) / parts;
      const GaussRule seg = gauss_legendre(nodes_per_segment, pa, pb);
      rule.nodes.insert(rule.nodes.end(), seg.nodes.begin(), seg.nodes.end());
      rule.weights.insert(rule.weights.end(), seg.weights.begin(), seg.weights.end());
    }
  }
  return rule;
}

}  // namespace pklo
