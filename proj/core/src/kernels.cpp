#include "pklo/kernels.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pklo {

KernelRules default_kernel_rules(double gamma) {
  return {sphere_rule(8), plane_rule(32, 16, 8.0, gamma)};
}

namespace {

/// Orthonormal frame (n, e1, e2) attached to a velocity pair, plus the pair
/// coordinates used by the reduced kernels.
struct PairFrame {
  double gn = 0.0;
  Vec3 n, e1, e2;
  double Gn = 0.0;      // midpoint component along n
  double c1 = 0.0, c2 = 0.0;  // in-plane midpoint components
  double xn = 0.0, x1 = 0.0, x2 = 0.0;
  double yn = 0.0, y1 = 0.0, y2 = 0.0;
};

PairFrame make_frame(const Vec3& xi, const Vec3& xi_star) {
  const Vec3 g = xi - xi_star;
  const double gn2 = g.norm2();
  if (gn2 == 0.0) throw std::invalid_argument("kernel evaluation requires xi != xi_star");
  PairFrame f;
  f.gn = std::sqrt(gn2);
  f.n = g * (1.0 / f.gn);
  auto [e1, e2] = plane_basis(f.n);
  f.e1 = e1;
  f.e2 = e2;
  const Vec3 mid = (xi + xi_star) * 0.5;
  f.Gn = mid.dot(f.n);
  f.c1 = mid.dot(e1);
  f.c2 = mid.dot(e2);
  f.xn = xi.dot(f.n);
  f.x1 = xi.dot(e1);
  f.x2 = xi.dot(e2);
  f.yn = xi_star.dot(f.n);
  f.y1 = xi_star.dot(e1);
  f.y2 = xi_star.dot(e2);
  return f;
}

double poly_mconst(const PolyatomicGas& gas) {
  return std::pow(gas.m, 1.5) * std::pow(two_pi, -1.5);
}

/// Gain kernels k_ij2 for all (i, j), accumulated with the per-node exponent
/// memoized over distinct energy defects.
void k2_poly_block_impl(const PolyatomicGas& gas, const CrossSectionModel& model,
                        const PairFrame& f, const PlaneRule& plane, double* out) {
  const int r = gas.levels();
  const double m = gas.m;
  const double mconst = poly_mconst(gas);

  // Distinct energy defects dI_ik^jl over all channel tuples.
  thread_local std::vector<double> defects;
  defects.clear();
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < r; ++j)
        for (int l = 0; l < r; ++l) {
          const double d = gas.energies[j] + gas.energies[l] - gas.energies[i] - gas.energies[k];
          bool seen = false;
          for (double v : defects)
            if (v == d) {
              seen = true;
              break;
            }
          if (!seen) defects.push_back(d);
        }

  const std::size_t nd = defects.size();
  thread_local std::vector<double> exp_d, gt_d, gs_d, cos_d;
  thread_local std::vector<char> open_d;
  exp_d.resize(nd);
  gt_d.resize(nd);
  gs_d.resize(nd);
  cos_d.resize(nd);
  open_d.resize(nd);

  for (int i = 0; i < r * r; ++i) out[i] = 0.0;

  const double quarter_g2 = 0.25 * f.gn * f.gn;
  for (std::size_t p = 0; p < plane.radial_size(); ++p) {
    const double rr = plane.r[p];
    const double wsq = rr * rr;
    for (std::size_t q = 0; q < plane.angular_size(); ++q) {
      const double w1 = rr * plane.cos_theta[q];
      const double w2 = rr * plane.sin_theta[q];
      const double node_weight = plane.r_weight[p] * plane.theta_weight;
      const double u2 = sq(f.c1 + w1) + sq(f.c2 + w2);

      for (std::size_t d = 0; d < nd; ++d) {
        const double chi = defects[d] / (m * f.gn);
        const double gs2 = wsq + sq(f.gn - chi);
        open_d[d] = gs2 > 0.0;
        if (!open_d[d]) continue;
        gt_d[d] = std::sqrt(wsq + sq(f.gn + chi));
        gs_d[d] = std::sqrt(gs2);
        cos_d[d] = (wsq - (f.gn - chi) * (f.gn + chi)) / (gt_d[d] * gs_d[d]);
        exp_d[d] = std::exp(-0.5 * m * (u2 + sq(f.Gn - chi) + quarter_g2));
      }

      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          double acc = 0.0;
          for (int k = 0; k < r; ++k)
            for (int l = 0; l < r; ++l) {
              const double defect =
                  gas.energies[j] + gas.energies[l] - gas.energies[i] - gas.energies[k];
              std::size_t d = 0;
              while (defects[d] != defect) ++d;
              if (!open_d[d]) continue;
              const double sigma = sigma_poly(model, gas, i, k, j, l, gt_d[d], cos_d[d]);
              if (sigma == 0.0) continue;
              acc += 8.0 * std::sqrt(gas.weights[i] / gas.weights[j]) * gas.weights[k] * mconst *
                     std::exp(-0.5 * (gas.energies[k] + gas.energies[l])) * exp_d[d] * gt_d[d] /
                     (gs_d[d] * f.gn) * sigma;
            }
          out[i * r + j] += node_weight * acc;
        }
    }
  }
}

void k1_poly_block_impl(const PolyatomicGas& gas, const CrossSectionModel& model,
                        const PairFrame& f, const Vec3& xi, const Vec3& xi_star,
                        const SphereRule& sphere, double* out) {
  const int r = gas.levels();
  const double m = gas.m;
  const double mconst = poly_mconst(gas);
  const double gauss = std::exp(-0.25 * m * (xi.norm2() + xi_star.norm2()));
  const double g2 = f.gn * f.gn;

  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const double mhalf = std::sqrt(gas.weights[i] * gas.weights[j]) * mconst * gauss *
                           std::exp(-0.5 * (gas.energies[i] + gas.energies[j]));
      double acc = 0.0;
      for (std::size_t w = 0; w < sphere.size(); ++w) {
        const double ct = f.n.dot(sphere.nodes[w]);
        double channel_sum = 0.0;
        for (int k = 0; k < r; ++k)
          for (int l = 0; l < r; ++l) {
            if (!channel_open(gas, i, j, k, l, g2)) continue;
            channel_sum += sigma_poly(model, gas, i, j, k, l, f.gn, ct);
          }
        acc += sphere.weights[w] * channel_sum;
      }
      out[i * r + j] = mhalf * f.gn * acc;
    }
}

}  // namespace

double k1_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, int j,
               const Vec3& xi, const Vec3& xi_star, const SphereRule& sphere) {
  const int r = gas.levels();
  const PairFrame f = make_frame(xi, xi_star);
  std::vector<double> out(static_cast<std::size_t>(r) * r);
  k1_poly_block_impl(gas, model, f, xi, xi_star, sphere, out.data());
  return out[static_cast<std::size_t>(i) * r + j];
}

double k2_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, int j,
               const Vec3& xi, const Vec3& xi_star, const PlaneRule& plane) {
  const int r = gas.levels();
  const PairFrame f = make_frame(xi, xi_star);
  std::vector<double> out(static_cast<std::size_t>(r) * r);
  k2_poly_block_impl(gas, model, f, plane, out.data());
  return out[static_cast<std::size_t>(i) * r + j];
}

double k_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, int j,
              const Vec3& xi, const Vec3& xi_star, const KernelRules& rules) {
  return k2_poly(gas, model, i, j, xi, xi_star, rules.plane) -
         k1_poly(gas, model, i, j, xi, xi_star, rules.sphere);
}

void k_poly_block(const PolyatomicGas& gas, const CrossSectionModel& model, const Vec3& xi,
                  const Vec3& xi_star, const KernelRules& rules, double* out) {
  const int r = gas.levels();
  const PairFrame f = make_frame(xi, xi_star);
  thread_local std::vector<double> loss;
  loss.resize(static_cast<std::size_t>(r) * r);
  k2_poly_block_impl(gas, model, f, rules.plane, out);
  k1_poly_block_impl(gas, model, f, xi, xi_star, rules.sphere, loss.data());
  for (int e = 0; e < r * r; ++e) out[e] -= loss[e];
}

// ---------------------------------------------------------------------------
// Mixtures
// ---------------------------------------------------------------------------

double k_mix_loss(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                  const Vec3& xi, const Vec3& xi_star, const SphereRule& sphere) {
  const PairFrame f = make_frame(xi, xi_star);
  const double mhalf = std::sqrt(maxwellian_mix(mix, a, xi) * maxwellian_mix(mix, b, xi_star));
  double acc = 0.0;
  for (std::size_t w = 0; w < sphere.size(); ++w)
    acc += sphere.weights[w] * sigma_mix(model, mix, a, b, f.gn, f.n.dot(sphere.nodes[w]));
  return mhalf * f.gn * acc;
}

double k_mix_same(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                  const Vec3& xi, const Vec3& xi_star, const PlaneRule& plane) {
  const PairFrame f = make_frame(xi, xi_star);
  const double ma = mix.masses[a], mb = mix.masses[b];
  const double chi = 0.5 * (ma - mb) / mb * f.gn;
  const double pref = sq(ma + mb) / (mb * mb) / f.gn * mix.densities[b] *
                      std::pow(mb / two_pi, 1.5);
  // xi' = xi_star + w - chi n, xi*' = xi + w + chi n; |g~| = |g*|.
  const double axial = f.gn + chi;
  const double gt2_base = sq(axial);
  double total = 0.0;
  for (std::size_t p = 0; p < plane.radial_size(); ++p) {
    const double rr = plane.r[p];
    const double wsq = rr * rr;
    double ring = 0.0;
    for (std::size_t q = 0; q < plane.angular_size(); ++q) {
      const double w1 = rr * plane.cos_theta[q];
      const double w2 = rr * plane.sin_theta[q];
      const double xp2 = sq(f.yn - chi) + sq(f.y1 + w1) + sq(f.y2 + w2);
      const double xsp2 = sq(f.xn + chi) + sq(f.x1 + w1) + sq(f.x2 + w2);
      const double gt = std::sqrt(gt2_base + wsq);
      const double ct = (wsq - gt2_base) / (gt2_base + wsq);
      ring += std::exp(-0.25 * mb * (xp2 + xsp2)) * sigma_mix(model, mix, a, b, gt, ct);
    }
    total += plane.r_weight[p] * ring;
  }
  return pref * total * plane.theta_weight;
}

namespace {

double k_mix_gain_equal_mass(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                             const PairFrame& f, const PlaneRule& plane) {
  const double ma = mix.masses[a], mb = mix.masses[b];
  const double pref = 4.0 / f.gn * std::sqrt(mix.densities[a] * mix.densities[b]) *
                      std::pow(std::sqrt(ma * mb) / two_pi, 1.5);
  const double gt2_base = sq(f.gn);
  double total = 0.0;
  for (std::size_t p = 0; p < plane.radial_size(); ++p) {
    const double rr = plane.r[p];
    const double wsq = rr * rr;
    double ring = 0.0;
    for (std::size_t q = 0; q < plane.angular_size(); ++q) {
      const double w1 = rr * plane.cos_theta[q];
      const double w2 = rr * plane.sin_theta[q];
      // xi' = xi_star + w, xi*' = xi + w.
      const double xp2 = sq(f.yn) + sq(f.y1 + w1) + sq(f.y2 + w2);
      const double xsp2 = sq(f.xn) + sq(f.x1 + w1) + sq(f.x2 + w2);
      const double gt = std::sqrt(gt2_base + wsq);
      const double ct = -(wsq - gt2_base) / (gt2_base + wsq);
      ring += std::exp(-0.25 * (mb * xp2 + ma * xsp2)) * sigma_mix(model, mix, a, b, gt, ct);
    }
    total += plane.r_weight[p] * ring;
  }
  return pref * total * plane.theta_weight;
}

}  // namespace

double k_mix_gain(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                  const Vec3& xi, const Vec3& xi_star, const KernelRules& rules) {
  const PairFrame f = make_frame(xi, xi_star);
  const double ma = mix.masses[a], mb = mix.masses[b];
  if (ma == mb) return k_mix_gain_equal_mass(mix, model, a, b, f, rules.plane);

  const double dm = ma - mb;
  const Vec3 g_ab = (xi * ma - xi_star * mb) * (1.0 / dm);
  const double ca = ma / dm, cb = mb / dm;
  const double pref = sq(ma + mb) / sq(dm) * std::sqrt(mix.densities[b] * mix.densities[a]) *
                      std::pow(std::sqrt(ma * mb) / two_pi, 1.5);
#ifndef NDEBUG
  const double s = 0.5 * (ma + mb) / std::sqrt(ma * mb);
  const double rho = (s - 1.0) / (s + 1.0);
  const double pre_energy = ma * xi.norm2() + mb * xi_star.norm2();
#endif
  double acc = 0.0;
  for (std::size_t w = 0; w < rules.sphere.size(); ++w) {
    const Vec3 omega = rules.sphere.nodes[w];
    const Vec3 xp = g_ab + omega * (ca * f.gn);   // carries the species-b Maxwellian
    const Vec3 xsp = g_ab + omega * (cb * f.gn);  // carries the species-a Maxwellian
#ifndef NDEBUG
    assert(mb * xp.norm2() + ma * xsp.norm2() >= rho * pre_energy - 1e-9 * pre_energy);
#endif
    // |g~| = |xi - xp| >= |g| > 0 for unequal masses, so sigma is well posed.
    const Vec3 gt = xi - xp;
    const Vec3 gs = xi_star - xsp;
    const double ct = -gt.dot(gs) / (gt.norm() * gs.norm());
    acc += rules.sphere.weights[w] * std::exp(-0.25 * (mb * xp.norm2() + ma * xsp.norm2())) *
           sigma_mix(model, mix, a, b, gt.norm(), ct);
  }
  return pref * f.gn * acc;
}

double k_mix_gain_min_energy_ratio(const MixtureSpec& mix, int a, int b, const Vec3& xi,
                                   const Vec3& xi_star, const SphereRule& sphere) {
  const PairFrame f = make_frame(xi, xi_star);
  const double ma = mix.masses[a], mb = mix.masses[b];
  if (ma == mb) throw std::invalid_argument("k_mix_gain_min_energy_ratio: masses must differ");
  const double dm = ma - mb;
  const Vec3 g_ab = (xi * ma - xi_star * mb) * (1.0 / dm);
  const double pre = ma * xi.norm2() + mb * xi_star.norm2();
  double worst = std::numeric_limits<double>::infinity();
  for (const Vec3& omega : sphere.nodes) {
    const Vec3 xp = g_ab + omega * (ma / dm * f.gn);
    const Vec3 xsp = g_ab + omega * (mb / dm * f.gn);
    worst = std::min(worst, (mb * xp.norm2() + ma * xsp.norm2()) / pre);
  }
  return worst;
}

void k_mix_block(const MixtureSpec& mix, const CrossSectionModel& model, const Vec3& xi,
                 const Vec3& xi_star, const KernelRules& rules, double* out) {
  const int s = mix.species();
  for (int a = 0; a < s; ++a) {
    double diag = 2.0 * k_mix_same(mix, model, a, a, xi, xi_star, rules.plane) -
                  k_mix_loss(mix, model, a, a, xi, xi_star, rules.sphere);
    for (int b = 0; b < s; ++b) {
      if (b == a) continue;
      diag += k_mix_same(mix, model, a, b, xi, xi_star, rules.plane);
      out[a * s + b] = k_mix_gain(mix, model, a, b, xi, xi_star, rules) -
                       k_mix_loss(mix, model, a, b, xi, xi_star, rules.sphere);
    }
    out[a * s + a] = diag;
  }
}

}  // namespace pklo
