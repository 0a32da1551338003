#include "pklo/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace pklo {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Collision frequencies
// ---------------------------------------------------------------------------

namespace {

/// 2 pi * int sigma(|g|, c) dc over c in [-1, 1]; the full solid-angle
/// cross-section integral for sigma depending on the deflection cosine only.
template <class SigmaOfCos>
double omega_integral(const GaussRule& cosine, SigmaOfCos&& sigma) {
  double acc = 0.0;
  for (std::size_t q = 0; q < cosine.nodes.size(); ++q)
    acc += cosine.weights[q] * sigma(cosine.nodes[q]);
  return two_pi * acc;
}

std::vector<double> poly_thresholds(const PolyatomicGas& gas) {
  std::vector<double> t;
  const int r = gas.levels();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
          const double d = energy_defect(gas, i, j, k, l);
          if (d > 0.0) t.push_back(2.0 * std::sqrt(d / gas.m));
        }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

double nu_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, double xi_norm,
               const NuOptions& opts) {
  if (i < 0 || i >= gas.levels()) throw std::out_of_range("nu_poly: level index out of range");
  const double m = gas.m;
  const int r = gas.levels();
  const double x = xi_norm;
  const GaussRule omega_rule = gauss_legendre(opts.omega_cosine_nodes);
  const double scale = 1.0 / std::sqrt(m);
  const GaussRule radial =
      segmented_radial_rule({}, opts.extent * scale, opts.radial_nodes,
                            opts.max_panel_length * scale);

  // mu-integral thresholds: channel opens where |g|^2 = x^2 + v^2 - 2 x v mu
  // crosses 4 dI / m.
  std::vector<double> defects;
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k)
      for (int l = 0; l < r; ++l) {
        const double d = energy_defect(gas, i, j, k, l);
        if (d > 0.0) defects.push_back(d);
      }
  std::sort(defects.begin(), defects.end());
  defects.erase(std::unique(defects.begin(), defects.end()), defects.end());

  double total = 0.0;
  for (std::size_t p = 0; p < radial.nodes.size(); ++p) {
    const double v = radial.nodes[p];
    if (v <= 0.0) continue;
    std::vector<double> cuts;
    if (x > 1e-12) {
      for (double d : defects) {
        const double mu = (x * x + v * v - 4.0 * d / m) / (2.0 * x * v);
        if (mu > -1.0 && mu < 1.0) cuts.push_back(mu);
      }
    }
    cuts.push_back(-1.0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());

    double mu_acc = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const GaussRule seg = gauss_legendre(opts.cosine_nodes, cuts[c], cuts[c + 1]);
      for (std::size_t q = 0; q < seg.nodes.size(); ++q) {
        const double mu = seg.nodes[q];
        const double g2 = std::max(x * x + v * v - 2.0 * x * v * mu, 0.0);
        const double g = std::sqrt(g2);
        if (g <= 0.0) continue;
        double channel_sum = 0.0;
        for (int j = 0; j < r; ++j) {
          const double mrad = gas.weights[j] * std::pow(m, 1.5) * std::pow(two_pi, -1.5) *
                              std::exp(-0.5 * m * v * v - gas.energies[j]);
          double sigma_tot = 0.0;
          for (int k = 0; k < r; ++k)
            for (int l = 0; l < r; ++l) {
              if (!channel_open(gas, i, j, k, l, g2)) continue;
              sigma_tot += omega_integral(omega_rule, [&](double ct) {
                return sigma_poly(model, gas, i, j, k, l, g, ct);
              });
            }
          channel_sum += mrad * sigma_tot;
        }
        mu_acc += seg.weights[q] * channel_sum * g;
      }
    }
    total += radial.weights[p] * v * v * mu_acc;
  }
  return two_pi * total;
}

double nu_mix(const MixtureSpec& mix, const CrossSectionModel& model, int alpha, double xi_norm,
              const NuOptions& opts) {
  if (alpha < 0 || alpha >= mix.species()) throw std::out_of_range("nu_mix: species index out of range");
  const double x = xi_norm;
  const GaussRule omega_rule = gauss_legendre(opts.omega_cosine_nodes);
  const GaussRule cosine = gauss_legendre(opts.cosine_nodes);

  double total = 0.0;
  for (int beta = 0; beta < mix.species(); ++beta) {
    const double mb = mix.masses[beta];
    const double scale = 1.0 / std::sqrt(mb);
    const GaussRule radial = segmented_radial_rule({}, opts.extent * scale, opts.radial_nodes,
                                                   opts.max_panel_length * scale);
    const double mrad_pref = mix.densities[beta] * std::pow(mb / two_pi, 1.5);
    double species_acc = 0.0;
    for (std::size_t p = 0; p < radial.nodes.size(); ++p) {
      const double v = radial.nodes[p];
      if (v <= 0.0) continue;
      double mu_acc = 0.0;
      for (std::size_t q = 0; q < cosine.nodes.size(); ++q) {
        const double mu = cosine.nodes[q];
        const double g2 = std::max(x * x + v * v - 2.0 * x * v * mu, 0.0);
        const double g = std::sqrt(g2);
        if (g <= 0.0) continue;
        const double sig = omega_integral(
            omega_rule, [&](double ct) { return sigma_mix(model, mix, alpha, beta, g, ct); });
        mu_acc += cosine.weights[q] * sig * g;
      }
      species_acc += radial.weights[p] * v * v * std::exp(-0.5 * mb * v * v) * mu_acc;
    }
    total += mrad_pref * species_acc;
  }
  return two_pi * total;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

Eigen::VectorXd LinearizedOperator::apply_L(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = -(K * v);
  for (Eigen::Index r = 0; r < out.size(); ++r) out[r] += nu[static_cast<std::size_t>(r)] * v[r];
  return out;
}

Eigen::MatrixXd LinearizedOperator::L_matrix() const {
  Eigen::MatrixXd L = -K;
  for (Eigen::Index r = 0; r < L.rows(); ++r) L(r, r) += nu[static_cast<std::size_t>(r)];
  return L;
}

namespace {

/// Inverse of p -> (a, b) over the upper triangle a <= b of an n x n grid,
/// enumerated row by row.
std::pair<std::size_t, std::size_t> triangular_index(std::size_t p, std::size_t n) {
  // Row a holds n - a entries; find the row by solving the triangular count.
  const double nn = static_cast<double>(n);
  std::size_t a = static_cast<std::size_t>(
      std::floor(nn + 0.5 - std::sqrt((nn + 0.5) * (nn + 0.5) - 2.0 * static_cast<double>(p))));
  auto row_start = [n](std::size_t row) { return row * n - row * (row - 1) / 2; };
  while (a > 0 && row_start(a) > p) --a;
  while (row_start(a + 1) <= p) ++a;
  return {a, a + (p - row_start(a))};
}

/// Average of the kernel block over the cubic grid cell centered at xi,
/// computed in spherical coordinates with the radial integral taken exactly
/// to the cell faces. The 1/|g| singularity turns into a bounded radial
/// integrand r * k(xi, xi + r w).
template <class BlockFn>
void cell_average_block(const Vec3& xi, double spacing, int comp, int face_nodes,
                        int radial_nodes, const BlockFn& block, double* out) {
  const double half = 0.5 * spacing;
  std::vector<double> vals(static_cast<std::size_t>(comp) * comp, 0.0);
  std::vector<double> accum(static_cast<std::size_t>(comp) * comp, 0.0);
  const GaussRule face = gauss_legendre(face_nodes, -half, half);
  const GaussRule radial_unit = gauss_legendre(radial_nodes, 0.0, 1.0);

  static const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int axis = 0; axis < 3; ++axis)
    for (int side = -1; side <= 1; side += 2) {
      const Vec3 d = axes[axis] * (side * half);
      const Vec3 eu = axes[(axis + 1) % 3];
      const Vec3 ev = axes[(axis + 2) % 3];
      for (std::size_t su = 0; su < face.nodes.size(); ++su)
        for (std::size_t sv = 0; sv < face.nodes.size(); ++sv) {
          const Vec3 u = d + eu * face.nodes[su] + ev * face.nodes[sv];
          const double ru = u.norm();
          const Vec3 dir = u * (1.0 / ru);
          // Solid-angle Jacobian of the face parametrization.
          const double jac = half / (ru * ru * ru);
          for (std::size_t t = 0; t < radial_unit.nodes.size(); ++t) {
            const double rr = ru * radial_unit.nodes[t];
            const double rw = ru * radial_unit.weights[t];
            block(xi, xi + dir * rr, vals.data());
            const double scale = face.weights[su] * face.weights[sv] * jac * rw * rr * rr;
            for (std::size_t e = 0; e < accum.size(); ++e) accum[e] += scale * vals[e];
          }
        }
    }
  const double cell_volume = spacing * spacing * spacing;
  for (std::size_t e = 0; e < accum.size(); ++e) out[e] = accum[e] / cell_volume;
}

template <class BlockFn>
LinearizedOperator assemble_impl(int comp, const VelocityGrid& grid, const AssemblyOptions& opts,
                                 const BlockFn& block,
                                 const std::function<double(int, double)>& nu_of) {
  const std::size_t nodes = grid.size();
  const std::size_t rows = static_cast<std::size_t>(comp) * nodes;
  if (rows > opts.size_cap)
    throw std::length_error("assemble: operator size " + std::to_string(rows) +
                            " exceeds size cap " + std::to_string(opts.size_cap));

  LinearizedOperator op;
  op.components = comp;
  op.grid = grid;
  op.K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));

  // nu, cached over the distinct node radii.
  op.nu.resize(rows);
  std::map<double, std::vector<double>> nu_cache;
  for (std::size_t a = 0; a < nodes; ++a) {
    const double r2 = grid.node(a).norm2();
    auto it = nu_cache.find(r2);
    if (it == nu_cache.end()) {
      std::vector<double> per_comp(comp);
      const double r = std::sqrt(r2);
      for (int i = 0; i < comp; ++i) per_comp[i] = nu_of(i, r);
      it = nu_cache.emplace(r2, std::move(per_comp)).first;
    }
    for (int i = 0; i < comp; ++i) op.nu[static_cast<std::size_t>(i) * nodes + a] = it->second[i];
  }

  const double w_scale = grid.weight;  // sqrt(w_a) * sqrt(w_b) for the uniform grid

  // Off-diagonal node pairs: every unordered pair evaluated once, mirrored.
  const std::size_t n_pairs = nodes * (nodes + 1) / 2;
  parallel_for(n_pairs, opts.threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> vals(static_cast<std::size_t>(comp) * comp);
    for (std::size_t p = lo; p < hi; ++p) {
      const auto [a, b] = triangular_index(p, nodes);
      if (a == b) continue;  // diagonal handled below
      block(grid.node(a), grid.node(b), vals.data());
      for (int i = 0; i < comp; ++i)
        for (int j = 0; j < comp; ++j) {
          const double entry = w_scale * vals[static_cast<std::size_t>(i) * comp + j];
          const Eigen::Index row = static_cast<Eigen::Index>(i * nodes + a);
          const Eigen::Index col = static_cast<Eigen::Index>(j * nodes + b);
          op.K(row, col) = entry;
          op.K(col, row) = entry;
        }
    }
  });

  // Same-node blocks: singular cell, either zeroed or replaced by the cell
  // average; symmetrized across (i, j) to keep K exactly symmetric.
  if (opts.cell_average_diagonal) {
    parallel_for(nodes, opts.threads, [&](std::size_t lo, std::size_t hi) {
      std::vector<double> vals(static_cast<std::size_t>(comp) * comp);
      for (std::size_t a = lo; a < hi; ++a) {
        cell_average_block(grid.node(a), grid.spacing, comp, opts.cell_face_nodes,
                           opts.cell_radial_nodes, block, vals.data());
        for (int i = 0; i < comp; ++i)
          for (int j = i; j < comp; ++j) {
            const double entry =
                0.5 * w_scale *
                (vals[static_cast<std::size_t>(i) * comp + j] +
                 vals[static_cast<std::size_t>(j) * comp + i]);
            op.K(static_cast<Eigen::Index>(i * nodes + a),
                 static_cast<Eigen::Index>(j * nodes + a)) = entry;
            op.K(static_cast<Eigen::Index>(j * nodes + a),
                 static_cast<Eigen::Index>(i * nodes + a)) = entry;
          }
      }
    });
  }

  return op;
}

}  // namespace

LinearizedOperator assemble_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                                 const VelocityGrid& grid, const KernelRules& rules,
                                 const AssemblyOptions& opts) {
  gas.validate();
  model.validate(gas.levels());
  NuOptions nu_opts = opts.nu;
  return assemble_impl(
      gas.levels(), grid, opts,
      [&](const Vec3& x, const Vec3& y, double* out) { k_poly_block(gas, model, x, y, rules, out); },
      [&](int i, double r) { return nu_poly(gas, model, i, r, nu_opts); });
}

LinearizedOperator assemble_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                                const VelocityGrid& grid, const KernelRules& rules,
                                const AssemblyOptions& opts) {
  mix.validate();
  model.validate(mix.species());
  NuOptions nu_opts = opts.nu;
  return assemble_impl(
      mix.species(), grid, opts,
      [&](const Vec3& x, const Vec3& y, double* out) { k_mix_block(mix, model, x, y, rules, out); },
      [&](int a, double r) { return nu_mix(mix, model, a, r, nu_opts); });
}

// ---------------------------------------------------------------------------
// Direct application of Q, L, Gamma
// ---------------------------------------------------------------------------

namespace {

struct CenteredRule {
  GaussRule radial;  // |u| panels, pruned
  SphereRule directions;
  SphereRule omega;
};

CenteredRule make_centered_rule(const QRules& rules, double xi_norm, double min_mass,
                                const std::vector<double>& thresholds) {
  const double scale = 1.0 / std::sqrt(min_mass);
  const double r_end = xi_norm + rules.extent * scale;
  GaussRule radial = segmented_radial_rule(thresholds, r_end, rules.radial_nodes,
                                           rules.max_panel_length * scale);
  // Prune radial nodes that cannot contribute: both the loss factor
  // exp(-m |xi*|^2 / 2) and the gain factor exp(-m (|xi|^2 + |xi*|^2) / 4)
  // are controlled by the minimal |xi*| = ||xi| - r| on the shell.
  GaussRule pruned;
  for (std::size_t p = 0; p < radial.nodes.size(); ++p) {
    const double r = radial.nodes[p];
    const double d = std::fabs(xi_norm - r);
    const double loss_expo = 0.5 * min_mass * d * d;
    const double gain_expo = 0.25 * min_mass * (xi_norm * xi_norm + d * d);
    if (std::min(loss_expo, gain_expo) > rules.prune_exponent) continue;
    pruned.nodes.push_back(r);
    pruned.weights.push_back(radial.weights[p]);
  }
  return {std::move(pruned), sphere_rule(rules.direction_order), sphere_rule(rules.omega_order)};
}

/// Shared quadrature core for the polyatomic bilinear collision operator.
/// Accumulates gain and loss of component i at xi for the ordered pair (f, g).
QParts q_poly_core(const PolyatomicGas& gas, const CrossSectionModel& model,
                   const DistributionField& f, const DistributionField& g, const Vec3& xi, int i,
                   const QRules& rules) {
  const int r = gas.levels();
  const double m = gas.m;
  const CenteredRule rule = make_centered_rule(rules, xi.norm(), m, poly_thresholds(gas));

  const double fi = f(i, xi);
  QParts parts;
  for (std::size_t p = 0; p < rule.radial.nodes.size(); ++p) {
    const double rr = rule.radial.nodes[p];
    const double rw = rule.radial.weights[p] * rr * rr;
    const double g2 = rr * rr;
    for (std::size_t dir = 0; dir < rule.directions.size(); ++dir) {
      const Vec3 xi_star = xi - rule.directions.nodes[dir] * rr;  // g = xi - xi* = rr * dir
      const Vec3 n = rule.directions.nodes[dir];
      const Vec3 mid = (xi + xi_star) * 0.5;
      const double w_outer = rw * rule.directions.weights[dir];

      for (int j = 0; j < r; ++j) {
        const double gj = g(j, xi_star);
        double gain_j = 0.0, loss_sigma = 0.0;
        for (int k = 0; k < r; ++k)
          for (int l = 0; l < r; ++l) {
            const double defect = energy_defect(gas, i, j, k, l);
            if (!(m * g2 > 4.0 * defect)) continue;
            const double gp_half = 0.5 * std::sqrt(g2 - 4.0 * defect / m);
            const double phi_ratio =
                gas.weights[i] * gas.weights[j] / (gas.weights[k] * gas.weights[l]);
            double omega_acc = 0.0, loss_omega = 0.0;
            for (std::size_t w = 0; w < rule.omega.size(); ++w) {
              const Vec3 omega = rule.omega.nodes[w];
              const Vec3 xp = mid + omega * gp_half;
              const Vec3 xsp = mid - omega * gp_half;
              const double sig = sigma_poly(model, gas, i, j, k, l, rr, n.dot(omega));
              omega_acc += rule.omega.weights[w] * sig * f(k, xp) * g(l, xsp);
              loss_omega += rule.omega.weights[w] * sig;
            }
            gain_j += phi_ratio * omega_acc;
            loss_sigma += loss_omega;
          }
        const double gain_term = w_outer * rr * gain_j;
        const double loss_term = w_outer * rr * loss_sigma * fi * gj;
        parts.gain += gain_term;
        parts.loss += loss_term;
        parts.loss_abs += std::fabs(loss_term);
      }
    }
  }
  return parts;
}

QParts q_mix_core(const MixtureSpec& mix, const CrossSectionModel& model,
                  const DistributionField& f, const DistributionField& g, const Vec3& xi,
                  int alpha, const QRules& rules) {
  const int s = mix.species();
  const double min_mass = *std::min_element(mix.masses.begin(), mix.masses.end());
  const CenteredRule rule = make_centered_rule(rules, xi.norm(), min_mass, {});

  const double fa = f(alpha, xi);
  QParts parts;
  for (std::size_t p = 0; p < rule.radial.nodes.size(); ++p) {
    const double rr = rule.radial.nodes[p];
    const double rw = rule.radial.weights[p] * rr * rr;
    for (std::size_t dir = 0; dir < rule.directions.size(); ++dir) {
      const Vec3 n = rule.directions.nodes[dir];
      const Vec3 xi_star = xi - n * rr;
      const double w_outer = rw * rule.directions.weights[dir];
      for (int beta = 0; beta < s; ++beta) {
        const double ma = mix.masses[alpha], mb = mix.masses[beta];
        const Vec3 g_ab = (xi * ma + xi_star * mb) * (1.0 / (ma + mb));
        const double cb = mb / (ma + mb), cav = ma / (ma + mb);
        const double gb = g(beta, xi_star);
        double gain_acc = 0.0, loss_acc = 0.0;
        for (std::size_t w = 0; w < rule.omega.size(); ++w) {
          const Vec3 omega = rule.omega.nodes[w];
          const Vec3 xp = g_ab + omega * (cb * rr);
          const Vec3 xsp = g_ab - omega * (cav * rr);
          const double ct = n.dot(omega);
          const double sig = sigma_mix(model, mix, alpha, beta, rr, ct);
          gain_acc += rule.omega.weights[w] * sig * f(alpha, xp) * g(beta, xsp);
          loss_acc += rule.omega.weights[w] * sig;
        }
        const double gain_term = w_outer * rr * gain_acc;
        const double loss_term = w_outer * rr * loss_acc * fa * gb;
        parts.gain += gain_term;
        parts.loss += loss_term;
        parts.loss_abs += std::fabs(loss_term);
      }
    }
  }
  return parts;
}

DistributionField sqrt_maxwellian_times(const DistributionField& h, const DistributionField& mw) {
  const auto he = h.eval;
  const auto me = mw.eval;
  return {h.components,
          [he, me](int c, const Vec3& v) { return std::sqrt(me(c, v)) * he(c, v); }};
}

}  // namespace

QParts apply_Q_poly_bilinear(const PolyatomicGas& gas, const CrossSectionModel& model,
                             const DistributionField& f, const DistributionField& g,
                             const Vec3& xi, int i, const QRules& rules) {
  return q_poly_core(gas, model, f, g, xi, i, rules);
}

double apply_Q_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                    const DistributionField& f, const Vec3& xi, int i, const QRules& rules) {
  return q_poly_core(gas, model, f, f, xi, i, rules).value();
}

double apply_L_direct_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                           const DistributionField& h, const Vec3& xi, int i,
                           const QRules& rules) {
  const DistributionField mw = maxwellian_field_poly(gas);
  const DistributionField mh = sqrt_maxwellian_times(h, mw);
  const QParts a = q_poly_core(gas, model, mw, mh, xi, i, rules);
  const QParts b = q_poly_core(gas, model, mh, mw, xi, i, rules);
  return -(a.value() + b.value()) / std::sqrt(maxwellian_poly(gas, i, xi));
}

double gamma_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                  const DistributionField& h, const Vec3& xi, int i, const QRules& rules) {
  const DistributionField mh = sqrt_maxwellian_times(h, maxwellian_field_poly(gas));
  return q_poly_core(gas, model, mh, mh, xi, i, rules).value() /
         std::sqrt(maxwellian_poly(gas, i, xi));
}

QParts apply_Q_mix_bilinear(const MixtureSpec& mix, const CrossSectionModel& model,
                            const DistributionField& f, const DistributionField& g,
                            const Vec3& xi, int alpha, const QRules& rules) {
  return q_mix_core(mix, model, f, g, xi, alpha, rules);
}

double apply_Q_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                   const DistributionField& f, const Vec3& xi, int alpha, const QRules& rules) {
  return q_mix_core(mix, model, f, f, xi, alpha, rules).value();
}

double apply_L_direct_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                          const DistributionField& h, const Vec3& xi, int alpha,
                          const QRules& rules) {
  const DistributionField mw = maxwellian_field_mix(mix);
  const DistributionField mh = sqrt_maxwellian_times(h, mw);
  const QParts a = q_mix_core(mix, model, mw, mh, xi, alpha, rules);
  const QParts b = q_mix_core(mix, model, mh, mw, xi, alpha, rules);
  return -(a.value() + b.value()) / std::sqrt(maxwellian_mix(mix, alpha, xi));
}

double gamma_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                 const DistributionField& h, const Vec3& xi, int alpha, const QRules& rules) {
  const DistributionField mh = sqrt_maxwellian_times(h, maxwellian_field_mix(mix));
  return q_mix_core(mix, model, mh, mh, xi, alpha, rules).value() /
         std::sqrt(maxwellian_mix(mix, alpha, xi));
}

// ---------------------------------------------------------------------------
// Sampling and I/O
// ---------------------------------------------------------------------------

Eigen::VectorXd sample_on_grid(const DistributionField& field, const VelocityGrid& grid) {
  const std::size_t nodes = grid.size();
  Eigen::VectorXd v(static_cast<Eigen::Index>(field.components) * nodes);
  const double sw = std::sqrt(grid.weight);
  for (int c = 0; c < field.components; ++c)
    for (std::size_t a = 0; a < nodes; ++a)
      v[static_cast<Eigen::Index>(c * nodes + a)] = sw * field(c, grid.node(a));
  return v;
}

std::string json_digest(const json& j) {
  const std::uint64_t h = fnv1a64(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_operator_matrix(const std::string& path, const LinearizedOperator& op,
                          const json& sidecar_extra) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_operator_matrix: cannot open " + path);
  const std::uint32_t version = 1;
  const std::uint32_t rows = static_cast<std::uint32_t>(op.rows());
  out.write("PKLO", 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  const Eigen::MatrixXd L = op.L_matrix();
  std::vector<double> row(rows);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < rows; ++c) row[c] = L(r, c);
    out.write(reinterpret_cast<const char*>(row.data()), sizeof(double) * rows);
  }
  if (!out) throw std::runtime_error("save_operator_matrix: write failed for " + path);

  json sidecar = sidecar_extra;
  sidecar["magic"] = "PKLO";
  sidecar["version"] = version;
  sidecar["rows"] = rows;
  sidecar["components"] = op.components;
  sidecar["grid"] = {{"N", op.grid.n}, {"R", op.grid.extent}};
  std::ofstream side(path + ".json", std::ios::trunc);
  side << sidecar.dump(2) << "\n";
}

SavedOperator load_operator_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_operator_matrix: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "PKLO")
    throw std::runtime_error("load_operator_matrix: bad magic (not a PKLO matrix file)");
  SavedOperator saved;
  std::uint32_t rows = 0;
  in.read(reinterpret_cast<char*>(&saved.version), 4);
  in.read(reinterpret_cast<char*>(&rows), 4);
  if (saved.version != 1)
    throw std::runtime_error("load_operator_matrix: unsupported version " +
                             std::to_string(saved.version));
  saved.L.resize(rows, rows);
  std::vector<double> row(rows);
  for (std::uint32_t r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), sizeof(double) * rows);
    for (std::uint32_t c = 0; c < rows; ++c) saved.L(r, c) = row[c];
  }
  if (!in) throw std::runtime_error("load_operator_matrix: truncated file " + path);
  std::ifstream side(path + ".json");
  if (side) side >> saved.sidecar;
  return saved;
}

}  // namespace pklo
