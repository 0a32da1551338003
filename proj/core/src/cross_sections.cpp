#include "pklo/cross_sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pklo {

CrossSectionModel CrossSectionModel::poly_hard_sphere(double C) {
  CrossSectionModel m;
  m.kind = Kind::poly_hard_sphere;
  m.C = C;
  return m;
}

CrossSectionModel CrossSectionModel::poly_bounded(double C, double gamma) {
  CrossSectionModel m;
  m.kind = Kind::poly_bounded;
  m.C = C;
  m.gamma = gamma;
  return m;
}

CrossSectionModel CrossSectionModel::mix_hard_sphere(double C) {
  CrossSectionModel m;
  m.kind = Kind::mix_hard_sphere;
  m.C = C;
  return m;
}

CrossSectionModel CrossSectionModel::mix_hard_sphere_matrix(std::vector<double> C_ab, int s) {
  CrossSectionModel m;
  m.kind = Kind::mix_hard_sphere;
  m.C_ab = std::move(C_ab);
  m.C_ab_dim = s;
  return m;
}

CrossSectionModel CrossSectionModel::mix_bounded(double C, double gamma) {
  CrossSectionModel m;
  m.kind = Kind::mix_bounded;
  m.C = C;
  m.gamma = gamma;
  return m;
}

void CrossSectionModel::validate(int components) const {
  if (C <= 0.0) throw std::invalid_argument("CrossSectionModel: C must be positive");
  if (kind == Kind::poly_bounded || kind == Kind::mix_bounded) {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw std::invalid_argument("CrossSectionModel: gamma must be in (0, 1)");
  }
  if (!C_ab.empty()) {
    if (C_ab_dim != components || C_ab.size() != static_cast<std::size_t>(components) * components)
      throw std::invalid_argument("CrossSectionModel: C_ab must be s x s");
    for (int a = 0; a < components; ++a)
      for (int b = 0; b < components; ++b) {
        if (C_ab[a * components + b] <= 0.0)
          throw std::invalid_argument("CrossSectionModel: C_ab entries must be positive");
        if (std::fabs(C_ab[a * components + b] - C_ab[b * components + a]) != 0.0)
          throw std::invalid_argument("CrossSectionModel: C_ab must be symmetric");
      }
  }
}

double energy_defect(const PolyatomicGas& gas, int i, int j, int k, int l) {
  return gas.energies[k] + gas.energies[l] - gas.energies[i] - gas.energies[j];
}

bool channel_open(const PolyatomicGas& gas, int i, int j, int k, int l, double g_norm2) {
  return gas.m * g_norm2 > 4.0 * energy_defect(gas, i, j, k, l);
}

double sigma_poly(const CrossSectionModel& model, const PolyatomicGas& gas, int i, int j, int k,
                  int l, double g_norm, double cos_theta) {
  (void)cos_theta;  // shipped variants are isotropic
  if (!(g_norm > 0.0)) throw std::invalid_argument("sigma_poly: |g| must be positive");
  const double g2 = g_norm * g_norm;
  const double defect = energy_defect(gas, i, j, k, l);
  const double gp2 = g2 - 4.0 * defect / gas.m;
  if (!(gas.m * g2 > 4.0 * defect)) return 0.0;  // closed channel

  double sigma = 0.0;
  switch (model.kind) {
    case CrossSectionModel::Kind::poly_hard_sphere:
      sigma = model.C * std::sqrt(gp2) / (g_norm * gas.weights[i] * gas.weights[j]);
      break;
    case CrossSectionModel::Kind::poly_bounded: {
      const double psi = g_norm * std::sqrt(gp2);
      sigma = model.C * std::pow(psi, 0.5 * model.gamma) / (g2 * gas.weights[i] * gas.weights[j]);
      break;
    }
    default:
      throw std::invalid_argument("sigma_poly: model is not a polyatomic variant");
  }
  if (model.sym_break != 0.0 && i > j) sigma *= 1.0 + model.sym_break;
  return sigma;
}

double sigma_mix(const CrossSectionModel& model, const MixtureSpec& mix, int a, int b,
                 double g_norm, double cos_theta) {
  (void)cos_theta;
  (void)mix;
  if (!(g_norm > 0.0)) throw std::invalid_argument("sigma_mix: |g| must be positive");
  double sigma = 0.0;
  switch (model.kind) {
    case CrossSectionModel::Kind::mix_hard_sphere:
      sigma = model.mix_constant(a, b);
      break;
    case CrossSectionModel::Kind::mix_bounded:
      sigma = model.C * (1.0 + std::pow(g_norm, model.gamma - 2.0));
      break;
    default:
      throw std::invalid_argument("sigma_mix: model is not a mixture variant");
  }
  if (model.sym_break != 0.0 && a > b) sigma *= 1.0 + model.sym_break;
  return sigma;
}

SigmaPolyFn sigma_poly_fn(const CrossSectionModel& model, const PolyatomicGas& gas) {
  return [model, gas](int i, int j, int k, int l, double g, double ct) {
    return sigma_poly(model, gas, i, j, k, l, g, ct);
  };
}

SigmaMixFn sigma_mix_fn(const CrossSectionModel& model, const MixtureSpec& mix) {
  return [model, mix](int a, int b, double g, double ct) {
    return sigma_mix(model, mix, a, b, g, ct);
  };
}

namespace {

struct ChannelSample {
  int i, j, k, l;
  double g;
};

ChannelSample draw_open_channel(Rng& rng, const PolyatomicGas& gas) {
  const int r = gas.levels();
  for (;;) {
    const int i = static_cast<int>(rng.uniform_index(r));
    const int j = static_cast<int>(rng.uniform_index(r));
    const int k = static_cast<int>(rng.uniform_index(r));
    const int l = static_cast<int>(rng.uniform_index(r));
    const double g = rng.uniform(0.05, 8.0);
    if (channel_open(gas, i, j, k, l, g * g)) return {i, j, k, l, g};
  }
}

double rel_residual(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

}  // namespace

double check_microreversibility(const SigmaPolyFn& sigma, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("check_microreversibility: empty sample set");
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const ChannelSample c = draw_open_channel(rng, gas);
    const double ct = rng.uniform(-1.0, 1.0);
    const double gp = std::sqrt(c.g * c.g - 4.0 * energy_defect(gas, c.i, c.j, c.k, c.l) / gas.m);
    if (!(gp > 0.0)) continue;
    const double lhs = gas.weights[c.i] * gas.weights[c.j] * c.g * c.g *
                       sigma(c.i, c.j, c.k, c.l, c.g, ct);
    const double rhs = gas.weights[c.k] * gas.weights[c.l] * gp * gp *
                       sigma(c.k, c.l, c.i, c.j, gp, ct);
    worst = std::max(worst, rel_residual(lhs, rhs));
  }
  return worst;
}

double check_microreversibility(const CrossSectionModel& model, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed) {
  return check_microreversibility(sigma_poly_fn(model, gas), gas, samples, seed);
}

double check_symmetry_relations(const SigmaPolyFn& sigma, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("check_symmetry_relations: empty sample set");
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const ChannelSample c = draw_open_channel(rng, gas);
    const double ct = rng.uniform(-1.0, 1.0);
    const double base = sigma(c.i, c.j, c.k, c.l, c.g, ct);
    worst = std::max(worst, rel_residual(base, sigma(c.i, c.j, c.l, c.k, c.g, ct)));
    worst = std::max(worst, rel_residual(base, sigma(c.j, c.i, c.l, c.k, c.g, ct)));
  }
  return worst;
}

double check_symmetry_relations(const CrossSectionModel& model, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed) {
  return check_symmetry_relations(sigma_poly_fn(model, gas), gas, samples, seed);
}

double check_bound_est1(const CrossSectionModel& model, const PolyatomicGas& gas,
                        std::size_t samples, std::uint64_t seed, double C_bound, double gamma) {
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const ChannelSample c = draw_open_channel(rng, gas);
    const double g2 = c.g * c.g;
    const double psi = c.g * std::sqrt(g2 - 4.0 * energy_defect(gas, c.i, c.j, c.k, c.l) / gas.m);
    const double rhs = C_bound / g2 * (psi + std::pow(psi, 0.5 * gamma));
    const double lhs = sigma_poly(model, gas, c.i, c.j, c.k, c.l, c.g, 0.0);
    worst = std::min(worst, rhs - lhs);
  }
  return worst;
}

double check_bound_est2(const CrossSectionModel& model, const MixtureSpec& mix,
                        std::size_t samples, std::uint64_t seed, double C_bound, double gamma) {
  Rng rng(seed);
  const int s_count = mix.species();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const int a = static_cast<int>(rng.uniform_index(s_count));
    const int b = static_cast<int>(rng.uniform_index(s_count));
    const double g = rng.uniform(0.05, 8.0);
    const double rhs = C_bound * (1.0 + std::pow(g, gamma - 2.0));
    const double lhs = sigma_mix(model, mix, a, b, g, rng.uniform(-1.0, 1.0));
    worst = std::min(worst, rhs - lhs);
  }
  return worst;
}

}  // namespace pklo
