#include "pklo/gas_models.hpp"

#include <cmath>
#include <stdexcept>

namespace pklo {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_component(int c, int count, const char* what) {
  if (c < 0 || c >= count) throw std::out_of_range(std::string(what) + ": component index out of range");
}

}  // namespace

void PolyatomicGas::validate() const {
  require(m > 0.0, "PolyatomicGas: mass must be positive");
  require(!energies.empty(), "PolyatomicGas: at least one internal energy level required");
  require(energies.size() == weights.size(), "PolyatomicGas: energies and weights must have equal length");
  for (double e : energies) require(e >= 0.0, "PolyatomicGas: internal energies must be nonnegative");
  for (double w : weights) require(w > 0.0, "PolyatomicGas: degeneracy weights must be positive");
}

void MixtureSpec::validate() const {
  require(!masses.empty(), "MixtureSpec: at least one species required");
  require(masses.size() == densities.size(), "MixtureSpec: masses and densities must have equal length");
  for (double m : masses) require(m > 0.0, "MixtureSpec: masses must be positive");
  for (double n : densities) require(n > 0.0, "MixtureSpec: densities must be positive");
}

double maxwellian_poly(const PolyatomicGas& gas, int i, const Vec3& xi) {
  check_component(i, gas.levels(), "maxwellian_poly");
  const double prefactor = gas.weights[i] * std::pow(gas.m, 1.5) * std::pow(two_pi, -1.5);
  return prefactor * std::exp(-0.5 * gas.m * xi.norm2() - gas.energies[i]);
}

double maxwellian_poly_general(const PolyatomicGas& gas, int i, const Vec3& xi, double n,
                               const Vec3& u, double T) {
  check_component(i, gas.levels(), "maxwellian_poly_general");
  if (n <= 0.0 || T <= 0.0) throw std::invalid_argument("maxwellian_poly_general: n and T must be positive");
  double q = 0.0;
  for (int j = 0; j < gas.levels(); ++j) q += gas.weights[j] * std::exp(-gas.energies[j] / T);
  const double prefactor = n * gas.weights[i] * std::pow(gas.m, 1.5) / (std::pow(two_pi * T, 1.5) * q);
  return prefactor * std::exp(-0.5 * gas.m * (xi - u).norm2() / T - gas.energies[i] / T);
}

double maxwellian_mix(const MixtureSpec& mix, int alpha, const Vec3& xi) {
  check_component(alpha, mix.species(), "maxwellian_mix");
  const double m = mix.masses[alpha];
  return mix.densities[alpha] * std::pow(m / two_pi, 1.5) * std::exp(-0.5 * m * xi.norm2());
}

DistributionField maxwellian_field_poly(const PolyatomicGas& gas) {
  return {gas.levels(), [gas](int i, const Vec3& xi) { return maxwellian_poly(gas, i, xi); }};
}

DistributionField maxwellian_field_mix(const MixtureSpec& mix) {
  return {mix.species(), [mix](int a, const Vec3& xi) { return maxwellian_mix(mix, a, xi); }};
}

CollisionInvariantBasis invariants_poly(const PolyatomicGas& gas) {
  const int r = gas.levels();
  const double m = gas.m;
  const std::vector<double> I = gas.energies;
  CollisionInvariantBasis basis;
  basis.fields.push_back({r, [](int, const Vec3&) { return 1.0; }});
  basis.fields.push_back({r, [](int, const Vec3& xi) { return xi.x; }});
  basis.fields.push_back({r, [](int, const Vec3& xi) { return xi.y; }});
  basis.fields.push_back({r, [](int, const Vec3& xi) { return xi.z; }});
  basis.fields.push_back({r, [m, I](int i, const Vec3& xi) { return m * xi.norm2() + 2.0 * I[i]; }});
  return basis;
}

CollisionInvariantBasis invariants_mix(const MixtureSpec& mix) {
  const int s = mix.species();
  const std::vector<double> m = mix.masses;
  CollisionInvariantBasis basis;
  for (int beta = 0; beta < s; ++beta)
    basis.fields.push_back({s, [beta](int a, const Vec3&) { return a == beta ? 1.0 : 0.0; }});
  basis.fields.push_back({s, [m](int a, const Vec3& xi) { return m[a] * xi.x; }});
  basis.fields.push_back({s, [m](int a, const Vec3& xi) { return m[a] * xi.y; }});
  basis.fields.push_back({s, [m](int a, const Vec3& xi) { return m[a] * xi.z; }});
  basis.fields.push_back({s, [m](int a, const Vec3& xi) { return m[a] * xi.norm2(); }});
  return basis;
}

namespace {

CollisionInvariantBasis weight_by_sqrt_maxwellian(CollisionInvariantBasis basis,
                                                  const DistributionField& maxwellian) {
  CollisionInvariantBasis out;
  for (auto& field : basis.fields) {
    const auto inner = field.eval;
    const auto mw = maxwellian.eval;
    out.fields.push_back(
        {field.components, [inner, mw](int c, const Vec3& xi) {
           return std::sqrt(mw(c, xi)) * inner(c, xi);
         }});
  }
  return out;
}

}  // namespace

CollisionInvariantBasis linearized_kernel_basis_poly(const PolyatomicGas& gas) {
  return weight_by_sqrt_maxwellian(invariants_poly(gas), maxwellian_field_poly(gas));
}

CollisionInvariantBasis linearized_kernel_basis_mix(const MixtureSpec& mix) {
  return weight_by_sqrt_maxwellian(invariants_mix(mix), maxwellian_field_mix(mix));
}

}  // namespace pklo
