#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pklo/common.hpp"

namespace pklo {

/// Single polyatomic species: mass m and r discrete internal energy levels
/// I_i with degeneracy weights phi_i. Dimensionless throughout.
struct PolyatomicGas {
  double m = 1.0;
  std::vector<double> energies;  // I_i >= 0
  std::vector<double> weights;   // phi_i > 0

  int levels() const { return static_cast<int>(energies.size()); }
  void validate() const;
};

/// Mixture of s monatomic species with masses m_alpha and equilibrium number
/// densities n_alpha.
struct MixtureSpec {
  std::vector<double> masses;
  std::vector<double> densities;

  int species() const { return static_cast<int>(masses.size()); }
  double reduced_mass(int a, int b) const {
    return masses[a] * masses[b] / (masses[a] + masses[b]);
  }
  void validate() const;
};

/// A vector-valued function of (component, velocity). Components are internal
/// energy levels (polyatomic) or species (mixture).
struct DistributionField {
  int components = 0;
  std::function<double(int, const Vec3&)> eval;

  double operator()(int c, const Vec3& xi) const { return eval(c, xi); }
};

struct CollisionInvariantBasis {
  std::vector<DistributionField> fields;

  int count() const { return static_cast<int>(fields.size()); }
};

/// Normalized Maxwellian (zero bulk velocity, unit temperature):
/// M_i = phi_i m^{3/2} (2 pi)^{-3/2} exp(-m |xi|^2 / 2) exp(-I_i).
double maxwellian_poly(const PolyatomicGas& gas, int i, const Vec3& xi);

/// General (n, u, T) Maxwellian, normalized by q = sum phi_i exp(-I_i/T).
/// Only used as an input to the nonlinear (Q, W) checks.
double maxwellian_poly_general(const PolyatomicGas& gas, int i, const Vec3& xi, double n,
                               const Vec3& u, double T);

/// M_alpha = n_alpha (m_alpha / 2 pi)^{3/2} exp(-m_alpha |xi|^2 / 2).
double maxwellian_mix(const MixtureSpec& mix, int alpha, const Vec3& xi);

DistributionField maxwellian_field_poly(const PolyatomicGas& gas);
DistributionField maxwellian_field_mix(const MixtureSpec& mix);

/// {1, xi_x 1, xi_y 1, xi_z 1, m|xi|^2 1 + 2I}; five fields.
CollisionInvariantBasis invariants_poly(const PolyatomicGas& gas);

/// {e_1, ..., e_s, m xi_x, m xi_y, m xi_z, m |xi|^2}; s + 4 fields.
CollisionInvariantBasis invariants_mix(const MixtureSpec& mix);

/// M^{1/2} times each collision invariant; spans the kernel of the linearized
/// operator.
CollisionInvariantBasis linearized_kernel_basis_poly(const PolyatomicGas& gas);

/// {sqrt(M_1) e_1, ..., sqrt(M_s) e_s, M^{1/2} m xi_x, ..., M^{1/2} m |xi|^2}.
CollisionInvariantBasis linearized_kernel_basis_mix(const MixtureSpec& mix);

}  // namespace pklo
