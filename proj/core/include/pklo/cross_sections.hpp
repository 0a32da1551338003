#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pklo/gas_models.hpp"

namespace pklo {

/// Scattering cross-section family. The polyatomic variants act on level
/// quadruples (i,j) -> (k,l); the mixture variants on species pairs.
///
///   poly_hard_sphere : sigma_ij^kl = C sqrt(|g|^2 - (4/m) dI) / (|g| phi_i phi_j)
///   poly_bounded     : sigma_ij^kl = C (|g| |g'|)^{gamma/2} / (|g|^2 phi_i phi_j)
///   mix_hard_sphere  : sigma_ab = C_ab (symmetric matrix)
///   mix_bounded      : sigma_ab = C (1 + |g|^{gamma-2})
///
/// All variants satisfy microreversibility and the symmetry relations by
/// construction; poly_bounded/mix_bounded realize the growth bounds used by
/// the compactness results.
struct CrossSectionModel {
  enum class Kind { poly_hard_sphere, poly_bounded, mix_hard_sphere, mix_bounded };

  Kind kind = Kind::poly_hard_sphere;
  double C = 1.0;
  double gamma = 0.5;
  std::vector<double> C_ab;  // row-major s x s, mix_hard_sphere only
  int C_ab_dim = 0;

  /// Fault injection for verification self-tests: multiplies sigma by
  /// (1 + sym_break) on channels with i > j (poly) or a > b (mix), breaking
  /// microreversibility/symmetry on purpose. Zero in normal use.
  double sym_break = 0.0;

  static CrossSectionModel poly_hard_sphere(double C = 1.0);
  static CrossSectionModel poly_bounded(double C = 1.0, double gamma = 0.5);
  static CrossSectionModel mix_hard_sphere(double C = 1.0);
  static CrossSectionModel mix_hard_sphere_matrix(std::vector<double> C_ab, int s);
  static CrossSectionModel mix_bounded(double C = 1.0, double gamma = 0.5);

  double mix_constant(int a, int b) const {
    return C_ab.empty() ? C : C_ab[static_cast<std::size_t>(a) * C_ab_dim + b];
  }
  void validate(int components) const;
};

/// Energy defect dI_ij^kl = I_k + I_l - I_i - I_j of the channel (i,j)->(k,l).
double energy_defect(const PolyatomicGas& gas, int i, int j, int k, int l);

/// Channel indicator m |g|^2 > 4 dI_ij^kl.
bool channel_open(const PolyatomicGas& gas, int i, int j, int k, int l, double g_norm2);

/// sigma_ij^kl(|g|, |cos theta|); zero on closed channels; throws on |g| <= 0.
double sigma_poly(const CrossSectionModel& model, const PolyatomicGas& gas, int i, int j, int k,
                  int l, double g_norm, double cos_theta);

/// sigma_ab(|g|, cos theta); throws on |g| <= 0.
double sigma_mix(const CrossSectionModel& model, const MixtureSpec& mix, int a, int b,
                 double g_norm, double cos_theta);

using SigmaPolyFn = std::function<double(int, int, int, int, double, double)>;
using SigmaMixFn = std::function<double(int, int, double, double)>;

SigmaPolyFn sigma_poly_fn(const CrossSectionModel& model, const PolyatomicGas& gas);
SigmaMixFn sigma_mix_fn(const CrossSectionModel& model, const MixtureSpec& mix);

/// Max relative residual of phi_i phi_j |g|^2 sigma_ij^kl(|g|) =
/// phi_k phi_l |g'|^2 sigma_kl^ij(|g'|) over random open channels.
double check_microreversibility(const SigmaPolyFn& sigma, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed);
double check_microreversibility(const CrossSectionModel& model, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed);

/// Max relative residual of sigma_ij^kl = sigma_ij^lk = sigma_ji^lk.
double check_symmetry_relations(const SigmaPolyFn& sigma, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed);
double check_symmetry_relations(const CrossSectionModel& model, const PolyatomicGas& gas,
                                std::size_t samples, std::uint64_t seed);

/// Worst margin RHS - sigma of the growth bound
/// sigma <= (C_bound/|g|^2) (Psi + Psi^{gamma/2}), Psi = |g| sqrt(|g|^2 - (4/m) dI),
/// over random open channels; nonnegative means the bound holds.
double check_bound_est1(const CrossSectionModel& model, const PolyatomicGas& gas,
                        std::size_t samples, std::uint64_t seed, double C_bound, double gamma);

/// Worst margin of sigma_ab <= C_bound (1 + |g|^{gamma-2}) for mixtures.
double check_bound_est2(const CrossSectionModel& model, const MixtureSpec& mix,
                        std::size_t samples, std::uint64_t seed, double C_bound, double gamma);

}  // namespace pklo
