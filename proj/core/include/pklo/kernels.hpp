#pragma once

#include <vector>

#include "pklo/cross_sections.hpp"
#include "pklo/gas_models.hpp"
#include "pklo/quadrature.hpp"

namespace pklo {

/// Quadrature rules used by the reduced kernels: a unit-sphere rule for the
/// loss/gain angular integrals and a graded polar rule for the integrals over
/// the plane orthogonal to the relative velocity.
struct KernelRules {
  SphereRule sphere;
  PlaneRule plane;
};

KernelRules default_kernel_rules(double gamma = 0.5);

// ---------------------------------------------------------------------------
// Polyatomic kernels. All take pre-collision velocities (xi, xi_star) with
// xi != xi_star; coincident velocities throw (the 1/|g| factor is integrable
// but pointwise undefined).
// ---------------------------------------------------------------------------

/// Loss kernel: (M_i M_j*)^{1/2} |g| sum_{k,l} int_{S^2} sigma_ij^kl dw over
/// open channels.
double k1_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, int j,
               const Vec3& xi, const Vec3& xi_star, const SphereRule& sphere);

/// Gain kernel: integral over the plane orthogonal to n = g/|g| of the
/// post-collision Maxwellian pair, summed over channels (k,l) with the line
/// shift chi = dI_ik^jl / (m |g|).
double k2_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, int j,
               const Vec3& xi, const Vec3& xi_star, const PlaneRule& plane);

/// k_ij = k_ij2 - k_ij1; satisfies k_ij(xi, xi*) = k_ji(xi*, xi).
double k_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, int j,
              const Vec3& xi, const Vec3& xi_star, const KernelRules& rules);

/// All r x r kernel values k_ij(xi, xi_star) in one pass (row-major i*r + j).
/// Shares the geometric setup across component pairs; used by assembly.
void k_poly_block(const PolyatomicGas& gas, const CrossSectionModel& model, const Vec3& xi,
                  const Vec3& xi_star, const KernelRules& rules, double* out);

// ---------------------------------------------------------------------------
// Mixture kernels.
// ---------------------------------------------------------------------------

/// Loss kernel k_ab1^(b): (M_a M_b*)^{1/2} |g| int_{S^2} sigma_ab dw.
double k_mix_loss(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                  const Vec3& xi, const Vec3& xi_star, const SphereRule& sphere);

/// Same-species gain kernel k_ab^(a): plane integral with line shift
/// chi = (m_a - m_b)/(2 m_b) |g|.
double k_mix_same(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                  const Vec3& xi, const Vec3& xi_star, const PlaneRule& plane);

/// Opposite-species gain kernel k_ab2^(b). For unequal masses this is a
/// sphere integral with post-collision points reconstructed from the
/// invariant g_ab = (m_a xi - m_b xi*)/(m_a - m_b); for equal masses it
/// reduces to a plane integral with zero shift.
double k_mix_gain(const MixtureSpec& mix, const CrossSectionModel& model, int a, int b,
                  const Vec3& xi, const Vec3& xi_star, const KernelRules& rules);

/// Min over sphere nodes of
/// (m_b |xi'|^2 + m_a |xi*'|^2) / (m_a |xi|^2 + m_b |xi*|^2)
/// for the k_ab2^(b) parametrization; the disparate-mass energy-ratio lemma
/// guarantees this is >= rho(m_a, m_b).
double k_mix_gain_min_energy_ratio(const MixtureSpec& mix, int a, int b, const Vec3& xi,
                                   const Vec3& xi_star, const SphereRule& sphere);

/// Full s x s matrix kernel B_ac(xi, xi_star) combining same-species and
/// opposite-species parts, row-major a*s + c:
///   B_aa = 2 k_aa^(a) - k_aa1^(a) + sum_{b != a} k_ab^(a)
///   B_ac = k_ac2^(c) - k_ac1^(c)        (c != a)
/// Satisfies B_ac(xi, xi*) = B_ca(xi*, xi).
void k_mix_block(const MixtureSpec& mix, const CrossSectionModel& model, const Vec3& xi,
                 const Vec3& xi_star, const KernelRules& rules, double* out);

}  // namespace pklo
