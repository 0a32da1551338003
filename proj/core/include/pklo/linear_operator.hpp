#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pklo/kernels.hpp"

namespace pklo {

// ---------------------------------------------------------------------------
// Collision frequencies (the positive multiplication part of L).
// ---------------------------------------------------------------------------

/// Reduced 2D quadrature options for nu(|xi|): radial Gauss panels in |xi*|
/// and Gauss nodes in the cosine, split at channel-threshold roots so the
/// square-root kinks of inelastic channels stay inside panel boundaries.
struct NuOptions {
  int radial_nodes = 8;          // per panel
  double max_panel_length = 0.8;  // in units of 1 / sqrt(m)
  double extent = 10.0;           // truncation radius, units of 1 / sqrt(m)
  int cosine_nodes = 16;
  int omega_cosine_nodes = 8;  // for the angular cross-section integral
};

double nu_poly(const PolyatomicGas& gas, const CrossSectionModel& model, int i, double xi_norm,
               const NuOptions& opts = {});
double nu_mix(const MixtureSpec& mix, const CrossSectionModel& model, int alpha, double xi_norm,
              const NuOptions& opts = {});

// ---------------------------------------------------------------------------
// Discrete operator: diagonal nu plus dense symmetric K in weight-scaled
// coordinates K[(i,a),(j,b)] = sqrt(w_a) k_ij(xi_a, xi_b) sqrt(w_b).
// Row layout is component-major: row = i * grid.size() + a.
// ---------------------------------------------------------------------------

struct LinearizedOperator {
  int components = 0;
  VelocityGrid grid;
  std::vector<double> nu;  // per row
  Eigen::MatrixXd K;       // symmetric

  Eigen::Index rows() const { return K.rows(); }

  /// L v = nu .* v - K v.
  Eigen::VectorXd apply_L(const Eigen::VectorXd& v) const;

  /// Dense L = diag(nu) - K (materialized; used by eigensolves).
  Eigen::MatrixXd L_matrix() const;
};

struct AssemblyOptions {
  std::size_t size_cap = 20000;  // refuse larger row counts
  /// Same-node kernel entries: replace the singular cell by its average over
  /// the grid cell (face-parametrized spherical transform), or set it to 0.
  bool cell_average_diagonal = true;
  int cell_face_nodes = 4;    // per face axis
  int cell_radial_nodes = 3;  // per ray
  int threads = 0;            // 0 = hardware concurrency
  NuOptions nu;
};

LinearizedOperator assemble_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                                 const VelocityGrid& grid, const KernelRules& rules,
                                 const AssemblyOptions& opts = {});
LinearizedOperator assemble_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                                const VelocityGrid& grid, const KernelRules& rules,
                                const AssemblyOptions& opts = {});

// ---------------------------------------------------------------------------
// Direct (kernel-free) application of Q, L and Gamma by quadrature over the
// pre-collision partner and the scattering direction. These bypass the
// reduced kernels entirely and serve as the independent oracle for assembly.
// ---------------------------------------------------------------------------

struct QRules {
  int direction_order = 6;        // sphere rule for the xi* direction
  int omega_order = 6;            // sphere rule for the scattering direction
  int radial_nodes = 6;           // per panel
  double max_panel_length = 0.9;  // units of 1 / sqrt(m)
  double extent = 7.0;            // integration reach past |xi|, units 1/sqrt(m)
  double prune_exponent = 46.0;   // skip radial panels with exp bound below e^-this
};

/// Gain and loss parts of one component of the collision operator; the
/// absolute-loss accumulator feeds relative tolerances.
struct QParts {
  double gain = 0.0;
  double loss = 0.0;
  double loss_abs = 0.0;
  double value() const { return gain - loss; }
};

QParts apply_Q_poly_bilinear(const PolyatomicGas& gas, const CrossSectionModel& model,
                             const DistributionField& f, const DistributionField& g,
                             const Vec3& xi, int i, const QRules& rules);
double apply_Q_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                    const DistributionField& f, const Vec3& xi, int i, const QRules& rules);
double apply_L_direct_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                           const DistributionField& h, const Vec3& xi, int i,
                           const QRules& rules);
double gamma_poly(const PolyatomicGas& gas, const CrossSectionModel& model,
                  const DistributionField& h, const Vec3& xi, int i, const QRules& rules);

QParts apply_Q_mix_bilinear(const MixtureSpec& mix, const CrossSectionModel& model,
                            const DistributionField& f, const DistributionField& g,
                            const Vec3& xi, int alpha, const QRules& rules);
double apply_Q_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                   const DistributionField& f, const Vec3& xi, int alpha, const QRules& rules);
double apply_L_direct_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                          const DistributionField& h, const Vec3& xi, int alpha,
                          const QRules& rules);
double gamma_mix(const MixtureSpec& mix, const CrossSectionModel& model,
                 const DistributionField& h, const Vec3& xi, int alpha, const QRules& rules);

// ---------------------------------------------------------------------------
// Grid sampling helpers and matrix I/O.
// ---------------------------------------------------------------------------

/// v[(i,a)] = sqrt(w_a) field(i, xi_a).
Eigen::VectorXd sample_on_grid(const DistributionField& field, const VelocityGrid& grid);

/// Binary dump of L = diag(nu) - K: magic "PKLO", u32 version, u32 rows,
/// row-major 8-byte little-endian doubles. A JSON sidecar at path + ".json"
/// carries grid and model metadata.
void save_operator_matrix(const std::string& path, const LinearizedOperator& op,
                          const nlohmann::json& sidecar_extra);

struct SavedOperator {
  Eigen::MatrixXd L;
  std::uint32_t version = 0;
  nlohmann::json sidecar;
};

SavedOperator load_operator_matrix(const std::string& path);

/// FNV-1a hash of a canonical JSON dump, used to stamp sidecars.
std::string json_digest(const nlohmann::json& j);

}  // namespace pklo
