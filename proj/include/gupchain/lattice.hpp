#pragma once

// Mechanical model of an open chain of identical trapped oscillators with
// nearest-neighbour springs: Hessian, normal modes and the unequal-time
// commutator kernels that carry all of the many-body physics.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gupchain {

/// Physical description of the N-site chain. Frequencies are angular (rad/s).
struct ChainSpec {
  std::size_t n_sites = 1;
  double mass = 1.0;
  double trap_freq = 1.0;
  double coupling_freq = 0.0;
  /// Overrides the nearest-neighbour construction when set (rad^2/s^2).
  std::optional<Eigen::MatrixXd> hessian;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// h = Omega^2 I + Omega_c^2 L, with L the open path-graph Laplacian.
/// Requires that no explicit override is set.
Eigen::MatrixXd build_hessian(const ChainSpec& spec);

/// The explicit override if present, otherwise build_hessian().
Eigen::MatrixXd resolve_hessian(const ChainSpec& spec);

/// Normal modes of m x^T h x / 2.
///
/// `p` is orthogonal with p^T h p = diag(frequencies^2); columns follow the
/// ascending frequencies and each column's largest-magnitude entry is
/// positive (lowest index wins ties). o = p w^{-1/2} / sqrt(m) and
/// o' = sqrt(m) p w^{1/2} map normal coordinates back to site positions and
/// momenta.
struct NormalModes {
  Eigen::VectorXd frequencies;
  Eigen::MatrixXd p_matrix;
  Eigen::MatrixXd o_matrix;
  Eigen::MatrixXd o_prime_matrix;

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(frequencies.size());
  }
  /// O_ik O'_jk, the weight of mode k in the (i, j) kernel.
  [[nodiscard]] double kernel_weight(std::size_t i, std::size_t j, std::size_t k) const {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    const auto kk = static_cast<Eigen::Index>(k);
    return o_matrix(ii, kk) * o_prime_matrix(jj, kk);
  }
};

NormalModes decompose_normal_modes(const Eigen::MatrixXd& hessian, double mass);

/// Validates the spec and decomposes its Hessian.
NormalModes normal_modes(const ChainSpec& spec);

/// max(|P^T P - I|, |O O'^T - I|), entrywise.
double canonical_deviation(const NormalModes& modes);

/// Real factor of the c-number commutator [x_i(t1), p_j(t2)] / (i hbar):
/// sum_k O_ik O'_jk cos(omega_k dt). Sites are 0-based.
double commutator_kernel(const NormalModes& modes, std::size_t i, std::size_t j, double dt);

/// D_j(t, t') = sum_i g_i(t) K_ij(t - t') with `g_at_t` holding g_i(t).
double coupling_kernel(const NormalModes& modes, std::span<const double> g_at_t, std::size_t j,
                       double t, double t_prime);

/// Per-site momenta and the deformation parameter beta.
struct MomentumSample {
  std::vector<double> momenta;
  double beta = 0.0;
};

/// [X, P] / (i hbar) for the centre of mass of N deformed constituents.
double com_commutator_factor(const MomentumSample& sample);

}  // namespace gupchain
