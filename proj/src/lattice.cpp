#include "gupchain/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "gupchain/errors.hpp"

namespace gupchain {

namespace {

// Smallest eigenvalue must exceed this fraction of the largest.
constexpr double kStabilityRatio = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kSignTieTolerance = 1e-10;

void check_site(const NormalModes& modes, std::size_t site) {
  if (site >= modes.size()) {
    throw std::out_of_range("site index " + std::to_string(site) + " out of range for " +
                            std::to_string(modes.size()) + " sites");
  }
}

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 1) throw ConfigError("n_sites must be >= 1");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be > 0");
  if (!(trap_freq > 0.0) || !std::isfinite(trap_freq)) throw ConfigError("trap frequency must be > 0");
  if (!(coupling_freq >= 0.0) || !std::isfinite(coupling_freq)) {
    throw ConfigError("coupling frequency must be >= 0");
  }
  if (hessian) {
    const auto n = static_cast<Eigen::Index>(n_sites);
    if (hessian->rows() != n || hessian->cols() != n) {
      throw ConfigError("explicit hessian must be n_sites x n_sites");
    }
    const double scale = hessian->cwiseAbs().maxCoeff();
    const double asym = (*hessian - hessian->transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= kSymmetryTolerance * scale)) throw ConfigError("explicit hessian is not symmetric");
  }
}

Eigen::MatrixXd build_hessian(const ChainSpec& spec) {
  if (spec.hessian) throw std::invalid_argument("build_hessian called with an explicit hessian override");
  if (spec.n_sites < 1) throw ConfigError("n_sites must be >= 1");
  if (!(spec.trap_freq > 0.0)) throw ConfigError("trap frequency must be > 0");

  const auto n = static_cast<Eigen::Index>(spec.n_sites);
  const double omega2 = spec.trap_freq * spec.trap_freq;
  const double coupling2 = spec.coupling_freq * spec.coupling_freq;
  Eigen::MatrixXd h = omega2 * Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i) += coupling2;
    h(i + 1, i + 1) += coupling2;
    h(i, i + 1) -= coupling2;
    h(i + 1, i) -= coupling2;
  }
  return h;
}

Eigen::MatrixXd resolve_hessian(const ChainSpec& spec) {
  if (spec.hessian) return *spec.hessian;
  return build_hessian(spec);
}

NormalModes decompose_normal_modes(const Eigen::MatrixXd& hessian, double mass) {
  if (hessian.rows() != hessian.cols() || hessian.rows() == 0) {
    throw ConfigError("hessian must be a non-empty square matrix");
  }
  if (!(mass > 0.0)) throw ConfigError("mass must be > 0");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();  // ascending
  const double largest = eigenvalues.cwiseAbs().maxCoeff();
  if (!(eigenvalues(0) > kStabilityRatio * largest)) {
    throw UnstableChainError("unstable chain: hessian eigenvalue " + std::to_string(eigenvalues(0)) +
                             " is not positive");
  }

  const Eigen::Index n = hessian.rows();
  NormalModes modes;
  modes.frequencies = eigenvalues.cwiseSqrt();
  modes.p_matrix = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    auto column = modes.p_matrix.col(k);
    const double peak = column.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(column(i)) >= peak * (1.0 - kSignTieTolerance)) {
        if (column(i) < 0.0) column = -column;
        break;
      }
    }
  }

  const double sqrt_mass = std::sqrt(mass);
  const Eigen::VectorXd root_freq = modes.frequencies.cwiseSqrt();
  modes.o_matrix = modes.p_matrix * root_freq.cwiseInverse().asDiagonal() / sqrt_mass;
  modes.o_prime_matrix = sqrt_mass * modes.p_matrix * root_freq.asDiagonal();
  return modes;
}

NormalModes normal_modes(const ChainSpec& spec) {
  spec.validate();
  return decompose_normal_modes(resolve_hessian(spec), spec.mass);
}

double canonical_deviation(const NormalModes& modes) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const double orthogonality =
      (modes.p_matrix.transpose() * modes.p_matrix - identity).cwiseAbs().maxCoeff();
  const double canonical =
      (modes.o_matrix * modes.o_prime_matrix.transpose() - identity).cwiseAbs().maxCoeff();
  return std::max(orthogonality, canonical);
}

double commutator_kernel(const NormalModes& modes, std::size_t i, std::size_t j, double dt) {
  check_site(modes, i);
  check_site(modes, j);
  double sum = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    sum += modes.kernel_weight(i, j, k) * std::cos(modes.frequencies(static_cast<Eigen::Index>(k)) * dt);
  }
  return sum;
}

double coupling_kernel(const NormalModes& modes, std::span<const double> g_at_t, std::size_t j,
                       double t, double t_prime) {
  check_site(modes, j);
  if (g_at_t.size() != modes.size()) {
    throw std::invalid_argument("coupling values must have one entry per site");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (g_at_t[i] == 0.0) continue;
    sum += g_at_t[i] * commutator_kernel(modes, i, j, t - t_prime);
  }
  return sum;
}

double com_commutator_factor(const MomentumSample& sample) {
  if (sample.momenta.empty()) throw ConfigError("momentum sample must hold at least one site");
  const double n = static_cast<double>(sample.momenta.size());
  double total = 0.0;
  double squares = 0.0;
  for (double p : sample.momenta) {
    total += p;
    squares += p * p;
  }
  const double mean_square = total * total / (n * n);
  return 1.0 + sample.beta / (n * n) * total * total + sample.beta / n * (squares - n * mean_square);
}

}  // namespace gupchain
