#pragma once

#include "bsl/common.hpp"
#include "bsl/kernels.hpp"
#include "bsl/potentials.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace bsl {

enum class FieldVariant { FullU, Epsilon };

/// Complex samples of u (or ε, with u = e^{ikα·x}(1 + ε)) on a cell-centred grid.
struct ScatteringField {
  GridGeometry grid;
  Vec3 alpha = Vec3::UnitZ();
  ComplexFrequency freq;
  Eigen::VectorXcd values;
  FieldVariant variant = FieldVariant::FullU;
  int iterations = 0;
  double residual = 0.0;
};

struct AmplitudeSample {
  Vec3 beta = Vec3::UnitZ();
  Vec3 alpha = Vec3::UnitZ();
  ComplexFrequency freq;
  Complex value = 0.0;
};

enum class SolveMethod { NeumannSeries, KrylovIteration, Auto };

struct SolverOptions {
  double tol = 1e-8;         ///< relative residual ‖r‖₂/‖u₀‖₂
  int max_iterations = 500;
  int restart = 60;          ///< Krylov restart length
  double neumann_threshold = 0.8;  ///< Auto picks the series when the proxy is below this
};

/// Plane wave e^{ikα·x} on the grid, k = freq.k().
Eigen::VectorXcd plane_wave(const GridGeometry& g, const Vec3& alpha, const ComplexFrequency& freq);

/// Midpoint Nyström discretisation of the volume potential
///   (K f)(x) = ∫ e^{ik|x−y|}/(4π|x−y|) f(y) dy
/// (or the reduced kernel e^{ik(|r| − β·r)}/(4π|r|) when a direction is given),
/// with the self cell integrated over the volume-equivalent ball. K is applied to
/// q·f, where only cells with q ≠ 0 contribute.
class VolumeOperator {
 public:
  VolumeOperator(const PotentialGrid& q, const ComplexFrequency& freq,
                 std::optional<Vec3> reduced_beta = std::nullopt);

  const GridGeometry& grid() const { return grid_; }
  const ComplexFrequency& freq() const { return freq_; }
  /// Indices of cells with q ≠ 0.
  const std::vector<std::size_t>& active() const { return active_; }
  const Eigen::VectorXd& q() const { return q_; }

  /// out = K(q·f) on every grid cell.
  void apply(const Eigen::VectorXcd& f, Eigen::VectorXcd& out) const;
  /// out = K(q·f) restricted to active cells; f given on active cells.
  void apply_active(const Eigen::VectorXcd& f_active, Eigen::VectorXcd& out_active) const;
  /// Self-cell weight R²/2 with R = h(3/(4π))^{1/3}.
  double self_weight() const { return self_weight_; }
  /// spectral_radius_proxy(*this), computed once and reused by later solves.
  double cached_proxy() const;

 private:
  Complex kernel(const Vec3& r) const;

  GridGeometry grid_;
  ComplexFrequency freq_;
  std::optional<Vec3> beta_;
  Eigen::VectorXd q_;
  std::vector<std::size_t> active_;
  // Active cells grouped into runs that are contiguous along x. A run starting
  // at table offset `offset` covers active cells first..first+length−1.
  struct Run {
    std::ptrdiff_t offset;
    std::size_t first;
    std::size_t length;
  };
  void accumulate(std::ptrdiff_t base, const double* src_re, const double* src_im, Complex& acc) const;

  std::vector<std::ptrdiff_t> active_offset_;  // offset of each active cell in the kernel table
  std::vector<Run> runs_;
  std::vector<double> table_re_, table_im_;    // (2n−1)³ entries of h³·kernel
  double self_weight_ = 0.0;
  mutable std::once_flag proxy_once_;
  mutable double proxy_ = 0.0;
};

/// Tε = ∫ G(x − y) q(y) ε(y) dy with the reduced kernel for direction params.beta.
ScatteringField apply_T(const ScatteringField& field, const PotentialGrid& q, const KernelParams& params);

/// Solves u + K(q·u) = e^{ikα·x} on the grid and returns the FullU field.
ScatteringField solve_scattering(const PotentialGrid& q, const Vec3& alpha, const ComplexFrequency& freq,
                                 SolveMethod method = SolveMethod::Auto, const SolverOptions& opt = {});

/// Same as solve_scattering but reuses an assembled operator.
ScatteringField solve_scattering(const VolumeOperator& op, const Vec3& alpha, SolveMethod method,
                                 const SolverOptions& opt);

/// Power-iteration estimate of ‖(KQ)²‖^{1/2}, a proxy for the spectral radius of KQ.
double spectral_radius_proxy(const VolumeOperator& op, int iterations = 5);

/// Relative residual ‖u + K(q·u) − u₀‖₂/‖u₀‖₂ of a FullU field.
double residual(const VolumeOperator& op, const ScatteringField& u);

/// u → ε = e^{−ikα·x}u − 1 and back.
ScatteringField to_epsilon(const ScatteringField& u);
ScatteringField to_full(const ScatteringField& eps);

/// A(β, α, k) = −(1/4π) ∫ e^{−ikβ·y} q(y) u(y, α, k) dy.
AmplitudeSample amplitude(const PotentialGrid& q, const ScatteringField& u, const Vec3& beta);

/// Backscattering data A(−β, β, k), one solve per (β, k).
struct AmplitudeTable {
  std::vector<AmplitudeSample> entries;
  std::vector<std::string> failures;  ///< one message per entry that could not be computed
  bool partial() const { return !failures.empty(); }
  /// CSV: beta_x,beta_y,beta_z,alpha_x,alpha_y,alpha_z,kappa,eta,re_A,im_A.
  void write_csv(std::ostream& os) const;
};

struct SweepOptions {
  SolverOptions solver;
  SolveMethod method = SolveMethod::Auto;
  /// Directory for cached fields; disabled when empty.
  std::filesystem::path cache_dir;
};

/// Cache location: $BSL_CACHE_DIR if set, otherwise $HOME/.cache/bslab.
std::filesystem::path default_cache_dir();

AmplitudeTable backscatter_sweep(const PotentialGrid& q, std::span<const Vec3> betas,
                                 std::span<const ComplexFrequency> ks, const SweepOptions& opt = {});

/// (−4π(A₁ − A₂)(β, α, k), ∫ (q₁ − q₂) u₁(x, α, k) u₂(x, −β, k) dx), computed from
/// separate solves.
std::pair<Complex, Complex> amplitude_difference_check(const PotentialGrid& q1, const PotentialGrid& q2,
                                                       const Vec3& beta, const Vec3& alpha,
                                                       const ComplexFrequency& freq,
                                                       const SolverOptions& opt = {});

/// Norm of T² on C(B_a), with T f = ∫ G(x − y, ζ) q(y) f(y) dy and kernel
/// wavenumber ζ = κ + iη. The y-integral uses a cell-centred grid of
/// `quad_n`³ cells over the support; the inner z-integral is the two-focus
/// integral in prolate spheroidal coordinates.
struct T2Options {
  int quad_n = 14;
  Vec3 beta = Vec3::UnitZ();
  std::uint64_t seed = 1;
  int t_nodes = 16;
  int psi_nodes = 16;
};

struct T2Estimate {
  ComplexFrequency freq;
  double gamma = 0.0;
  double lower_bound = 0.0;  ///< max over random unit-sup fields of |(T²f)(x)|
  double value = 0.0;        ///< after phase alignment: max over probe points of ∫ |q(y) I(x, y)| dy
};

T2Estimate t2_norm_estimate(const PotentialSpec& q, const ComplexFrequency& freq, int probes,
                            const T2Options& opt = {});

/// Same estimate over several frequencies, sharing the Q(s) tables.
std::vector<T2Estimate> t2_norm_sweep(const PotentialSpec& q, std::span<const ComplexFrequency> freqs,
                                      int probes, const T2Options& opt = {});

}  // namespace bsl
