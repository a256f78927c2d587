#pragma once

#include "bsl/common.hpp"
#include "bsl/kernels.hpp"
#include "bsl/potentials.hpp"
#include "bsl/report.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bsl {

/// p̃((κ + iη)β) through the one-dimensional Radon route
///   ∫ e^{iκλ − ηλ} p̂(β, λ) dλ,
/// with fixed Gauss–Kronrod panels no longer than π/κ and the closed-form
/// plane integrals of the pieces. η may be negative (the reflected route).
class PtildeEvaluator {
 public:
  PtildeEvaluator(const PotentialSpec& p, double kappa, double eta_cap);

  Complex operator()(const Vec3& beta, double eta) const;
  double kappa() const { return kappa_; }
  /// True if every piece is centred at the origin, so |p̃| does not depend on β.
  bool radial() const { return radial_; }

 private:
  const PotentialSpec* p_;
  double kappa_;
  double a_;
  double panel_;
  bool radial_;
};

struct SupOptions {
  int grid_nodes = 256;   ///< Fibonacci lattice size
  int refine_starts = 3;  ///< best grid nodes refined by local ascent
  int refine_sweeps = 2;  ///< alternating golden-section sweeps per start
};

struct SupResult {
  double value = 0.0;
  Vec3 beta = Vec3::UnitZ();
};

/// max over β of |p̃((κ + iη)β)| on the lattice, refined by golden-section ascent
/// along tangent directions. Throws RangeError if |η|·a > 40.
SupResult sup_beta_ptilde(const PotentialSpec& p, const ComplexFrequency& freq, const SupOptions& opt = {});
SupResult sup_beta_ptilde(const PtildeEvaluator& ev, double eta, const SupOptions& opt = {});

/// max over real s of |p̃(s)|, by multistart Nelder–Mead from s = 0 and `seeds`
/// random points with |s| ≤ 4π/a.
struct PeakResult {
  double value = 0.0;
  Vec3 argmax = Vec3::Zero();
};
PeakResult peak(const PotentialSpec& p, int seeds = 64, std::uint64_t seed = 7);

struct LevelSetResult {
  double kappa = 0.0;
  double eta_star = 0.0;
  double sup_value = 0.0;
  double target = 0.0;
  Vec3 beta_star = Vec3::UnitZ();
  bool degenerate = false;  ///< sup at η = 0 already reached the target
};

struct LevelSetOptions {
  double scan_step = 0.25;
  double rel_tol = 1e-6;
  SupOptions sup;
};

/// Smallest η ≥ 0 with sup_β |p̃((κ + iη)β)| = P, by a scan in steps of 0.25 and
/// bisection to 1e−6·P. Returns η = 0 (degenerate) if the sup at η = 0 is already
/// ≥ P. Throws RangeError once η·a would exceed 40.
LevelSetResult find_eta(const PotentialSpec& p, double kappa, double P, const LevelSetOptions& opt = {});

/// (max_β |p̃((κ + iη)β)|, max_β |p̃((κ − iη)β)|), each maximised independently.
std::pair<double, double> reflection_symmetry_check(const PotentialSpec& p, double kappa, double eta,
                                                    const SupOptions& opt = {});

/// Fits c = max |p̃((κ + iη)β)|·(1 + κ² + η²)^{ℓ/2} e^{−a|η|} over the sweep and
/// the log–log slope of sup_β |p̃(κβ)| at η = 0 over κ ∈ [20, 200]. For a
/// radial profile sup_β |p̃| oscillates in κ, so the slope is fitted to its
/// upper envelope (maximum over a window of one period π/a).
struct DecayOptions {
  double slope_kappa_min = 20.0;
  double slope_kappa_max = 200.0;
  int slope_points = 12;
  SupOptions sup{64, 2, 2};
};
EstimateReport decay_bound_check(const PotentialSpec& p, std::span<const std::pair<double, double>> sweep,
                                 const DecayOptions& opt = {});

/// B(r) = ∫₋₁¹ dt / ([(r − κt)² + η²t²]^{1/2} (1 + γ + r² − 2rκt)^{ℓ/2}) and its
/// closed-form upper bound
///   |ln((1 − t₀ + √((1 − t₀)² + b²)) / (√((1 + t₀)² + b²) − 1 − t₀))| / (√γ [1 + η² + (r − κ)²]^{ℓ/2})
/// with t₀ = rκ/γ, b = ηr/γ. Where the t-integral diverges (r = 0, or η = 0 with
/// |t₀| ≤ 1) the numeric value is +∞ and `near_singular` is set.
struct BResult {
  double numeric = 0.0;
  double bound = 0.0;
  bool near_singular = false;
};
BResult b_integral(double r, const ComplexFrequency& freq, double ell);

/// J = 2π ∫₀^∞ r B(r) dr, truncated where the tail bound 8π·2^ℓ R^{1−ℓ}/(ℓ − 1)
/// drops below 1e−10. Requires ℓ > 2 and η > 0.
double j_integral(const ComplexFrequency& freq, double ell);

/// I = sup_β ∫ |q̃((κ + iη)β − s)| / |s² − (κ + iη)β·s| ds, in spherical
/// coordinates centred at κβ with polar axis β. Radial potentials use one β.
struct ILeadingOptions {
  int grid_nodes = 32;
  double rel_tol = 1e-6;
};
double i_leading(const PotentialSpec& q, const ComplexFrequency& freq, const ILeadingOptions& opt = {});

/// I₁(x, y) with kernel wavenumber ζ = κ + iη (two-focus integral).
Complex appendix_i1(const PotentialSpec& q, const Vec3& x, const Vec3& y, const ComplexFrequency& freq);

/// q̃(w) for complex w by fixed Gauss–Legendre radial rules sized to |w|·R.
/// Faster than fourier_at for repeated evaluation; accuracy ~1e−12 relative.
Complex fourier_fast(const PotentialSpec& q, const CVec3& w);

}  // namespace bsl
