#pragma once

#include "bsl/common.hpp"
#include "bsl/potentials.hpp"
#include "bsl/quadrature.hpp"

#include <vector>

namespace bsl {

/// Frequency and direction defining the reduced kernel. The kernel wavenumber
/// is k = freq.k() = (κ + iη)/2.
struct KernelParams {
  ComplexFrequency freq;
  Vec3 beta = Vec3::UnitZ();
};

/// e^{ik|x−y|}/(4π|x−y|). Throws SingularPoint if |x − y| < 1e−14 and
/// InvalidArgument if Im k < 0.
Complex free_green(const Vec3& x, const Vec3& y, Complex k);

/// e^{ik(|r| − β·r)}/(4π|r|) with r = x − y.
Complex reduced_kernel(const Vec3& x_minus_y, const KernelParams& params);

/// 1/(ξ·ξ − (κ + iη) β·ξ). Throws NearResonance if the denominator is within
/// 1e−12·max(1, ξ²) of zero.
Complex reduced_symbol(const Vec3& xi, const KernelParams& params);

/// The two-focus integral
///   I₁(x, y; ζ) = ℓ ∫₁^∞ e^{2iζℓs} Q(s) ds,  Q(s) = ∫₀^{2π} dψ ∫₋₁¹ dt q(z(s, t, ψ)),
/// with ℓ = |x − y|/2 and z the prolate spheroidal map with foci x, y. It
/// equals ∫ e^{iζ(|x−z| + |z−y|)} q(z)/(|x−z||z−y|) dz.
class SpheroidalIntegral {
 public:
  enum class Mode {
    Adaptive,  ///< Q by nested adaptive quadrature at every node of the s-integral
    Tabulated  ///< Q by fixed tensor rules on coarse panels, interpolated
  };

  struct Options {
    Mode mode = Mode::Adaptive;
    int t_nodes = 24;        ///< tabulated mode: Gauss nodes in t
    int psi_nodes = 24;      ///< tabulated mode: Gauss nodes in ψ
    int table_nodes = 12;    ///< tabulated mode: interpolation nodes per panel
    int panel_nodes = 8;     ///< Gauss nodes per half-period panel of the s-integral
    quad::Options q_opt{1e-11, 1e-11, 4000, true};
  };

  SpheroidalIntegral(const PotentialSpec& q, const Vec3& x, const Vec3& y, Options opt);
  SpheroidalIntegral(const PotentialSpec& q, const Vec3& x, const Vec3& y)
      : SpheroidalIntegral(q, x, y, Options{}) {}

  double ell() const { return ell_; }
  /// Range of s outside which Q vanishes.
  double s_lo() const { return s_lo_; }
  double s_hi() const { return s_hi_; }

  /// Q(s) by nested adaptive quadrature.
  double q_exact(double s) const;
  /// Q(s) by the fixed tensor rule.
  double q_fixed(double s) const;
  /// I₁ at complex wavenumber ζ (Im ζ ≥ 0).
  Complex evaluate(Complex zeta) const;

 private:
  double q_table(double sigma) const;

  const PotentialSpec* q_;
  Vec3 x_, y_, mid_, e1_, e2_, e3_;
  double ell_ = 0.0;
  double s_lo_ = 1.0, s_hi_ = 1.0;
  Options opt_;
  // Tabulated Q on σ = ℓs panels.
  std::vector<double> panel_edges_;
  std::vector<double> table_;  // table_nodes values per panel
  std::vector<double> bary_;   // barycentric weights of the reference nodes
  std::vector<double> ref_nodes_;
};

}  // namespace bsl
