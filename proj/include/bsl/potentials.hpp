#pragma once

#include "bsl/common.hpp"
#include "bsl/keyvalue.hpp"
#include "bsl/quadrature.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bsl {

/// Radially symmetric piece c·(1 − |x − center|²/R²)^m on the ball of radius R.
/// Order m = 0 is the (discontinuous) indicator of the ball scaled by c.
struct Bump {
  int order = 4;
  double amplitude = 1.0;
  Vec3 center = Vec3::Zero();
  double radius = 1.0;

  double profile(double rho) const;
  double value(const Vec3& x) const { return profile((x - center).norm()); }
  bool operator==(const Bump&) const = default;
};

enum class Family { PolyBump, SumOfBumps, SquareWell };

/// Analytic descriptor of a real, compactly supported potential: a finite sum of
/// radial pieces. Every family in use (polynomial bumps, their sums and
/// differences, square wells) is of this form.
class PotentialSpec {
 public:
  static PotentialSpec poly_bump(int m, double c, double a, const Vec3& center = Vec3::Zero());
  static PotentialSpec sum_of_bumps(std::vector<Bump> bumps);
  /// q = −depth inside the ball (attractive for depth > 0). Oracle-only.
  static PotentialSpec square_well(double depth, double radius, const Vec3& center = Vec3::Zero());
  /// Indicator of the ball (square well of depth −1). Oracle-only.
  static PotentialSpec ball_indicator(double radius);
  static PotentialSpec zero(double a = 1.0);
  /// p = q1 − q2, with coincident pieces merged so that q − q is exactly zero.
  static PotentialSpec difference(const PotentialSpec& q1, const PotentialSpec& q2);

  Family family() const { return family_; }
  std::span<const Bump> pieces() const { return pieces_; }
  /// Radius of the smallest origin-centred ball containing the support.
  double support_radius() const;
  /// Claimed Sobolev order ℓ.
  double smoothness() const { return smoothness_; }
  /// Replace the claimed ℓ; requires ℓ ≤ m − 1 for every piece.
  PotentialSpec with_smoothness(double ell) const;
  bool oracle_only() const { return oracle_ || smoothness_ <= 2.0; }
  bool admissible() const { return !oracle_only(); }
  bool is_zero() const;
  PotentialSpec rotated(const Mat3& r) const;
  PotentialSpec scaled(double factor) const;

  bool operator==(const PotentialSpec&) const = default;

 private:
  PotentialSpec(Family f, std::vector<Bump> pieces, double ell, bool oracle)
      : family_(f), pieces_(std::move(pieces)), smoothness_(ell), oracle_(oracle) {}
  static double default_smoothness(std::span<const Bump> pieces);

  Family family_ = Family::PolyBump;
  std::vector<Bump> pieces_;
  double smoothness_ = 3.0;
  bool oracle_ = false;
};

/// Throws AdmissibilityError unless `spec` satisfies ℓ > 2 and is not oracle-only.
void require_admissible(const PotentialSpec& spec, std::string_view where);

/// Cell-centred cubic grid over [−a, a]³ with n points per axis, x-fastest order.
struct GridGeometry {
  int n = 0;
  double a = 0.0;

  double h() const { return 2.0 * a / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * k);
  }
  double coord(int i) const { return -a + (i + 0.5) * h(); }
  Vec3 point(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  Vec3 point(std::size_t idx) const;
  bool operator==(const GridGeometry&) const = default;
};

class PotentialGrid {
 public:
  PotentialGrid(GridGeometry g, Eigen::VectorXd values, std::string spec_hash);

  const GridGeometry& geometry() const { return geometry_; }
  int n() const { return geometry_.n; }
  double a() const { return geometry_.a; }
  const Eigen::VectorXd& values() const { return values_; }
  const std::string& spec_hash() const { return spec_hash_; }

  /// Flat binary: "BSL1", n (uint64 LE), a (float64 LE), n³ float64 LE, x fastest.
  void write_binary(const std::string& path) const;
  static PotentialGrid read_binary(const std::string& path);

 private:
  GridGeometry geometry_;
  Eigen::VectorXd values_;
  std::string spec_hash_;
};

double eval_potential(const PotentialSpec& spec, const Vec3& x);

/// Tensor grid of potential values. Pieces of order 0 are cell-averaged on cells
/// cut by their boundary; smooth pieces are point-sampled.
PotentialGrid sample_grid(const PotentialSpec& spec, int n, double a);

/// q̃((κ+iη)β − shift) = ∫ q(x) e^{i((κ+iη)β − shift)·x} dx by quadrature over the
/// support, in spherical coordinates about each piece's centre.
Complex fourier_complex(const PotentialSpec& spec, const Vec3& beta, const ComplexFrequency& freq,
                        const Vec3& shift = Vec3::Zero(), const quad::Options& opt = {});

/// q̃(w) for an arbitrary complex vector w.
Complex fourier_at(const PotentialSpec& spec, const CVec3& w, const quad::Options& opt = {});

/// Plane integral of q over {x : β·x = λ}.
double radon_transform(const PotentialSpec& spec, const Vec3& beta, double lambda,
                       const quad::Options& opt = {});

/// Same plane integral from the closed form πcR²(1 − d²/R²)^{m+1}/(m + 1) of
/// each piece, d the offset of the plane from the piece centre.
double radon_transform_closed_form(const PotentialSpec& spec, const Vec3& beta, double lambda);

/// ∫ e^{iκλ − ηλ} q̂(β, λ) dλ over the support (η may have either sign).
Complex fourier_via_radon(const PotentialSpec& spec, const Vec3& beta, double kappa, double eta,
                          const quad::Options& opt = {});

/// Interval [λ_min, λ_max] outside which q̂(β, ·) vanishes, and the kink points.
std::vector<double> radon_breakpoints(const PotentialSpec& spec, const Vec3& beta);

/// ∫ q dx by radial quadrature, piece by piece.
double total_mass(const PotentialSpec& spec, const quad::Options& opt = {});

/// Structured-text serialisation. Top-level keys (family, m, c, a, center, ell)
/// live in section `name`; sum_of_bumps pieces in repeated `[name.bump]`
/// sections (`[bump]` when name is empty).
std::string to_text(const PotentialSpec& spec, std::string_view name = "");
PotentialSpec parse_spec(const kv::Document& doc, std::string_view name = "");
PotentialSpec load_spec(const std::string& path);

/// Content digest (FNV-1a 64, hex) of the canonical serialisation.
std::string spec_hash(const PotentialSpec& spec);
std::string fnv1a_hex(std::string_view bytes);

/// Number formatting shared by every text output: 17 significant digits.
std::string format_double(double v);

}  // namespace bsl
