#pragma once

#include "bsl/common.hpp"
#include "bsl/potentials.hpp"
#include "bsl/quadrature.hpp"
#include "bsl/report.hpp"

#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace bsl {

/// Samples of the Radon transform q̂(β, λ) along one direction.
struct RadonProfile {
  Vec3 beta = Vec3::UnitZ();
  std::vector<double> lambdas;
  std::vector<double> values;
};

/// Samples q̂(β, ·) at `count` equispaced offsets spanning [−a, a], a = support radius.
RadonProfile radon_profile(const PotentialSpec& spec, const Vec3& beta, int count,
                           const quad::Options& opt = {});

/// CSV with columns beta_x,beta_y,beta_z,lambda,value.
void write_radon_csv(std::ostream& os, std::span<const RadonProfile> profiles);

/// (F(f∗g)(ξ), f̃(ξ)·g̃(ξ)). The left side is computed from the convolution
/// itself: f∗g is formed piece by piece as a radial function by quadrature and
/// then transformed by a second radial quadrature.
std::pair<Complex, Complex> convolution_theorem_check(const PotentialSpec& f, const PotentialSpec& g,
                                                      const Vec3& xi, const quad::Options& opt = {});

/// For every direction, compares ∫ q̂(β, λ) dλ with ∫ q dx. Sample values are
/// relative errors (absolute when ∫ q dx = 0); passes if all are ≤ tolerance.
EstimateReport radon_moment_identity(const PotentialSpec& spec, std::span<const Vec3> betas,
                                     double tolerance = 1e-6, const quad::Options& opt = {});

/// (∫ e^{ikβ·x} q dx, ∫ e^{ikλ} q̂(β, λ) dλ), the two sides computed independently.
std::pair<Complex, Complex> fourier_slice_identity(const PotentialSpec& spec, const Vec3& beta, double k,
                                                   const quad::Options& opt = {});

/// (q̂(β, λ), q̂(−β, −λ)).
std::pair<double, double> radon_reflection_check(const PotentialSpec& spec, const Vec3& beta, double lambda,
                                                 const quad::Options& opt = {});

/// Prolate spheroidal coordinates about the foci x and y. The frame's first axis
/// is e₁ = (y − x)/|y − x|, so that |x − z| = ℓ(s + t) and |z − y| = ℓ(s − t).
struct SpheroidalPoint {
  double s = 1.0;
  double t = 0.0;
  double psi = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 y = Vec3::UnitX();

  double ell() const { return 0.5 * (x - y).norm(); }
  Vec3 z() const;
};

/// z(s, t, ψ) for foci x, y. Throws DegenerateFoci if |x − y| < 1e−12.
Vec3 spheroidal_map(double s, double t, double psi, const Vec3& x, const Vec3& y);

/// ℓ³(s² − t²).
double spheroidal_jacobian(double s, double t, double ell);

/// Zero-padded discrete Fourier transform of grid samples. The padded lattice has
/// n·pad points per axis; the returned array is in x-fastest order.
Eigen::VectorXcd grid_fourier(const PotentialGrid& grid, int pad);

/// Inverse of grid_fourier, cropped back to the original n³ samples.
Eigen::VectorXd grid_inverse_fourier(const Eigen::VectorXcd& spectrum, const GridGeometry& g, int pad);

}  // namespace bsl
