#include "doctest.h"

#include "bsl/quadrature.hpp"
#include "bsl/sphere.hpp"
#include "bsl/transforms.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace bsl;

namespace {

PotentialSpec asymmetric() {
  return PotentialSpec::sum_of_bumps({Bump{4, 1.0, Vec3(0.3, 0.0, 0.1), 0.5}, Bump{5, -0.6, Vec3(-0.2, 0.35, 0.0), 0.4}});
}

double mass(const PotentialSpec& q) { return total_mass(q); }

}  // namespace

TEST_CASE("convolution theorem") {
  const auto zero = PotentialSpec::zero();
  const auto [l0, r0] = convolution_theorem_check(zero, zero, Vec3(1, 0, 0));
  CHECK(l0 == Complex(0.0));
  CHECK(r0 == Complex(0.0));

  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  const auto [l1, r1] = convolution_theorem_check(q, q, Vec3::Zero());
  const double m = 512.0 * kPi / 3465.0;
  CHECK(std::abs(l1 - m * m) < 1e-5);
  CHECK(std::abs(r1 - m * m) < 1e-5);

  // A narrow unit-mass bump acts as an approximate identity.
  const double R = 0.05;
  const auto narrow = PotentialSpec::poly_bump(4, 1.0 / (m * R * R * R), R);
  const Vec3 xi(0.6, -0.3, 0.5);
  const auto [l2, r2] = convolution_theorem_check(narrow, q, xi);
  const Complex g = fourier_at(q, xi.cast<Complex>());
  CHECK(std::abs(l2 - g) < 1e-3 * std::abs(g));
  CHECK(std::abs(l2 - r2) < 1e-6 * std::abs(r2));

  const auto [l3, r3] = convolution_theorem_check(asymmetric(), q, Vec3(2.0, 1.0, -1.5));
  CHECK(std::abs(l3 - r3) < 1e-6 * std::max(1e-3, std::abs(r3)));
}

TEST_CASE("Radon moment identity") {
  std::mt19937_64 rng(21);
  std::vector<Vec3> betas;
  for (int i = 0; i < 50; ++i) betas.push_back(random_unit_vector(rng));

  const auto ball = radon_moment_identity(PotentialSpec::ball_indicator(1.0), betas);
  CHECK(ball.passed);
  CHECK(mass(PotentialSpec::ball_indicator(1.0)) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-10));

  const auto rep = radon_moment_identity(PotentialSpec::poly_bump(4, 1, 1), betas);
  CHECK(rep.passed);
  CHECK(rep.samples.size() == 50);
  for (const auto& s : rep.samples) CHECK(s.value < 1e-6);

  const auto z = radon_moment_identity(PotentialSpec::zero(), betas);
  CHECK(z.passed);
  for (const auto& s : z.samples) CHECK(s.value == 0.0);

  CHECK(radon_moment_identity(asymmetric(), betas).passed);
}

TEST_CASE("Fourier slice identity") {
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  const auto [a0, b0] = fourier_slice_identity(q, Vec3::UnitX(), 0.0);
  CHECK(std::abs(a0 - mass(q)) < 1e-10);
  CHECK(std::abs(b0 - mass(q)) < 1e-8);

  std::mt19937_64 rng(8);
  for (const auto& spec : {q, asymmetric()}) {
    for (int i = 0; i < 5; ++i) {
      const auto [a, b] = fourier_slice_identity(spec, random_unit_vector(rng), 7.0);
      CHECK(std::abs(a - b) < 1e-6 * std::max(1e-3, std::abs(a)));
    }
  }
  const auto [za, zb] = fourier_slice_identity(PotentialSpec::zero(), Vec3::UnitZ(), 3.0);
  CHECK(za == Complex(0.0));
  CHECK(zb == Complex(0.0));
}

TEST_CASE("Radon reflection") {
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  const auto [a, b] = radon_reflection_check(q, Vec3::UnitZ(), 0.0);
  CHECK(a == b);
  const auto [c, d] = radon_reflection_check(q, Vec3::UnitZ(), 0.3);
  CHECK(std::abs(c - d) < 1e-8);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int i = 0; i < 20; ++i) {
    const auto [e, f] = radon_reflection_check(asymmetric(), random_unit_vector(rng), u(rng));
    CHECK(std::abs(e - f) < 1e-8);
  }
}

TEST_CASE("Radon profiles are real, ordered and exportable") {
  const auto p = radon_profile(asymmetric(), Vec3(0, 0.6, 0.8), 41);
  REQUIRE(p.lambdas.size() == 41);
  for (std::size_t i = 0; i + 1 < p.lambdas.size(); ++i) CHECK(p.lambdas[i + 1] > p.lambdas[i]);
  for (double v : p.values) CHECK(std::isfinite(v));
  std::ostringstream os;
  const RadonProfile ps[] = {p};
  write_radon_csv(os, ps);
  CHECK(os.str().rfind("beta_x,beta_y,beta_z,lambda,value\n", 0) == 0);
}

TEST_CASE("prolate spheroidal coordinates") {
  const Vec3 x(1, 0, 0), y(-1, 0, 0);
  const Vec3 z = spheroidal_map(2.0, 0.0, 0.0, x, y);
  CHECK((z - Vec3(0, std::sqrt(3.0), 0)).norm() < 1e-14);
  CHECK((x - z).norm() + (z - y).norm() == doctest::Approx(4.0).epsilon(1e-14));
  // The first axis points from x to y, so t = +1 is the tip at y and t = −1 the tip at x.
  CHECK((spheroidal_map(1.0, 1.0, 0.0, x, y) - y).norm() < 1e-14);
  CHECK((spheroidal_map(1.0, -1.0, 0.0, x, y) - x).norm() < 1e-14);
  CHECK_THROWS_AS(spheroidal_map(2.0, 0.0, 0.0, x, x), DegenerateFoci);

  CHECK(spheroidal_jacobian(2.0, 0.0, 1.0) == 4.0);
  CHECK(spheroidal_jacobian(1.0, 1.0, 0.7) == 0.0);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> us(1.0, 4.0), ut(-1.0, 1.0), up(0.0, 2.0 * kPi);
  for (int i = 0; i < 100; ++i) {
    const Vec3 fx = random_point_in_ball(rng, 2.0), fy = random_point_in_ball(rng, 2.0);
    const double s = us(rng), t = ut(rng), psi = up(rng);
    const double ell = 0.5 * (fx - fy).norm();
    const Vec3 p = spheroidal_map(s, t, psi, fx, fy);
    const double dx = (fx - p).norm(), dy = (p - fy).norm();
    CHECK(std::abs(dx + dy - 2.0 * ell * s) < 1e-10);
    CHECK(std::abs(dx - dy - 2.0 * ell * t) < 1e-10);
    CHECK(std::abs(dx * dy - ell * ell * (s * s - t * t)) < 1e-10);

    // |det ∂z/∂(s, t, ψ)| by central differences
    const double hs = 1e-6;
    Mat3 J;
    J.col(0) = (spheroidal_map(s + hs, t, psi, fx, fy) - spheroidal_map(s - hs, t, psi, fx, fy)) / (2 * hs);
    const double tp = std::min(1.0, t + hs), tm = std::max(-1.0, t - hs);
    J.col(1) = (spheroidal_map(s, tp, psi, fx, fy) - spheroidal_map(s, tm, psi, fx, fy)) / (tp - tm);
    J.col(2) = (spheroidal_map(s, t, psi + hs, fx, fy) - spheroidal_map(s, t, psi - hs, fx, fy)) / (2 * hs);
    const double jac = spheroidal_jacobian(s, t, ell);
    CHECK(std::abs(std::abs(J.determinant()) - jac) < 1e-6 * std::max(1.0, jac));
  }
}

TEST_CASE("integration in spheroidal coordinates reproduces a Cartesian integral") {
  const Vec3 x(-0.3, 0, 0), y(0.3, 0, 0.05);
  const double ell = 0.5 * (x - y).norm();
  const Bump b{4, 1.0, Vec3(0.1, 0.8, -0.1), 0.5};
  const auto phi = PotentialSpec::sum_of_bumps({b});
  const double s_max = ((x - b.center).norm() + (y - b.center).norm() + 2 * b.radius) / (2 * ell);
  quad::Options o{1e-12, 1e-9, 4000, true};
  auto over_psi = [&](double s, double t) {
    return quad::integrate([&](double psi) { return eval_potential(phi, spheroidal_map(s, t, psi, x, y)); }, 0.0,
                           2 * kPi, o)
        .value;
  };
  auto over_t = [&](double s) {
    return quad::integrate([&](double t) { return spheroidal_jacobian(s, t, ell) * over_psi(s, t); }, -1.0, 1.0, o)
        .value;
  };
  const double sph = quad::integrate(over_t, 1.0, s_max, o).value;
  const double cart = total_mass(phi);
  CHECK(std::abs(sph - cart) < 1e-5 * cart);
}

TEST_CASE("grid Fourier transform inverts") {
  const auto g = sample_grid(asymmetric(), 16, 1.0);
  const auto spec = grid_fourier(g, 2);
  CHECK(spec.size() == 32 * 32 * 32);
  CHECK(std::abs(spec[0] - g.values().sum()) < 1e-10);
  const auto back = grid_inverse_fourier(spec, g.geometry(), 2);
  CHECK((back - g.values()).cwiseAbs().maxCoeff() < 1e-6);
}
