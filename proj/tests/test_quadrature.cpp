#include "doctest.h"

#include "bsl/quadrature.hpp"
#include "bsl/sphere.hpp"

#include <cmath>
#include <random>

using namespace bsl;

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 12, 40}) {
    const auto& r = quad::gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], deg - (deg % 2));
    const int even = deg - (deg % 2);
    CHECK(s == doctest::Approx(2.0 / (even + 1)).epsilon(1e-13));
  }
}

TEST_CASE("adaptive Gauss-Kronrod handles smooth, kinked and complex integrands") {
  auto r1 = quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r1.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));

  const double br[3] = {-1.0, 0.3, 1.0};
  auto r2 = quad::integrate([](double x) { return std::abs(x - 0.3); }, std::span<const double>(br, 3));
  CHECK(r2.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7).epsilon(1e-13));

  auto r3 = quad::integrate([](double x) { return std::exp(Complex(0.0, 20.0 * x)); }, 0.0, 1.0);
  const Complex exact = (std::exp(Complex(0.0, 20.0)) - 1.0) / Complex(0.0, 20.0);
  CHECK(std::abs(r3.value - exact) < 1e-12);

  // Integrable endpoint singularity.
  quad::Options o{1e-10, 1e-10, 4000, true};
  auto r4 = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, o);
  CHECK(r4.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("an exhausted interval budget is reported") {
  quad::Options o{0.0, 1e-15, 3, true};
  auto f = [](double x) { return std::sin(200.0 * x) / (x + 1e-3); };
  CHECK_THROWS_AS(quad::integrate(f, 0.0, 1.0, o), QuadratureNotConverged);
  o.throw_on_failure = false;
  CHECK_FALSE(quad::integrate(f, 0.0, 1.0, o).converged);
}

TEST_CASE("make_breaks keeps interior points and bounds the panel length") {
  const double interior[] = {0.25, 0.25, 2.0, -1.0};
  const auto b = quad::make_breaks(0.0, 1.0, interior, 0.3);
  CHECK(b.front() == 0.0);
  CHECK(b.back() == 1.0);
  CHECK(std::find(b.begin(), b.end(), 0.25) != b.end());
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    CHECK(b[i + 1] > b[i]);
    CHECK(b[i + 1] - b[i] <= 0.3 + 1e-15);
  }
}

TEST_CASE("Fibonacci lattice is unit, antipodally closed and roughly uniform") {
  const auto pts = fibonacci_sphere(64);
  REQUIRE(pts.size() == 64);
  Vec3 mean = Vec3::Zero();
  for (const auto& p : pts) {
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    mean += p;
    bool has_antipode = false;
    for (const auto& q : pts) has_antipode = has_antipode || (p + q).norm() < 1e-12;
    CHECK(has_antipode);
  }
  CHECK(mean.norm() < 1e-12);
}

TEST_CASE("complete_frame returns a right-handed orthonormal frame") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Vec3 a = i == 0 ? Vec3::UnitZ() : random_unit_vector(rng);
    const auto [e2, e3] = complete_frame(a);
    CHECK(std::abs(a.dot(e2)) < 1e-14);
    CHECK(std::abs(a.dot(e3)) < 1e-14);
    CHECK(std::abs(e2.dot(e3)) < 1e-14);
    CHECK((a.cross(e2) - e3).norm() < 1e-14);
  }
  const Mat3 R = rotation(Vec3::UnitZ(), 0.5 * kPi);
  CHECK((R * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-15);
}
