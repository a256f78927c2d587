#include "doctest.h"

#include "bsl/potentials.hpp"
#include "bsl/sphere.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace bsl;

namespace {

// 4π ∫₀¹ r² (1 − r²)^m dr by the binomial expansion.
double bump_mass(int m) {
  double s = 0.0, binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    s += (j % 2 ? -1.0 : 1.0) * binom / (2.0 * j + 3.0);
    binom = binom * (m - j) / (j + 1.0);
  }
  return 4.0 * kPi * s;
}

PotentialSpec asymmetric() {
  return PotentialSpec::sum_of_bumps({Bump{4, 1.0, Vec3(0.3, 0.0, 0.1), 0.5}, Bump{5, -0.6, Vec3(-0.2, 0.35, 0.0), 0.4}});
}

}  // namespace

TEST_CASE("complex frequency conventions") {
  const ComplexFrequency f(3.0, 4.0);
  CHECK(f.gamma() == 25.0);
  CHECK(f.two_k() == Complex(3.0, 4.0));
  CHECK(f.two_k() == 2.0 * f.k());
  CHECK(ComplexFrequency::from_wavenumber(1.5).kappa() == 3.0);
  CHECK_THROWS_AS(ComplexFrequency(-1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ComplexFrequency(1.0, -0.1), InvalidArgument);
}

TEST_CASE("bump evaluation") {
  const auto q = PotentialSpec::poly_bump(4, 1.0, 1.0);
  CHECK(eval_potential(q, Vec3::Zero()) == 1.0);
  CHECK(eval_potential(q, Vec3(2, 0, 0)) == 0.0);
  CHECK(eval_potential(q, Vec3(0.5, 0, 0)) == doctest::Approx(0.31640625).epsilon(1e-15));
}

TEST_CASE("compact support on random exterior points") {
  std::mt19937_64 rng(11);
  const auto q = asymmetric();
  for (int i = 0; i < 1000; ++i) {
    const Vec3 d = random_unit_vector(rng);
    const auto& b = q.pieces()[static_cast<std::size_t>(i % 2)];
    std::uniform_real_distribution<double> u(1.0, 3.0);
    const Vec3 x = b.center + u(rng) * b.radius * d;
    // Outside this piece; the other piece may still cover x.
    const auto& o = q.pieces()[static_cast<std::size_t>(1 - i % 2)];
    if ((x - o.center).norm() >= o.radius) CHECK(eval_potential(q, x) == 0.0);
    const Vec3 far = (q.support_radius() * (1.0 + u(rng))) * d;
    CHECK(eval_potential(q, far) == 0.0);
  }
}

TEST_CASE("smoothness classes and admissibility") {
  const auto q = PotentialSpec::poly_bump(4, 1.0, 1.0);
  CHECK(q.smoothness() == 3.0);
  CHECK(q.admissible());
  CHECK(PotentialSpec::square_well(1.0, 1.0).oracle_only());
  CHECK(PotentialSpec::ball_indicator(1.0).oracle_only());
  CHECK(PotentialSpec::poly_bump(3, 1.0, 1.0).oracle_only());  // ℓ = 2 is not > 2
  CHECK_THROWS_AS(q.with_smoothness(3.5), InvalidArgument);
  CHECK(q.with_smoothness(2.5).smoothness() == 2.5);
}

TEST_CASE("grid sampling") {
  SUBCASE("zero potential") {
    const auto g = sample_grid(PotentialSpec::zero(), 8, 1.0);
    CHECK(g.values().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("resolution guard and box guard") {
    CHECK_THROWS_AS(sample_grid(PotentialSpec::poly_bump(4, 1, 1), 7, 1.0), ResolutionTooLow);
    CHECK_THROWS_AS(sample_grid(PotentialSpec::poly_bump(4, 1, 1), 16, 0.5), InvalidArgument);
  }
  SUBCASE("centre cell and exterior cells") {
    const auto g = sample_grid(PotentialSpec::poly_bump(4, 1, 1), 16, 1.0);
    const double h = g.geometry().h();
    const double r = 0.5 * h * std::sqrt(3.0);  // centre of the eight central cells
    const double expect = std::pow(1.0 - r * r, 4);
    CHECK(g.values()[static_cast<Eigen::Index>(g.geometry().index(7, 7, 7))] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::abs(1.0 - expect) < 0.05);
    for (std::size_t i = 0; i < g.geometry().size(); ++i)
      if (g.geometry().point(i).norm() >= 1.0) CHECK(g.values()[static_cast<Eigen::Index>(i)] == 0.0);
  }
  SUBCASE("grid mass at n = 32") {
    const auto g = sample_grid(PotentialSpec::poly_bump(4, 1, 1), 32, 1.0);
    const double h = g.geometry().h();
    const double mass = g.values().sum() * h * h * h;
    CHECK(bump_mass(4) == doctest::Approx(512.0 * kPi / 3465.0).epsilon(1e-14));
    CHECK(std::abs(mass / bump_mass(4) - 1.0) < 0.02);
  }
}

TEST_CASE("binary grid round trip") {
  const auto g = sample_grid(asymmetric(), 12, 1.0);
  const auto path = (std::filesystem::temp_directory_path() / "bsl_grid_roundtrip.bin").string();
  g.write_binary(path);
  const auto back = PotentialGrid::read_binary(path);
  std::filesystem::remove(path);
  CHECK(back.geometry() == g.geometry());
  CHECK(back.values() == g.values());
}

TEST_CASE("text round trip and hash") {
  const auto q = asymmetric();
  const auto text = to_text(q, "q");
  const auto back = parse_spec(kv::Document::parse(text), "q");
  CHECK(back == q);
  CHECK(spec_hash(back) == spec_hash(q));
  CHECK(spec_hash(PotentialSpec::poly_bump(4, 1, 1)) != spec_hash(PotentialSpec::poly_bump(4, 1.1, 1)));
  CHECK_THROWS_AS(parse_spec(kv::Document::parse("[q]\nfamily = gaussian\n"), "q"), ParseError);
}

TEST_CASE("Fourier transform at complex frequencies") {
  SUBCASE("m = 3 mass") {
    const auto q = PotentialSpec::poly_bump(3, 1, 1);
    const Complex v = fourier_complex(q, Vec3::UnitZ(), ComplexFrequency(0, 0));
    CHECK(std::abs(v - 64.0 * kPi / 315.0) < 1e-12);
    CHECK(bump_mass(3) == doctest::Approx(64.0 * kPi / 315.0).epsilon(1e-14));
  }
  SUBCASE("conjugate symmetry for real frequencies") {
    std::mt19937_64 rng(5);
    const auto q = asymmetric();
    for (int i = 0; i < 10; ++i) {
      const Vec3 b = random_unit_vector(rng);
      const ComplexFrequency f(0.5 + 9.0 * i, 0.0);
      CHECK(std::abs(fourier_complex(q, b, f) - std::conj(fourier_complex(q, -b, f))) < 1e-10);
    }
  }
  SUBCASE("three-dimensional and Radon routes agree") {
    std::mt19937_64 rng(6);
    const auto specs = {PotentialSpec::poly_bump(4, 1, 1), PotentialSpec::poly_bump(4, 0.7, 0.8, Vec3(0.1, 0, -0.05)),
                        asymmetric()};
    for (const auto& q : specs) {
      for (int i = 0; i < 6; ++i) {
        const Vec3 b = random_unit_vector(rng);
        const double kappa = 20.0 * i / 5.0, eta = 5.0 * ((i * 7) % 6) / 5.0;
        const Complex direct = fourier_complex(q, b, ComplexFrequency(kappa, eta));
        const Complex radon = fourier_via_radon(q, b, kappa, eta);
        CHECK(std::abs(direct - radon) < 1e-6 * std::max(1.0, std::abs(direct)));
      }
    }
    // the documented κ = 5, η = 1 case
    const auto q = PotentialSpec::poly_bump(4, 1, 1);
    CHECK(std::abs(fourier_complex(q, Vec3::UnitZ(), ComplexFrequency(5, 1)) -
                   fourier_via_radon(q, Vec3::UnitZ(), 5, 1)) < 1e-6);
  }
  SUBCASE("growth guard") {
    CHECK_THROWS_AS(fourier_complex(PotentialSpec::poly_bump(4, 1, 1), Vec3::UnitZ(), ComplexFrequency(1, 41)),
                    RangeError);
  }
}

TEST_CASE("Radon transform") {
  CHECK(radon_transform(PotentialSpec::ball_indicator(1.0), Vec3::UnitZ(), 0.0) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(radon_transform(PotentialSpec::ball_indicator(1.0), Vec3::UnitX(), 0.6) ==
        doctest::Approx(kPi * 0.64).epsilon(1e-10));
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  CHECK(radon_transform(q, Vec3::UnitZ(), 1.5) == 0.0);
  CHECK(radon_transform(asymmetric(), Vec3::UnitY(), 1.5 * asymmetric().support_radius()) == 0.0);
  const Vec3 tilted = Vec3(1, 2, -0.5).normalized();
  CHECK(radon_transform(q, Vec3::UnitZ(), 0.0) == doctest::Approx(radon_transform(q, tilted, 0.0)).epsilon(1e-12));
  // closed form π c R² (1 − d²/R²)^{m+1}/(m + 1) against the quadrature route
  for (double lam : {-0.9, -0.3, 0.0, 0.45, 0.99})
    CHECK(radon_transform(q, tilted, lam) ==
          doctest::Approx(kPi * std::pow(1.0 - lam * lam, 5) / 5.0).epsilon(1e-9));
}
