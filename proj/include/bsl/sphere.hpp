#pragma once

#include "bsl/common.hpp"

#include <random>
#include <utility>
#include <vector>

namespace bsl {

/// Fibonacci-sphere lattice with `count` nodes (rounded up to even). The lattice
/// is built on the upper hemisphere and mirrored, so it is closed under β → −β.
std::vector<Vec3> fibonacci_sphere(int count);

/// Uniformly distributed unit vector.
template <typename Rng>
Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> n01;
  Vec3 v;
  do {
    v = Vec3(n01(rng), n01(rng), n01(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

/// Uniform point in the ball of given radius about the origin.
template <typename Rng>
Vec3 random_point_in_ball(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(u(rng), u(rng), u(rng));
  } while (v.squaredNorm() > 1.0);
  return radius * v;
}

/// Orthonormal pair (e2, e3) completing the unit `axis` to a right-handed frame.
/// e2 = normalize(axis × ẑ), falling back to x̂ in place of ẑ when axis is nearly
/// parallel to ẑ.
std::pair<Vec3, Vec3> complete_frame(const Vec3& axis);

/// Rotation by `angle` about the unit `axis`.
Mat3 rotation(const Vec3& axis, double angle);

}  // namespace bsl
