#include "bsl/sphere.hpp"

#include <cmath>

namespace bsl {

std::vector<Vec3> fibonacci_sphere(int count) {
  if (count < 2) throw InvalidArgument("direction grid needs at least two nodes");
  const int half = (count + 1) / 2;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> out;
  out.reserve(2 * half);
  for (int i = 0; i < half; ++i) {
    const double z = 1.0 - (i + 0.5) / half;  // (0, 1)
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  for (int i = 0; i < half; ++i) out.push_back(-out[i]);
  return out;
}

std::pair<Vec3, Vec3> complete_frame(const Vec3& axis) {
  Vec3 ref = Vec3::UnitZ();
  if (axis.cross(ref).norm() < 1e-6) ref = Vec3::UnitX();
  const Vec3 e2 = axis.cross(ref).normalized();
  const Vec3 e3 = axis.cross(e2);
  return {e2, e3};
}

Mat3 rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace bsl
