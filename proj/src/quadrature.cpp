#include "bsl/quadrature.hpp"

#include <map>
#include <mutex>

namespace bsl::quad {

namespace {

GaussRule build_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    if (n == 1)
      it = cache.emplace(n, GaussRule{{0.0}, {2.0}}).first;
    else
      it = cache.emplace(n, build_gauss_legendre(n)).first;
  }
  return it->second;
}

std::vector<double> make_breaks(double a, double b, std::span<const double> interior,
                                double max_panel) {
  std::vector<double> pts{a, b};
  for (double x : interior)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.push_back(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = out.back();
    const double hi = pts[i];
    const double len = hi - lo;
    if (len <= 1e-14 * std::max(1.0, std::abs(hi))) continue;
    const int pieces = (max_panel > 0.0) ? std::max(1, static_cast<int>(std::ceil(len / max_panel))) : 1;
    for (int p = 1; p < pieces; ++p) out.push_back(lo + len * p / pieces);
    out.push_back(hi);
  }
  return out;
}

}  // namespace bsl::quad
