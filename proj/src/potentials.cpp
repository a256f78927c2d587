#include "bsl/potentials.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bsl {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

double Bump::profile(double rho) const {
  if (!(rho < radius)) return 0.0;
  if (order == 0) return amplitude;
  const double u = 1.0 - (rho * rho) / (radius * radius);
  double v = amplitude;
  for (int i = 0; i < order; ++i) v *= u;
  return v;
}

// ---------------------------------------------------------------- PotentialSpec

double PotentialSpec::default_smoothness(std::span<const Bump> pieces) {
  int m = 1 << 20;
  for (const auto& b : pieces) m = std::min(m, b.order);
  if (pieces.empty()) m = 4;
  return std::max(0.0, m - 1.0);
}

PotentialSpec PotentialSpec::poly_bump(int m, double c, double a, const Vec3& center) {
  if (m < 0) throw InvalidArgument("bump order must be non-negative");
  if (!(a > 0.0)) throw InvalidArgument("bump radius must be positive");
  std::vector<Bump> p{Bump{m, c, center, a}};
  const double ell = default_smoothness(p);
  return PotentialSpec(Family::PolyBump, std::move(p), ell, false);
}

PotentialSpec PotentialSpec::sum_of_bumps(std::vector<Bump> bumps) {
  if (bumps.empty()) throw InvalidArgument("sum_of_bumps needs at least one bump");
  for (const auto& b : bumps) {
    if (b.order < 0) throw InvalidArgument("bump order must be non-negative");
    if (!(b.radius > 0.0)) throw InvalidArgument("bump radius must be positive");
  }
  const double ell = default_smoothness(bumps);
  return PotentialSpec(Family::SumOfBumps, std::move(bumps), ell, false);
}

PotentialSpec PotentialSpec::square_well(double depth, double radius, const Vec3& center) {
  if (!(radius > 0.0)) throw InvalidArgument("well radius must be positive");
  return PotentialSpec(Family::SquareWell, {Bump{0, -depth, center, radius}}, 0.0, true);
}

PotentialSpec PotentialSpec::ball_indicator(double radius) { return square_well(-1.0, radius); }

PotentialSpec PotentialSpec::zero(double a) { return poly_bump(4, 0.0, a); }

PotentialSpec PotentialSpec::difference(const PotentialSpec& q1, const PotentialSpec& q2) {
  std::vector<Bump> merged(q1.pieces_.begin(), q1.pieces_.end());
  for (Bump b : q2.pieces_) {
    b.amplitude = -b.amplitude;
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Bump& m) {
      return m.order == b.order && m.radius == b.radius && m.center == b.center;
    });
    if (it != merged.end())
      it->amplitude += b.amplitude;
    else
      merged.push_back(b);
  }
  const double ell = std::min(q1.smoothness_, q2.smoothness_);
  const bool oracle = q1.oracle_ || q2.oracle_;
  return PotentialSpec(Family::SumOfBumps, std::move(merged), ell, oracle);
}

double PotentialSpec::support_radius() const {
  double r = 0.0;
  for (const auto& b : pieces_) r = std::max(r, b.center.norm() + b.radius);
  return r;
}

PotentialSpec PotentialSpec::with_smoothness(double ell) const {
  for (const auto& b : pieces_)
    if (ell > b.order - 1.0)
      throw InvalidArgument("claimed smoothness exceeds m - 1 for a piece of order " + std::to_string(b.order));
  PotentialSpec out = *this;
  out.smoothness_ = ell;
  return out;
}

bool PotentialSpec::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Bump& b) { return b.amplitude == 0.0; });
}

PotentialSpec PotentialSpec::rotated(const Mat3& r) const {
  PotentialSpec out = *this;
  for (auto& b : out.pieces_) b.center = r * b.center;
  return out;
}

PotentialSpec PotentialSpec::scaled(double factor) const {
  PotentialSpec out = *this;
  for (auto& b : out.pieces_) b.amplitude *= factor;
  return out;
}

void require_admissible(const PotentialSpec& spec, std::string_view where) {
  if (!spec.admissible())
    throw AdmissibilityError(std::string(where) +
                             ": potential is oracle-only or has smoothness l <= 2 (l = " +
                             format_double(spec.smoothness()) + ")");
}

// ----------------------------------------------------------------- grids

Vec3 GridGeometry::point(std::size_t idx) const {
  const std::size_t nn = static_cast<std::size_t>(n);
  const int i = static_cast<int>(idx % nn);
  const int j = static_cast<int>((idx / nn) % nn);
  const int k = static_cast<int>(idx / (nn * nn));
  return point(i, j, k);
}

PotentialGrid::PotentialGrid(GridGeometry g, Eigen::VectorXd values, std::string spec_hash)
    : geometry_(g), values_(std::move(values)), spec_hash_(std::move(spec_hash)) {
  if (g.n < 8) throw ResolutionTooLow("grid needs at least 8 points per axis, got " + std::to_string(g.n));
  if (!(g.a > 0.0)) throw InvalidArgument("grid half-width must be positive");
  if (static_cast<std::size_t>(values_.size()) != g.size())
    throw InvalidArgument("grid value count does not match n^3");
}

void PotentialGrid::write_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out.write("BSL1", 4);
  const std::uint64_t n = static_cast<std::uint64_t>(geometry_.n);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&geometry_.a), sizeof(double));
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw InvalidArgument("short write to '" + path + "'");
}

PotentialGrid PotentialGrid::read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "BSL1", 4) != 0) throw InvalidArgument("'" + path + "' is not a BSL1 grid");
  std::uint64_t n = 0;
  double a = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&a), sizeof a);
  if (!in || n > 4096) throw InvalidArgument("corrupt BSL1 header in '" + path + "'");
  GridGeometry g{static_cast<int>(n), a};
  Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (!in) throw InvalidArgument("truncated BSL1 payload in '" + path + "'");
  return PotentialGrid(g, std::move(v), "");
}

double eval_potential(const PotentialSpec& spec, const Vec3& x) {
  double v = 0.0;
  for (const auto& b : spec.pieces()) v += b.value(x);
  return v;
}

PotentialGrid sample_grid(const PotentialSpec& spec, int n, double a) {
  if (n < 8) throw ResolutionTooLow("grid needs at least 8 points per axis, got " + std::to_string(n));
  if (a < spec.support_radius() * (1.0 - 1e-12))
    throw InvalidArgument("grid half-width is smaller than the support radius");
  GridGeometry g{n, a};
  const double h = g.h();
  const double half_diag = 0.5 * std::sqrt(3.0) * h;
  constexpr int kSub = 8;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 x = g.point(i, j, k);
        double sum = 0.0;
        for (const auto& b : spec.pieces()) {
          const double rho = (x - b.center).norm();
          if (b.order == 0 && std::abs(rho - b.radius) < half_diag) {
            double acc = 0.0;
            for (int c = 0; c < kSub; ++c)
              for (int bb = 0; bb < kSub; ++bb)
                for (int aa = 0; aa < kSub; ++aa) {
                  const Vec3 y = x + h * Vec3((aa + 0.5) / kSub - 0.5, (bb + 0.5) / kSub - 0.5,
                                              (c + 0.5) / kSub - 0.5);
                  acc += b.value(y);
                }
            sum += acc / (kSub * kSub * kSub);
          } else {
            sum += b.profile(rho);
          }
        }
        v[static_cast<Eigen::Index>(g.index(i, j, k))] = sum;
      }
  return PotentialGrid(g, std::move(v), spec_hash(spec));
}

// ----------------------------------------------------------- transforms

namespace {

Complex sinc(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// 4π ∫_0^R r² f(r) sin(zr)/(zr) dr with z² = w·w.
Complex radial_fourier(const Bump& b, Complex z2, const quad::Options& opt) {
  const Complex z = std::sqrt(z2);
  const double zabs = std::abs(z);
  double panel = b.radius / 4.0;
  if (zabs * b.radius > kPi) panel = std::min(panel, kPi / zabs);
  const auto breaks = quad::make_breaks(0.0, b.radius, {}, panel);
  auto f = [&](double r) -> Complex { return r * r * b.profile(r) * sinc(z * r); };
  return 4.0 * kPi * quad::integrate(f, breaks, opt).value;
}

}  // namespace

Complex fourier_at(const PotentialSpec& spec, const CVec3& w, const quad::Options& opt) {
  const double growth = w.imag().norm() * spec.support_radius();
  if (growth > 40.0)
    throw RangeError("complex frequency growth |Im w|·a = " + format_double(growth) + " exceeds 40");
  const Complex z2 = bilinear_square(w);
  Complex total = 0.0;
  for (const auto& b : spec.pieces()) {
    if (b.amplitude == 0.0) continue;
    const Complex phase = std::exp(kI * Complex(w.transpose() * b.center.cast<Complex>()));
    total += phase * radial_fourier(b, z2, opt);
  }
  return total;
}

Complex fourier_complex(const PotentialSpec& spec, const Vec3& beta, const ComplexFrequency& freq,
                        const Vec3& shift, const quad::Options& opt) {
  const CVec3 w = freq.two_k() * beta.cast<Complex>() - shift.cast<Complex>();
  return fourier_at(spec, w, opt);
}

double radon_transform(const PotentialSpec& spec, const Vec3& beta, double lambda, const quad::Options& opt) {
  double total = 0.0;
  for (const auto& b : spec.pieces()) {
    if (b.amplitude == 0.0) continue;
    const double d = lambda - beta.dot(b.center);
    if (std::abs(d) >= b.radius) continue;
    const double rho_max = std::sqrt(b.radius * b.radius - d * d);
    // Polar coordinates in the plane about the foot of the piece centre; the
    // piece is radial, so the angular integral is 2π.
    auto f = [&](double rho) { return rho * b.profile(std::sqrt(d * d + rho * rho)); };
    total += 2.0 * kPi * quad::integrate(f, 0.0, rho_max, opt).value;
  }
  return total;
}

double radon_transform_closed_form(const PotentialSpec& spec, const Vec3& beta, double lambda) {
  double total = 0.0;
  for (const auto& b : spec.pieces()) {
    const double d = lambda - beta.dot(b.center);
    if (std::abs(d) >= b.radius) continue;
    const double u = 1.0 - d * d / (b.radius * b.radius);
    double v = u;
    for (int i = 0; i < b.order; ++i) v *= u;
    total += kPi * b.amplitude * b.radius * b.radius * v / (b.order + 1);
  }
  return total;
}

std::vector<double> radon_breakpoints(const PotentialSpec& spec, const Vec3& beta) {
  std::vector<double> pts;
  for (const auto& b : spec.pieces()) {
    const double c = beta.dot(b.center);
    pts.push_back(c - b.radius);
    pts.push_back(c + b.radius);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

Complex fourier_via_radon(const PotentialSpec& spec, const Vec3& beta, double kappa, double eta,
                          const quad::Options& opt) {
  const double a = spec.support_radius();
  if (std::abs(eta) * a > 40.0)
    throw RangeError("complex frequency growth |eta|·a = " + format_double(std::abs(eta) * a) + " exceeds 40");
  const auto kinks = radon_breakpoints(spec, beta);
  double panel = a / 4.0;
  if (kappa != 0.0) panel = std::min(panel, kPi / std::abs(kappa));
  if (eta != 0.0) panel = std::min(panel, 2.0 / std::abs(eta));
  const auto breaks = quad::make_breaks(-a, a, kinks, panel);
  const Complex zc(-eta, kappa);  // e^{iκλ − ηλ} = e^{(−η + iκ)λ}
  auto f = [&](double lambda) -> Complex {
    return std::exp(zc * lambda) * radon_transform(spec, beta, lambda, opt);
  };
  return quad::integrate(f, breaks, opt).value;
}

double total_mass(const PotentialSpec& spec, const quad::Options& opt) {
  double m = 0.0;
  for (const auto& b : spec.pieces()) {
    auto f = [&](double r) { return r * r * b.profile(r); };
    m += 4.0 * kPi * quad::integrate(f, 0.0, b.radius, opt).value;
  }
  return m;
}

// ---------------------------------------------------------------- text I/O

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string vec_text(const Vec3& v) {
  return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

const char* family_name(Family f) {
  switch (f) {
    case Family::PolyBump: return "poly_bump";
    case Family::SumOfBumps: return "sum_of_bumps";
    case Family::SquareWell: return "square_well";
  }
  return "?";
}

}  // namespace

std::string to_text(const PotentialSpec& spec, std::string_view name) {
  std::ostringstream os;
  if (!name.empty()) os << "[" << name << "]\n";
  os << "family = " << family_name(spec.family()) << "\n";
  const auto p = spec.pieces();
  if (spec.family() == Family::PolyBump) {
    os << "m = " << p[0].order << "\n"
       << "c = " << format_double(p[0].amplitude) << "\n"
       << "a = " << format_double(p[0].radius) << "\n"
       << "center = " << vec_text(p[0].center) << "\n";
  } else if (spec.family() == Family::SquareWell) {
    os << "depth = " << format_double(-p[0].amplitude) << "\n"
       << "radius = " << format_double(p[0].radius) << "\n"
       << "center = " << vec_text(p[0].center) << "\n";
  }
  os << "ell = " << format_double(spec.smoothness()) << "\n";
  if (spec.oracle_only()) os << "oracle = 1\n";
  if (spec.family() == Family::SumOfBumps) {
    const std::string sec = name.empty() ? "bump" : std::string(name) + ".bump";
    for (const auto& b : p)
      os << "[" << sec << "]\n"
         << "m = " << b.order << "\n"
         << "c = " << format_double(b.amplitude) << "\n"
         << "a = " << format_double(b.radius) << "\n"
         << "center = " << vec_text(b.center) << "\n";
  }
  return os.str();
}

PotentialSpec parse_spec(const kv::Document& doc, std::string_view name) {
  const kv::Section* main = doc.first(name);
  if (!main) throw ParseError("missing section [" + std::string(name) + "]", 1, 1);
  const kv::Entry* fam = main->find("family");
  if (!fam) throw ParseError("missing key 'family'", main->line(), 1);
  PotentialSpec spec = PotentialSpec::zero();
  if (fam->value == "poly_bump") {
    spec = PotentialSpec::poly_bump(main->get_int("m", 4), main->get_double("c", 1.0), main->get_double("a", 1.0),
                                    main->get_vec3("center", Vec3::Zero()));
  } else if (fam->value == "square_well") {
    spec = PotentialSpec::square_well(main->get_double("depth"), main->get_double("radius"),
                                      main->get_vec3("center", Vec3::Zero()));
  } else if (fam->value == "sum_of_bumps") {
    const std::string sec = name.empty() ? "bump" : std::string(name) + ".bump";
    std::vector<Bump> bumps;
    for (const auto* s : doc.all(sec)) {
      Bump b;
      b.order = s->get_int("m", 4);
      b.amplitude = s->get_double("c", 1.0);
      b.radius = s->get_double("a", 1.0);
      b.center = s->get_vec3("center", Vec3::Zero());
      if (b.order < 0 || !(b.radius > 0.0)) throw ParseError("invalid bump parameters", s->line(), 1);
      bumps.push_back(b);
    }
    if (bumps.empty()) throw ParseError("sum_of_bumps without any [" + sec + "] section", main->line(), 1);
    spec = PotentialSpec::sum_of_bumps(std::move(bumps));
  } else {
    throw ParseError("unknown family '" + fam->value + "'", fam->line, fam->value_column);
  }
  if (const kv::Entry* ell = main->find("ell"); ell && spec.family() != Family::SquareWell) {
    try {
      spec = spec.with_smoothness(main->get_double("ell"));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), ell->line, ell->value_column);
    }
  }
  return spec;
}

PotentialSpec load_spec(const std::string& path) { return parse_spec(kv::Document::load(path)); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spec_hash(const PotentialSpec& spec) { return fnv1a_hex(to_text(spec)); }

}  // namespace bsl
