#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace bsl {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error hierarchy. Every failure mode named in the contracts has its own type so
// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error { using Error::Error; };
class ResolutionTooLow : public Error { using Error::Error; };
class QuadratureNotConverged : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class AdmissibilityError : public Error { using Error::Error; };
class DegenerateFoci : public Error { using Error::Error; };
class SingularPoint : public Error { using Error::Error; };
class NearResonance : public Error { using Error::Error; };
class GridMismatch : public Error { using Error::Error; };
class InconsistentGrid : public Error { using Error::Error; };
class NoBracket : public Error { using Error::Error; };
class ZeroDifference : public Error { using Error::Error; };

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Complex frequency pair (κ, η). The wavenumber is k = (κ + iη)/2, so that the
/// Fourier variable probed by backscattering is 2k = κ + iη.
class ComplexFrequency {
 public:
  ComplexFrequency() = default;
  ComplexFrequency(double kappa, double eta) : kappa_(kappa), eta_(eta) {
    if (!(kappa >= 0.0) || !(eta >= 0.0))
      throw InvalidArgument("ComplexFrequency requires kappa >= 0 and eta >= 0");
  }
  /// Frequency pair for a physical wavenumber k > 0 (κ = 2k, η = 0).
  static ComplexFrequency from_wavenumber(double k) { return {2.0 * k, 0.0}; }

  double kappa() const { return kappa_; }
  double eta() const { return eta_; }
  double gamma() const { return kappa_ * kappa_ + eta_ * eta_; }
  Complex k() const { return {0.5 * kappa_, 0.5 * eta_}; }
  Complex two_k() const { return {kappa_, eta_}; }

  bool operator==(const ComplexFrequency&) const = default;

 private:
  double kappa_ = 0.0;
  double eta_ = 0.0;
};

/// Bilinear (non-Hermitian) square w·w of a complex 3-vector.
inline Complex bilinear_square(const CVec3& w) { return w.transpose() * w; }

}  // namespace bsl
