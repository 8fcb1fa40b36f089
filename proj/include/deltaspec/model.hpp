#pragma once

// Point-interaction configuration and the closed-form kernels built from it.
//
// Units: hbar = 2m = 1, so the Hamiltonian is -Delta_{alpha,Y} and a spectral
// parameter z corresponds to the energy z^2. The characteristic matrix is
//
//   Gamma(z)_jj = alpha_j - i z / (4 pi)
//   Gamma(z)_jk = -exp(i z |y_j - y_k|) / (4 pi |y_j - y_k|)   (j != k)
//
// which is entire in z and complex symmetric (not Hermitian).

#include <numbers>
#include <optional>
#include <vector>

#include "deltaspec/matrix.hpp"

namespace deltaspec {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Strengths alpha (inverse scattering lengths) and distinct centers Y.
///
/// Construction validates the input and throws ConfigError with a JSON
/// pointer to the offending field. Points closer than 1e-12 * max_j |y_j| are
/// rejected as coincident rather than merged.
class PointConfig {
 public:
  PointConfig(std::vector<double> alpha, std::vector<Vec3> points);

  std::size_t size() const noexcept { return alpha_.size(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  const std::vector<Vec3>& points() const noexcept { return points_; }

  double alpha(std::size_t j) const { return alpha_[j]; }
  const Vec3& point(std::size_t j) const { return points_[j]; }

  /// |y_j - y_k|, cached at construction.
  double distance(std::size_t j, std::size_t k) const { return distances_(j, k); }

  /// Minimum pairwise distance; empty for N = 1.
  std::optional<double> min_distance() const noexcept { return d_min_; }

  double max_abs_alpha() const noexcept;

 private:
  std::vector<double> alpha_;
  std::vector<Vec3> points_;
  RealMatrix distances_;
  std::optional<double> d_min_;
};

struct GammaMatrix {
  complex z;
  ComplexMatrix entries;
};

// Gamma(z) = A - iB for real z > 0, with A, B real symmetric.
struct RealSplit {
  RealMatrix a;
  RealMatrix b;
  double z = 0.0;
};

/// sin(x)/x with sinc(0) = 1; uses 1 - x^2/6 + x^4/120 below |x| = 1e-4.
double sinc(double x);

/// Outgoing Helmholtz Green function exp(i z |x-y|) / (4 pi |x-y|).
/// Throws SingularityError when x == y.
complex green_kernel(complex z, const Vec3& x, const Vec3& y);

GammaMatrix assemble_gamma(const PointConfig& cfg, complex z);

/// Entrywise d/dz of Gamma: -i/(4 pi) on the diagonal,
/// -i exp(i z d_jk)/(4 pi) off it.
ComplexMatrix gamma_derivative(const PointConfig& cfg, complex z);

/// Throws DomainError unless z > 0.
RealSplit real_split(const PointConfig& cfg, double z);

/// S_jk = sinc(z d_jk); the imaginary part of Gamma on the real axis is
/// -(z / 4 pi) S. Throws DomainError unless z > 0.
RealMatrix sinc_gram(const PointConfig& cfg, double z);

/// Gamma(i lambda), real symmetric for real lambda:
/// alpha_j + lambda/(4 pi) on the diagonal, -exp(-lambda d)/(4 pi d) off it.
RealMatrix gamma_imaginary_axis(const PointConfig& cfg, double lambda);

/// (alpha / s, s Y): the configuration for which
/// Gamma_{alpha,Y}(s z) = s Gamma_{alpha/s, sY}(z).
PointConfig rescaled(const PointConfig& cfg, double s);

}  // namespace deltaspec
