#include "deltaspec/model.hpp"

#include <string>

#include "deltaspec/errors.hpp"

namespace deltaspec {

namespace {

constexpr double kCoincidenceTolerance = 1e-12;
constexpr double kSincSeriesCutoff = 1e-4;

}  // namespace

PointConfig::PointConfig(std::vector<double> alpha, std::vector<Vec3> points)
    : alpha_(std::move(alpha)), points_(std::move(points)) {
  if (alpha_.empty()) throw ConfigError("/alpha", "at least one interaction center is required");
  if (alpha_.size() != points_.size())
    throw ConfigError("/points", "length mismatch: " + std::to_string(alpha_.size()) +
                                     " strengths but " + std::to_string(points_.size()) +
                                     " points");
  for (std::size_t j = 0; j < alpha_.size(); ++j)
    if (!std::isfinite(alpha_[j]))
      throw ConfigError("/alpha/" + std::to_string(j), "strength must be a finite number");
  double scale = 0.0;
  for (std::size_t j = 0; j < points_.size(); ++j) {
    for (std::size_t c = 0; c < 3; ++c)
      if (!std::isfinite(points_[j][c]))
        throw ConfigError("/points/" + std::to_string(j) + "/" + std::to_string(c),
                          "coordinate must be a finite number");
    scale = std::max(scale, norm(points_[j]));
  }

  const std::size_t n = points_.size();
  distances_ = RealMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const double d = deltaspec::distance(points_[j], points_[k]);
      if (d <= kCoincidenceTolerance * scale)
        throw ConfigError("/points/" + std::to_string(k),
                          "points " + std::to_string(j) + " and " + std::to_string(k) +
                              " coincide");
      distances_(j, k) = distances_(k, j) = d;
      d_min_ = d_min_ ? std::min(*d_min_, d) : d;
    }
}

double PointConfig::max_abs_alpha() const noexcept {
  double m = 0.0;
  for (double a : alpha_) m = std::max(m, std::abs(a));
  return m;
}

double sinc(double x) {
  if (std::abs(x) < kSincSeriesCutoff) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

complex green_kernel(complex z, const Vec3& x, const Vec3& y) {
  const double r = deltaspec::distance(x, y);
  if (r == 0.0) throw SingularityError("green kernel evaluated at its source point");
  return std::exp(complex(0.0, 1.0) * z * r) / (kFourPi * r);
}

GammaMatrix assemble_gamma(const PointConfig& cfg, complex z) {
  const std::size_t n = cfg.size();
  const complex iz = complex(0.0, 1.0) * z;
  ComplexMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(j, j) = cfg.alpha(j) - iz / kFourPi;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double d = cfg.distance(j, k);
      g(j, k) = g(k, j) = -std::exp(iz * d) / (kFourPi * d);
    }
  }
  return {z, std::move(g)};
}

ComplexMatrix gamma_derivative(const PointConfig& cfg, complex z) {
  const std::size_t n = cfg.size();
  const complex i(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(j, j) = -i / kFourPi;
    for (std::size_t k = j + 1; k < n; ++k)
      g(j, k) = g(k, j) = -i * std::exp(i * z * cfg.distance(j, k)) / kFourPi;
  }
  return g;
}

RealSplit real_split(const PointConfig& cfg, double z) {
  if (!(z > 0.0)) throw DomainError("real_split requires z > 0");
  const std::size_t n = cfg.size();
  RealSplit s{RealMatrix(n, n), RealMatrix(n, n), z};
  for (std::size_t j = 0; j < n; ++j) {
    s.a(j, j) = cfg.alpha(j);
    s.b(j, j) = z / kFourPi;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double d = cfg.distance(j, k);
      s.a(j, k) = s.a(k, j) = -std::cos(z * d) / (kFourPi * d);
      s.b(j, k) = s.b(k, j) = std::sin(z * d) / (kFourPi * d);
    }
  }
  return s;
}

RealMatrix sinc_gram(const PointConfig& cfg, double z) {
  if (!(z > 0.0)) throw DomainError("sinc_gram requires z > 0");
  const std::size_t n = cfg.size();
  RealMatrix s(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    s(j, j) = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) s(j, k) = s(k, j) = sinc(z * cfg.distance(j, k));
  }
  return s;
}

RealMatrix gamma_imaginary_axis(const PointConfig& cfg, double lambda) {
  const std::size_t n = cfg.size();
  RealMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(j, j) = cfg.alpha(j) + lambda / kFourPi;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double d = cfg.distance(j, k);
      g(j, k) = g(k, j) = -std::exp(-lambda * d) / (kFourPi * d);
    }
  }
  return g;
}

PointConfig rescaled(const PointConfig& cfg, double s) {
  if (!(s > 0.0)) throw DomainError("scale factor must be positive");
  std::vector<double> alpha(cfg.alpha());
  std::vector<Vec3> points(cfg.points());
  for (auto& a : alpha) a /= s;
  for (auto& p : points)
    for (auto& c : p) c *= s;
  return PointConfig(std::move(alpha), std::move(points));
}

}  // namespace deltaspec
