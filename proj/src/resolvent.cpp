#include "deltaspec/resolvent.hpp"

#include "deltaspec/errors.hpp"
#include "deltaspec/linalg.hpp"

namespace deltaspec {

namespace {

constexpr double kPoleThreshold = 1e-12;
constexpr std::array<Vec3, 6> kAxisDirections = {
    Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, -1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}};

// G_z^{y_j}(x) for every center.
ComplexVector center_kernels(const PointConfig& cfg, complex z, const Vec3& x) {
  ComplexVector g(cfg.size());
  for (std::size_t j = 0; j < cfg.size(); ++j) {
    if (distance(x, cfg.point(j)) == 0.0)
      throw SingularityError("evaluation point coincides with an interaction center");
    g[j] = green_kernel(z, x, cfg.point(j));
  }
  return g;
}

linalg::LUFactorization checked_gamma(const PointConfig& cfg, complex z) {
  const auto gamma = assemble_gamma(cfg, z).entries;
  if (linalg::min_singular_value(gamma) <= kPoleThreshold)
    throw PoleError("Gamma(z) is singular: z^2 is an eigenvalue or resonance");
  return linalg::lu_factor(gamma);
}

Vec3 along(const Vec3& origin, const Vec3& dir, double t) {
  return {origin[0] + t * dir[0], origin[1] + t * dir[1], origin[2] + t * dir[2]};
}

}  // namespace

double GaussianTestFunction::value(const Vec3& x) const {
  const double r = distance(x, center);
  return amplitude * std::exp(-r * r / (width * width));
}

double GaussianTestFunction::laplacian(const Vec3& x) const {
  const double r = distance(x, center);
  const double s2 = width * width;
  return value(x) * (4.0 * r * r / (s2 * s2) - 6.0 / s2);
}

complex free_kernel(complex z, const Vec3& x, const Vec3& xp) { return green_kernel(z, x, xp); }

complex resolvent_correction(const PointConfig& cfg, complex z, const Vec3& x, const Vec3& xp) {
  const auto lu = checked_gamma(cfg, z);
  const auto gx = center_kernels(cfg, z, x);
  const auto q = lu.solve(center_kernels(cfg, z, xp));
  complex s = 0.0;
  for (std::size_t j = 0; j < cfg.size(); ++j) s += gx[j] * q[j];
  return s;
}

complex resolvent_kernel(const PointConfig& cfg, complex z, const Vec3& x, const Vec3& xp) {
  if (z.imag() < 0.0) throw DomainError("resolvent kernel requires Im z >= 0");
  if (distance(x, xp) == 0.0) throw SingularityError("resolvent kernel is singular at x = x'");
  return free_kernel(z, x, xp) + resolvent_correction(cfg, z, x, xp);
}

double helmholtz_residual(const std::function<complex(const Vec3&)>& f, complex z,
                          const Vec3& x, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const complex center = f(x);
  complex lap = -6.0 * center;
  for (const auto& e : kAxisDirections) lap += f(along(x, e, h));
  lap /= h * h;
  return std::abs(-lap - z * z * center);
}

double helmholtz_residual(const PointConfig& cfg, complex z, const Vec3& x, const Vec3& xp,
                          double h) {
  double dist = distance(x, xp);
  for (const auto& y : cfg.points()) dist = std::min(dist, distance(x, y));
  if (!(dist > 10.0 * h))
    throw DomainError("evaluation point is within 10 h of a singularity");
  return helmholtz_residual([&](const Vec3& p) { return resolvent_kernel(cfg, z, p, xp); }, z, x, h);
}

DomainValue domain_function_eval(const PointConfig& cfg, complex z,
                                 const GaussianTestFunction& f, const Vec3& x) {
  if (!(z.imag() > 0.0)) throw DomainError("domain decomposition requires Im z > 0");
  const auto lu = checked_gamma(cfg, z);
  ComplexVector at_centers(cfg.size());
  for (std::size_t k = 0; k < cfg.size(); ++k) at_centers[k] = f.value(cfg.point(k));
  DomainValue out{f.value(x), lu.solve(at_centers)};
  const auto g = center_kernels(cfg, z, x);
  for (std::size_t j = 0; j < cfg.size(); ++j) out.value += out.charges[j] * g[j];
  return out;
}

double boundary_bracket(const std::function<complex(const Vec3&)>& u, const Vec3& center,
                        double alpha, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const double dr = 0.1 * r;
  complex sum = 0.0;
  for (const auto& e : kAxisDirections) {
    const complex outer = (r + dr) * u(along(center, e, r + dr));
    const complex inner = (r - dr) * u(along(center, e, r - dr));
    const complex derivative = (outer - inner) / (2.0 * dr);
    sum += derivative - kFourPi * alpha * r * u(along(center, e, r));
  }
  return std::abs(sum / static_cast<double>(kAxisDirections.size()));
}

double boundary_condition_residual(const PointConfig& cfg, complex z,
                                   const GaussianTestFunction& f, std::size_t j, double r) {
  if (j >= cfg.size()) throw DomainError("center index out of range");
  const double limit = cfg.min_distance() ? *cfg.min_distance() / 4.0 : f.width / 4.0;
  if (!(r < limit)) throw DomainError("radius too large for the boundary-condition check");
  return boundary_bracket([&](const Vec3& x) { return domain_function_eval(cfg, z, f, x).value; },
                          cfg.point(j), cfg.alpha(j), r);
}

}  // namespace deltaspec
