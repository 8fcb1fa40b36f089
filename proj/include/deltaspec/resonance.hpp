#pragma once

// Zeros of det Gamma in the complex z-plane, and the real-axis certificate.
//
// Zeros are counted with the argument principle applied to
// tr(Gamma^{-1} Gamma') = (log det Gamma)', which stays well scaled where
// det Gamma itself over- or underflows (large |Im z|).

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "deltaspec/errors.hpp"
#include "deltaspec/model.hpp"

namespace deltaspec {

/// Closed rectangle [re_min, re_max] x [im_min, im_max] in the z-plane.
struct Box {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  Box() = default;
  Box(double re_lo, double re_hi, double im_lo, double im_hi);

  double diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }
  complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(complex z, double slack = 0.0) const;
  Box expanded(double by) const { return {re_min - by, re_max + by, im_min - by, im_max + by}; }
};

/// tr(Gamma(z)^{-1} Gamma'(z)). Throws SingularMatrixError at zeros.
complex log_det_derivative(const PointConfig& cfg, complex z);

/// |det Gamma(z)| divided by the Hadamard bound prod_j ||row_j||, in [0, 1].
double normalized_det(const PointConfig& cfg, complex z);

/// Winding number of det Gamma around the box (zeros inside, with
/// multiplicity). The boundary must stay away from zeros (normalized |det| >
/// 1e-12 on samples); otherwise the box is grown by k * 1e-6 * diameter,
/// k = 1..5. Edges are integrated by adaptive 16-point Gauss-Legendre.
/// Throws NumericalFailure when no admissible boundary is found or the
/// integral is not within 0.25 of an integer.
int count_zeros_in_box(const PointConfig& cfg, const Box& box);

enum class RootKind {
  Resonance,       // Gamma(z) singular, z^2 not an eigenvalue
  EigenvaluePole,  // z = i lambda, lambda > 0: the eigenvalue -lambda^2
  Threshold,       // z = 0, owned by classify_zero
};

std::string_view to_string(RootKind kind);

struct Root {
  complex z;
  int multiplicity = 1;
  double abs_det = 0.0;
  double sigma_min = 0.0;
  RootKind kind = RootKind::Resonance;
};

struct ResonanceSet {
  std::vector<Root> roots;  // every zero found, sorted by (Re z, Im z)
  Box searched;             // the box actually integrated over (after jitter)
  int total_count = 0;      // winding count over `searched`

  /// Only the roots of kind Resonance.
  std::vector<Root> resonances() const;
};

/// Recursive quadrisection of the box guided by zero counts, with Newton
/// polishing z <- z - m / tr(Gamma^{-1} Gamma') inside boxes holding m zeros.
/// Every zero is returned and labelled; roots on the positive imaginary axis
/// (eigenvalues) and at z = 0 (threshold) are not resonances.
ResonanceSet find_resonances(const PointConfig& cfg, const Box& box, double tol = 1e-10);

/// z_star = 4 pi (max|alpha| + (N-1)/(4 pi d_min)) + margin. For real
/// z > z_star, sigma_min(Gamma(z)) >= z/(4 pi) - ||Lambda||_inf > 0 where
/// Lambda = Gamma(z) + i z / (4 pi).
double large_z_bound(const PointConfig& cfg, double margin = 1.0);

struct CertifyOptions {
  std::optional<double> grid_step;  // default 1e-2 * min(1, d_min)
  double margin = 1.0;
  std::optional<double> z_max;      // default z_star
  double threshold = 1e-10;         // required sigma_min on the grid
};

/// Evidence that Gamma(z) is non-singular for all real z > 0.
///
/// A positive verdict covers the grid points exactly and (z_star, inf) by
/// the analytic bound; between grid points it is evidence, not proof.
struct Certificate {
  RealVector z_grid;
  RealVector sigma_min;
  std::vector<bool> cholesky_ok;
  double z_star = 0.0;
  double grid_step = 0.0;
  double threshold = 0.0;
  double bound_at_z_star = 0.0;  // z_star/(4 pi) - ||Lambda||_inf
  bool covers_z_star = false;
  bool verdict = false;
};

Certificate certify_real_axis(const PointConfig& cfg, const CertifyOptions& options = {});

/// sum_j v_j exp(i y_j . p) for a unit vector p (|p| = 1 within 1e-12).
complex exp_sum_on_sphere(std::span<const Vec3> points, std::span<const double> v,
                          const Vec3& p);

inline constexpr std::uint64_t kDirectionSeed = 0x5eed'd1ec'7104'0001ULL;

/// A unit vector a for which the projections a . y_j are pairwise distinct,
/// separated by at least 1e-8 * d_min. Coordinate axes are tried first, then
/// seeded uniform directions. Throws DomainError for repeated points and
/// NumericalFailure after 10^4 rejections.
template <std::size_t D>
std::array<double, D> distinct_direction(std::span<const std::array<double, D>> points,
                                         std::uint64_t seed = kDirectionSeed) {
  constexpr int kMaxRejections = 10'000;
  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < points.size(); ++j)
    for (std::size_t k = j + 1; k < points.size(); ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < D; ++c) s += (points[j][c] - points[k][c]) * (points[j][c] - points[k][c]);
      d_min = std::min(d_min, std::sqrt(s));
    }
  if (d_min == 0.0) throw DomainError("points must be pairwise distinct");
  const double separation = std::isfinite(d_min) ? 1e-8 * d_min : 0.0;

  auto accepts = [&](const std::array<double, D>& a) {
    std::vector<double> proj(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < D; ++c) s += a[c] * points[j][c];
      proj[j] = s;
    }
    std::sort(proj.begin(), proj.end());
    for (std::size_t j = 1; j < proj.size(); ++j)
      if (proj[j] - proj[j - 1] < separation || proj[j] == proj[j - 1]) return false;
    return true;
  };

  for (std::size_t axis = 0; axis < D; ++axis) {
    std::array<double, D> a{};
    a[axis] = 1.0;
    if (accepts(a)) return a;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::array<double, D> a{};
    double s = 0.0;
    for (auto& c : a) {
      c = gauss(rng);
      s += c * c;
    }
    if (s == 0.0) continue;
    for (auto& c : a) c /= std::sqrt(s);
    if (accepts(a)) return a;
  }
  throw NumericalFailure("no direction separates the projections; points nearly coincide");
}

}  // namespace deltaspec
