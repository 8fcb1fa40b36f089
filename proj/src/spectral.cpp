#include "deltaspec/spectral.hpp"

#include <limits>

#include "deltaspec/errors.hpp"
#include "deltaspec/linalg.hpp"

namespace deltaspec {

namespace {

constexpr int kMaxBisections = 200;
constexpr int kMaxRadiusShrinks = 6;
constexpr int kMaxLaurentNodes = 1024;
constexpr double kLaurentStability = 1e-8;
// sigma_min(Gamma) / ||Gamma|| below this on the circle counts as singular.
constexpr double kCircleSingularity = 1e-7;
// Radius of the companion contour used to detect poles near the circle.
constexpr double kInnerRadiusRatio = 0.75;

// Sign convention: the largest-magnitude component is positive.
void normalize_sign(RealVector& v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax]) + 1e-12) imax = i;
  if (v[imax] < 0.0)
    for (auto& x : v) x = -x;
}

double ordered_eigenvalue(const PointConfig& cfg, double lambda, std::size_t k) {
  return linalg::sym_eigenvalues(gamma_imaginary_axis(cfg, lambda))[k];
}

// Zero crossing of the k-th ordered eigenvalue curve on (0, hi].
double bisect_crossing(const PointConfig& cfg, std::size_t k, double hi) {
  double lo = 0.0;
  if (ordered_eigenvalue(cfg, hi, k) <= 0.0)
    throw NumericalFailure("eigenvalue curve still non-positive at the bracket end");
  for (int it = 0; it < kMaxBisections; ++it) {
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi))
      return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (ordered_eigenvalue(cfg, mid, k) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  throw NumericalFailure("bisection for a negative eigenvalue did not converge");
}

struct ContourSums {
  ComplexMatrix a_minus2;
  ComplexMatrix a_minus1;
};

// Trapezoidal sums on |z| = radius; nodes are offset by half a step so they
// avoid the coordinate axes. Throws SingularMatrixError or PoleError when
// Gamma is singular at a node.
ContourSums contour_sums(const PointConfig& cfg, double radius, int nodes) {
  const std::size_t n = cfg.size();
  ContourSums s{ComplexMatrix(n, n), ComplexMatrix(n, n)};
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * kPi * (k + 0.5) / nodes;
    const complex z = std::polar(radius, theta);
    const auto gamma = assemble_gamma(cfg, z).entries;
    if (linalg::min_singular_value(gamma) <= kCircleSingularity * frobenius_norm(gamma))
      throw PoleError("Gamma is singular on the Laurent contour");
    const auto inv = linalg::inverse(gamma);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        s.a_minus1(i, j) += inv(i, j) * z;
        s.a_minus2(i, j) += inv(i, j) * z * z;
      }
  }
  for (auto& v : s.a_minus1.data()) v /= static_cast<double>(nodes);
  for (auto& v : s.a_minus2.data()) v /= static_cast<double>(nodes);
  return s;
}

struct ConvergedSums {
  ContourSums sums;
  int nodes = 0;
  double change = 0.0;
};

// Doubles the node count until successive sums agree to kLaurentStability.
ConvergedSums converged_sums(const PointConfig& cfg, double radius, int nodes) {
  ContourSums previous = contour_sums(cfg, radius, nodes);
  while (nodes < kMaxLaurentNodes) {
    nodes *= 2;
    ContourSums next = contour_sums(cfg, radius, nodes);
    const double change = std::max(max_abs_diff(next.a_minus2, previous.a_minus2),
                                   max_abs_diff(next.a_minus1, previous.a_minus1));
    if (change < kLaurentStability) return {std::move(next), nodes, change};
    previous = std::move(next);
  }
  throw NumericalFailure("Laurent quadrature did not stabilize within 1024 nodes");
}

}  // namespace

int SpectralReport::total_multiplicity() const {
  int m = 0;
  for (const auto& e : eigenvalues) m += e.multiplicity;
  return m;
}

double eigenvalue_search_bound(const PointConfig& cfg) {
  const double coupling =
      cfg.min_distance() ? (cfg.size() - 1.0) / (kFourPi * *cfg.min_distance()) : 0.0;
  return kFourPi * (cfg.max_abs_alpha() + coupling) + 1.0;
}

SpectralReport negative_eigenvalues(const PointConfig& cfg, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const RealMatrix g0 = gamma_imaginary_axis(cfg, 0.0);
  const RealVector mu0 = linalg::sym_eigenvalues(g0);
  const double zero_band = tol * frobenius_norm(g0);

  const double hi = eigenvalue_search_bound(cfg);
  std::vector<std::pair<double, std::size_t>> crossings;
  for (std::size_t k = 0; k < mu0.size() && mu0[k] < -zero_band; ++k)
    crossings.emplace_back(bisect_crossing(cfg, k, hi), k);
  std::sort(crossings.begin(), crossings.end());

  SpectralReport report;
  std::size_t i = 0;
  while (i < crossings.size()) {
    std::size_t j = i + 1;
    while (j < crossings.size() &&
           crossings[j].first - crossings[j - 1].first <= tol * (1.0 + crossings[j].first))
      ++j;
    double lambda = 0.0;
    for (std::size_t k = i; k < j; ++k) lambda += crossings[k].first;
    lambda /= static_cast<double>(j - i);

    // Kernel of Gamma(i lambda): the eigenvectors of the merged curves, which
    // are the ones closest to zero at the crossing.
    const RealMatrix g = gamma_imaginary_axis(cfg, lambda);
    const auto eig = linalg::sym_eigen(g);
    std::vector<std::size_t> order(eig.values.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(eig.values[a]) < std::abs(eig.values[b]);
    });

    BoundState state;
    state.lambda = lambda;
    state.energy = -lambda * lambda;
    state.multiplicity = static_cast<int>(j - i);
    for (int m = 0; m < state.multiplicity; ++m) {
      RealVector c = eig.vectors.column(order[m]);
      normalize_sign(c);
      state.residual = std::max(state.residual, vector_norm(g * c));
      state.coefficients.push_back(std::move(c));
    }
    report.eigenvalues.push_back(std::move(state));
    i = j;
  }
  // Larger lambda means lower energy.
  std::reverse(report.eigenvalues.begin(), report.eigenvalues.end());
  return report;
}

double eigenfunction_eval(const PointConfig& cfg, double lambda, std::span<const double> c,
                          const Vec3& x) {
  if (c.size() != cfg.size()) throw DomainError("coefficient vector has the wrong length");
  double u = 0.0;
  for (std::size_t j = 0; j < cfg.size(); ++j) {
    const double r = distance(x, cfg.point(j));
    if (r == 0.0) throw SingularityError("eigenfunction evaluated at an interaction center");
    u += c[j] * std::exp(-lambda * r) / (kFourPi * r);
  }
  return u;
}

std::string_view to_string(ZeroLabel label) {
  switch (label) {
    case ZeroLabel::Regular: return "Regular";
    case ZeroLabel::ZeroResonance: return "ZeroResonance";
    case ZeroLabel::ZeroEigenvalue: return "ZeroEigenvalue";
    case ZeroLabel::Mixed: return "Mixed";
  }
  return "Unknown";
}

ZeroClassification classify_zero(const PointConfig& cfg, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const std::size_t n = cfg.size();
  const auto kernel = linalg::null_space(gamma_imaginary_axis(cfg, 0.0), tol);
  const std::size_t dim = kernel.size();

  ZeroClassification out;
  out.kernel_dim = static_cast<int>(dim);
  if (dim > 0) {
    // w_i = <1, k_i> / sqrt(N); the projection w w^T has a single nonzero
    // eigenvalue |w|^2 with eigenvector along w, the rest spans {sum c = 0}.
    RealVector w(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (double c : kernel[i]) s += c;
      w[i] = s / std::sqrt(static_cast<double>(n));
    }
    RealMatrix projection(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) projection(a, b) = w[a] * w[b];
    const auto eig = linalg::sym_eigen(projection);

    for (std::size_t m = 0; m < dim; ++m) {
      RealVector c(n, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t r = 0; r < n; ++r) c[r] += eig.vectors(i, m) * kernel[i][r];
      normalize_sign(c);
      // eig.values[m] is |<1/sqrt(N), c>|^2 for this direction.
      if (eig.values[m] <= tol) {
        out.eigen_coefficients.push_back(std::move(c));
      } else {
        out.resonance_present = true;
        out.resonance_coefficients = std::move(c);
      }
    }
    out.eigenvalue_multiplicity = static_cast<int>(out.eigen_coefficients.size());
  }

  if (out.kernel_dim == 0)
    out.label = ZeroLabel::Regular;
  else if (out.eigenvalue_multiplicity == 0)
    out.label = ZeroLabel::ZeroResonance;
  else if (!out.resonance_present)
    out.label = ZeroLabel::ZeroEigenvalue;
  else
    out.label = ZeroLabel::Mixed;
  return out;
}

LaurentCoefficients laurent_at_zero(const PointConfig& cfg, double radius, int nodes) {
  if (!(radius > 0.0)) throw DomainError("contour radius must be positive");
  if (nodes < 4) throw DomainError("at least 4 quadrature nodes are required");

  for (int shrink = 0; shrink <= kMaxRadiusShrinks; ++shrink, radius *= 0.5) {
    try {
      auto outer = converged_sums(cfg, radius, nodes);
      // A pole lying exactly on the circle escapes the node test (the
      // symmetric trapezoid converges to a principal value), so require the
      // same coefficients on a smaller concentric circle.
      const auto inner = converged_sums(cfg, kInnerRadiusRatio * radius, nodes);
      const double drift = std::max(max_abs_diff(outer.sums.a_minus2, inner.sums.a_minus2),
                                    max_abs_diff(outer.sums.a_minus1, inner.sums.a_minus1));
      if (drift >= kLaurentStability) continue;
      return {std::move(outer.sums.a_minus2), std::move(outer.sums.a_minus1), radius,
              outer.nodes, outer.change, true};
    } catch (const PoleError&) {
    } catch (const SingularMatrixError&) {
    }
  }
  throw PoleError("Gamma is singular on every Laurent contour tried");
}

}  // namespace deltaspec
