#include "deltaspec/resonance.hpp"


#include "deltaspec/linalg.hpp"

namespace deltaspec {

namespace {

constexpr double kBoundaryDetFloor = 1e-12;
constexpr double kJitterFraction = 1e-6;
constexpr int kJitterRetries = 5;
constexpr int kMaxPanelDepth = 12;
constexpr double kEdgeTolerance = 1e-4;
constexpr double kIntegerBand = 0.25;
constexpr double kStabilityBand = 1e-3;
constexpr int kMaxNewtonSteps = 50;
constexpr double kMultipleRootDiameter = 1e-7;
constexpr double kMinDiameter = 1e-12;
constexpr double kLabelTolerance = 1e-7;
constexpr std::array<double, 6> kSplitFractions = {0.5, 0.5137, 0.4759, 0.5353, 0.4533, 0.5571};

// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};

  GaussLegendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
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
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre16& gauss_legendre() {
  static const GaussLegendre16 rule;
  return rule;
}

struct Inadmissible {};

struct LogDerivative {
  complex value;
  double normalized_det;
};

LogDerivative evaluate(const PointConfig& cfg, complex z) {
  const auto gamma = assemble_gamma(cfg, z).entries;
  const auto dgamma = gamma_derivative(cfg, z);
  const auto lu = linalg::lu_factor(gamma);
  const std::size_t n = cfg.size();

  double hadamard = 1.0;
  for (std::size_t i = 0; i < n; ++i) hadamard *= vector_norm(gamma.row(i));
  const double ndet = hadamard > 0.0 ? std::abs(lu.determinant()) / hadamard : 0.0;

  complex trace = 0.0;
  for (std::size_t j = 0; j < n; ++j) trace += lu.solve(dgamma.column(j))[j];
  return {trace, ndet};
}

// Contour integral of tr(Gamma^{-1} Gamma') along straight segments.
class ContourIntegrator {
 public:
  explicit ContourIntegrator(const PointConfig& cfg) : cfg_(cfg) {}

  complex segment(complex a, complex b) {
    const complex whole = panel(a, b);
    return adapt(a, b, whole, kEdgeTolerance, 0);
  }

  double error_estimate() const { return error_; }

 private:
  complex integrand(complex z) {
    LogDerivative d;
    try {
      d = evaluate(cfg_, z);
    } catch (const SingularMatrixError&) {
      throw Inadmissible{};
    }
    if (!(d.normalized_det > kBoundaryDetFloor) || !std::isfinite(d.value.real()) ||
        !std::isfinite(d.value.imag()))
      throw Inadmissible{};
    return d.value;
  }

  complex panel(complex a, complex b) {
    const auto& gl = gauss_legendre();
    const complex mid = 0.5 * (a + b);
    const complex half = 0.5 * (b - a);
    complex s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * integrand(mid + gl.nodes[i] * half);
    return s * half;
  }

  complex adapt(complex a, complex b, complex whole, double tol, int depth) {
    const complex m = 0.5 * (a + b);
    const complex left = panel(a, m);
    const complex right = panel(m, b);
    const double err = std::abs(left + right - whole);
    if (err <= tol) {
      error_ += err;
      return left + right;
    }
    if (depth >= kMaxPanelDepth) throw Inadmissible{};
    return adapt(a, m, left, 0.5 * tol, depth + 1) + adapt(m, b, right, 0.5 * tol, depth + 1);
  }

  const PointConfig& cfg_;
  double error_ = 0.0;
};

// Winding count for one fixed boundary, or nullopt when the boundary is not
// admissible (zero on or too close to it, or a non-integer result).
std::optional<int> try_count(const PointConfig& cfg, const Box& box) {
  ContourIntegrator integrator(cfg);
  const complex c00(box.re_min, box.im_min);
  const complex c10(box.re_max, box.im_min);
  const complex c11(box.re_max, box.im_max);
  const complex c01(box.re_min, box.im_max);
  complex total = 0.0;
  try {
    total += integrator.segment(c00, c10);
    total += integrator.segment(c10, c11);
    total += integrator.segment(c11, c01);
    total += integrator.segment(c01, c00);
  } catch (const Inadmissible&) {
    return std::nullopt;
  }
  const complex winding = total / complex(0.0, 2.0 * kPi);
  const double nearest = std::round(winding.real());
  if (std::abs(winding.real() - nearest) > kIntegerBand || std::abs(winding.imag()) > kIntegerBand)
    return std::nullopt;
  if (integrator.error_estimate() / (2.0 * kPi) > kStabilityBand) return std::nullopt;
  return static_cast<int>(nearest);
}

std::pair<Box, int> count_with_jitter(const PointConfig& cfg, const Box& box) {
  const double step = kJitterFraction * box.diameter();
  for (int k = 0; k <= kJitterRetries; ++k) {
    const Box candidate = k == 0 ? box : box.expanded(k * step);
    if (auto count = try_count(cfg, candidate)) return {candidate, *count};
  }
  throw NumericalFailure("no admissible boundary for the zero count after jitter retries");
}

RootKind classify_root(complex z) {
  if (std::abs(z) <= kLabelTolerance) return RootKind::Threshold;
  if (z.imag() > 0.0 && std::abs(z.real()) <= kLabelTolerance * std::max(1.0, std::abs(z)))
    return RootKind::EigenvaluePole;
  return RootKind::Resonance;
}

class RootFinder {
 public:
  RootFinder(const PointConfig& cfg, double tol) : cfg_(cfg), tol_(tol) {}

  void refine(const Box& box, int count) {
    if (count <= 0) return;
    const double scale = 1.0 + std::abs(box.center());
    const double diam = box.diameter();
    const bool newton_allowed = count == 1 || diam < kMultipleRootDiameter * scale;
    if (newton_allowed) {
      if (auto z = newton(box, count)) {
        record(*z, count);
        return;
      }
    }
    if (diam < kMinDiameter * scale) {
      record(box.center(), count);
      return;
    }
    for (double f : kSplitFractions) {
      const double xm = box.re_min + f * (box.re_max - box.re_min);
      const double ym = box.im_min + f * (box.im_max - box.im_min);
      const std::array<Box, 4> children = {Box(box.re_min, xm, box.im_min, ym),
                                           Box(xm, box.re_max, box.im_min, ym),
                                           Box(box.re_min, xm, ym, box.im_max),
                                           Box(xm, box.re_max, ym, box.im_max)};
      std::array<int, 4> counts{};
      bool ok = true;
      int sum = 0;
      for (std::size_t c = 0; c < 4 && ok; ++c) {
        const auto n = try_count(cfg_, children[c]);
        ok = n.has_value() && *n >= 0;
        if (ok) {
          counts[c] = *n;
          sum += *n;
        }
      }
      if (!ok || sum != count) continue;
      for (std::size_t c = 0; c < 4; ++c) refine(children[c], counts[c]);
      return;
    }
    throw NumericalFailure("could not subdivide a box with admissible internal edges");
  }

  std::vector<Root> take() { return std::move(roots_); }

 private:
  std::optional<complex> newton(const Box& box, int multiplicity) {
    complex z = box.center();
    const Box fence = box.expanded(box.diameter());
    for (int step = 0; step < kMaxNewtonSteps; ++step) {
      complex dz;
      try {
        dz = static_cast<double>(multiplicity) / evaluate(cfg_, z).value;
      } catch (const SingularMatrixError&) {
        dz = 0.0;  // landed exactly on the zero
      }
      if (!std::isfinite(dz.real()) || !std::isfinite(dz.imag())) return std::nullopt;
      z -= dz;
      if (!fence.contains(z)) return std::nullopt;
      if (std::abs(dz) < tol_ * std::max(1.0, std::abs(z))) {
        const double slack = 1e-12 * (1.0 + std::abs(z));
        if (box.contains(z, slack)) return z;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  void record(complex z, int multiplicity) {
    const auto gamma = assemble_gamma(cfg_, z).entries;
    Root r;
    r.z = z;
    r.multiplicity = multiplicity;
    r.abs_det = std::abs(linalg::lu_factor(gamma).determinant());
    r.sigma_min = linalg::min_singular_value(gamma);
    r.kind = classify_root(z);
    roots_.push_back(r);
  }

  const PointConfig& cfg_;
  double tol_;
  std::vector<Root> roots_;
};

}  // namespace

Box::Box(double re_lo, double re_hi, double im_lo, double im_hi)
    : re_min(re_lo), re_max(re_hi), im_min(im_lo), im_max(im_hi) {
  if (!(re_min < re_max) || !(im_min < im_max))
    throw DomainError("box must satisfy re_min < re_max and im_min < im_max");
}

bool Box::contains(complex z, double slack) const {
  return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
         z.imag() <= im_max + slack;
}

complex log_det_derivative(const PointConfig& cfg, complex z) { return evaluate(cfg, z).value; }

double normalized_det(const PointConfig& cfg, complex z) {
  const auto gamma = assemble_gamma(cfg, z).entries;
  double hadamard = 1.0;
  for (std::size_t i = 0; i < gamma.rows(); ++i) hadamard *= vector_norm(gamma.row(i));
  return hadamard > 0.0 ? std::abs(linalg::lu_factor(gamma).determinant()) / hadamard : 0.0;
}

int count_zeros_in_box(const PointConfig& cfg, const Box& box) {
  return count_with_jitter(cfg, box).second;
}

std::string_view to_string(RootKind kind) {
  switch (kind) {
    case RootKind::Resonance: return "resonance";
    case RootKind::EigenvaluePole: return "eigenvalue";
    case RootKind::Threshold: return "threshold";
  }
  return "unknown";
}

std::vector<Root> ResonanceSet::resonances() const {
  std::vector<Root> out;
  for (const auto& r : roots)
    if (r.kind == RootKind::Resonance) out.push_back(r);
  return out;
}

ResonanceSet find_resonances(const PointConfig& cfg, const Box& box, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  auto [searched, total] = count_with_jitter(cfg, box);
  RootFinder finder(cfg, tol);
  finder.refine(searched, total);
  ResonanceSet set{finder.take(), searched, total};
  std::sort(set.roots.begin(), set.roots.end(), [](const Root& a, const Root& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return set;
}

double large_z_bound(const PointConfig& cfg, double margin) {
  const double coupling =
      cfg.min_distance() ? (cfg.size() - 1.0) / (kFourPi * *cfg.min_distance()) : 0.0;
  return kFourPi * (cfg.max_abs_alpha() + coupling) + margin;
}

Certificate certify_real_axis(const PointConfig& cfg, const CertifyOptions& options) {
  if (!(options.margin > 0.0)) throw DomainError("margin must be positive");
  const double d_min = cfg.min_distance().value_or(1.0);
  const double step = options.grid_step.value_or(1e-2 * std::min(1.0, d_min));
  if (!(step > 0.0)) throw DomainError("grid step must be positive");

  Certificate cert;
  cert.z_star = large_z_bound(cfg, options.margin);
  cert.grid_step = step;
  cert.threshold = options.threshold;
  const double coupling =
      cfg.min_distance() ? (cfg.size() - 1.0) / (kFourPi * *cfg.min_distance()) : 0.0;
  cert.bound_at_z_star = cert.z_star / kFourPi - (cfg.max_abs_alpha() + coupling);

  const double z_end = options.z_max.value_or(cert.z_star);
  if (!(z_end > 0.0)) throw DomainError("scan range must be positive");
  const auto points = static_cast<std::size_t>(std::ceil(z_end / step - 1e-9));
  cert.z_grid.reserve(points);
  cert.sigma_min.reserve(points);
  cert.cholesky_ok.reserve(points);

  bool all_ok = true;
  for (std::size_t k = 1; k <= points; ++k) {
    const double z = static_cast<double>(k) * step;
    const double sigma = linalg::min_singular_value(assemble_gamma(cfg, z).entries);
    const bool spd = linalg::succeeded(linalg::cholesky(sinc_gram(cfg, z)));
    cert.z_grid.push_back(z);
    cert.sigma_min.push_back(sigma);
    cert.cholesky_ok.push_back(spd);
    all_ok = all_ok && spd && sigma > options.threshold;
  }
  cert.covers_z_star = !cert.z_grid.empty() && cert.z_grid.back() >= cert.z_star;
  cert.verdict = all_ok && cert.covers_z_star && cert.bound_at_z_star > 0.0;
  return cert;
}

complex exp_sum_on_sphere(std::span<const Vec3> points, std::span<const double> v,
                          const Vec3& p) {
  if (points.size() != v.size()) throw DomainError("coefficient vector has the wrong length");
  if (std::abs(norm(p) - 1.0) > 1e-12) throw DomainError("direction must be a unit vector");
  complex s = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j)
    s += v[j] * std::exp(complex(0.0, dot(points[j], p)));
  return s;
}

}  // namespace deltaspec
