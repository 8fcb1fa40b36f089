#include <random>

#include "doctest.h"

#include "deltaspec/errors.hpp"
#include "deltaspec/linalg.hpp"
#include "deltaspec/spectral.hpp"
#include "support/oracles.hpp"

using namespace deltaspec;

namespace {

PointConfig pair(double a1, double a2, double d) {
  return {{a1, a2}, {Vec3{0, 0, 0}, Vec3{d, 0, 0}}};
}

PointConfig single(double a) { return {{a}, {Vec3{0.5, -1, 2}}}; }

// Roots of a + lambda/(4 pi) = s exp(-lambda d)/(4 pi d), s = +1 (symmetric)
// and s = -1 (antisymmetric branch), found by scalar bisection.
std::vector<double> two_center_oracle(double a, double d) {
  std::vector<double> roots;
  for (double s : {1.0, -1.0}) {
    auto f = [&](double lambda) {
      return a + lambda / kFourPi - s * std::exp(-lambda * d) / (kFourPi * d);
    };
    if (f(0.0) < 0.0) roots.push_back(oracle::bisect(f, 0.0, kFourPi * (std::abs(a) + 1.0 / d) + 1.0));
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

}  // namespace

TEST_CASE("single center spectrum") {
  const auto r = negative_eigenvalues(single(-1.0));
  REQUIRE(r.eigenvalues.size() == 1);
  CHECK(std::abs(r.eigenvalues[0].lambda - kFourPi) < 1e-9);
  CHECK(std::abs(r.eigenvalues[0].energy + 16 * kPi * kPi) < 1e-9);
  CHECK(r.eigenvalues[0].multiplicity == 1);
  REQUIRE(r.eigenvalues[0].coefficients.size() == 1);
  CHECK(r.eigenvalues[0].coefficients[0][0] == doctest::Approx(1.0));

  for (double a : {0.0, 0.5, 0.7, 3.0}) CHECK(negative_eigenvalues(single(a)).eigenvalues.empty());

  for (double a : {-0.01, -0.3, -2.5, -7.0}) {
    const auto s = negative_eigenvalues(single(a));
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(std::abs(s.eigenvalues[0].lambda + kFourPi * a) < 1e-9 * std::max(1.0, -kFourPi * a));
  }
  CHECK_THROWS_AS(negative_eigenvalues(single(-1.0), 0.0), DomainError);
}

TEST_CASE("two center spectrum against the scalar branches") {
  for (double d : {0.5, 1.0, 2.0}) {
    for (double a : {-2.0, -1.0, -1.0 / (kFourPi * d) - 0.1, 0.0, -0.5 / (kFourPi * d)}) {
      CAPTURE(d);
      CAPTURE(a);
      const auto expected = two_center_oracle(a, d);
      const auto r = negative_eigenvalues(pair(a, a, d));
      // Deep wells split the branches by ~exp(-lambda d); below the merge
      // tolerance they come back as one entry of multiplicity 2.
      std::vector<double> found;
      for (const auto& s : r.eigenvalues) {
        CHECK(s.residual <= 1e-8);
        for (int m = 0; m < s.multiplicity; ++m) found.push_back(s.lambda);
        if (s.multiplicity == 1) {
          const auto& c = s.coefficients[0];
          CHECK(std::abs(std::abs(c[0]) - std::sqrt(0.5)) < 1e-8);
          CHECK(std::abs(std::abs(c[1]) - std::sqrt(0.5)) < 1e-8);
        }
      }
      REQUIRE(found.size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(found[i] - expected[i]) < 1e-9);
    }
  }
  // Well separated branches: the deeper state is the symmetric one.
  const auto r = negative_eigenvalues(pair(-0.3, -0.3, 0.5));
  REQUIRE(r.eigenvalues.size() == 2);
  CHECK(r.eigenvalues[0].coefficients[0][0] * r.eigenvalues[0].coefficients[0][1] > 0.0);
  CHECK(r.eigenvalues[1].coefficients[0][0] * r.eigenvalues[1].coefficients[0][1] < 0.0);
}

TEST_CASE("degenerate crossings are merged") {
  // Three centers on an equilateral triangle: the two antisymmetric modes are
  // degenerate by symmetry.
  const double a = -1.0;
  const PointConfig tri({a, a, a}, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, std::sqrt(3.0) / 2, 0}});
  const auto r = negative_eigenvalues(tri);
  REQUIRE(r.eigenvalues.size() == 2);
  CHECK(r.total_multiplicity() == 3);
  CHECK(r.eigenvalues[0].multiplicity == 1);
  CHECK(r.eigenvalues[1].multiplicity == 2);
  for (const auto& s : r.eigenvalues)
    for (const auto& c : s.coefficients)
      CHECK(vector_norm(gamma_imaginary_axis(tri, s.lambda) * c) <= 1e-8);
}

TEST_CASE("spectral report invariants on random configurations") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cfg = oracle::random_config(rng, {.n_max = 6, .ball_radius = 2.0, .alpha_lo = -3, .alpha_hi = 1});
    const auto r = negative_eigenvalues(cfg);
    REQUIRE(r.total_multiplicity() <= static_cast<int>(cfg.size()));
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      const auto& s = r.eigenvalues[i];
      REQUIRE(s.lambda > 0.0);
      REQUIRE(s.energy == -s.lambda * s.lambda);
      if (i > 0) REQUIRE(s.energy > r.eigenvalues[i - 1].energy);
      for (const auto& c : s.coefficients)
        REQUIRE(vector_norm(gamma_imaginary_axis(cfg, s.lambda) * c) <= 1e-8);
    }
    // Count consistency with the inertia of Gamma(i lambda_0), lambda_0 small.
    if (classify_zero(cfg).label == ZeroLabel::Regular) {
      const auto mu = linalg::sym_eigenvalues(gamma_imaginary_axis(cfg, 1e-6));
      const auto negatives = std::count_if(mu.begin(), mu.end(), [](double m) { return m < 0.0; });
      REQUIRE(r.total_multiplicity() == negatives);
    }
  }
}

TEST_CASE("eigenvalue curves increase in lambda") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cfg = oracle::random_config(rng);
    double l1 = u(rng), l2 = u(rng);
    if (l1 > l2) std::swap(l1, l2);
    if (l2 - l1 < 1e-3) continue;
    const auto m1 = linalg::sym_eigenvalues(gamma_imaginary_axis(cfg, l1));
    const auto m2 = linalg::sym_eigenvalues(gamma_imaginary_axis(cfg, l2));
    for (std::size_t k = 0; k < m1.size(); ++k) REQUIRE(m2[k] > m1[k]);
  }
}

TEST_CASE("the derivative Gram matrix exp(-lambda d_jk) is positive definite") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto cfg = oracle::random_config(rng);
    const double lambda = u(rng);
    RealMatrix k(cfg.size(), cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i)
      for (std::size_t j = 0; j < cfg.size(); ++j) k(i, j) = std::exp(-lambda * cfg.distance(i, j));
    REQUIRE(linalg::succeeded(linalg::cholesky(k)));
  }
}

TEST_CASE("eigenfunction evaluation") {
  const auto one = single(-1.0);
  const Vec3 y = one.point(0);
  const double c[] = {1.0};
  CHECK(eigenfunction_eval(one, kFourPi, c, Vec3{y[0] + 1, y[1], y[2]}) ==
        doctest::Approx(std::exp(-kFourPi) / kFourPi));
  CHECK_THROWS_AS(eigenfunction_eval(one, kFourPi, c, y), SingularityError);

  const auto two = pair(-1, -1, 1.0);
  const double anti[] = {1.0, -1.0};
  CHECK(std::abs(eigenfunction_eval(two, 3.0, anti, Vec3{0.5, 0.3, -0.2})) < 1e-17);

  // u(x) |x| exp(lambda |x|) tends to a constant along a ray.
  const double lambda = 2.0, both[] = {0.6, 0.8};
  auto scaled = [&](double t) {
    const Vec3 x{t * 0.3, t * 0.4, t * std::sqrt(0.75)};
    return eigenfunction_eval(two, lambda, both, x) * t * std::exp(lambda * t);
  };
  const double s1 = scaled(50), s2 = scaled(100), s3 = scaled(200);
  CHECK(std::abs(s3 - s2) < 0.5 * std::abs(s2 - s1));
  CHECK(std::abs(s3 - s2) < 1e-2 * std::abs(s3));
}

TEST_CASE("zero-energy classification") {
  const auto res = classify_zero(single(0.0));
  CHECK(res.label == ZeroLabel::ZeroResonance);
  CHECK(res.kernel_dim == 1);
  CHECK(res.resonance_present);
  CHECK(res.eigenvalue_multiplicity == 0);

  const auto reg = classify_zero(single(1.0));
  CHECK(reg.label == ZeroLabel::Regular);
  CHECK(reg.kernel_dim == 0);

  const double a = -1.0 / kFourPi;
  const auto eig = classify_zero(pair(a, a, 1.0));
  CHECK(eig.label == ZeroLabel::ZeroEigenvalue);
  CHECK(eig.eigenvalue_multiplicity == 1);
  CHECK_FALSE(eig.resonance_present);
  REQUIRE(eig.eigen_coefficients.size() == 1);
  CHECK(std::abs(eig.eigen_coefficients[0][0] - std::sqrt(0.5)) < 1e-8);
  CHECK(std::abs(eig.eigen_coefficients[0][1] + std::sqrt(0.5)) < 1e-8);

  // a = +1/(4 pi): the kernel is (1, 1), a zero-energy resonance.
  const auto sym = classify_zero(pair(-a, -a, 1.0));
  CHECK(sym.label == ZeroLabel::ZeroResonance);
  REQUIRE(sym.resonance_coefficients.has_value());
  CHECK(std::abs((*sym.resonance_coefficients)[0] - (*sym.resonance_coefficients)[1]) < 1e-8);

  CHECK(std::string(to_string(ZeroLabel::Mixed)) == "Mixed");
}

TEST_CASE("square and collinear threshold configurations") {
  // Square of side 1: Gamma(0) = alpha I - C / (4 pi) with C circulant
  // (0, 1, 1/sqrt2, 1), eigenvalues 2 + 1/sqrt2 (mode (1,1,1,1)), -1/sqrt2
  // (two zero-sum modes) and 1/sqrt2 - 2.
  const double r2 = std::sqrt(2.0);
  auto square = [&](double alpha) {
    return PointConfig({alpha, alpha, alpha, alpha},
                       {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{1, 1, 0}, Vec3{0, 1, 0}});
  };
  const auto resonance = classify_zero(square((2.0 + 1.0 / r2) / kFourPi));
  CHECK(resonance.label == ZeroLabel::ZeroResonance);
  CHECK(resonance.kernel_dim == 1);

  const auto double_eig = classify_zero(square(-1.0 / (r2 * kFourPi)));
  CHECK(double_eig.label == ZeroLabel::ZeroEigenvalue);
  CHECK(double_eig.kernel_dim == 2);
  CHECK(double_eig.eigenvalue_multiplicity == 2);

  // Collinear y = -1, 0, 1 with alpha = (-1/(8 pi), -1/(2 pi), -1/(8 pi)):
  // ker Gamma(0) = span{(1, -1, 1), (1, 0, -1)}, one of each kind.
  const PointConfig line({-1 / (8 * kPi), -1 / (2 * kPi), -1 / (8 * kPi)},
                         {Vec3{-1, 0, 0}, Vec3{0, 0, 0}, Vec3{1, 0, 0}});
  const auto mixed = classify_zero(line);
  CHECK(mixed.label == ZeroLabel::Mixed);
  CHECK(mixed.kernel_dim == 2);
  CHECK(mixed.eigenvalue_multiplicity == 1);
  CHECK(mixed.resonance_present);
  REQUIRE(mixed.eigen_coefficients.size() == 1);
  CHECK(std::abs(mixed.eigen_coefficients[0][0] - std::sqrt(0.5)) < 1e-8);
  CHECK(std::abs(mixed.eigen_coefficients[0][1]) < 1e-8);
  REQUIRE(mixed.resonance_coefficients.has_value());
  const auto& rc = *mixed.resonance_coefficients;
  CHECK(std::abs(rc[0] - rc[2]) < 1e-8);
  CHECK(std::abs(rc[0] + rc[1]) < 1e-8);

  // Kernel invariants on random configs.
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = classify_zero(oracle::random_config(rng));
    REQUIRE(c.kernel_dim == c.eigenvalue_multiplicity + (c.resonance_present ? 1 : 0));
    REQUIRE((c.label == ZeroLabel::Regular) == (c.kernel_dim == 0));
  }
}

TEST_CASE("zero-sum kernel vectors give square-integrable states") {
  // u = G_0^{y1} - G_0^{y2}: radial quadrature of |u|^2 over shells converges,
  // while the resonance combination grows linearly with the cut-off.
  const auto cfg = pair(-1.0 / kFourPi, -1.0 / kFourPi, 1.0);
  const auto rule = oracle::sphere_product_rule(24, 48, 45);
  auto shell = [&](double r, double c2) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const Vec3 x{0.5 + r * rule.nodes[i][0], r * rule.nodes[i][1], r * rule.nodes[i][2]};
      const double u = 1.0 / (kFourPi * distance(x, cfg.point(0))) +
                       c2 / (kFourPi * distance(x, cfg.point(1)));
      s += rule.weights[i] * u * u;
    }
    return s * r * r;
  };
  auto mass = [&](double r0, double r1, double c2) {
    std::vector<double> x, w;
    oracle::gauss_legendre(64, x, w);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Integrate in log r to cover many decades.
      const double t = std::log(r0) + 0.5 * (x[i] + 1.0) * (std::log(r1) - std::log(r0));
      const double r = std::exp(t);
      m += 0.5 * (std::log(r1) - std::log(r0)) * w[i] * shell(r, c2) * r;
    }
    return m;
  };
  const double zero_sum = mass(10, 1e3, -1.0), zero_sum_far = mass(1e3, 1e5, -1.0);
  CHECK(zero_sum_far < 1e-2 * zero_sum);
  const double resonant = mass(10, 1e3, 1.0), resonant_far = mass(1e3, 1e5, 1.0);
  CHECK(resonant_far > 50.0 * resonant);
}

TEST_CASE("Laurent coefficients at zero") {
  const auto res = laurent_at_zero(single(0.0));
  CHECK(res.stable);
  CHECK(std::abs(res.a_minus1(0, 0) - complex(0, kFourPi)) < 1e-8);
  CHECK(frobenius_norm(res.a_minus2) < 1e-8);

  const auto reg = laurent_at_zero(single(1.0));
  CHECK(frobenius_norm(reg.a_minus2) < 1e-8);
  CHECK(frobenius_norm(reg.a_minus1) < 1e-8);

  const double a = -1.0 / kFourPi;
  const auto eig = laurent_at_zero(pair(a, a, 1.0));
  CHECK(frobenius_norm(eig.a_minus2) > 1e-3);

  CHECK_THROWS_AS(laurent_at_zero(single(0.0), 0.0), DomainError);
  CHECK_THROWS_AS(laurent_at_zero(single(0.0), 1e-2, 2), DomainError);

  // A pole on the default circle forces the radius to shrink: alpha = -1e-2/(4 pi)
  // puts the eigenvalue pole at z = 1e-2 i.
  const auto shrunk = laurent_at_zero(single(-1e-2 / kFourPi));
  CHECK(shrunk.radius < 1e-2);
  CHECK(frobenius_norm(shrunk.a_minus2) < 1e-8);
}

TEST_CASE("classification agrees with the Laurent coefficients") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cfg = oracle::random_config(rng, {.n_max = 5});
    const auto c = classify_zero(cfg);
    const auto l = laurent_at_zero(cfg);
    if (c.label == ZeroLabel::Regular) {
      REQUIRE(frobenius_norm(l.a_minus2) < 1e-6);
      REQUIRE(frobenius_norm(l.a_minus1) < 1e-6);
    }
  }
  const double a = -1.0 / kFourPi;
  for (const auto& cfg : {pair(a, a, 1.0), pair(2 * a, 2 * a, 0.5)}) {
    const auto c = classify_zero(cfg);
    REQUIRE(c.eigenvalue_multiplicity > 0);
    REQUIRE(frobenius_norm(laurent_at_zero(cfg).a_minus2) > 1e-6);
  }
}
