#include <random>

#include "doctest.h"

#include "deltaspec/errors.hpp"
#include "deltaspec/linalg.hpp"
#include "deltaspec/model.hpp"
#include "support/oracles.hpp"

using namespace deltaspec;
using namespace deltaspec::linalg;

namespace {

ComplexMatrix diag(std::initializer_list<complex> d) {
  ComplexMatrix m(d.size(), d.size());
  std::size_t i = 0;
  for (complex v : d) m(i, i) = v, ++i;
  return m;
}

RealMatrix real2(double a, double b, double c, double d) {
  RealMatrix m(2, 2);
  m(0, 0) = a, m(0, 1) = b, m(1, 0) = c, m(1, 1) = d;
  return m;
}

// P M rebuilt from the packed factors.
double lu_reconstruction_error(const ComplexMatrix& m, const LUFactorization& lu) {
  const std::size_t n = m.rows();
  ComplexMatrix l = ComplexMatrix::identity(n), u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) (j < i ? l(i, j) : u(i, j)) = lu.factors(i, j);
  ComplexMatrix pm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pm(i, j) = m(lu.pivots[i], j);
  return frobenius_norm(l * u - pm);
}

}  // namespace

TEST_CASE("determinant examples") {
  CHECK(lu_det(ComplexMatrix::identity(3)).second == complex(1.0));
  CHECK(std::abs(lu_det(diag({2.0, {0, 3}})).second - complex(0, 6)) < 1e-15);
  const auto singular = lu_det(diag({1.0, 0.0})).second;
  CHECK(std::abs(singular) == 0.0);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_complex_matrix(rng, 4);
    const complex expected = oracle::cofactor_det(m);
    REQUIRE(std::abs(lu_det(m).second - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("LU reconstruction on random matrices") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto m = oracle::random_complex_matrix(rng, n);
    const auto lu = lu_factor(m);
    REQUIRE(lu_reconstruction_error(m, lu) <= 1e-12 * frobenius_norm(m));
    std::vector<std::size_t> sorted = lu.pivots;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(sorted[i] == i);
  }
}

TEST_CASE("solve") {
  const ComplexVector b{{1, 2}, {-3, 0.5}, {0, 0}};
  const auto x = solve(ComplexMatrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == b[i]);

  const complex entry = complex(0.7) - complex(0, 1) * complex(2.0, 0.3) / kFourPi;
  ComplexMatrix one(1, 1, entry);
  CHECK(std::abs(solve(one, ComplexVector{1.0})[0] - 1.0 / entry) < 1e-15);

  std::mt19937_64 rng(33);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_complex_matrix(rng, 5);
    ComplexVector rhs(5);
    for (auto& v : rhs) v = {g(rng), g(rng)};
    const auto sol = solve(m, rhs);
    auto r = m * sol;
    for (std::size_t i = 0; i < 5; ++i) r[i] -= rhs[i];
    REQUIRE(vector_norm(r) <= 1e-10 * frobenius_norm(m) * vector_norm(sol));
  }

  CHECK_THROWS_AS(solve(diag({1.0, 0.0}), ComplexVector{1.0, 1.0}), SingularMatrixError);
  CHECK_THROWS_AS(solve(diag({1.0, 1e-16}), ComplexVector{1.0, 1.0}), SingularMatrixError);
  CHECK_THROWS_AS(solve(ComplexMatrix(2, 2), ComplexVector{1.0, 1.0}), SingularMatrixError);
  CHECK_NOTHROW(solve(diag({1.0, 1e-13}), ComplexVector{1.0, 1.0}));
}

TEST_CASE("symmetric eigenproblem examples") {
  const auto d = sym_eigen(real2(3, 0, 0, 1));
  CHECK(d.values[0] == doctest::Approx(1.0));
  CHECK(d.values[1] == doctest::Approx(3.0));

  const double a = 0.8, b = -2.1;
  const auto ab = sym_eigenvalues(real2(a, b, b, a));
  CHECK(ab[0] == doctest::Approx(a - std::abs(b)));
  CHECK(ab[1] == doctest::Approx(a + std::abs(b)));

  CHECK_THROWS_AS(sym_eigen(real2(1, 2, 2.1, 1)), DomainError);
}

TEST_CASE("Jacobi against the inertia-bisection oracle") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto m = oracle::random_symmetric(rng, n);
    const auto eig = sym_eigen(m);
    const auto expected = oracle::eigenvalues(m);
    const double scale = frobenius_norm(m);
    double trace = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      REQUIRE(std::abs(eig.values[k] - expected[k]) <= 1e-12 * scale);
      if (k > 0) REQUIRE(eig.values[k] >= eig.values[k - 1]);
      trace += m(k, k);
      sum += eig.values[k];
      const auto v = eig.vectors.column(k);
      auto r = m * v;
      for (std::size_t i = 0; i < n; ++i) r[i] -= eig.values[k] * v[i];
      REQUIRE(vector_norm(r) <= 1e-10 * scale);
    }
    REQUIRE(std::abs(trace - sum) <= 1e-10 * std::max(1.0, scale));
    const auto vtv = transpose(eig.vectors) * eig.vectors;
    REQUIRE(max_abs_diff(vtv, RealMatrix::identity(n)) <= 1e-10);
  }
}

TEST_CASE("Cholesky") {
  const auto id = cholesky(RealMatrix::identity(3));
  REQUIRE(succeeded(id));
  CHECK(std::get<RealMatrix>(id) == RealMatrix::identity(3));

  const auto ones = cholesky(real2(1, 1, 1, 1));
  REQUIRE_FALSE(succeeded(ones));
  CHECK(std::get<NotPositiveDefinite>(ones).pivot == 2);

  std::mt19937_64 rng(35);
  const auto cfg = oracle::random_config(rng, {.n_min = 5, .n_max = 5});
  CHECK(succeeded(cholesky(sinc_gram(cfg, 1.0))));
}

TEST_CASE("Cholesky succeeds exactly when all eigenvalues are positive") {
  std::mt19937_64 rng(36);
  std::normal_distribution<double> g;
  int positive = 0, indefinite = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    // Shift a random symmetric matrix so that about half the cases are SPD.
    auto m = oracle::random_symmetric(rng, n);
    const double shift = std::sqrt(static_cast<double>(n)) * (1.5 + 0.8 * g(rng));
    for (std::size_t i = 0; i < n; ++i) m(i, i) += shift;
    const auto values = sym_eigenvalues(m);
    const double band = 1e-10 * frobenius_norm(m);
    if (std::abs(values.front()) <= band) continue;
    const bool spd = values.front() > 0.0;
    const auto result = cholesky(m);
    REQUIRE(succeeded(result) == spd);
    (spd ? positive : indefinite)++;
    if (spd) {
      const auto& l = std::get<RealMatrix>(result);
      REQUIRE(max_abs_diff(l * transpose(l), m) <= 1e-12 * frobenius_norm(m));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) REQUIRE(l(i, j) == 0.0);
    }
  }
  CHECK(positive > 200);
  CHECK(indefinite > 200);
}

TEST_CASE("singular values") {
  CHECK(min_singular_value(ComplexMatrix::identity(4)) == doctest::Approx(1.0));
  CHECK(min_singular_value(diag({2.0, 0.0})) == 0.0);
  const auto sv = singular_values(diag({{0, 3}, -2.0, 0.5}));
  REQUIRE(sv.size() == 3);
  CHECK(sv[0] == doctest::Approx(0.5));
  CHECK(sv[1] == doctest::Approx(2.0));
  CHECK(sv[2] == doctest::Approx(3.0));

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_complex_matrix(rng, 4);
    const double expected = oracle::min_singular_value(m);
    // Squaring limits the absolute accuracy to about sqrt(eps) * ||M||.
    REQUIRE(std::abs(min_singular_value(m) - expected) <= 1e-7 * frobenius_norm(m));
  }
}

TEST_CASE("A - iB is non-singular for symmetric A and SPD B") {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto a = oracle::random_symmetric(rng, n);
    const auto b = oracle::random_spd(rng, n, 1e-2);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = {a(i, j), -b(i, j)};
    REQUIRE(min_singular_value(m) > 0.0);
  }
}

TEST_CASE("null space") {
  CHECK(null_space(RealMatrix::identity(3), 1e-10).empty());
  const auto k = null_space(real2(1, -1, -1, 1), 1e-10);
  REQUIRE(k.size() == 1);
  CHECK(std::abs(std::abs(k[0][0]) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(k[0][0] - k[0][1]) < 1e-14);

  const double a = -1.0 / kFourPi;
  const PointConfig zero_eig({a, a}, {Vec3{0, 0, 0}, Vec3{1, 0, 0}});
  CHECK(null_space(gamma_imaginary_axis(zero_eig, 0.0), 1e-10).size() == 1);

  // Complex rank-deficient matrix u v^T + w x^T with rank 2 in 4 dimensions.
  std::mt19937_64 rng(39);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    ComplexVector u(4), v(4), w(4), x(4);
    for (auto* vec : {&u, &v, &w, &x})
      for (auto& c : *vec) c = {g(rng), g(rng)};
    ComplexMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = u[i] * v[j] + w[i] * x[j];
    const auto basis = null_space(m, 1e-10);
    REQUIRE(basis.size() == 2);
    for (const auto& b : basis) {
      REQUIRE(std::abs(vector_norm(b) - 1.0) < 1e-12);
      REQUIRE(vector_norm(m * b) <= 1e-12 * frobenius_norm(m));
    }
    complex overlap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(basis[0][i]) * basis[1][i];
    REQUIRE(std::abs(overlap) < 1e-12);
  }
}

TEST_CASE("real embedding") {
  ComplexMatrix h(1, 1, complex(2, 3));
  const auto e = real_embedding(h);
  CHECK(e(0, 0) == 2.0);
  CHECK(e(0, 1) == -3.0);
  CHECK(e(1, 0) == 3.0);
  CHECK(e(1, 1) == 2.0);
}
