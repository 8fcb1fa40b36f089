#include "deltaspec/linalg.hpp"

#include <limits>
#include <numeric>

#include "deltaspec/errors.hpp"

namespace deltaspec::linalg {

namespace {

constexpr double kJacobiTolerance = 1e-14;
constexpr double kSymmetryTolerance = 1e-12;
constexpr int kMaxJacobiSweeps = 100;
constexpr double kPairingTolerance = 1e-8;

double off_diagonal_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void check_symmetric(const RealMatrix& m) {
  if (!m.square()) throw DomainError("symmetric matrix must be square");
  const double tol = kSymmetryTolerance * frobenius_norm(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw DomainError("matrix is not symmetric");
}

// Diagonalizes `a` in place by cyclic Jacobi sweeps; rotations are
// accumulated into `v` when given.
void jacobi(RealMatrix& a, RealMatrix* v) {
  const std::size_t n = a.rows();
  const double target = kJacobiTolerance * frobenius_norm(a);
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J with J = [[c, s], [-s, c]] in the (p, q) plane.
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        if (v) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = (*v)(k, p);
            const double vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - s * vkq;
            (*v)(k, q) = s * vkp + c * vkq;
          }
        }
      }
  }
  if (off_diagonal_norm(a) > target)
    throw NumericalFailure("Jacobi eigensolver did not converge");
}

}  // namespace

complex LUFactorization::determinant() const {
  complex det = static_cast<double>(sign);
  for (std::size_t k = 0; k < factors.rows(); ++k) det *= factors(k, k);
  return det;
}

double LUFactorization::min_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < factors.rows(); ++k) m = std::min(m, std::abs(factors(k, k)));
  return m;
}

ComplexVector LUFactorization::solve(std::span<const complex> b) const {
  const std::size_t n = factors.rows();
  if (b.size() != n) throw DomainError("right-hand side has the wrong length");
  if (min_pivot() < kSingularPivotTolerance * input_norm || input_norm == 0.0)
    throw SingularMatrixError("matrix is numerically singular");
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[pivots[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= factors(i, k) * x[k];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= factors(i, k) * x[k];
    x[i] /= factors(i, i);
  }
  return x;
}

LUFactorization lu_factor(const ComplexMatrix& m) {
  if (!m.square()) throw DomainError("LU requires a square matrix");
  const std::size_t n = m.rows();
  LUFactorization lu{m, std::vector<std::size_t>(n), 1, frobenius_norm(m)};
  std::iota(lu.pivots.begin(), lu.pivots.end(), std::size_t{0});
  auto& a = lu.factors;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(lu.pivots[k], lu.pivots[p]);
      lu.sign = -lu.sign;
    }
    if (a(k, k) == complex(0.0)) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const complex l = a(i, k) / a(k, k);
      a(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return lu;
}

std::pair<LUFactorization, complex> lu_det(const ComplexMatrix& m) {
  auto lu = lu_factor(m);
  const complex det = lu.determinant();
  return {std::move(lu), det};
}

ComplexVector solve(const ComplexMatrix& m, std::span<const complex> b) {
  return lu_factor(m).solve(b);
}

ComplexMatrix inverse(const ComplexMatrix& m) {
  const auto lu = lu_factor(m);
  const std::size_t n = m.rows();
  ComplexMatrix inv(n, n);
  ComplexVector e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), complex(0.0));
    e[j] = 1.0;
    const auto col = lu.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

SymEigen sym_eigen(const RealMatrix& m) {
  check_symmetric(m);
  const std::size_t n = m.rows();
  RealMatrix a = m;
  RealMatrix v = RealMatrix::identity(n);
  jacobi(a, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out{RealVector(n), RealMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

RealVector sym_eigenvalues(const RealMatrix& m) {
  check_symmetric(m);
  RealMatrix a = m;
  jacobi(a, nullptr);
  RealVector values(a.rows());
  for (std::size_t k = 0; k < a.rows(); ++k) values[k] = a(k, k);
  std::sort(values.begin(), values.end());
  return values;
}

CholeskyResult cholesky(const RealMatrix& m) {
  check_symmetric(m);
  const std::size_t n = m.rows();
  RealMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return NotPositiveDefinite{j + 1, d};
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

RealMatrix real_embedding(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  RealMatrix e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      e(i, j) = e(i + n, j + n) = h(i, j).real();
      e(i, j + n) = -h(i, j).imag();
      e(i + n, j) = h(i, j).imag();
    }
  return e;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (!m.square()) throw DomainError("singular values are computed for square matrices");
  const std::size_t n = m.rows();
  // M^* M, symmetrized exactly so the embedding passes the symmetry check.
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::conj(m(k, i)) * m(k, j);
      if (i == j) s.imag(0.0);
      h(i, j) = s;
      h(j, i) = std::conj(s);
    }
  const RealVector doubled = sym_eigenvalues(real_embedding(h));
  RealVector sv(n);
  const double scale = std::max(1.0, std::abs(doubled.back()));
  for (std::size_t k = 0; k < n; ++k) {
    const double a = doubled[2 * k];
    const double b = doubled[2 * k + 1];
    // Pairs must agree; when rounding splits them we keep the smaller one.
    const double lam = std::abs(a - b) <= kPairingTolerance * scale ? 0.5 * (a + b) : std::min(a, b);
    sv[k] = std::sqrt(std::max(lam, 0.0));
  }
  return sv;
}

double min_singular_value(const ComplexMatrix& m) { return singular_values(m).front(); }

std::vector<RealVector> null_space(const RealMatrix& m, double tol) {
  if (!(tol > 0.0)) throw DomainError("null-space tolerance must be positive");
  const auto eig = sym_eigen(m);
  const double threshold = tol * frobenius_norm(m);
  std::vector<RealVector> basis;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (std::abs(eig.values[k]) <= threshold) basis.push_back(eig.vectors.column(k));
  return basis;
}

std::vector<ComplexVector> null_space(const ComplexMatrix& m, double tol) {
  if (!(tol > 0.0)) throw DomainError("null-space tolerance must be positive");
  if (!m.square()) throw DomainError("null space is computed for square matrices");
  const std::size_t n = m.rows();
  ComplexMatrix dilation(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dilation(i, j + n) = m(i, j);
      dilation(j + n, i) = std::conj(m(i, j));
    }
  // Eigenvalues of the dilation are +-sigma_k; the real embedding doubles them.
  const auto eig = sym_eigen(real_embedding(dilation));
  const double threshold = tol * frobenius_norm(m);

  // Candidates: right-singular components of each near-zero eigenvector.
  std::vector<ComplexVector> candidates;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (std::abs(eig.values[k]) > threshold) continue;
    ComplexVector v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = complex(eig.vectors(n + i, k), eig.vectors(3 * n + i, k));
    candidates.push_back(std::move(v));
  }

  // Pivoted Gram-Schmidt: each exact null vector shows up several times
  // (as v, i v, mixed with left null vectors), so keep only new directions.
  std::vector<ComplexVector> basis;
  while (!candidates.empty()) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double nrm = vector_norm(candidates[c]);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (best_norm < 1e-6) break;
    ComplexVector q = candidates[best];
    for (auto& x : q) x /= best_norm;
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& c : candidates) {
      complex proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q[i]) * c[i];
      for (std::size_t i = 0; i < n; ++i) c[i] -= proj * q[i];
    }
    basis.push_back(std::move(q));
  }
  return basis;
}

}  // namespace deltaspec::linalg
