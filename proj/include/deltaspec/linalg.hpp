#pragma once

// Dense linear algebra for the small matrices that appear here (N <= ~64).
// Norms written ||M|| are Frobenius norms throughout.

#include <utility>
#include <variant>
#include <vector>

#include "deltaspec/matrix.hpp"

namespace deltaspec::linalg {

/// Pivots in `solve` smaller than this times ||M|| are treated as singular.
inline constexpr double kSingularPivotTolerance = 1e-14;

/// Partial-pivoting LU, P M = L U, with L unit lower triangular and both
/// factors packed into `factors`. `pivots[k]` is the original row that ended
/// up in row k.
struct LUFactorization {
  ComplexMatrix factors;
  std::vector<std::size_t> pivots;
  int sign = 1;
  double input_norm = 0.0;

  complex determinant() const;

  // Smallest |U_kk|.
  double min_pivot() const;

  /// Solves M x = b. Throws SingularMatrixError when a pivot magnitude is
  /// below kSingularPivotTolerance * ||M||.
  ComplexVector solve(std::span<const complex> b) const;
};

LUFactorization lu_factor(const ComplexMatrix& m);

/// Factorization plus det = sign * prod U_kk. Singular input gives det ~ 0.
std::pair<LUFactorization, complex> lu_det(const ComplexMatrix& m);

ComplexVector solve(const ComplexMatrix& m, std::span<const complex> b);

/// M^{-1}, column by column through `solve`.
ComplexMatrix inverse(const ComplexMatrix& m);

/// Eigen-decomposition of a real symmetric matrix.
struct SymEigen {
  RealVector values;    // ascending
  RealMatrix vectors;   // column k belongs to values[k]
};

/// Cyclic Jacobi rotations, converged when the off-diagonal Frobenius norm is
/// at most 1e-14 ||M||. Throws DomainError on asymmetric input
/// (> 1e-12 ||M||), NumericalFailure when sweeps run out.
SymEigen sym_eigen(const RealMatrix& m);

/// Same as sym_eigen without accumulating eigenvectors.
RealVector sym_eigenvalues(const RealMatrix& m);

struct NotPositiveDefinite {
  std::size_t pivot = 0;  // 1-based index of the failing pivot
  double value = 0.0;     // the non-positive pivot value encountered
};

using CholeskyResult = std::variant<RealMatrix, NotPositiveDefinite>;

/// Lower-triangular L with L L^T = M, or the first non-positive pivot.
/// Not being positive definite is an outcome, not an error.
CholeskyResult cholesky(const RealMatrix& m);

inline bool succeeded(const CholeskyResult& r) {
  return std::holds_alternative<RealMatrix>(r);
}

/// [[Re H, -Im H], [Im H, Re H]] for a Hermitian H.
RealMatrix real_embedding(const ComplexMatrix& h);

/// Singular values, ascending, as square roots of the eigenvalues of M^* M
/// obtained from its 2N x 2N real embedding (each appears twice there; pairs
/// are averaged). Absolute accuracy is about sqrt(eps) ||M||.
RealVector singular_values(const ComplexMatrix& m);

double min_singular_value(const ComplexMatrix& m);

/// Orthonormal basis of the eigenvectors whose |eigenvalue| <= tol ||M||.
std::vector<RealVector> null_space(const RealMatrix& m, double tol);

/// Orthonormal basis of the right singular vectors with sigma <= tol ||M||.
/// Uses the Hermitian dilation [[0, M], [M^*, 0]] so that small singular
/// values are resolved to eps ||M|| rather than sqrt(eps) ||M||.
std::vector<ComplexVector> null_space(const ComplexMatrix& m, double tol);

}  // namespace deltaspec::linalg
