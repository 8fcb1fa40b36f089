#pragma once

// Discrete spectrum, zero-energy threshold and the low-energy Laurent
// coefficients of Gamma(z)^{-1}.

#include <optional>
#include <string_view>
#include <vector>

#include "deltaspec/model.hpp"

namespace deltaspec {

/// One negative eigenvalue -lambda^2. Eigenfunctions are
/// u = sum_j c_j exp(-lambda |x - y_j|) / (4 pi |x - y_j|) for c in
/// `coefficients`, an orthonormal basis of ker Gamma(i lambda).
struct BoundState {
  double lambda = 0.0;
  double energy = 0.0;
  int multiplicity = 0;
  std::vector<RealVector> coefficients;
  double residual = 0.0;  // max ||Gamma(i lambda) c||
};

struct SpectralReport {
  std::vector<BoundState> eigenvalues;  // ascending energy

  int total_multiplicity() const;
};

/// Negative eigenvalues via the imaginary axis: Gamma(i lambda) is real
/// symmetric and each of its ordered eigenvalue curves is strictly increasing
/// in lambda, so every curve that starts negative at lambda = 0 crosses zero
/// exactly once below
///   lambda_hi = 4 pi (max|alpha| + (N-1)/(4 pi d_min)) + 1.
/// Crossings are bisected to full double precision; crossings within
/// tol (1 + lambda) of each other are merged.
SpectralReport negative_eigenvalues(const PointConfig& cfg, double tol = 1e-10);

/// Upper end of the bisection bracket for negative_eigenvalues.
double eigenvalue_search_bound(const PointConfig& cfg);

/// sum_j c_j exp(-lambda |x-y_j|) / (4 pi |x-y_j|). Throws SingularityError
/// when x is an interaction center.
double eigenfunction_eval(const PointConfig& cfg, double lambda, std::span<const double> c,
                          const Vec3& x);

enum class ZeroLabel { Regular, ZeroResonance, ZeroEigenvalue, Mixed };

std::string_view to_string(ZeroLabel label);

/// Structure of ker Gamma(0). A kernel vector c gives the zero-energy
/// solution sum_j c_j / (4 pi |x - y_j|), whose 1/|x| tail cancels (and the
/// solution is square integrable) exactly when sum_j c_j = 0.
struct ZeroClassification {
  int kernel_dim = 0;
  int eigenvalue_multiplicity = 0;  // dim(ker Gamma(0) ∩ {sum c = 0})
  bool resonance_present = false;   // ker Gamma(0) not inside {sum c = 0}
  ZeroLabel label = ZeroLabel::Regular;
  std::vector<RealVector> eigen_coefficients;       // basis of the zero-sum part
  std::optional<RealVector> resonance_coefficients;  // kernel direction with sum c != 0
};

/// `tol` is relative: kernel vectors have |eigenvalue| <= tol ||Gamma(0)||.
ZeroClassification classify_zero(const PointConfig& cfg, double tol = 1e-10);

/// A_{-2}, A_{-1} in Gamma(z)^{-1} = z^{-2} A_{-2} + z^{-1} A_{-1} + O(1).
struct LaurentCoefficients {
  ComplexMatrix a_minus2;
  ComplexMatrix a_minus1;
  double radius = 0.0;
  int nodes = 0;
  double last_change = 0.0;  // max entry change at the final node doubling
  bool stable = false;
};

/// Trapezoidal rule for (1/2 pi i) \oint Gamma(z)^{-1} z^{-m-1} dz, m = -2, -1,
/// on |z| = radius. The circle must not enclose other poles of Gamma^{-1};
/// it is halved (up to 6 times) when Gamma is numerically singular on it, or
/// when a concentric circle of radius 0.75 * radius gives coefficients that
/// differ by 1e-8 or more (a pole between the two circles).
/// Node counts double until successive results agree to 1e-8 (max 1024).
LaurentCoefficients laurent_at_zero(const PointConfig& cfg, double radius = 1e-2,
                                    int nodes = 64);

}  // namespace deltaspec
