#pragma once

// Resolvent kernel of -Delta_{alpha,Y} by Krein's formula, and the checks that
// tie it back to the PDE and to the boundary conditions at the centers.

#include <functional>

#include "deltaspec/model.hpp"

namespace deltaspec {

/// A(x) = amplitude * exp(-|x - center|^2 / width^2).
struct GaussianTestFunction {
  Vec3 center{};
  double width = 1.0;
  double amplitude = 1.0;

  double value(const Vec3& x) const;
  double laplacian(const Vec3& x) const;
};

/// Free kernel exp(i z |x - x'|) / (4 pi |x - x'|).
complex free_kernel(complex z, const Vec3& x, const Vec3& xp);

/// sum_{j,k} (Gamma(z)^{-1})_{jk} G_z^{y_j}(x) G_z^{y_k}(x').
/// Throws PoleError when sigma_min(Gamma(z)) <= 1e-12 and
/// SingularityError when x or x' is a center.
complex resolvent_correction(const PointConfig& cfg, complex z, const Vec3& x, const Vec3& xp);

/// Kernel of (-Delta_{alpha,Y} - z^2)^{-1} for Im z >= 0: free kernel plus
/// the rank-N correction.
complex resolvent_kernel(const PointConfig& cfg, complex z, const Vec3& x, const Vec3& xp);

/// |(-Delta_h - z^2) f|(x) with the 7-point central-difference Laplacian.
double helmholtz_residual(const std::function<complex(const Vec3&)>& f, complex z,
                          const Vec3& x, double h);

/// The same for f = resolvent_kernel(cfg, z, ., x'). Requires
/// dist(x, Y ∪ {x'}) > 10 h (DomainError otherwise).
double helmholtz_residual(const PointConfig& cfg, complex z, const Vec3& x, const Vec3& xp,
                          double h);

struct DomainValue {
  complex value;
  ComplexVector charges;  // q = Gamma(z)^{-1} (F(y_1), ..., F(y_N))
};

/// u = F + sum_j q_j G_z^{y_j} for Im z > 0: the element of the operator
/// domain with regular part F.
DomainValue domain_function_eval(const PointConfig& cfg, complex z,
                                 const GaussianTestFunction& f, const Vec3& x);

/// |d(r u)/dr - 4 pi alpha r u| at distance r from `center`, averaged over the
/// six directions +-e_1, +-e_2, +-e_3 before taking the modulus. The radial
/// derivative is a central difference with step r/10.
double boundary_bracket(const std::function<complex(const Vec3&)>& u, const Vec3& center,
                        double alpha, double r);

/// boundary_bracket for u = domain_function_eval(cfg, z, F, .) at center j.
/// Requires r < d_min / 4 (r < width / 4 when N = 1).
double boundary_condition_residual(const PointConfig& cfg, complex z,
                                   const GaussianTestFunction& f, std::size_t j, double r);

}  // namespace deltaspec
