#pragma once

#include <optional>

#include "bellman/types.hpp"

namespace bellman {

/// Absolute tolerance for membership tests on the strip boundaries.
inline constexpr double kDomainTol = 1e-12;

/// x1^2 - tol <= x2 <= x1^2 + eps^2 + tol.
bool contains(const DomainPoint& x, const BellmanParams& params);

/// Abscissa where the right-sided tangent through x meets the lower
/// parabola: u+ = x1 + eps - sqrt(eps^2 - x2 + x1^2).
double u_plus(const DomainPoint& x, const BellmanParams& params);

/// Left-sided counterpart: u- = x1 - eps + sqrt(eps^2 - x2 + x1^2).
/// Satisfies u_plus + u_minus = 2 x1.
double u_minus(const DomainPoint& x, const BellmanParams& params);

/// Membership in Omega_L(a) = { x1^2 <= x2 <= 2 a x1 + eps^2 - a^2 }.
bool in_omega_L(const DomainPoint& x, double a, const BellmanParams& params,
                double tol = 1e-9);

/// Membership in Omega_T(u) = { u - eps <= x1 <= u + eps,
///   2 u x1 - u^2 + 2 eps |u - x1| <= x2 <= x1^2 + eps^2 }.
bool in_omega_T(const DomainPoint& x, double u, const BellmanParams& params,
                double tol = 1e-9);

/// Region of the symmetric foliation of the given candidate containing x.
/// Classification happens on (|x1|, x2); points on shared boundaries go to
/// the first-listed block (adjacent values agree there).  For kind == P the
/// solved root mu of the gluing equation must be supplied.
Region classify(const DomainPoint& x, const BellmanParams& params,
                CandidateKind kind, std::optional<double> mu = std::nullopt);

/// True iff all n equally spaced sample points of segment [a, b] lie in
/// Omega_eps.  Requires n >= 2.
bool segment_in_domain(const DomainPoint& a, const DomainPoint& b,
                       const BellmanParams& params, int n);

}  // namespace bellman
