#pragma once

#include <functional>

#include "bellman/types.hpp"

namespace bellman {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 200;
};

/// Adaptive 7-15 Gauss-Kronrod integration of f over the finite interval
/// [a, b].  Worst-error-first bisection; throws std::runtime_error if the
/// tolerance is not met within max_subdivisions panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// Euler Gamma(p), p > 0.
double gamma_fn(double p);

/// Upper incomplete gamma Gamma(p, x) = int_x^inf t^{p-1} e^{-t} dt.
/// Series below x = p + 1, continued fraction above.
double upper_gamma(double p, double x);

/// e^x * Gamma(p, x), evaluated without overflow for large x.
double upper_gamma_scaled(double p, double x);

/// int_lo^hi t^{p-1} e^t dt, 0 < lo <= hi.
double int_exp_pos(double p, double lo, double hi,
                   const QuadratureConfig& cfg = {});

/// int_lo^inf t^{p-1} e^{-t} dt = Gamma(p, lo).
double int_exp_neg_upper(double p, double lo);

/// Slope coefficient of the right-tangent block started at u1:
/// m+(u; u1) = e^{-u/eps} [ (u1^p - |u1-2eps|^p)/(2eps) e^{u1/eps}
///             + p eps^{p-1} int_{u1/eps}^{u/eps} t^{p-1} e^t dt ].
double m_plus(double u, double u1, const BellmanParams& params);

/// Slope coefficient of the left-tangent block ending at finite u2.
double m_minus(double u, double u2, const BellmanParams& params);

/// m-(u; inf) = p eps^{p-1} e^{u/eps} Gamma(p, u/eps).
double m_minus_inf(double u, const BellmanParams& params);

/// Concavity indicator of the right-tangent block; sign(F+_{x2x2}) =
/// sign(tau_plus).  Supported starts: u1 = eps and u1 = 2 eps.
double tau_plus(double u, double u1, const BellmanParams& params);

/// Concavity indicator of the left-tangent block with open right end:
/// tau-(u) = -p(p-1)(p-2) eps^{p-2} int_{u/eps}^inf t^{p-3} e^{-t} dt.
double tau_minus_inf(double u, const BellmanParams& params);

struct MuSolution {
    double mu = 0.0;        ///< root in (1, inf)
    double residual = 0.0;  ///< value of the gluing equation at mu
    int iterations = 0;
};

/// Residual of the gluing equation at mu:
/// h(mu) = e^{-mu} int_1^mu z^{p-1} e^z dz
///         + e^{mu} int_mu^inf z^{p-1} e^{-z} dz - 2 mu^{p-1}.
double mu_equation_residual(double p, double mu);

/// Unique root of h in (1, inf) for 0 < p < 1, |h(mu)| <= 1e-10.  Also
/// verifies the one-sided concavity condition
/// e^{-mu} int_1^mu z^{p-1} e^z dz <= mu^{p-1} + (1-p) mu^{p-2}
/// and throws if it fails at the root.  The equation is eps-free.
MuSolution solve_mu(const BellmanParams& params);

/// Memoized solve_mu keyed on p (thread-safe initialization).
double cached_mu(double p);

}  // namespace bellman
