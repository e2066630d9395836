#pragma once

#include <optional>

#include "bellman/geometry.hpp"
#include "bellman/types.hpp"

namespace bellman {

/// Affine data of a candidate along an extremal trajectory:
/// t1 = G_{x1}, t2 = G_{x2}, t0 = G - t1 x1 - t2 x2.
struct TangentData {
    double t1 = 0.0;
    double t2 = 0.0;
    double t0 = 0.0;
};

/// Throws unless p is admissible for the candidate: M, N need p >= 1;
/// P needs 0 < p < 1; R needs 0 < p <= 1.
void require_kind_valid(CandidateKind kind, double p);

/// L0(x) = x2^{p/2} on Omega_L(0) = { x2 <= eps^2 }.
double eval_L0(const DomainPoint& x, const BellmanParams& params);

/// Chord value on Omega_L(a): with v = a + side*eps and
/// u = (x2 - v x1)/(x1 - v),
/// returns ((f(v)-f(u))/(v-u)) (x1 - v) + f(v), f(s) = |s|^p.
double eval_Lpm(const DomainPoint& x, double a, int side,
                const BellmanParams& params);

/// Right-tangent block value m+(u; u1) (x1 - u) + |u|^p for finite u1; the
/// u1 = -inf variant uses the incomplete-gamma slope and lives in x1 <= 0.
double eval_Fplus(const DomainPoint& x, const ExtReal& u1,
                  const BellmanParams& params);

/// Left-tangent block value; u2 = +inf uses m-(u; inf), finite u2 the
/// two-point slope m-(u; u2).
double eval_Fminus(const DomainPoint& x, const ExtReal& u2,
                   const BellmanParams& params);

/// Linear transition value on Omega_T(u).  For u = 0 the slope alpha comes
/// from the surrounding global candidate and must be supplied; for u > 0
/// the coefficients are derived from m-(u; inf).
double eval_T(const DomainPoint& x, double u, std::optional<double> alpha,
              const BellmanParams& params);

/// Value of the global candidate at x (symmetric in x1).
double eval_global(const DomainPoint& x, const BellmanParams& params,
                   CandidateKind kind);

/// The Bellman function itself: dispatches the candidate per the range of p
/// (p >= 2: upper N / lower M; 1 <= p < 2: upper M / lower N;
///  0 < p < 1: upper P / lower R; p = 2: both equal x2).
double bellman_value(const DomainPoint& x, const BellmanParams& params,
               BellmanSide side);

/// Central finite-difference gradient of eval_global and the affine
/// intercept.  The +-h stencil must stay inside the region of x.
TangentData tangent_data(const DomainPoint& x, const BellmanParams& params,
                         CandidateKind kind, double h);

/// Closed forms for p = 1 used as cross-checks.
double closed_form_M_p1(const DomainPoint& x, double eps);
double closed_form_N_p1(const DomainPoint& x, double eps);

}  // namespace bellman
