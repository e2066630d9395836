#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bellman/quadrature.hpp"
#include "bellman/types.hpp"

namespace bellman {

/// One piece of a test function on (0, 1): a constant, or a logarithmic
/// ramp value(t) = base + scale * ln((t - origin) / width).  The width is
/// signed so that both ramp orientations are a single shape; the invariant
/// is (t - origin) / width > 0 on the interior of (lo, hi).
struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    bool is_const = true;
    double v = 0.0;      // constant value
    double base = 0.0;   // ramp parameters
    double scale = 0.0;
    double origin = 0.0;
    double width = 1.0;

    static Piece constant(double lo, double hi, double v);
    static Piece log_ramp(double lo, double hi, double base, double scale,
                          double origin, double width);
    double value(double t) const;
};

/// A test function on (0, 1): ordered pieces tiling the interval.
struct PiecewiseFn {
    std::vector<Piece> pieces;

    PiecewiseFn() = default;
    explicit PiecewiseFn(std::vector<Piece> ps);
    double value(double t) const;
    std::vector<double> breakpoints() const;  // 0, piece ends, 1
};

/// First and second averages of a function over a subinterval of (0, 1).
struct BellmanPoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double c = 0.0;
    double d = 1.0;
};

/// Exact analytic averages over (c, d).
BellmanPoint moments(const PiecewiseFn& phi, double c, double d);

/// <phi^2> - <phi>^2 over (c, d).
double oscillation(const PiecewiseFn& phi, double c, double d);

/// <|phi|^p> over (c, d).  Ramp pieces are reduced by the substitution
/// s = ln((t-origin)/width) to integrals of |base + scale s|^p e^s; the
/// unbounded tail (when an endpoint sits on the ramp origin) is evaluated
/// through the incomplete gamma function, the rest by quadrature split at
/// the zero of the argument.
double p_mean(const PiecewiseFn& phi, double p, double c, double d,
              const QuadratureConfig& cfg = {});

/// <e^{|phi|}> over (c, d).  Requires |scale| < 1 on any ramp whose origin
/// touches the integration range (otherwise the integral diverges).
double exp_abs_mean(const PiecewiseFn& phi, double c, double d,
                    const QuadratureConfig& cfg = {});

struct BmoResult {
    double norm = 0.0;
    double witness_c = 0.0;
    double witness_d = 1.0;
};

/// sup over subintervals (c, d) of sqrt(<phi^2> - <phi>^2), located by
/// searching all breakpoint pairs and refining each endpoint within its
/// piece by golden section.  The value is a certified lower bound with
/// accuracy around 1e-6 in the configurations that occur here.
BmoResult bmo_norm(const PiecewiseFn& phi);

/// Pointwise clamp of phi to [c, d]; non-finite bounds mean "no cut" on
/// that side.  Ramp crossings are solved in closed form and pieces re-split.
PiecewiseFn cutoff(const PiecewiseFn& phi, double c, double d);

/// Time-rescaled concatenation onto (0, 1); weights must sum to 1.
PiecewiseFn concat(const std::vector<std::pair<PiecewiseFn, double>>& parts);

/// phi + delta (pointwise).
PiecewiseFn shift_values(const PiecewiseFn& phi, double delta);

/// -phi (pointwise).
PiecewiseFn negate(const PiecewiseFn& phi);

/// Extremal test function attaining the candidate value at x: region-matched
/// two-step, chord, tangent-ramp or transition construction.  It satisfies
/// moments = x, BMO norm <= eps, and <|phi|^p> = eval_global(x, kind).
PiecewiseFn make_optimizer(const DomainPoint& x, const BellmanParams& params,
                           CandidateKind kind);

/// The three canonical extremizers for the point (0, eps^2):
/// phi1 = +-eps half-and-half, phi2 = eps log(4t) / 0 / -eps log(4-4t),
/// phi3 = -2eps, 0, 2eps on eighths.
std::array<PiecewiseFn, 3> canonical_extremizers(const BellmanParams& params);

/// Equal-width step function on (0, 1).
PiecewiseFn step_function(const std::vector<double>& values);

/// JSON round-trip of the piece list.
std::string to_json_string(const PiecewiseFn& phi);
PiecewiseFn from_json_string(const std::string& text);

}  // namespace bellman
