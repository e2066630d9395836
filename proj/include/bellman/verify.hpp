#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellman/piecewise.hpp"
#include "bellman/types.hpp"

namespace bellman {

struct ConcavityReport {
    int trials = 0;
    int violations = 0;
    double worst_slack = 0.0;  ///< most negative signed midpoint gap seen
    std::uint64_t seed = 0;
    std::vector<DomainPoint> violation_samples;  ///< midpoints, up to 10
    bool pass = false;
};

/// Samples random pairs (x-, x+) whose segment lies in Omega_eps and checks
/// the midpoint inequality of the candidate in the given sense.  A trial
/// fails when the signed slack drops below -1e-8.
ConcavityReport midpoint_concavity(const BellmanParams& params,
                                   CandidateKind kind, bool concave,
                                   int trials, std::uint64_t seed);

struct TrajectoryReport {
    double max_affine_dev = 0.0;
    double max_tangent_dev = 0.0;
    bool pass = false;
};

/// Rebuilds the extremal trajectory through x from the foliation and checks
/// that the candidate is affine along it and its tangent data constant.
/// T regions are rejected (everything is linear there).
TrajectoryReport trajectory_linearity(const BellmanParams& params,
                                      CandidateKind kind,
                                      const DomainPoint& x);

struct InductionReport {
    std::vector<double> levels;  ///< S_n = sum_{I in level n} |I| G(x^I)
    double p_mean_value = 0.0;
    bool monotone = false;
    bool terminal_ok = false;
    bool pass = false;
};

/// Bellman induction on pseudo-dyadic scales: splits (0, 1) recursively so
/// each split segment stays in the enlarged strip Omega_delta, evaluates the
/// candidate at delta, and checks the per-level aggregates are monotone and
/// end on the correct side of <|phi|^p>.
InductionReport induction_engine(const PiecewiseFn& phi,
                                 const BellmanParams& params,
                                 CandidateKind kind, BellmanSide side,
                                 int depth, double delta);

/// Projected local search over n equal-width steps with the two moment
/// constraints re-imposed after every perturbation and the BMO-ball
/// constraint enforced; maximizes (upper) or minimizes (lower) <|phi|^p>.
double brute_force_sup(const DomainPoint& x, const BellmanParams& params,
                       int n_steps, BellmanSide side, long budget,
                       std::uint64_t seed);

struct TheoremCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  ///< rhs - lhs, negative means violated
    bool ok = false;
};

struct TheoremReport {
    std::vector<TheoremCheck> checks;
    bool pass = false;
};

/// Evaluates the two-sided oscillation estimates, the norm-equivalence
/// bounds, the p1 <-> p2 comparison and (for norm < 1) the integral
/// exponential bound on phi, reporting each with its margin.
TheoremReport check_theorems(const PiecewiseFn& phi, double p1, double p2);

/// sup over subintervals of <|phi - <phi>_J|^p>_J^{1/p}.
double p_oscillation_norm(const PiecewiseFn& phi, double p);

struct Polyline {
    int id = 0;
    std::vector<DomainPoint> points;
};

/// Extremal trajectories of the candidate's foliation (tangent segments,
/// chords, horizontal lines, transition boundaries), clipped to Omega_eps.
std::vector<Polyline> foliation_trace(const BellmanParams& params,
                                      CandidateKind kind, int n_lines);

/// Serialize a verification report to JSON.
std::string to_json_string(const ConcavityReport& r, const std::string& name);
std::string to_json_string(const InductionReport& r, const std::string& name);
std::string to_json_string(const TheoremReport& r, const std::string& name);

}  // namespace bellman
