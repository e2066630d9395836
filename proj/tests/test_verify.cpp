#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bellman/candidates.hpp"
#include "bellman/geometry.hpp"
#include "bellman/quadrature.hpp"
#include "bellman/verify.hpp"

using namespace bellman;

namespace {

PiecewiseFn random_bounded_steps(std::mt19937_64& rng, int n, double target_norm) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& vi : v) vi = u(rng);
    const double norm = bmo_norm(step_function(v)).norm;
    for (double& vi : v) vi *= target_norm / std::max(norm, 1e-12);
    return step_function(v);
}

}  // namespace

TEST_CASE("midpoint checks pass in the proper sense and fail flipped") {
    SUBCASE("M is midpoint-concave for p in [1,2]") {
        const ConcavityReport r =
            midpoint_concavity(BellmanParams(1.0, 1.5), CandidateKind::M, true, 2000, 1);
        CHECK(r.violations == 0);
        CHECK(r.pass);
    }
    SUBCASE("M is midpoint-convex for p >= 2, so the concave test finds violations") {
        const ConcavityReport r =
            midpoint_concavity(BellmanParams(1.0, 3.0), CandidateKind::M, true, 2000, 2);
        CHECK(r.violations > 0);
        CHECK_FALSE(r.pass);
    }
    SUBCASE("R is midpoint-convex for p <= 1") {
        const ConcavityReport r =
            midpoint_concavity(BellmanParams(1.0, 0.5), CandidateKind::R, false, 2000, 3);
        CHECK(r.violations == 0);
    }
    SUBCASE("P is midpoint-concave for p < 1") {
        const ConcavityReport r =
            midpoint_concavity(BellmanParams(1.0, 0.5), CandidateKind::P, true, 2000, 4);
        CHECK(r.violations == 0);
    }
}

TEST_CASE("trajectory linearity per block type") {
    SUBCASE("tangent block of M") {
        const TrajectoryReport r =
            trajectory_linearity(BellmanParams(1.0, 1.5), CandidateKind::M, {1.4, 2.4});
        CHECK(r.max_affine_dev <= 1e-8);
        CHECK(r.pass);
    }
    SUBCASE("chord block of R") {
        const TrajectoryReport r =
            trajectory_linearity(BellmanParams(1.0, 0.5), CandidateKind::R, {0.9, 1.2});
        CHECK(r.max_affine_dev <= 1e-8);
        CHECK(r.pass);
    }
    SUBCASE("horizontal block of M is constant") {
        const TrajectoryReport r =
            trajectory_linearity(BellmanParams(1.0, 1.5), CandidateKind::M, {0.2, 0.6});
        CHECK(r.max_affine_dev <= 1e-10);
    }
    SUBCASE("left-tangent block of P") {
        const double xi = cached_mu(0.5);
        const DomainPoint x{xi + 1.2, (xi + 1.2) * (xi + 1.2) + 0.5};
        const TrajectoryReport r =
            trajectory_linearity(BellmanParams(1.0, 0.5), CandidateKind::P, x);
        CHECK(r.pass);
    }
    SUBCASE("transition regions are rejected") {
        CHECK_THROWS_AS(trajectory_linearity(BellmanParams(1.0, 3.0),
                                             CandidateKind::N, {0.2, 0.9}),
                        std::invalid_argument);
    }
}

TEST_CASE("induction on scales") {
    SUBCASE("the two-value extremizer rides its trajectory: all levels equal") {
        const BellmanParams params(1.0, 1.5);
        const auto phi1 = canonical_extremizers(params)[0];
        const InductionReport r = induction_engine(phi1, params, CandidateKind::M,
                                                   BellmanSide::Upper, 8, 1.01);
        CHECK(r.pass);
        for (double s : r.levels)
            CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.p_mean_value == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("constants give flat aggregates at |c|^p") {
        const BellmanParams params(1.0, 1.5);
        const PiecewiseFn phi = step_function({0.3});
        const InductionReport r = induction_engine(phi, params, CandidateKind::M,
                                                   BellmanSide::Upper, 6, 1.05);
        for (double s : r.levels)
            CHECK(s == doctest::Approx(std::pow(0.3, 1.5)).epsilon(1e-12));
    }
    SUBCASE("random steps, upper run for p = 3") {
        std::mt19937_64 rng(5);
        const BellmanParams params(0.9, 3.0);
        const PiecewiseFn phi = random_bounded_steps(rng, 8, 0.9 * 0.9);
        const InductionReport r = induction_engine(phi, params, CandidateKind::N,
                                                   BellmanSide::Upper, 10, 1.05 * 0.9);
        CHECK(r.monotone);
        CHECK(r.levels.back() >= r.p_mean_value - 1e-6);
        CHECK(r.pass);
    }
    SUBCASE("preconditions") {
        const BellmanParams params(1.0, 1.5);
        const auto phi1 = canonical_extremizers(params)[0];
        CHECK_THROWS_AS(induction_engine(phi1, params, CandidateKind::M,
                                         BellmanSide::Upper, 8, 0.99),
                        std::invalid_argument);
        const auto big = canonical_extremizers(BellmanParams(1.5, 2.0))[0];
        CHECK_THROWS_AS(induction_engine(big, params, CandidateKind::M,
                                         BellmanSide::Upper, 8, 1.05),
                        std::invalid_argument);
    }
}

TEST_CASE("step-function oracle") {
    SUBCASE("on the lower boundary only constants are feasible") {
        CHECK(brute_force_sup({0.7, 0.49}, BellmanParams(1.0, 2.5), 8,
                              BellmanSide::Upper, 100, 1) ==
              doctest::Approx(std::pow(0.7, 2.5)));
    }
    SUBCASE("two-value extremizer is found exactly") {
        const double v = brute_force_sup({0.0, 1.0}, BellmanParams(1.0, 1.5),
                                         16, BellmanSide::Upper, 4000, 2);
        CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("three-value extremizer is found exactly for the lower problem") {
        const double v = brute_force_sup({0.0, 1.0}, BellmanParams(1.0, 0.5),
                                         8, BellmanSide::Lower, 4000, 3);
        CHECK(v == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-9));
    }
    SUBCASE("upper search stays below the candidate") {
        const BellmanParams params(1.0, 3.0);
        const double v = brute_force_sup({0.0, 1.0}, params, 16,
                                         BellmanSide::Upper, 20000, 4);
        CHECK(v <= bellman_value({0.0, 1.0}, params, BellmanSide::Upper) + 1e-6);
        CHECK(v >= bellman_value({0.0, 1.0}, params, BellmanSide::Lower) - 1e-6);
    }
}

TEST_CASE("theorem checks") {
    SUBCASE("ramp extremizer: exponential mean and the p1-p2 comparison") {
        const auto phi2 = canonical_extremizers(BellmanParams(0.5, 2.0))[1];
        const TheoremReport rep = check_theorems(phi2, 1.0, 3.0);
        CHECK(rep.pass);
        bool found_exp = false, found_pp = false;
        for (const TheoremCheck& c : rep.checks) {
            if (c.name == "exp_bound") {
                found_exp = true;
                CHECK(c.lhs == doctest::Approx(1.5).epsilon(1e-8));
            }
            if (c.name == "pp_upper") {
                found_pp = true;
                // attained: <|phi|^3> equals 6 ||phi||^2 <|phi|^1> exactly
                CHECK(c.margin == doctest::Approx(0.0).epsilon(1e-8).scale(1.0));
            }
        }
        CHECK(found_exp);
        CHECK(found_pp);
    }
    SUBCASE("two-value extremizer attains the upper oscillation bound") {
        const auto phi1 = canonical_extremizers(BellmanParams(0.5, 2.0))[0];
        const TheoremReport rep = check_theorems(phi1, 1.5, 3.0);
        CHECK(rep.pass);
        for (const TheoremCheck& c : rep.checks)
            if (c.name.rfind("osc_upper(p=1.5", 0) == 0)
                CHECK(c.margin == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    }
    SUBCASE("random step functions satisfy all inequalities") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            const double target = 0.05 + 0.90 * u01(rng);
            const PiecewiseFn phi =
                random_bounded_steps(rng, 4 + static_cast<int>(rng() % 5), target);
            const TheoremReport rep = check_theorems(phi, 1.5, 3.0);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("p-oscillation norm of the ramp extremizer at p = 1") {
    const auto phi2 = canonical_extremizers(BellmanParams(1.0, 2.0))[1];
    // the quarter interval next to the singular end already gives 2 eps / e
    const double n1 = p_oscillation_norm(phi2, 1.0);
    CHECK(n1 >= 2.0 / std::exp(1.0) - 1e-6);
    CHECK(n1 <= 1.0 + 1e-6);  // p-norms increase in p; the 2-norm is eps = 1
}

TEST_CASE("foliation traces stay inside the strip") {
    for (const auto& [kind, p] :
         std::vector<std::pair<CandidateKind, double>>{{CandidateKind::M, 1.5},
                                                       {CandidateKind::N, 3.0},
                                                       {CandidateKind::P, 0.5},
                                                       {CandidateKind::R, 0.5}}) {
        const BellmanParams params(0.8, p);
        const auto lines = foliation_trace(params, kind, 6);
        CHECK(lines.size() >= 6);
        for (const Polyline& pl : lines)
            for (const DomainPoint& pt : pl.points)
                CHECK(contains(pt, params));
    }
}
