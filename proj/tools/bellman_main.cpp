// Command-line surface: candidate evaluation, the gluing-root solve,
// optimizer construction, verification suites and foliation export.
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellman/candidates.hpp"
#include "bellman/geometry.hpp"
#include "bellman/piecewise.hpp"
#include "bellman/quadrature.hpp"
#include "bellman/verify.hpp"

namespace {

using nlohmann::json;

bellman::CandidateKind parse_kind(const std::string& s) {
    if (s == "M") return bellman::CandidateKind::M;
    if (s == "N") return bellman::CandidateKind::N;
    if (s == "P") return bellman::CandidateKind::P;
    if (s == "R") return bellman::CandidateKind::R;
    throw CLI::ValidationError("kind must be one of M, N, P, R");
}

bellman::BellmanSide parse_side(const std::string& s) {
    if (s == "upper") return bellman::BellmanSide::Upper;
    if (s == "lower") return bellman::BellmanSide::Lower;
    throw CLI::ValidationError("which must be upper or lower");
}

json constants_for_p(double p) {
    using bellman::gamma_fn;
    json out;
    out["p"] = p;
    out["half_p_gamma_p"] = 0.5 * p * gamma_fn(p);
    out["half_p_gamma_p_root"] = std::pow(0.5 * p * gamma_fn(p), 1.0 / p);
    out["two_power"] = std::pow(2.0, 1.0 - 2.0 / p);
    double cp, Cp;
    if (p <= 1.0) {
        cp = std::pow(2.0, 1.0 - 2.0 / p);
        Cp = 1.0;
    } else if (p <= 2.0) {
        cp = std::pow(0.5 * p * gamma_fn(p), 1.0 / p);
        Cp = 1.0;
    } else {
        cp = 1.0;
        Cp = std::pow(0.5 * p * gamma_fn(p), 1.0 / p);
    }
    out["norm_equiv_lower"] = cp;
    out["norm_equiv_upper"] = Cp;
    return out;
}

json jn_bounds(double eps) {
    json out;
    out["eps"] = eps;
    out["jn_lower"] = (1.0 - 0.5 * eps) / (1.0 - eps);
    out["jn_upper"] = (1.0 - 0.5 * eps * eps) / (1.0 - eps);
    // the series 1 + eps + (1/2) sum_{k>=2} eps^k, summed to convergence
    double series = 1.0 + eps;
    double term = eps;
    for (int k = 2; k < 10000; ++k) {
        term *= eps;
        series += 0.5 * term;
        if (term < 1e-18) break;
    }
    out["jn_upper_series"] = series;
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Sharp L^p bounds on the BMO ball: candidate evaluation and checks"};
    app.require_subcommand(1);

    double p = 1.0, eps = 1.0, x1 = 0.0, x2 = 0.0, delta = 0.0;
    std::string which = "upper", kind_name, format = "json", file_path;
    int trials = 2000, depth = 10, n_steps = 16, samples = 0, n_lines = 8;
    long budget = 20000;
    std::uint64_t seed = 1;

    auto* eval =
        app.add_subcommand("eval", "evaluate the upper/lower function or a candidate");
    eval->add_option("--p", p)->required();
    eval->add_option("--eps", eps)->required();
    eval->add_option("--x1", x1)->required();
    eval->add_option("--x2", x2)->required();
    eval->add_option("--which", which);
    eval->add_option("--kind", kind_name);

    auto* mu = app.add_subcommand("mu", "solve the transition-abscissa equation");
    mu->add_option("--p", p)->required();

    auto* opt = app.add_subcommand("optimizer", "construct the extremal test function");
    opt->add_option("--p", p)->required();
    opt->add_option("--eps", eps)->required();
    opt->add_option("--x1", x1)->required();
    opt->add_option("--x2", x2)->required();
    opt->add_option("--kind", kind_name)->required();
    opt->add_option("--samples", samples);
    opt->add_option("--format", format);

    auto* norm = app.add_subcommand("norm", "BMO norm of a piecewise function file");
    norm->add_option("--file", file_path)->required();

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify->add_option("suite", suite,
                       "concavity|trajectories|induction|theorems|all");
    verify->add_option("--p", p)->required();
    verify->add_option("--eps", eps);
    verify->add_option("--trials", trials);
    verify->add_option("--seed", seed);
    verify->add_option("--depth", depth);
    verify->add_option("--delta", delta);

    auto* oracle = app.add_subcommand("oracle", "projected local search over step functions");
    oracle->add_option("--p", p)->required();
    oracle->add_option("--eps", eps)->required();
    oracle->add_option("--x1", x1)->required();
    oracle->add_option("--x2", x2)->required();
    oracle->add_option("--which", which)->required();
    oracle->add_option("--n-steps", n_steps);
    oracle->add_option("--budget", budget);
    oracle->add_option("--seed", seed);

    auto* consts = app.add_subcommand("constants", "sharp constants and exponential bounds");
    double cp = 0.0, ceps = 0.0;
    consts->add_option("--p", cp);
    consts->add_option("--eps", ceps);

    auto* fol = app.add_subcommand("foliation", "export extremal trajectories");
    fol->add_option("--p", p)->required();
    fol->add_option("--eps", eps)->required();
    fol->add_option("--kind", kind_name)->required();
    fol->add_option("--lines", n_lines);
    fol->add_option("--format", format);

    CLI11_PARSE(app, argc, argv);

    if (eval->parsed()) {
        const bellman::BellmanParams params(eps, p);
        const bellman::DomainPoint x{x1, x2};
        double value;
        if (!kind_name.empty())
            value = bellman::eval_global(x, params, parse_kind(kind_name));
        else
            value = bellman::bellman_value(x, params, parse_side(which));
        std::cout << json{{"value", value}}.dump() << "\n";
        return 0;
    }

    if (mu->parsed()) {
        const bellman::MuSolution sol = bellman::solve_mu(bellman::BellmanParams(1.0, p));
        std::cout << json{{"mu", sol.mu},
                          {"residual", sol.residual},
                          {"iterations", sol.iterations}}
                         .dump()
                  << "\n";
        return 0;
    }

    if (opt->parsed()) {
        const bellman::BellmanParams params(eps, p);
        const bellman::PiecewiseFn phi =
            bellman::make_optimizer({x1, x2}, params, parse_kind(kind_name));
        if (format == "csv" || samples > 0) {
            const int m = samples > 0 ? samples : 256;
            std::cout << "t,value\n";
            for (int k = 0; k < m; ++k) {
                const double t = (k + 0.5) / m;
                std::cout << t << "," << phi.value(t) << "\n";
            }
        } else {
            std::cout << bellman::to_json_string(phi) << "\n";
        }
        return 0;
    }

    if (norm->parsed()) {
        std::ifstream in(file_path);
        if (!in) throw CLI::ValidationError("cannot open " + file_path);
        std::stringstream buf;
        buf << in.rdbuf();
        const bellman::PiecewiseFn phi = bellman::from_json_string(buf.str());
        const bellman::BmoResult r = bellman::bmo_norm(phi);
        std::cout << json{{"bmo_norm", r.norm},
                          {"witness", {r.witness_c, r.witness_d}}}
                         .dump()
                  << "\n";
        return 0;
    }

    if (oracle->parsed()) {
        const bellman::BellmanParams params(eps, p);
        const double value = bellman::brute_force_sup({x1, x2}, params, n_steps,
                                                      parse_side(which), budget, seed);
        std::cout << json{{"value", value},
                          {"n_steps", n_steps},
                          {"budget", budget},
                          {"seed", seed}}
                         .dump()
                  << "\n";
        return 0;
    }

    if (consts->parsed()) {
        if (cp > 0.0) {
            std::cout << constants_for_p(cp).dump() << "\n";
            return 0;
        }
        if (ceps > 0.0 && ceps < 1.0) {
            std::cout << jn_bounds(ceps).dump() << "\n";
            return 0;
        }
        throw CLI::ValidationError("constants needs --p, or --eps in (0, 1)");
    }

    if (fol->parsed()) {
        const bellman::BellmanParams params(eps, p);
        const auto lines =
            bellman::foliation_trace(params, parse_kind(kind_name), n_lines);
        std::cout << "line_id,x1,x2\n";
        for (const auto& pl : lines)
            for (const auto& pt : pl.points)
                std::cout << pl.id << "," << pt.x1 << "," << pt.x2 << "\n";
        return 0;
    }

    if (verify->parsed()) {
        using namespace bellman;
        const BellmanParams params(eps, p);
        if (delta <= 0.0) delta = 1.05 * eps;
        bool all_pass = true;
        json results = json::array();

        const bool high = p >= 1.0;
        struct Run {
            CandidateKind kind;
            bool concave;
        };
        std::vector<Run> runs;
        if (high) {
            runs.push_back({CandidateKind::M, p <= 2.0});
            runs.push_back({CandidateKind::N, p >= 2.0});
        } else {
            runs.push_back({CandidateKind::P, true});
            runs.push_back({CandidateKind::R, false});
        }

        if (suite == "concavity" || suite == "all") {
            for (const Run& r : runs) {
                const ConcavityReport rep =
                    midpoint_concavity(params, r.kind, r.concave, trials, seed);
                all_pass = all_pass && rep.pass;
                results.push_back(json::parse(to_json_string(
                    rep, std::string("concavity_") + to_string(r.kind))));
            }
        }
        if (suite == "trajectories" || suite == "all") {
            for (const Run& r : runs) {
                const DomainPoint probe{1.3 * eps, 1.3 * 1.3 * eps * eps + 0.4 * eps * eps};
                const TrajectoryReport rep = trajectory_linearity(params, r.kind, probe);
                all_pass = all_pass && rep.pass;
                results.push_back(json{{"name", std::string("trajectory_") + to_string(r.kind)},
                                       {"max_affine_dev", rep.max_affine_dev},
                                       {"max_tangent_dev", rep.max_tangent_dev},
                                       {"pass", rep.pass}});
            }
        }
        if (suite == "induction" || suite == "all") {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            for (const Run& r : runs) {
                std::vector<double> vals(8);
                for (double& v : vals) v = 2.0 * u01(rng) - 1.0;
                PiecewiseFn phi = step_function(vals);
                const double scale = 0.9 * eps / std::max(bmo_norm(phi).norm, 1e-9);
                for (double& v : vals) v *= scale;
                phi = step_function(vals);
                const BellmanSide side =
                    r.concave ? BellmanSide::Upper : BellmanSide::Lower;
                const InductionReport rep =
                    induction_engine(phi, params, r.kind, side, depth, delta);
                all_pass = all_pass && rep.pass;
                results.push_back(json::parse(to_json_string(
                    rep, std::string("induction_") + to_string(r.kind))));
            }
        }
        if (suite == "theorems" || suite == "all") {
            const auto phis = canonical_extremizers(BellmanParams(std::min(eps, 0.9), p));
            const double p1 = std::clamp(p, 1.0, 2.0);
            const double p2 = std::max(p, 2.0);
            for (const auto& phi : phis) {
                const TheoremReport rep = check_theorems(phi, p1, p2);
                all_pass = all_pass && rep.pass;
                results.push_back(json::parse(to_json_string(rep, "theorems")));
            }
        }
        std::cout << json{{"suite", suite}, {"pass", all_pass}, {"results", results}}.dump()
                  << "\n";
        return all_pass ? 0 : 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
