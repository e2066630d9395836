#include "bellman/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "bellman/candidates.hpp"
#include "bellman/geometry.hpp"
#include "bellman/quadrature.hpp"

#include "json.hpp"

namespace bellman {

namespace {

DomainPoint sample_point(std::mt19937_64& rng, const BellmanParams& params,
                         double x1_range) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double x1 = (2.0 * u01(rng) - 1.0) * x1_range;
    const double x2 = x1 * x1 + u01(rng) * params.eps * params.eps;
    return {x1, x2};
}

}  // namespace

ConcavityReport midpoint_concavity(const BellmanParams& params,
                                   CandidateKind kind, bool concave,
                                   int trials, std::uint64_t seed) {
    require_kind_valid(kind, params.p);
    std::mt19937_64 rng(seed);
    ConcavityReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.worst_slack = trials > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double sense = concave ? 1.0 : -1.0;
    const double range = 3.0 * params.eps;

    for (int t = 0; t < trials; ++t) {
        DomainPoint a, b;
        int guard = 0;
        do {
            a = sample_point(rng, params, range);
            b = sample_point(rng, params, range);
            if (++guard > 10000)
                throw std::runtime_error("midpoint_concavity: sampling stalled");
        } while (!segment_in_domain(a, b, params, 33));
        const DomainPoint mid{0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)};
        const double gm = eval_global(mid, params, kind);
        const double ga = eval_global(a, params, kind);
        const double gb = eval_global(b, params, kind);
        const double slack = sense * (gm - 0.5 * (ga + gb));
        rep.worst_slack = std::min(rep.worst_slack, slack);
        if (slack < -1e-8) {
            ++rep.violations;
            if (rep.violation_samples.size() < 10) rep.violation_samples.push_back(mid);
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

TrajectoryReport trajectory_linearity(const BellmanParams& params,
                                      CandidateKind kind,
                                      const DomainPoint& x) {
    require_kind_valid(kind, params.p);
    if (!contains(x, params))
        throw std::domain_error("trajectory_linearity: point outside Omega_eps");
    const double e = params.eps;
    const DomainPoint xa{std::abs(x.x1), x.x2};
    std::optional<double> mu;
    if (kind == CandidateKind::P) mu = cached_mu(params.p);
    const Region r = classify(xa, params, kind, mu);

    DomainPoint A, B;
    switch (r.kind) {
        case BlockKind::T:
            throw std::invalid_argument(
                "trajectory_linearity: T region is linear, trajectory not unique");
        case BlockKind::L0:
            A = {-std::sqrt(xa.x2), xa.x2};
            B = {std::sqrt(xa.x2), xa.x2};
            break;
        case BlockKind::La: {
            const double v = r.a + r.side * e;
            if (std::abs(xa.x1 - v) < 1e-12)
                throw std::invalid_argument("trajectory_linearity: corner point");
            const double u = (xa.x2 - v * xa.x1) / (xa.x1 - v);
            A = {v, v * v};
            B = {u, u * u};
            break;
        }
        case BlockKind::FPlus: {
            const double u = u_plus(xa, params);
            const double a = u - e;
            A = {a, a * a + e * e};
            B = {u, u * u};
            break;
        }
        case BlockKind::FMinus: {
            const double u = u_minus(xa, params);
            const double a = u + e;
            A = {u, u * u};
            B = {a, a * a + e * e};
            break;
        }
        case BlockKind::LowerBoundary:
            throw std::invalid_argument("trajectory_linearity: boundary point");
    }

    const int n = 20;
    const double inset = 0.02;
    std::vector<DomainPoint> pts(n);
    std::vector<double> vals(n);
    for (int k = 0; k < n; ++k) {
        const double t = inset + (1.0 - 2.0 * inset) * k / (n - 1);
        pts[k] = {A.x1 + t * (B.x1 - A.x1), A.x2 + t * (B.x2 - A.x2)};
        vals[k] = eval_global(pts[k], params, kind);
    }
    TrajectoryReport rep;
    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / (n - 1);
        const double lerp = vals[0] + t * (vals[n - 1] - vals[0]);
        rep.max_affine_dev = std::max(rep.max_affine_dev, std::abs(vals[k] - lerp));
    }

    const double h = 1e-5;
    TangentData ref = tangent_data(pts[n / 2], params, kind, h);
    for (int k : {4, 9, 15}) {
        const TangentData td = tangent_data(pts[k], params, kind, h);
        rep.max_tangent_dev = std::max(
            {rep.max_tangent_dev, std::abs(td.t1 - ref.t1), std::abs(td.t2 - ref.t2)});
    }
    rep.pass = rep.max_affine_dev <= 1e-8 && rep.max_tangent_dev <= 1e-6;
    return rep;
}

InductionReport induction_engine(const PiecewiseFn& phi,
                                 const BellmanParams& params,
                                 CandidateKind kind, BellmanSide side,
                                 int depth, double delta) {
    require_kind_valid(kind, params.p);
    if (depth < 1 || depth > 14)
        throw std::invalid_argument("induction_engine: depth must be in [1, 14]");
    if (!(delta > params.eps))
        throw std::invalid_argument("induction_engine: need delta > eps");
    if (bmo_norm(phi).norm > params.eps + 1e-9)
        throw std::invalid_argument("induction_engine: test function exceeds the eps-ball");

    const BellmanParams gp(delta, params.p);
    InductionReport rep;
    rep.levels.assign(depth + 1, 0.0);

    std::function<void(double, double, int)> walk = [&](double c, double d,
                                                        int level) {
        const BellmanPoint bp = moments(phi, c, d);
        const DomainPoint xp{bp.x1, std::max(bp.x2, bp.x1 * bp.x1)};
        rep.levels[level] += (d - c) * eval_global(xp, gp, kind);
        if (level == depth) return;

        double split = -1.0;
        for (int k = 0; k <= 80; ++k) {
            const int step = (k + 1) / 2;
            const int sgn = (k % 2 == 1) ? 1 : -1;
            const double alpha = 0.50 + 0.01 * (k == 0 ? 0 : sgn * step);
            const double m = c + (1.0 - alpha) * (d - c);
            const BellmanPoint l = moments(phi, c, m);
            const BellmanPoint r = moments(phi, m, d);
            if (segment_in_domain({l.x1, l.x2}, {r.x1, r.x2}, gp, 33)) {
                split = m;
                break;
            }
        }
        if (split < 0.0)
            throw std::runtime_error(
                "induction_engine: no admissible split (delta too close to eps)");
        walk(c, split, level + 1);
        walk(split, d, level + 1);
    };
    walk(0.0, 1.0, 0);

    rep.monotone = true;
    for (int k = 0; k < depth; ++k) {
        const double diff = rep.levels[k + 1] - rep.levels[k];
        if (side == BellmanSide::Upper ? diff > 1e-9 : diff < -1e-9)
            rep.monotone = false;
    }
    rep.p_mean_value = p_mean(phi, params.p, 0.0, 1.0);
    const double terminal = rep.levels[depth];
    rep.terminal_ok = side == BellmanSide::Upper
                          ? terminal >= rep.p_mean_value - 1e-6
                          : terminal <= rep.p_mean_value + 1e-6;
    rep.pass = rep.monotone && rep.terminal_ok;
    return rep;
}

namespace {

// Largest oscillation over breakpoint-aligned subintervals of an
// equal-width step function (prefix sums, O(n^2) pairs).
double aligned_osc_max(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        s1[i + 1] = s1[i] + v[i];
        s2[i + 1] = s2[i] + v[i] * v[i];
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const double len = j - i;
            const double m1 = (s1[j] - s1[i]) / len;
            const double m2 = (s2[j] - s2[i]) / len;
            best = std::max(best, m2 - m1 * m1);
        }
    }
    return best;
}

}  // namespace

double brute_force_sup(const DomainPoint& x, const BellmanParams& params,
                       int n_steps, BellmanSide side, long budget,
                       std::uint64_t seed) {
    if (!contains(x, params))
        throw std::domain_error("brute_force_sup: point outside Omega_eps");
    if (n_steps < 2 || n_steps > 16)
        throw std::invalid_argument("brute_force_sup: n_steps must be in [2, 16]");
    const double p = params.p;
    const double eps = params.eps;
    const double var = x.x2 - x.x1 * x.x1;
    if (var <= 1e-12) return std::pow(std::abs(x.x1), p);

    const int n = n_steps;
    const double sign = side == BellmanSide::Upper ? 1.0 : -1.0;
    const double osc_cap = (eps + 1e-8) * (eps + 1e-8) + 1e-13;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    auto objective = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double vi : v) s += std::pow(std::abs(vi), p);
        return s / n;
    };
    auto project = [&](std::vector<double>& v) {
        double m = 0.0, q = 0.0;
        for (double vi : v) {
            m += vi;
            q += vi * vi;
        }
        m /= n;
        q /= n;
        const double vv = q - m * m;
        if (vv <= 1e-300) return false;
        const double b = std::sqrt(var / vv);
        for (double& vi : v) vi = x.x1 + b * (vi - m);
        return true;
    };
    auto certified = [&](const std::vector<double>& v) {
        return bmo_norm(step_function(v)).norm <= eps + 1e-8;
    };

    // deterministic structured starts, then random restarts
    std::vector<std::vector<double>> starts;
    {
        const double r = std::sqrt(x.x2);
        const double alpha = 0.5 * (1.0 - x.x1 / r);
        int k = std::clamp(static_cast<int>(std::lround(alpha * n)), 1, n - 1);
        std::vector<double> two(n, r);
        for (int i = 0; i < k; ++i) two[i] = -r;
        starts.push_back(two);

        const int k3 = std::max(1, n / 8);
        const double amp = std::sqrt(var * n / (2.0 * k3));
        std::vector<double> three(n, x.x1);
        for (int i = 0; i < k3; ++i) {
            three[i] = x.x1 - amp;
            three[n - 1 - i] = x.x1 + amp;
        }
        starts.push_back(three);

        std::vector<double> stair(n, x.x1);
        for (int i = 0; i < n; ++i) {
            const double t = (i + 0.5) / n;
            if (t < 0.25)
                stair[i] = x.x1 + eps * std::log(4.0 * t);
            else if (t > 0.75)
                stair[i] = x.x1 - eps * std::log(4.0 - 4.0 * t);
        }
        starts.push_back(stair);
        std::vector<double> rstair(stair.rbegin(), stair.rend());
        starts.push_back(rstair);
    }
    const int n_starts = 8;
    const long share = std::max(budget / n_starts, 1L);

    double best = std::nan("");
    long evals = 0;
    for (int s = 0; s < n_starts && evals < budget; ++s) {
        std::vector<double> v;
        if (s < static_cast<int>(starts.size())) {
            v = starts[s];
        } else {
            v.assign(n, 0.0);
            for (double& vi : v) vi = x.x1 + eps * normal(rng);
        }
        if (!project(v)) continue;
        bool cur_ok = aligned_osc_max(v) <= osc_cap;
        double cur = objective(v);
        ++evals;
        if (cur_ok && (std::isnan(best) || sign * (cur - best) > 0.0) && certified(v))
            best = cur;

        double temp = 0.6 * eps;
        const double decay = std::pow(0.02 / 0.6, 1.0 / share);
        for (long it = 0; it < share && evals < budget; ++it) {
            std::vector<double> w = v;
            const int nmut = 1 + static_cast<int>(rng() % 3);
            for (int j = 0; j < nmut; ++j)
                w[rng() % n] += temp * normal(rng);
            temp *= decay;
            if (!project(w)) continue;
            ++evals;
            if (aligned_osc_max(w) > osc_cap) continue;
            const double val = objective(w);
            if (!cur_ok || sign * (val - cur) > -1e-12) {
                v = w;
                cur = val;
                cur_ok = true;
                if ((std::isnan(best) || sign * (val - best) > 0.0) && certified(w))
                    best = val;
            }
        }
    }
    if (std::isnan(best))
        throw std::runtime_error("brute_force_sup: no feasible step function found");
    return best;
}

double p_oscillation_norm(const PiecewiseFn& phi, double p) {
    auto posc = [&](double c, double d) -> double {
        if (d - c < 1e-9) return -1.0;
        const BellmanPoint bp = moments(phi, c, d);
        return p_mean(shift_values(phi, -bp.x1), p, c, d);
    };
    double best = 0.0;
    const std::vector<double> bp = phi.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i)
        for (std::size_t j = i + 1; j < bp.size(); ++j)
            best = std::max(best, posc(bp[i], bp[j]));

    const double gr = 0.6180339887498949;
    const auto& ps = phi.pieces;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i; j < ps.size(); ++j) {
            double c = ps[i].lo, d = ps[j].hi;
            double local = posc(c, d);
            for (int sweep = 0; sweep < 2; ++sweep) {
                // golden sweep in c, then in d
                double a = ps[i].lo, b = std::min(ps[i].hi, d - 1e-9);
                for (int it = 0; it < 14 && b > a; ++it) {
                    const double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
                    if (posc(c1, d) < posc(c2, d))
                        a = c1;
                    else
                        b = c2;
                }
                if (b > ps[i].lo) c = 0.5 * (a + b);
                a = std::max(ps[j].lo, c + 1e-9);
                b = ps[j].hi;
                for (int it = 0; it < 14 && b > a; ++it) {
                    const double d1 = b - gr * (b - a), d2 = a + gr * (b - a);
                    if (posc(c, d1) < posc(c, d2))
                        a = d1;
                    else
                        b = d2;
                }
                if (b > std::max(ps[j].lo, c + 1e-9)) d = 0.5 * (a + b);
                local = std::max(local, posc(c, d));
            }
            best = std::max(best, local);
        }
    }
    return std::pow(best, 1.0 / p);
}

TheoremReport check_theorems(const PiecewiseFn& phi, double p1, double p2) {
    const double norm = bmo_norm(phi).norm;
    if (!(norm > 0.0))
        throw std::invalid_argument("check_theorems: BMO norm must be positive");
    const BellmanPoint m = moments(phi, 0.0, 1.0);
    const double var = m.x2 - m.x1 * m.x1;
    const PiecewiseFn centered = shift_values(phi, -m.x1);
    auto osc_p = [&](double p) { return p_mean(centered, p, 0.0, 1.0); };

    TheoremReport rep;
    auto push = [&](const std::string& name, double lhs, double rhs, double rel_tol) {
        TheoremCheck c;
        c.name = name;
        c.lhs = lhs;
        c.rhs = rhs;
        c.margin = rhs - lhs;
        c.ok = lhs <= rhs * (1.0 + rel_tol) + 1e-12;
        rep.checks.push_back(c);
    };

    for (double p : {p1, p2}) {
        const double val = osc_p(p);
        double lower, upper;
        if (p <= 1.0) {
            lower = std::pow(2.0, p - 2.0) * std::pow(norm, p - 2.0) * var;
            upper = std::pow(var, p / 2.0);
        } else if (p <= 2.0) {
            lower = 0.5 * p * gamma_fn(p) * std::pow(norm, p - 2.0) * var;
            upper = std::pow(var, p / 2.0);
        } else {
            lower = std::pow(var, p / 2.0);
            upper = 0.5 * p * gamma_fn(p) * std::pow(norm, p - 2.0) * var;
        }
        push("osc_lower(p=" + std::to_string(p) + ")", lower, val, 1e-9);
        push("osc_upper(p=" + std::to_string(p) + ")", val, upper, 1e-9);
    }

    for (double p : {p1, p2}) {
        const double normp = p_oscillation_norm(phi, p);
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
        push("norm_lower(p=" + std::to_string(p) + ")", cp * norm, normp, 1e-6);
        push("norm_upper(p=" + std::to_string(p) + ")", normp, Cp * norm, 1e-6);
    }

    if (p1 >= 1.0 && p1 <= 2.0 && p2 >= 2.0) {
        const double a = osc_p(p1);
        const double b = osc_p(p2);
        push("pp_lower", std::pow(a, p2 / p1), b, 1e-9);
        push("pp_upper", b,
             p2 * gamma_fn(p2) / (p1 * gamma_fn(p1)) * std::pow(norm, p2 - p1) * a,
             1e-9);
    }

    if (norm < 1.0) {
        const double emean = exp_abs_mean(centered, 0.0, 1.0);
        push("exp_bound", emean, (1.0 - 0.5 * norm * norm) / (1.0 - norm), 1e-9);
    }

    rep.pass = true;
    for (const TheoremCheck& c : rep.checks) rep.pass = rep.pass && c.ok;
    return rep;
}

std::vector<Polyline> foliation_trace(const BellmanParams& params,
                                      CandidateKind kind, int n_lines) {
    if (n_lines < 1)
        throw std::invalid_argument("foliation_trace: n_lines must be >= 1");
    require_kind_valid(kind, params.p);
    const double e = params.eps;
    std::vector<Polyline> lines;
    int id = 0;
    auto add = [&](DomainPoint a, DomainPoint b) {
        Polyline pl;
        pl.id = id++;
        const int m = 16;
        for (int k = 0; k <= m; ++k) {
            const double t = static_cast<double>(k) / m;
            pl.points.push_back({a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)});
        }
        lines.push_back(std::move(pl));
    };
    auto add_mirrored = [&](DomainPoint a, DomainPoint b) {
        add(a, b);
        add({-a.x1, a.x2}, {-b.x1, b.x2});
    };
    auto right_tangent = [&](double u) {  // from tangency point down to (u, u^2)
        const double a = u - e;
        add_mirrored({a, a * a + e * e}, {u, u * u});
    };
    auto horizontal = [&](double x2) {
        add({-std::sqrt(x2), x2}, {std::sqrt(x2), x2});
    };

    switch (kind) {
        case CandidateKind::M:
            for (int k = 1; k <= n_lines; ++k)
                horizontal(e * e * k / (n_lines + 1.0));
            for (int k = 1; k <= n_lines; ++k)
                right_tangent(e * (1.0 + 3.0 * k / n_lines));
            break;
        case CandidateKind::N:
            add_mirrored({0.0, 0.0}, {e, 2.0 * e * e});  // transition boundary
            for (int k = 1; k <= n_lines; ++k) {
                const double u = 3.0 * e * k / n_lines;
                add_mirrored({u, u * u}, {u + e, (u + e) * (u + e) + e * e});
            }
            break;
        case CandidateKind::P: {
            const double xi = cached_mu(params.p) * e;
            for (int k = 1; k <= n_lines; ++k)
                horizontal(e * e * k / (n_lines + 1.0));
            for (int k = 1; k <= n_lines; ++k)
                right_tangent(e + (xi - e) * k / (n_lines + 1.0));
            add_mirrored({xi - e, (xi - e) * (xi - e) + e * e}, {xi, xi * xi});
            add_mirrored({xi, xi * xi}, {xi + e, (xi + e) * (xi + e) + e * e});
            for (int k = 1; k <= n_lines; ++k) {
                const double u = xi + 3.0 * e * k / n_lines;
                add_mirrored({u, u * u}, {u + e, (u + e) * (u + e) + e * e});
            }
            break;
        }
        case CandidateKind::R:
            add_mirrored({0.0, 0.0}, {e, 2.0 * e * e});
            for (int k = 1; k <= n_lines; ++k) {
                const double u = 2.0 * e * k / (n_lines + 1.0);
                add_mirrored({0.0, 0.0}, {u, u * u});
            }
            for (int k = 1; k <= n_lines; ++k)
                right_tangent(2.0 * e + 3.0 * e * k / n_lines);
            break;
    }
    return lines;
}

std::string to_json_string(const ConcavityReport& r, const std::string& name) {
    nlohmann::json viol = nlohmann::json::array();
    for (const DomainPoint& v : r.violation_samples)
        viol.push_back({{"x1", v.x1}, {"x2", v.x2}});
    return nlohmann::json{{"name", name},
                          {"trials", r.trials},
                          {"violations", viol},
                          {"violation_count", r.violations},
                          {"worst_slack", r.worst_slack},
                          {"seed", r.seed},
                          {"pass", r.pass}}
        .dump();
}

std::string to_json_string(const InductionReport& r, const std::string& name) {
    return nlohmann::json{{"name", name},
                          {"levels", r.levels},
                          {"p_mean", r.p_mean_value},
                          {"monotone", r.monotone},
                          {"terminal_ok", r.terminal_ok},
                          {"pass", r.pass}}
        .dump();
}

std::string to_json_string(const TheoremReport& r, const std::string& name) {
    nlohmann::json checks = nlohmann::json::array();
    for (const TheoremCheck& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"lhs", c.lhs},
                          {"rhs", c.rhs},
                          {"margin", c.margin},
                          {"ok", c.ok}});
    return nlohmann::json{{"name", name}, {"checks", checks}, {"pass", r.pass}}.dump();
}

}  // namespace bellman
