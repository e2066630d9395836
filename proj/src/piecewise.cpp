#include "bellman/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "bellman/candidates.hpp"
#include "bellman/geometry.hpp"

#include "json.hpp"

namespace bellman {

namespace {

constexpr double kTileTol = 1e-12;

double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }
double xlog2x(double t) {
    if (t <= 0.0) return 0.0;
    const double l = std::log(t);
    return t * l * l;
}

}  // namespace

Piece Piece::constant(double lo, double hi, double v) {
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.is_const = true;
    p.v = v;
    return p;
}

Piece Piece::log_ramp(double lo, double hi, double base, double scale,
                      double origin, double width) {
    if (width == 0.0)
        throw std::invalid_argument("Piece::log_ramp: width must be nonzero");
    const double tau_lo = (lo - origin) / width;
    const double tau_hi = (hi - origin) / width;
    if (std::min(tau_lo, tau_hi) < -kTileTol)
        throw std::invalid_argument("Piece::log_ramp: argument not positive on the piece");
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.is_const = false;
    p.base = base;
    p.scale = scale;
    p.origin = origin;
    p.width = width;
    return p;
}

double Piece::value(double t) const {
    if (is_const) return v;
    return base + scale * std::log((t - origin) / width);
}

PiecewiseFn::PiecewiseFn(std::vector<Piece> ps) : pieces(std::move(ps)) {
    if (pieces.empty())
        throw std::invalid_argument("PiecewiseFn: empty piece list");
    if (std::abs(pieces.front().lo) > kTileTol ||
        std::abs(pieces.back().hi - 1.0) > kTileTol)
        throw std::invalid_argument("PiecewiseFn: pieces must tile (0, 1)");
    pieces.front().lo = 0.0;
    pieces.back().hi = 1.0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (!(pieces[k].hi > pieces[k].lo))
            throw std::invalid_argument("PiecewiseFn: empty piece");
        if (k + 1 < pieces.size()) {
            if (std::abs(pieces[k].hi - pieces[k + 1].lo) > kTileTol)
                throw std::invalid_argument("PiecewiseFn: gap or overlap between pieces");
            pieces[k + 1].lo = pieces[k].hi;
        }
    }
}

double PiecewiseFn::value(double t) const {
    for (const Piece& p : pieces)
        if (t <= p.hi || &p == &pieces.back()) return p.value(t);
    return pieces.back().value(t);
}

std::vector<double> PiecewiseFn::breakpoints() const {
    std::vector<double> b;
    b.push_back(0.0);
    for (const Piece& p : pieces) b.push_back(p.hi);
    return b;
}

BellmanPoint moments(const PiecewiseFn& phi, double c, double d) {
    if (!(c >= -kTileTol && d <= 1.0 + kTileTol && d - c > 1e-15))
        throw std::invalid_argument("moments: need 0 <= c < d <= 1");
    double s1 = 0.0, s2 = 0.0;
    for (const Piece& p : phi.pieces) {
        const double a = std::max(p.lo, c);
        const double b = std::min(p.hi, d);
        if (b - a <= 0.0) continue;
        if (p.is_const) {
            s1 += p.v * (b - a);
            s2 += p.v * p.v * (b - a);
        } else {
            const double ta = std::max((a - p.origin) / p.width, 0.0);
            const double tb = std::max((b - p.origin) / p.width, 0.0);
            auto f1 = [&](double t) {
                return p.base * t + p.scale * (xlogx(t) - t);
            };
            auto f2 = [&](double t) {
                return p.base * p.base * t +
                       2.0 * p.base * p.scale * (xlogx(t) - t) +
                       p.scale * p.scale * (xlog2x(t) - 2.0 * xlogx(t) + 2.0 * t);
            };
            s1 += p.width * (f1(tb) - f1(ta));
            s2 += p.width * (f2(tb) - f2(ta));
        }
    }
    BellmanPoint bp;
    bp.x1 = s1 / (d - c);
    bp.x2 = s2 / (d - c);
    bp.c = c;
    bp.d = d;
    return bp;
}

double oscillation(const PiecewiseFn& phi, double c, double d) {
    const BellmanPoint bp = moments(phi, c, d);
    return bp.x2 - bp.x1 * bp.x1;
}

namespace {

// int_{-inf}^{beta} |b + a s|^p e^s ds with a != 0 and b + a s single-signed
// on the tail: equals e^{-b/a} |a|^p Gamma(p+1, |b + a beta| / |a|).
double tail_power(double p, double b, double a, double beta) {
    const double w = std::abs(b + a * beta);
    return std::exp(-b / a) * std::pow(std::abs(a), p) *
           upper_gamma(p + 1.0, w / std::abs(a));
}

// int_{-inf}^{beta} e^{|b + a s|} e^s ds, requires |a| < 1.
double tail_exp(double b, double a, double beta) {
    const double aa = std::abs(a);
    if (aa >= 1.0 - 1e-12)
        throw std::runtime_error("exp_abs_mean: divergent ramp tail (|scale| >= 1)");
    const double w = std::abs(b + a * beta);
    return std::exp(-b / a) * std::exp(-w * (1.0 - aa) / aa) / (1.0 - aa);
}

// Shared reduction for <g(phi)> on a ramp piece clipped to (A, B): the
// substitution s = ln((t-origin)/width) turns the contribution into
// |width| * int g(base + scale*s) e^s ds, split at the zero of the argument,
// with the unbounded tail handled by `tail`.
template <class Integrand, class Tail>
double ramp_functional(const Piece& p, double A, double B, Integrand&& g,
                       Tail&& tail, const QuadratureConfig& cfg) {
    const double ta = std::max((A - p.origin) / p.width, 0.0);
    const double tb = std::max((B - p.origin) / p.width, 0.0);
    const bool a_inf = ta <= 0.0;
    const bool b_inf = tb <= 0.0;
    if (a_inf && b_inf) return 0.0;
    double s_lo, s_hi;
    bool lo_inf = false;
    if (a_inf || b_inf) {
        lo_inf = true;
        s_lo = 0.0;  // unused
        s_hi = std::log(std::max(ta, tb));
    } else {
        s_lo = std::log(std::min(ta, tb));
        s_hi = std::log(std::max(ta, tb));
    }
    std::vector<double> cuts;
    if (p.scale != 0.0) {
        const double s0 = -p.base / p.scale;
        if ((lo_inf || s0 > s_lo) && s0 < s_hi) cuts.push_back(s0);
    }
    cuts.push_back(s_hi);

    double sum = 0.0;
    bool first_unbounded = lo_inf;
    double left = lo_inf ? 0.0 : s_lo;
    for (double right : cuts) {
        if (first_unbounded) {
            sum += tail(right);
            first_unbounded = false;
        } else if (right > left) {
            sum += integrate(
                [&](double s) { return g(p.base + p.scale * s) * std::exp(s); },
                left, right, cfg);
        }
        left = right;
    }
    return std::abs(p.width) * sum;
}

}  // namespace

double p_mean(const PiecewiseFn& phi, double p, double c, double d,
              const QuadratureConfig& cfg) {
    if (!(p > 0.0)) throw std::invalid_argument("p_mean: p must be > 0");
    if (!(c >= -kTileTol && d <= 1.0 + kTileTol && d - c > 1e-15))
        throw std::invalid_argument("p_mean: need 0 <= c < d <= 1");
    double total = 0.0;
    for (const Piece& pc : phi.pieces) {
        const double a = std::max(pc.lo, c);
        const double b = std::min(pc.hi, d);
        if (b - a <= 0.0) continue;
        if (pc.is_const || pc.scale == 0.0) {
            const double v = pc.is_const ? pc.v : pc.base;
            total += std::pow(std::abs(v), p) * (b - a);
        } else {
            total += ramp_functional(
                pc, a, b,
                [p](double y) { return std::pow(std::abs(y), p); },
                [&](double beta) { return tail_power(p, pc.base, pc.scale, beta); },
                cfg);
        }
    }
    return total / (d - c);
}

double exp_abs_mean(const PiecewiseFn& phi, double c, double d,
                    const QuadratureConfig& cfg) {
    if (!(c >= -kTileTol && d <= 1.0 + kTileTol && d - c > 1e-15))
        throw std::invalid_argument("exp_abs_mean: need 0 <= c < d <= 1");
    double total = 0.0;
    for (const Piece& pc : phi.pieces) {
        const double a = std::max(pc.lo, c);
        const double b = std::min(pc.hi, d);
        if (b - a <= 0.0) continue;
        if (pc.is_const || pc.scale == 0.0) {
            const double v = pc.is_const ? pc.v : pc.base;
            total += std::exp(std::abs(v)) * (b - a);
        } else {
            total += ramp_functional(
                pc, a, b, [](double y) { return std::exp(std::abs(y)); },
                [&](double beta) { return tail_exp(pc.base, pc.scale, beta); },
                cfg);
        }
    }
    return total / (d - c);
}

namespace {

// Golden-section maximization of f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, int iters) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

BmoResult bmo_norm(const PiecewiseFn& phi) {
    BmoResult best;
    double best_osc = 0.0;
    auto consider = [&](double c, double d) {
        if (d - c < 1e-11) return;
        const double o = oscillation(phi, c, d);
        if (o > best_osc) {
            best_osc = o;
            best.witness_c = c;
            best.witness_d = d;
        }
    };

    const std::vector<double> bp = phi.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i)
        for (std::size_t j = i + 1; j < bp.size(); ++j) consider(bp[i], bp[j]);

    // refine endpoints within each ordered pair of pieces
    const auto& ps = phi.pieces;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i; j < ps.size(); ++j) {
            double c = ps[i].lo, d = ps[j].hi;
            double local = -1.0;
            for (int a = 0; a <= 4; ++a) {
                for (int b = 0; b <= 4; ++b) {
                    const double cc = ps[i].lo + (ps[i].hi - ps[i].lo) * a / 4.0;
                    const double dd = ps[j].lo + (ps[j].hi - ps[j].lo) * b / 4.0;
                    if (dd - cc < 1e-11) continue;
                    const double o = oscillation(phi, cc, dd);
                    if (o > local) {
                        local = o;
                        c = cc;
                        d = dd;
                    }
                }
            }
            if (local < 0.0) continue;
            for (int sweep = 0; sweep < 3; ++sweep) {
                const double chi = std::min(ps[i].hi, d - 1e-11);
                if (chi > ps[i].lo)
                    c = golden_max(
                        [&](double cc) {
                            return d - cc < 1e-11 ? -1.0 : oscillation(phi, cc, d);
                        },
                        ps[i].lo, chi, 24);
                const double dlo = std::max(ps[j].lo, c + 1e-11);
                if (ps[j].hi > dlo)
                    d = golden_max(
                        [&](double dd) {
                            return dd - c < 1e-11 ? -1.0 : oscillation(phi, c, dd);
                        },
                        dlo, ps[j].hi, 24);
            }
            consider(c, d);
        }
    }
    best.norm = std::sqrt(std::max(best_osc, 0.0));
    return best;
}

PiecewiseFn cutoff(const PiecewiseFn& phi, double c, double d) {
    const bool has_lo = std::isfinite(c);
    const bool has_hi = std::isfinite(d);
    if (has_lo && has_hi && !(c < d))
        throw std::invalid_argument("cutoff: need c < d");
    auto clamp = [&](double y) {
        if (has_lo && y < c) return c;
        if (has_hi && y > d) return d;
        return y;
    };
    std::vector<Piece> out;
    for (const Piece& p : phi.pieces) {
        if (p.is_const || p.scale == 0.0) {
            const double v = p.is_const ? p.v : p.base;
            out.push_back(Piece::constant(p.lo, p.hi, clamp(v)));
            continue;
        }
        std::vector<double> cuts{p.lo};
        for (double level : {has_lo ? c : std::nan(""), has_hi ? d : std::nan("")}) {
            if (!std::isfinite(level)) continue;
            const double s = (level - p.base) / p.scale;
            const double t = p.origin + p.width * std::exp(s);
            if (t > p.lo + 1e-13 && t < p.hi - 1e-13) cuts.push_back(t);
        }
        cuts.push_back(p.hi);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double lo = cuts[k], hi = cuts[k + 1];
            if (hi - lo <= 1e-14) continue;
            const double mid = p.value(0.5 * (lo + hi));
            if (has_lo && mid <= c)
                out.push_back(Piece::constant(lo, hi, c));
            else if (has_hi && mid >= d)
                out.push_back(Piece::constant(lo, hi, d));
            else
                out.push_back(Piece::log_ramp(lo, hi, p.base, p.scale, p.origin, p.width));
        }
    }
    return PiecewiseFn(std::move(out));
}

PiecewiseFn concat(const std::vector<std::pair<PiecewiseFn, double>>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat: no parts");
    double sum = 0.0;
    for (const auto& [fn, w] : parts) {
        if (!(w > 0.0)) throw std::invalid_argument("concat: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("concat: weights must sum to 1");
    std::vector<Piece> out;
    double offset = 0.0;
    for (const auto& [fn, w] : parts) {
        for (const Piece& p : fn.pieces) {
            Piece q = p;
            q.lo = offset + w * p.lo;
            q.hi = offset + w * p.hi;
            if (!p.is_const) {
                q.origin = offset + w * p.origin;
                q.width = w * p.width;
            }
            if (q.hi - q.lo > 1e-15) out.push_back(q);
        }
        offset += w;
    }
    out.back().hi = 1.0;
    return PiecewiseFn(std::move(out));
}

PiecewiseFn shift_values(const PiecewiseFn& phi, double delta) {
    std::vector<Piece> out = phi.pieces;
    for (Piece& p : out) {
        if (p.is_const)
            p.v += delta;
        else
            p.base += delta;
    }
    return PiecewiseFn(std::move(out));
}

PiecewiseFn negate(const PiecewiseFn& phi) {
    std::vector<Piece> out = phi.pieces;
    for (Piece& p : out) {
        if (p.is_const) {
            p.v = -p.v;
        } else {
            p.base = -p.base;
            p.scale = -p.scale;
        }
    }
    return PiecewiseFn(std::move(out));
}

namespace {

// Assemble pieces while skipping empty intervals.
struct Builder {
    std::vector<Piece> pieces;
    void constant(double lo, double hi, double v) {
        if (hi - lo > 1e-15) pieces.push_back(Piece::constant(lo, hi, v));
    }
    void ramp(double lo, double hi, double base, double scale, double origin,
              double width) {
        if (hi - lo > 1e-15)
            pieces.push_back(Piece::log_ramp(lo, hi, base, scale, origin, width));
    }
    PiecewiseFn take() { return PiecewiseFn(std::move(pieces)); }
};

// Two-step optimizer for the horizontal foliation of Omega_L(0).
PiecewiseFn build_two_step(double x1, double x2) {
    const double r = std::sqrt(x2);
    const double alpha = 0.5 * (1.0 - x1 / r);
    Builder b;
    b.constant(0.0, alpha, -r);
    b.constant(alpha, 1.0, r);
    return b.take();
}

// Two-step chord optimizer on Omega_L(a): entry value u, exit value v.
PiecewiseFn build_chord(double x1, double x2, double v) {
    const double u = (x2 - v * x1) / (x1 - v);
    const double alpha = (x1 - v) / (u - v);
    Builder b;
    b.constant(0.0, alpha, u);
    b.constant(alpha, 1.0, v);
    return b.take();
}

// Four-piece optimizer for a right-tangent block with an L-block neighbor
// on the left starting at u1.
PiecewiseFn build_fplus(const DomainPoint& x, double u1,
                        const BellmanParams& params) {
    const double e = params.eps;
    const double u = u_plus(x, params);
    const double mu = (u - x.x1) / e;
    const double nu = std::exp((u1 - u) / e);
    Builder b;
    b.constant(0.0, mu * nu / 2.0, u1 - 2.0 * e);
    b.constant(mu * nu / 2.0, mu * nu, u1);
    b.ramp(mu * nu, mu, u, e, 0.0, mu);
    b.constant(mu, 1.0, u);
    return b.take();
}

// Two-piece optimizer for a left-tangent block with open right end.
PiecewiseFn build_fminus(const DomainPoint& x, const BellmanParams& params) {
    const double e = params.eps;
    const double u = u_minus(x, params);
    const double mu = (x.x1 - u) / e;
    Builder b;
    b.ramp(0.0, mu, u, -e, 0.0, mu);
    b.constant(mu, 1.0, u);
    return b.take();
}

// Transition-region optimizers.  The ramps point their unbounded ends
// outward (to t = 0 and t = 1); an inward singularity would sit next to a
// constant piece and blow up the oscillation of straddling intervals.
PiecewiseFn build_transition(const DomainPoint& x, double u,
                             const BellmanParams& params, CandidateKind kind) {
    const double e = params.eps;
    const double q = (x.x2 - 2.0 * u * x.x1 + u * u) / (4.0 * e * e);
    const double mu_m = q - (x.x1 - u) / (2.0 * e);
    const double mu_p = q + (x.x1 - u) / (2.0 * e);
    Builder b;
    if (kind == CandidateKind::R) {
        b.constant(0.0, mu_m / 2.0, -2.0 * e);
        b.constant(mu_m / 2.0, 1.0 - mu_p / 2.0, 0.0);
        b.constant(1.0 - mu_p / 2.0, 1.0, 2.0 * e);
        return b.take();
    }
    if (kind == CandidateKind::P) {
        const double nu = std::exp(1.0 - u / e);
        b.constant(0.0, mu_m * nu / 2.0, -e);
        b.constant(mu_m * nu / 2.0, mu_m * nu, e);
        b.ramp(mu_m * nu, mu_m, u, e, 0.0, mu_m);
        b.constant(mu_m, 1.0 - mu_p, u);
        b.ramp(1.0 - mu_p, 1.0, u, -e, 1.0, -mu_p);
        return b.take();
    }
    // N context, u = 0
    b.ramp(0.0, mu_m, 0.0, e, 0.0, mu_m);
    b.constant(mu_m, 1.0 - mu_p, 0.0);
    b.ramp(1.0 - mu_p, 1.0, 0.0, -e, 1.0, -mu_p);
    return b.take();
}

}  // namespace

PiecewiseFn make_optimizer(const DomainPoint& x, const BellmanParams& params,
                           CandidateKind kind) {
    if (!contains(x, params))
        throw std::domain_error("make_optimizer: point outside Omega_eps");
    require_kind_valid(kind, params.p);
    const double e = params.eps;
    if (x.x2 - x.x1 * x.x1 <= 1e-12 * std::max(1.0, e * e)) {
        Builder b;
        b.constant(0.0, 1.0, x.x1);
        return b.take();
    }
    const bool reflect = x.x1 < 0.0;
    const DomainPoint xa{std::abs(x.x1), x.x2};
    std::optional<double> mu;
    if (kind == CandidateKind::P) mu = cached_mu(params.p);
    const Region r = classify(xa, params, kind, mu);

    PiecewiseFn phi;
    switch (r.kind) {
        case BlockKind::L0:
            phi = build_two_step(xa.x1, xa.x2);
            break;
        case BlockKind::La:
            phi = build_chord(xa.x1, xa.x2, r.a + r.side * e);
            break;
        case BlockKind::FPlus:
            phi = build_fplus(xa, r.u1.value, params);
            break;
        case BlockKind::FMinus:
            phi = build_fminus(xa, params);
            break;
        case BlockKind::T:
            phi = build_transition(xa, r.u, params, kind);
            break;
        case BlockKind::LowerBoundary: {
            Builder b;
            b.constant(0.0, 1.0, xa.x1);
            phi = b.take();
            break;
        }
    }
    return reflect ? negate(phi) : phi;
}

std::array<PiecewiseFn, 3> canonical_extremizers(const BellmanParams& params) {
    const double e = params.eps;
    Builder b1;
    b1.constant(0.0, 0.5, -e);
    b1.constant(0.5, 1.0, e);
    Builder b2;
    b2.ramp(0.0, 0.25, 0.0, e, 0.0, 0.25);      // eps * log(4t)
    b2.constant(0.25, 0.75, 0.0);
    b2.ramp(0.75, 1.0, 0.0, -e, 1.0, -0.25);    // -eps * log(4 - 4t)
    Builder b3;
    b3.constant(0.0, 0.125, -2.0 * e);
    b3.constant(0.125, 0.875, 0.0);
    b3.constant(0.875, 1.0, 2.0 * e);
    return {b1.take(), b2.take(), b3.take()};
}

PiecewiseFn step_function(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("step_function: no values");
    const std::size_t n = values.size();
    std::vector<Piece> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Piece::constant(static_cast<double>(i) / n,
                                      static_cast<double>(i + 1) / n, values[i]));
    return PiecewiseFn(std::move(out));
}

std::string to_json_string(const PiecewiseFn& phi) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const Piece& p : phi.pieces) {
        nlohmann::json shape;
        if (p.is_const) {
            shape = {{"kind", "const"}, {"v", p.v}};
        } else {
            shape = {{"kind", "logramp"},
                     {"base", p.base},
                     {"scale", p.scale},
                     {"origin", p.origin},
                     {"width", p.width}};
        }
        pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"shape", shape}});
    }
    return nlohmann::json{{"pieces", pieces}}.dump();
}

PiecewiseFn from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Piece> out;
    for (const auto& item : j.at("pieces")) {
        const double lo = item.at("lo").get<double>();
        const double hi = item.at("hi").get<double>();
        const auto& shape = item.at("shape");
        const std::string kind = shape.at("kind").get<std::string>();
        if (kind == "const") {
            out.push_back(Piece::constant(lo, hi, shape.at("v").get<double>()));
        } else if (kind == "logramp") {
            out.push_back(Piece::log_ramp(lo, hi, shape.at("base").get<double>(),
                                          shape.at("scale").get<double>(),
                                          shape.at("origin").get<double>(),
                                          shape.at("width").get<double>()));
        } else {
            throw std::invalid_argument("from_json_string: unknown shape kind");
        }
    }
    return PiecewiseFn(std::move(out));
}

}  // namespace bellman
