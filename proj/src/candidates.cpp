#include "bellman/candidates.hpp"

#include <cmath>

#include "bellman/quadrature.hpp"

namespace bellman {

namespace {

constexpr double kRegionTol = 1e-9;

double power_abs(double s, double p) { return std::pow(std::abs(s), p); }

}  // namespace

void require_kind_valid(CandidateKind kind, double p) {
    if (!(p > 0.0))
        throw std::invalid_argument("candidate evaluation requires p > 0");
    switch (kind) {
        case CandidateKind::M:
        case CandidateKind::N:
            if (p < 1.0)
                throw std::invalid_argument("candidates M, N require p >= 1");
            return;
        case CandidateKind::P:
            if (!(p < 1.0))
                throw std::invalid_argument("candidate P requires 0 < p < 1");
            return;
        case CandidateKind::R:
            if (p > 1.0)
                throw std::invalid_argument("candidate R requires 0 < p <= 1");
            return;
    }
}

double eval_L0(const DomainPoint& x, const BellmanParams& params) {
    const double e = params.eps;
    if (!contains(x, params) || x.x2 > e * e + kRegionTol)
        throw std::domain_error("eval_L0: point outside Omega_L(0)");
    return std::pow(std::max(x.x2, 0.0), params.p / 2.0);
}

double eval_Lpm(const DomainPoint& x, double a, int side,
                const BellmanParams& params) {
    if (side != 1 && side != -1)
        throw std::invalid_argument("eval_Lpm: side must be +1 or -1");
    if (!contains(x, params) || !in_omega_L(x, a, params, kRegionTol))
        throw std::domain_error("eval_Lpm: point outside Omega_L(a)");
    const double p = params.p;
    const double v = a + side * params.eps;
    if (std::abs(x.x1 - v) < 1e-10)  // removable limit at the exit corner
        return power_abs(v, p);
    const double u = (x.x2 - v * x.x1) / (x.x1 - v);
    if (std::abs(v - u) < 1e-10) return power_abs(v, p);
    const double slope = (power_abs(v, p) - power_abs(u, p)) / (v - u);
    return slope * (x.x1 - v) + power_abs(v, p);
}

double eval_Fplus(const DomainPoint& x, const ExtReal& u1,
                  const BellmanParams& params) {
    if (!contains(x, params))
        throw std::domain_error("eval_Fplus: point outside Omega_eps");
    const double p = params.p;
    double u = u_plus(x, params);
    if (u1.is_finite()) {
        if (u < u1.value - kRegionTol)
            throw std::domain_error("eval_Fplus: point left of the block");
        if (u < u1.value) u = u1.value;
        return m_plus(u, u1.value, params) * (x.x1 - u) + power_abs(u, p);
    }
    if (u1.tag != ExtReal::Tag::MinusInf)
        throw std::invalid_argument("eval_Fplus: u1 must be finite or -inf");
    if (u > kRegionTol)
        throw std::domain_error("eval_Fplus: open-left block requires u <= 0");
    if (u > 0.0) u = 0.0;
    const double slope =
        params.p * std::pow(params.eps, p - 1.0) *
        upper_gamma_scaled(p, -u / params.eps);
    return slope * (u - x.x1) + power_abs(u, p);
}

double eval_Fminus(const DomainPoint& x, const ExtReal& u2,
                   const BellmanParams& params) {
    if (!contains(x, params))
        throw std::domain_error("eval_Fminus: point outside Omega_eps");
    const double p = params.p;
    double u = u_minus(x, params);
    if (u2.is_finite()) {
        if (u > u2.value + kRegionTol)
            throw std::domain_error("eval_Fminus: point right of the block");
        if (u > u2.value) u = u2.value;
        if (u < 0.0)
            throw std::domain_error("eval_Fminus: finite block requires u >= 0");
        return m_minus(u, u2.value, params) * (x.x1 - u) + power_abs(u, p);
    }
    if (u2.tag != ExtReal::Tag::PlusInf)
        throw std::invalid_argument("eval_Fminus: u2 must be finite or +inf");
    if (u < -kRegionTol)
        throw std::domain_error("eval_Fminus: open-right block requires u >= 0");
    if (u < 0.0) u = 0.0;
    return m_minus_inf(u, params) * (x.x1 - u) + power_abs(u, p);
}

double eval_T(const DomainPoint& x, double u, std::optional<double> alpha,
              const BellmanParams& params) {
    if (!contains(x, params) || !in_omega_T(x, u, params, kRegionTol))
        throw std::domain_error("eval_T: point outside Omega_T(u)");
    if (u == 0.0) {
        if (!alpha)
            throw std::invalid_argument("eval_T: u = 0 needs the context slope alpha");
        return *alpha * x.x2;
    }
    const double p = params.p;
    const double e = params.eps;
    const double fprime = p * std::pow(u, p - 1.0);
    const double m = m_minus_inf(u, params);
    return fprime * x.x1 + (m - fprime) / (2.0 * e) *
           (-2.0 * x.x1 * u + x.x2 + u * u) + (1.0 - p) * std::pow(u, p);
}

double eval_global(const DomainPoint& x, const BellmanParams& params,
                   CandidateKind kind) {
    if (!contains(x, params))
        throw std::domain_error("eval_global: point outside Omega_eps");
    require_kind_valid(kind, params.p);
    const double p = params.p;
    const double e = params.eps;
    if (p == 2.0) return x.x2;  // all formulas coincide

    const DomainPoint xa{std::abs(x.x1), x.x2};
    std::optional<double> mu;
    if (kind == CandidateKind::P) mu = cached_mu(p);
    const Region r = classify(xa, params, kind, mu);

    switch (r.kind) {
        case BlockKind::L0:
            return eval_L0(xa, params);
        case BlockKind::La:
            return eval_Lpm(xa, r.a, r.side, params);
        case BlockKind::FPlus:
            return eval_Fplus(xa, r.u1, params);
        case BlockKind::FMinus:
            return eval_Fminus(xa, r.u2, params);
        case BlockKind::T: {
            if (kind == CandidateKind::N) {
                const double alpha =
                    0.5 * p * std::pow(e, p - 2.0) * gamma_fn(p);
                return eval_T(xa, 0.0, alpha, params);
            }
            if (kind == CandidateKind::R) {
                const double alpha = std::pow(2.0 * e, p - 2.0);
                return eval_T(xa, 0.0, alpha, params);
            }
            return eval_T(xa, r.u, std::nullopt, params);  // P: u = xi
        }
        case BlockKind::LowerBoundary:
            return power_abs(xa.x1, p);
    }
    throw std::logic_error("eval_global: unhandled region");
}

double bellman_value(const DomainPoint& x, const BellmanParams& params,
               BellmanSide side) {
    const double p = params.p;
    if (!(p > 0.0)) throw std::invalid_argument("bellman: p must be > 0");
    if (!contains(x, params))
        throw std::domain_error("bellman: point outside Omega_eps");
    if (p == 2.0) return x.x2;

    CandidateKind kind;
    if (p > 2.0)
        kind = (side == BellmanSide::Upper) ? CandidateKind::N : CandidateKind::M;
    else if (p >= 1.0)
        kind = (side == BellmanSide::Upper) ? CandidateKind::M : CandidateKind::N;
    else
        kind = (side == BellmanSide::Upper) ? CandidateKind::P : CandidateKind::R;
    return eval_global(x, params, kind);
}

TangentData tangent_data(const DomainPoint& x, const BellmanParams& params,
                         CandidateKind kind, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("tangent_data: h must be > 0");
    require_kind_valid(kind, params.p);
    std::optional<double> mu;
    if (kind == CandidateKind::P) mu = cached_mu(params.p);

    const DomainPoint xa{std::abs(x.x1), x.x2};
    const Region home = classify(xa, params, kind, mu);
    const DomainPoint stencil[4] = {{xa.x1 + h, xa.x2},
                                    {xa.x1 - h, xa.x2},
                                    {xa.x1, xa.x2 + h},
                                    {xa.x1, xa.x2 - h}};
    for (const DomainPoint& s : stencil) {
        if (!contains(s, params) || !(classify(s, params, kind, mu) == home))
            throw std::domain_error("tangent_data: stencil leaves the region");
    }
    TangentData t;
    t.t1 = (eval_global(stencil[0], params, kind) -
            eval_global(stencil[1], params, kind)) / (2.0 * h);
    t.t2 = (eval_global(stencil[2], params, kind) -
            eval_global(stencil[3], params, kind)) / (2.0 * h);
    if (x.x1 < 0.0) t.t1 = -t.t1;
    t.t0 = eval_global(x, params, kind) - t.t1 * x.x1 - t.t2 * x.x2;
    return t;
}

double closed_form_M_p1(const DomainPoint& x, double eps) {
    const double d = std::sqrt(std::max(0.0, eps * eps - x.x2 + x.x1 * x.x1));
    const double a1 = std::abs(x.x1);
    if (x.x2 <= eps * eps) return std::sqrt(x.x2);
    return a1 + (eps - d) * std::exp((-a1 + d) / eps);
}

double closed_form_N_p1(const DomainPoint& x, double eps) {
    const double a1 = std::abs(x.x1);
    if (a1 <= eps && x.x2 >= 2.0 * eps * a1) return x.x2 / (2.0 * eps);
    return a1;
}

}  // namespace bellman
