#include "bellman/geometry.hpp"

#include <cmath>

namespace bellman {

bool contains(const DomainPoint& x, const BellmanParams& params) {
    if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) return false;
    const double lo = x.x1 * x.x1;
    return x.x2 >= lo - kDomainTol &&
           x.x2 <= lo + params.eps * params.eps + kDomainTol;
}

namespace {

// sqrt of the tangent discriminant eps^2 - x2 + x1^2, clamped against the
// membership tolerance.
double sqrt_disc(const DomainPoint& x, const BellmanParams& params) {
    double d = params.eps * params.eps - x.x2 + x.x1 * x.x1;
    if (d < 0.0) d = 0.0;  // within kDomainTol of the upper boundary
    return std::sqrt(d);
}

void require_inside(const DomainPoint& x, const BellmanParams& params) {
    if (!contains(x, params))
        throw std::domain_error("point outside Omega_eps");
}

}  // namespace

double u_plus(const DomainPoint& x, const BellmanParams& params) {
    require_inside(x, params);
    return x.x1 + params.eps - sqrt_disc(x, params);
}

double u_minus(const DomainPoint& x, const BellmanParams& params) {
    require_inside(x, params);
    return x.x1 - params.eps + sqrt_disc(x, params);
}

bool in_omega_L(const DomainPoint& x, double a, const BellmanParams& params,
                double tol) {
    const double e = params.eps;
    return x.x2 >= x.x1 * x.x1 - tol &&
           x.x2 <= 2.0 * a * x.x1 + e * e - a * a + tol;
}

bool in_omega_T(const DomainPoint& x, double u, const BellmanParams& params,
                double tol) {
    const double e = params.eps;
    if (x.x1 < u - e - tol || x.x1 > u + e + tol) return false;
    const double lower = 2.0 * u * x.x1 - u * u + 2.0 * e * std::abs(u - x.x1);
    return x.x2 >= lower - tol && x.x2 <= x.x1 * x.x1 + e * e + tol;
}

Region classify(const DomainPoint& x, const BellmanParams& params,
                CandidateKind kind, std::optional<double> mu) {
    require_inside(x, params);
    const double e = params.eps;
    const DomainPoint xa{std::abs(x.x1), x.x2};

    Region r;
    switch (kind) {
        case CandidateKind::M: {
            if (xa.x2 <= e * e) {
                r.kind = BlockKind::L0;
            } else {
                r.kind = BlockKind::FPlus;
                r.u1 = ExtReal::finite(e);
                r.u2 = ExtReal::plus_inf();
            }
            return r;
        }
        case CandidateKind::N: {
            if (in_omega_T(xa, 0.0, params, 0.0)) {
                r.kind = BlockKind::T;
                r.u = 0.0;
            } else {
                r.kind = BlockKind::FMinus;
                r.u1 = ExtReal::finite(0.0);
                r.u2 = ExtReal::plus_inf();
            }
            return r;
        }
        case CandidateKind::P: {
            if (!mu)
                throw std::invalid_argument("classify: kind P needs the solved mu");
            const double xi = *mu * e;
            if (xa.x2 <= e * e) {
                r.kind = BlockKind::L0;
            } else if (in_omega_T(xa, xi, params, 0.0)) {
                r.kind = BlockKind::T;
                r.u = xi;
            } else if (u_plus(xa, params) <= xi) {
                r.kind = BlockKind::FPlus;
                r.u1 = ExtReal::finite(e);
                r.u2 = ExtReal::finite(xi);
            } else {
                r.kind = BlockKind::FMinus;
                r.u1 = ExtReal::finite(xi);
                r.u2 = ExtReal::plus_inf();
            }
            return r;
        }
        case CandidateKind::R: {
            if (in_omega_T(xa, 0.0, params, 0.0)) {
                r.kind = BlockKind::T;
                r.u = 0.0;
            } else if (u_plus(xa, params) <= 2.0 * e) {
                r.kind = BlockKind::La;
                r.a = e;
                r.side = -1;
            } else {
                r.kind = BlockKind::FPlus;
                r.u1 = ExtReal::finite(2.0 * e);
                r.u2 = ExtReal::plus_inf();
            }
            return r;
        }
    }
    throw std::invalid_argument("classify: unknown candidate kind");
}

bool segment_in_domain(const DomainPoint& a, const DomainPoint& b,
                       const BellmanParams& params, int n) {
    if (n < 2) throw std::invalid_argument("segment_in_domain: n must be >= 2");
    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / (n - 1);
        const DomainPoint x{a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)};
        if (!contains(x, params)) return false;
    }
    return true;
}

}  // namespace bellman
