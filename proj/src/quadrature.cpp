#include "bellman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace bellman {

namespace {

// 7-15 Gauss-Kronrod nodes and weights on [-1, 1] (positive half).
// Odd-indexed nodes and the center form the embedded 7-point Gauss rule.
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double integral;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.integral = resk * h;
    p.error = std::abs((resk - resg) * h);
    return p;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<Panel> panels;
    panels.push_back(gk15(f, a, b));
    double total = panels[0].integral;
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));

    for (int split = 0; split < cfg.max_subdivisions; ++split) {
        double err_sum = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            err_sum += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (err_sum <= tol) break;
        Panel& w = panels[worst];
        if (w.b - w.a < 1e-14 * (b - a)) break;  // roundoff floor
        const double m = 0.5 * (w.a + w.b);
        Panel left = gk15(f, w.a, m);
        Panel right = gk15(f, m, w.b);
        w = left;
        panels.push_back(right);
        if (split == cfg.max_subdivisions - 1) {
            double rest = 0.0;
            for (const Panel& q : panels) rest += q.error;
            if (rest > std::max(tol, 1e-8))
                throw std::runtime_error("integrate: no convergence within max_subdivisions");
        }
    }
    total = 0.0;
    for (const Panel& q : panels) total += q.integral;
    return sign * total;
}

double gamma_fn(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("gamma_fn: p must be positive");
    return std::tgamma(p);
}

namespace {

// Lower-gamma series: gamma(p,x) = x^p e^{-x} sum_{n>=0} x^n / (p...(p+n)).
// Valid for x < p + 1.
double lower_gamma_series(double p, double x) {
    double term = 1.0 / p;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (p + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return std::pow(x, p) * std::exp(-x) * sum;
}

// Lentz continued fraction for e^x Gamma(p,x) / x^p.  Valid for x >= p + 1.
double upper_gamma_cf(double p, double x) {
    double b = x + 1.0 - p;
    double c = 1e308;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - p);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

}  // namespace

double upper_gamma(double p, double x) {
    if (x < 0.0) throw std::invalid_argument("upper_gamma: x must be >= 0");
    if (x == 0.0) return gamma_fn(p);
    if (x < p + 1.0) return gamma_fn(p) - lower_gamma_series(p, x);
    return std::exp(-x) * std::pow(x, p) * upper_gamma_cf(p, x);
}

double upper_gamma_scaled(double p, double x) {
    if (x < 0.0) throw std::invalid_argument("upper_gamma_scaled: x must be >= 0");
    if (x == 0.0) return gamma_fn(p);
    if (x < p + 1.0)
        return std::exp(x) * (gamma_fn(p) - lower_gamma_series(p, x));
    return std::pow(x, p) * upper_gamma_cf(p, x);
}

namespace {

// int_lo^hi t^{p-1} e^{t - shift} dt; the shift keeps the integrand bounded
// when the caller folds in a factor e^{-shift}.
double int_power_exp_shifted(double p, double lo, double hi, double shift,
                             const QuadratureConfig& cfg) {
    if (lo == hi) return 0.0;
    return integrate(
        [p, shift](double t) { return std::pow(t, p - 1.0) * std::exp(t - shift); },
        lo, hi, cfg);
}

}  // namespace

double int_exp_pos(double p, double lo, double hi, const QuadratureConfig& cfg) {
    if (!(lo > 0.0)) throw std::invalid_argument("int_exp_pos: lo must be > 0");
    if (lo > hi) throw std::invalid_argument("int_exp_pos: lo > hi");
    return int_power_exp_shifted(p, lo, hi, 0.0, cfg);
}

double int_exp_neg_upper(double p, double lo) {
    if (lo < 0.0) throw std::invalid_argument("int_exp_neg_upper: lo must be >= 0");
    if (p <= 0.0 && lo < std::max(1.0, p + 1.0))
        throw std::invalid_argument("int_exp_neg_upper: divergent at the origin for p <= 0");
    return upper_gamma(p, lo);
}

double m_plus(double u, double u1, const BellmanParams& params) {
    if (u1 < 0.0 || u < u1 - 1e-12)
        throw std::invalid_argument("m_plus: need 0 <= u1 <= u");
    if (u < u1) u = u1;
    const double e = params.eps;
    const double p = params.p;
    const double head =
        (std::pow(u1, p) - std::pow(std::abs(u1 - 2.0 * e), p)) / (2.0 * e) *
        std::exp((u1 - u) / e);
    const double tail = p * std::pow(e, p - 1.0) *
                        int_power_exp_shifted(p, u1 / e, u / e, u / e, {});
    return head + tail;
}

double m_minus(double u, double u2, const BellmanParams& params) {
    if (u < 0.0 || u2 < u - 1e-12)
        throw std::invalid_argument("m_minus: need 0 <= u <= u2");
    if (u2 < u) u2 = u;
    const double e = params.eps;
    const double p = params.p;
    const double head =
        (std::pow(u2, p) - std::pow(u2 + 2.0 * e, p)) / (2.0 * e) *
        std::exp((u - u2) / e);
    // integrand e^{u/eps - t} <= 1 on [u/eps, u2/eps]
    const double tail =
        p * std::pow(e, p - 1.0) *
        integrate([p, u, e](double t) { return std::pow(t, p - 1.0) * std::exp(u / e - t); },
                  u / e, u2 / e, {});
    return head + tail;
}

double m_minus_inf(double u, const BellmanParams& params) {
    if (u < 0.0) throw std::invalid_argument("m_minus_inf: u must be >= 0");
    const double e = params.eps;
    const double p = params.p;
    return p * std::pow(e, p - 1.0) * upper_gamma_scaled(p, u / e);
}

double tau_plus(double u, double u1, const BellmanParams& params) {
    const double e = params.eps;
    const double p = params.p;
    if (u < u1 - 1e-12) throw std::invalid_argument("tau_plus: need u >= u1");
    if (u < u1) u = u1;
    const QuadratureConfig cfg;
    if (std::abs(u1 - e) <= 1e-12 * std::max(1.0, e)) {
        const double integral =
            (u / e > 1.0)
                ? integrate([p](double t) { return std::pow(t, p - 3.0) * std::exp(t); },
                            1.0, u / e, cfg)
                : 0.0;
        return p * (p - 2.0) * std::pow(e, p - 2.0) *
               (std::exp(1.0) + (p - 1.0) * integral);
    }
    if (std::abs(u1 - 2.0 * e) <= 1e-12 * std::max(1.0, e)) {
        const double integral =
            (u / e > 2.0)
                ? integrate([p](double t) { return std::pow(t, p - 3.0) * std::exp(t); },
                            2.0, u / e, cfg)
                : 0.0;
        return (p - 1.0) * (p - 2.0) * std::pow(e, p - 2.0) *
               (std::pow(2.0, p - 2.0) * std::exp(2.0) + p * integral);
    }
    throw std::invalid_argument("tau_plus: only u1 = eps and u1 = 2 eps are supported");
}

double tau_minus_inf(double u, const BellmanParams& params) {
    const double e = params.eps;
    const double p = params.p;
    if (u < 0.0) throw std::invalid_argument("tau_minus_inf: u must be >= 0");
    if (u == 0.0) {
        if (p <= 2.0)
            throw std::invalid_argument("tau_minus_inf: divergent at u = 0 for p <= 2");
        return -p * std::pow(e, p - 2.0) * gamma_fn(p);
    }
    // (p-1)(p-2) Gamma(p-2, x) = Gamma(p, x) - x^{p-1} e^{-x} - (p-1) x^{p-2} e^{-x}
    const double x = u / e;
    const double ex = std::exp(-x);
    const double bracket = upper_gamma(p, x) - std::pow(x, p - 1.0) * ex -
                           (p - 1.0) * std::pow(x, p - 2.0) * ex;
    return -p * std::pow(e, p - 2.0) * bracket;
}

double mu_equation_residual(double p, double mu) {
    if (!(p > 0.0)) throw std::invalid_argument("mu_equation_residual: p must be > 0");
    if (!(mu >= 1.0)) throw std::invalid_argument("mu_equation_residual: mu must be >= 1");
    const double grow = int_power_exp_shifted(p, 1.0, mu, mu, {});
    const double decay = upper_gamma_scaled(p, mu);
    return grow + decay - 2.0 * std::pow(mu, p - 1.0);
}

MuSolution solve_mu(const BellmanParams& params) {
    const double p = params.p;
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("solve_mu: requires 0 < p < 1");

    double lo = 1.0 + 1e-8;
    double flo = mu_equation_residual(p, lo);
    if (flo >= 0.0)
        throw std::runtime_error("solve_mu: residual not negative at mu = 1");
    double hi = 2.0;
    double fhi = mu_equation_residual(p, hi);
    int evals = 2;
    while (fhi <= 0.0) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        if (hi > 500.0) throw std::runtime_error("solve_mu: no bracket below mu = 500");
        fhi = mu_equation_residual(p, hi);
        ++evals;
    }

    double mu = hi;
    double fmu = fhi;
    for (int it = 0; it < 200; ++it) {
        // secant step, safeguarded by the bracket
        double cand = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
        fmu = mu_equation_residual(p, cand);
        mu = cand;
        ++evals;
        if (std::abs(fmu) <= 1e-10) break;
        if (fmu < 0.0) {
            lo = cand;
            flo = fmu;
        } else {
            hi = cand;
            fhi = fmu;
        }
        if (it == 199)
            throw std::runtime_error("solve_mu: residual tolerance not reached");
    }

    // one-sided concavity condition at the root
    const double grow = int_power_exp_shifted(p, 1.0, mu, mu, {});
    const double rhs = std::pow(mu, p - 1.0) + (1.0 - p) * std::pow(mu, p - 2.0);
    if (grow > rhs + 1e-9)
        throw std::runtime_error("solve_mu: concavity condition violated at the root");

    MuSolution sol;
    sol.mu = mu;
    sol.residual = fmu;
    sol.iterations = evals;
    return sol;
}

double cached_mu(double p) {
    static std::map<double, double> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    const double mu = solve_mu(BellmanParams(1.0, p)).mu;
    cache.emplace(p, mu);
    return mu;
}

}  // namespace bellman
