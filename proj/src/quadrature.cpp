#include "polariton/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polariton {

double Rule1D::integrate(const std::vector<double>& samples) const {
    if (samples.size() != nodes.size())
        throw std::invalid_argument("sample count does not match rule size");
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * samples[i];
    return acc;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

Rule1D gauss_legendre_rule(int n, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("gauss_legendre_rule: hi must exceed lo");
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    Rule1D rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * x[i];
        rule.weights[i] = half * w[i];
    }
    return rule;
}

Rule1D composite_gauss_rule(int per_panel, int panels, double lo, double hi) {
    if (panels < 1) throw std::invalid_argument("composite_gauss_rule: panels must be >= 1");
    std::vector<double> x, w;
    gauss_legendre(per_panel, x, w);
    Rule1D rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.nodes.reserve(static_cast<std::size_t>(per_panel) * panels);
    rule.weights.reserve(static_cast<std::size_t>(per_panel) * panels);
    const double dw = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * dw, mid = a + 0.5 * dw, half = 0.5 * dw;
        for (int i = 0; i < per_panel; ++i) {
            rule.nodes.push_back(mid + half * x[i]);
            rule.weights.push_back(half * w[i]);
        }
    }
    return rule;
}

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

}  // namespace

double smoothstep_poly(int m, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double acc = 0.0;
    double upow = 1.0;
    for (int k = 0; k <= m; ++k) {
        acc += binom(m + k, k) * binom(2 * m + 1, m - k) * upow;
        upow *= -u;
    }
    return std::clamp(std::pow(u, m + 1) * acc, 0.0, 1.0);
}

std::vector<double> taper_window(const Rule1D& rule, double taper_fraction, int order) {
    if (taper_fraction < 0.0 || taper_fraction >= 1.0)
        throw std::invalid_argument("taper_fraction must be in [0, 1)");
    std::vector<double> win(rule.size(), 1.0);
    if (taper_fraction == 0.0) return win;
    const double width = taper_fraction * (rule.hi - rule.lo);
    const double start = rule.hi - width;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double w = rule.nodes[i];
        if (w > start) win[i] = smoothstep_poly(order, (rule.hi - w) / width);
    }
    return win;
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, double tol, int max_depth) {
    if (hi == lo) return 0.0;
    const double m = 0.5 * (lo + hi);
    const double fa = f(lo), fm = f(m), fb = f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, lo, hi, fa, fm, fb, whole, tol, 0, max_depth);
}

double pv_rational_integral(double lam, double lo, double hi) {
    if (lam <= 0.0) throw std::domain_error("pv_rational_integral: lam must be positive");
    auto F = [lam](double w) { return std::log(std::abs((w - lam) / (w + lam))) / (2.0 * lam); };
    return F(hi) - F(lo);
}

PVContext::PVContext(const Rule1D& rule, double lambda, I0Sign sign, int stencil_size)
    : rule_(&rule), lambda_(lambda), sign_(sign) {
    if (lambda < rule.lo || lambda > rule.hi) {
        std::ostringstream msg;
        msg << "PVContext: lambda " << lambda << " outside grid range [" << rule.lo
            << ", " << rule.hi << "]";
        throw ConfigError(msg.str());
    }
    const std::size_t n = rule.size();
    if (n < 2) throw std::invalid_argument("PVContext: rule too small");

    nearest_ = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(rule.nodes[j] - lambda) < std::abs(rule.nodes[nearest_] - lambda))
            nearest_ = static_cast<int>(j);
    const double scale = std::max(1.0, std::abs(lambda));
    if (std::abs(rule.nodes[nearest_] - lambda) < 1e-13 * scale) {
        std::ostringstream msg;
        msg << "PVContext: lambda " << lambda << " coincides with grid node "
            << nearest_ << " at " << rule.nodes[nearest_];
        throw SingularNodeError(msg.str());
    }

    // Interpolatory stencil: the stencil_size nodes nearest to lambda,
    // contiguous in index since nodes ascend.
    const int k = std::min<int>(stencil_size, static_cast<int>(n));
    int s0 = nearest_ - k / 2;
    s0 = std::clamp(s0, 0, static_cast<int>(n) - k);
    // shift window to actually bracket lambda as tightly as possible
    while (s0 > 0 && std::abs(rule.nodes[s0 - 1] - lambda) < std::abs(rule.nodes[s0 + k - 1] - lambda))
        --s0;
    while (s0 + k < static_cast<int>(n) &&
           std::abs(rule.nodes[s0 + k] - lambda) < std::abs(rule.nodes[s0] - lambda))
        ++s0;
    stencil_.resize(k);
    ell_.assign(k, 0.0);
    for (int i = 0; i < k; ++i) stencil_[i] = s0 + i;
    for (int i = 0; i < k; ++i) {
        double num = 1.0, den = 1.0;
        const double xi = rule.nodes[stencil_[i]];
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            const double xj = rule.nodes[stencil_[j]];
            num *= (lambda - xj);
            den *= (xi - xj);
        }
        ell_[i] = num / den;
    }

    p_an_ = pv_rational_integral(lambda, rule.lo, rule.hi);
    d_excl_ = -p_an_;
    for (std::size_t j = 0; j < n; ++j) {
        if (static_cast<int>(j) == nearest_) continue;
        d_excl_ += rule.weights[j] / (rule.nodes[j] * rule.nodes[j] - lambda * lambda);
    }
    const double xnear = rule.nodes[nearest_] * rule.nodes[nearest_] - lambda * lambda;
    d_full_ = d_excl_ + rule.weights[nearest_] / xnear;

    one_minus_ell_near_ = 0.0;
    for (int i = 0; i < k; ++i)
        if (stencil_[i] != nearest_) one_minus_ell_near_ += ell_[i];
}

cplx PVContext::effective_entry(std::size_t j) const {
    const double x = rule_->nodes[j] * rule_->nodes[j] - lambda_ * lambda_;
    int si = -1;
    for (std::size_t i = 0; i < stencil_.size(); ++i)
        if (stencil_[i] == static_cast<int>(j)) { si = static_cast<int>(i); break; }
    if (si < 0) return cplx(1.0 / x, 0.0);

    const cplx corr(-1.0, 0.0);
    const cplx delta_term(0.0, delta_sign(sign_) * std::numbers::pi / (2.0 * lambda_));
    const double wj = rule_->weights[j];
    if (static_cast<int>(j) == nearest_) {
        // cancel the near-singular 1/x against the same term inside D
        return one_minus_ell_near_ / x +
               (ell_[si] / wj) * (corr * d_excl_ + delta_term);
    }
    return cplx(1.0 / x, 0.0) + (ell_[si] / wj) * (corr * d_full_ + delta_term);
}

cplx PVContext::integrate(const std::vector<double>& f) const {
    if (f.size() != rule_->size())
        throw std::invalid_argument("PVContext::integrate: sample size mismatch");
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j)
        acc += rule_->weights[j] * f[j] * effective_entry(j);
    return acc;
}

cplx PVContext::integrate(const std::vector<cplx>& f) const {
    if (f.size() != rule_->size())
        throw std::invalid_argument("PVContext::integrate: sample size mismatch");
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j)
        acc += rule_->weights[j] * f[j] * effective_entry(j);
    return acc;
}

cplx pv_quadrature(const std::vector<double>& f, const Rule1D& rule, double lambda,
                   I0Sign sign, int stencil_size) {
    PVContext ctx(rule, lambda, sign, stencil_size);
    return ctx.integrate(f);
}

std::vector<double> richardson_weights(const std::vector<double>& etas) {
    const std::size_t n = etas.size();
    if (n == 0) throw std::invalid_argument("richardson_weights: empty eta list");
    std::vector<double> c(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            c[i] *= (0.0 - etas[j]) / (etas[i] - etas[j]);
        }
    }
    return c;
}

cplx richardson_zero(const std::vector<double>& etas, const std::vector<cplx>& values) {
    if (etas.size() != values.size())
        throw std::invalid_argument("richardson_zero: size mismatch");
    const auto c = richardson_weights(etas);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < etas.size(); ++i) acc += c[i] * values[i];
    return acc;
}

namespace {

// Panel boundaries graded geometrically toward the pole so the integrand's
// eta-scale Lorentzian is resolved.
std::vector<double> graded_breaks(double lo, double hi, double lambda, double eta_len) {
    std::vector<double> b{lo, hi};
    auto push = [&](double x) {
        if (x > lo && x < hi) b.push_back(x);
    };
    push(lambda);
    double d = eta_len;
    const double span = hi - lo;
    while (d < 2.0 * span) {
        push(lambda - d);
        push(lambda + d);
        d *= 2.0;
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(),
                        [](double a, double c) { return std::abs(a - c) < 1e-300; }),
            b.end());
    return b;
}

}  // namespace

cplx complex_shift_integral(const std::function<double(double)>& f, double lo,
                            double hi, double lambda, I0Sign sign,
                            const std::vector<double>& etas, int per_panel) {
    if (etas.size() < 2)
        throw std::invalid_argument("complex_shift_integral: need >= 2 shifts");
    std::vector<double> x, w;
    gauss_legendre(per_panel, x, w);
    std::vector<cplx> vals;
    vals.reserve(etas.size());
    for (double eta : etas) {
        if (eta <= 0.0) throw std::invalid_argument("complex_shift_integral: eta must be > 0");
        // pole of 1/(w^2-lam^2 + i eta) sits at distance ~ eta/(2 lam) from lam
        const double eta_len = std::max(eta / (2.0 * std::max(lambda, 1e-12)), 1e-14);
        const auto breaks = graded_breaks(lo, hi, lambda, eta_len);
        const cplx shift(0.0, (sign == I0Sign::plus ? 1.0 : -1.0) * eta);
        cplx acc(0.0, 0.0);
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double a = breaks[p], b = breaks[p + 1];
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int i = 0; i < per_panel; ++i) {
                const double wi = mid + half * x[i];
                acc += half * w[i] * f(wi) / (wi * wi - lambda * lambda + shift);
            }
        }
        vals.push_back(acc);
    }
    return richardson_zero(etas, vals);
}

}  // namespace polariton
