#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "polariton/errors.hpp"

namespace polariton {

using cplx = std::complex<double>;

/// One-dimensional quadrature rule on [lo, hi], nodes ascending.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lo = 0.0;
    double hi = 0.0;

    std::size_t size() const { return nodes.size(); }

    double integrate(const std::vector<double>& samples) const;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Gauss-Legendre rule mapped to [lo, hi].
Rule1D gauss_legendre_rule(int n, double lo, double hi);

/// Composite rule: `panels` equal panels, `per_panel` GL nodes each.
Rule1D composite_gauss_rule(int per_panel, int panels, double lo, double hi);

/// Degree-(2m+1) polynomial smoothstep: S(0)=0, S(1)=1, C^m at both ends.
double smoothstep_poly(int m, double u);

/// Per-node cutoff window for a rule: 1 on [lo, hi-w], smooth descent to 0
/// at hi, with w = taper_fraction*(hi-lo). order is the smoothstep order m.
std::vector<double> taper_window(const Rule1D& rule, double taper_fraction, int order);

/// Adaptive Simpson quadrature (oracle-grade, deterministic).
double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, double tol, int max_depth = 40);

/// Sign of the i0+ prescription in 1/(x +- i0+).
enum class I0Sign { plus, minus };

inline I0Sign conjugate(I0Sign s) { return s == I0Sign::plus ? I0Sign::minus : I0Sign::plus; }

/// Sokhotski-Plemelj delta coefficient: 1/(x +- i0+) = PV(1/x) -+ i pi delta(x).
inline double delta_sign(I0Sign s) { return s == I0Sign::plus ? -1.0 : +1.0; }

/// Closed-form PV of \int_lo^hi dw / (w^2 - lam^2), lam inside (lo, hi) or
/// outside; antiderivative (1/2lam) ln|(w-lam)/(w+lam)|.
double pv_rational_integral(double lam, double lo, double hi);

/// Principal-value evaluation context for \int f(w)/(w^2 - lam^2 +- i0+) dw
/// on a fixed rule. Realizes the Sokhotski-Plemelj split by singularity
/// subtraction: the value of f at the pole is taken from an interpolatory
/// stencil of nearby nodes, so the whole correction acts as a per-node
/// complex multiplier (`effective_entry`) that composes with any weighted
/// sum downstream.
class PVContext {
public:
    /// Throws SingularNodeError when lam coincides with a node (relative
    /// tolerance 1e-13) and ConfigError when lam is outside [lo, hi].
    PVContext(const Rule1D& rule, double lambda, I0Sign sign, int stencil_size = 4);

    /// Effective multiplier replacing 1/(w_j^2 - lam^2) at node j.
    cplx effective_entry(std::size_t j) const;

    /// PV + delta value of \int f/(w^2-lam^2 +- i0+) for sampled f.
    cplx integrate(const std::vector<double>& f) const;
    cplx integrate(const std::vector<cplx>& f) const;

    double lambda() const { return lambda_; }
    const std::vector<int>& stencil() const { return stencil_; }

private:
    const Rule1D* rule_;
    double lambda_;
    I0Sign sign_;
    std::vector<int> stencil_;
    std::vector<double> ell_;     // Lagrange weights at lambda over the stencil
    double p_an_;                 // analytic PV of the bare rational factor
    double d_full_;               // sum_j W_j/(w_j^2-lam^2) - p_an (finite form)
    double d_excl_;               // same but excluding the nearest node
    int nearest_;
    double one_minus_ell_near_;   // sum of stencil ell's other than nearest
};

/// pv_quadrature: PV + delta split of \int f/(w^2-lam^2 +- i0+) dw for f
/// sampled on the rule's nodes.
cplx pv_quadrature(const std::vector<double>& f, const Rule1D& rule, double lambda,
                   I0Sign sign, int stencil_size = 4);

/// Richardson (polynomial) extrapolation of samples (eta_i, y_i) to eta=0.
cplx richardson_zero(const std::vector<double>& etas, const std::vector<cplx>& values);

/// Interpolation weights at eta=0 for the given eta list (sum to 1).
std::vector<double> richardson_weights(const std::vector<double>& etas);

/// Complex-shift realization of \int_lo^hi f(w)/(w^2-lam^2 +- i eta) dw,
/// eta -> 0: adaptive panels graded toward the pole per eta, then Richardson
/// extrapolation over the eta list. etas are absolute shifts, descending.
cplx complex_shift_integral(const std::function<double(double)>& f, double lo,
                            double hi, double lambda, I0Sign sign,
                            const std::vector<double>& etas, int per_panel = 16);

}  // namespace polariton
