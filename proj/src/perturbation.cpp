#include "polariton/perturbation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "polariton/errors.hpp"

namespace polariton {

namespace {

constexpr double kMinSeparation = 1e-12;

struct Moments {
    double a;  // transverse cosine moment \int_0^1 cos(xt)(1+t^2) dt
    double b;  // longitudinal moment     2 \int_0^1 cos(xt)(1-t^2) dt
};

Moments cosine_moments(double x, int per_panel) {
    static thread_local std::vector<double> gx, gw;
    static thread_local int cached_n = 0;
    if (cached_n != per_panel) {
        gauss_legendre(per_panel, gx, gw);
        cached_n = per_panel;
    }
    const int panels = std::max(2, static_cast<int>(std::ceil(std::abs(x) / std::numbers::pi)) * 2);
    const double dt = 1.0 / panels;
    double a = 0.0, b = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * dt, half = 0.5 * dt;
        for (int i = 0; i < per_panel; ++i) {
            const double t = mid + half * gx[i];
            const double w = half * gw[i];
            const double ct = std::cos(x * t);
            a += w * ct * (1.0 + t * t);
            b += w * ct * (1.0 - t * t);
        }
    }
    return {a, 2.0 * b};
}

Rule1D kernel_omega_rule(double d_over_c, const KernelQuadrature& kq) {
    const double period = 2.0 * std::numbers::pi / std::max(d_over_c, 1e-12);
    int panels = static_cast<int>(std::ceil(kq.omega_max / period * kq.panels_per_period));
    panels = std::max(panels, kq.min_panels);
    return composite_gauss_rule(kq.per_panel, panels, 0.0, kq.omega_max);
}

}  // namespace

Tensor3d g_tensor(double omega, const Vec3& r_src, const Vec3& r_obs, double c,
                  const KernelQuadrature& kq) {
    const Vec3 dr = r_obs - r_src;
    const double d = dr.norm();
    if (d < kMinSeparation) throw std::domain_error("g_tensor: coincident points");
    const Vec3 n = dr / d;
    const double x = omega * d / c;
    const auto [ma, mb] = cosine_moments(x, kq.t_per_panel);
    // measure (omega^2/c^3), basis norm squared 1/(4 pi^3), azimuth 2pi, half-sphere 1/2
    const double pref = omega * omega / (c * c * c) / (4.0 * std::numbers::pi * std::numbers::pi);
    Tensor3d out = pref * (ma * (Tensor3d::Identity() - n * n.transpose()) +
                           mb * (n * n.transpose()));
    return out;
}

Tensor3d g_tensor_bruteforce(double omega, const Vec3& r_src, const Vec3& r_obs, double c,
                             int n_theta, int n_eta) {
    const Rule1D th = gauss_legendre_rule(n_theta, 0.0, 0.5 * std::numbers::pi);
    const Rule1D et = gauss_legendre_rule(n_eta, 0.0, 2.0 * std::numbers::pi);
    const double k = omega / c;
    const double n2 = basis_norm_constant() * basis_norm_constant();
    Tensor3d acc = Tensor3d::Zero();
    for (std::size_t it = 0; it < th.size(); ++it) {
        const double sth = std::sin(th.nodes[it]);
        for (std::size_t ie = 0; ie < et.size(); ++ie) {
            const Vec3 khat(sth * std::cos(et.nodes[ie]), sth * std::sin(et.nodes[ie]),
                            std::cos(th.nodes[it]));
            const auto [ep, em] = polarization_vectors(khat);
            const Vec3 kv = k * khat;
            // parity sum: cos cos + sin sin = cos(k.(r_obs - r_src))
            const double osc = std::cos(kv.dot(r_obs - r_src));
            const Tensor3d pol = ep * ep.transpose() + em * em.transpose();
            acc += th.weights[it] * sth * et.weights[ie] * osc * pol;
        }
    }
    return (omega * omega / (c * c * c)) * n2 * acc;
}

Tensor3d near_field_F(double nu, const Vec3& r_src, const Vec3& r_obs,
                      const PhysicalConstants& k) {
    if (nu <= 0.0) throw std::domain_error("near_field_F: nu must be positive");
    const Vec3 dr = r_obs - r_src;
    const double d = dr.norm();
    if (d < kMinSeparation) throw std::domain_error("near_field_F: coincident points");
    const Vec3 n = dr / d;
    const double pref = -k.c * k.c / (4.0 * std::numbers::pi * nu * nu * d * d * d);
    return pref * (Tensor3d::Identity() - 3.0 * (n * n.transpose()));
}

Tensor3d transverse_delta_far(const Vec3& dr) {
    const double d = dr.norm();
    if (d < kMinSeparation) throw std::domain_error("transverse_delta_far: zero separation");
    const Vec3 n = dr / d;
    const double pref = -1.0 / (4.0 * std::numbers::pi * d * d * d);
    return pref * (Tensor3d::Identity() - 3.0 * (n * n.transpose()));
}

namespace {

/// Shared PV+delta omega integral: \int w(omega) f(omega) g(omega) dw with
/// f either 1 (green kernel) or omega^2 (direct L path), divided by
/// (omega^2 - nu^2 +- i0+).
Tensor3c pv_kernel_integral(double nu, const Vec3& r_src, const Vec3& r_obs, I0Sign sign,
                            double c, const KernelQuadrature& kq, bool omega_sq_numerator) {
    const Vec3 dr = r_obs - r_src;
    const double d = dr.norm();
    if (d < kMinSeparation) throw std::domain_error("kernel integral: coincident points");
    if (nu <= 0.0) throw std::domain_error("kernel integral: nu must be positive");
    const Rule1D rule = kernel_omega_rule(d / c, kq);
    if (nu >= rule.hi)
        throw ConfigError("kernel integral: nu must lie below the omega cutoff");
    const auto window = taper_window(rule, kq.taper_fraction, kq.taper_order);
    PVContext ctx(rule, nu, sign, kq.pv_stencil);

    // tensors are symmetric: integrate the 6 independent components
    std::array<std::pair<int, int>, 6> comp{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
    std::array<std::vector<double>, 6> samples;
    for (auto& s : samples) s.resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double w = rule.nodes[i];
        Tensor3d g = g_tensor(w, r_src, r_obs, c, kq);
        double f = window[i];
        if (omega_sq_numerator) f *= w * w;
        for (int q = 0; q < 6; ++q)
            samples[q][i] = f * g(comp[q].first, comp[q].second);
    }
    Tensor3c out;
    for (int q = 0; q < 6; ++q) {
        const cplx val = ctx.integrate(samples[q]);
        out(comp[q].first, comp[q].second) = val;
        out(comp[q].second, comp[q].first) = val;
    }
    return out;
}

}  // namespace

Tensor3c green_vacuum(double nu, const Vec3& r_src, const Vec3& r_obs, I0Sign sign,
                      const PhysicalConstants& k, const KernelQuadrature& kq) {
    return k.c * k.c * pv_kernel_integral(nu, r_src, r_obs, sign, k.c, kq, false);
}

Tensor3c kernel_L(double nu, const Vec3& r_src, const Vec3& r_obs, I0Sign sign,
                  const PhysicalConstants& k, const KernelQuadrature& kq, KernelPath path) {
    if (path == KernelPath::direct)
        return pv_kernel_integral(nu, r_src, r_obs, sign, k.c, kq, true);
    const Tensor3c g0 = green_vacuum(nu, r_src, r_obs, sign, k, kq);
    const Tensor3d fnf = near_field_F(nu, r_src, r_obs, k);
    return (nu * nu / (k.c * k.c)) * (g0 + fnf.cast<cplx>());
}

CompletenessResult delta_completeness(const Vec3& r_src, const Vec3& r_obs, double c,
                                      const KernelQuadrature& kq) {
    const Vec3 dr = r_obs - r_src;
    const double d = dr.norm();
    if (d < kMinSeparation) throw std::domain_error("delta_completeness: coincident points");
    const Rule1D rule = kernel_omega_rule(d / c, kq);
    const auto window = taper_window(rule, kq.taper_fraction, kq.taper_order);
    Tensor3d acc = Tensor3d::Zero();
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc += rule.weights[i] * window[i] * g_tensor(rule.nodes[i], r_src, r_obs, c, kq);
    // large-omega amplitude of g grows like omega/(2 pi^2 c^2 d); one
    // oscillation period of the untapered remainder bounds the tail
    const double amp = kq.omega_max / (2.0 * std::numbers::pi * std::numbers::pi * c * c * d);
    CompletenessResult res;
    res.integral = acc;
    res.tail_estimate = amp * c / d;
    return res;
}

PolaritonEigenfunction first_order_psi(const OperatorHandle& op, Family family,
                                       std::size_t label, const RegularizationPolicy& reg) {
    reg.validate();
    const auto& grid = op.grid();
    const double lambda = label_lambda(grid, family, label);
    bool perturbed = false;
    const Eigen::VectorXcd E = solve_resolvent_diagonal(op, lambda, reg, &perturbed);
    const std::size_t nf = grid.n_field();
    const std::size_t col = column_index(grid, family, label);

    // psi(1) = phi - R0 V phi assembled from the closed first-order forms;
    // in weighted coordinates V phi collapses to a single column of the
    // coupling factorization.
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(op.size());
    psi(col) = 1.0;

    if (family == Family::e) {
        const auto& lbl = grid.field_labels()[label];
        const double sw = std::sqrt(lbl.weight);
        for (std::size_t i = 0; i < grid.n_medium(); ++i) {
            const auto& ml = grid.medium_labels()[i];
            const double coupling = std::sqrt(ml.weight) *
                                    op.alpha_table()(ml.nu_index, ml.voxel) * sw * lbl.omega *
                                    op.overlap_table()(label, 3 * ml.voxel + ml.component);
            psi(nf + i) -= E(nf + i) * coupling;
        }
    } else {
        const auto& dl = grid.medium_labels()[label];
        const double sw = std::sqrt(dl.weight);
        const double alpha0 = op.alpha_table()(dl.nu_index, dl.voxel);
        for (std::size_t kap = 0; kap < nf; ++kap) {
            const auto& fl = grid.field_labels()[kap];
            const double coupling = std::sqrt(fl.weight) * fl.omega *
                                    op.overlap_table()(kap, 3 * dl.voxel + dl.component) * sw *
                                    alpha0;
            psi(kap) -= E(kap) * coupling;
        }
        for (std::size_t i = 0; i < grid.n_medium(); ++i) {
            const auto& ml = grid.medium_labels()[i];
            if (ml.voxel != dl.voxel || ml.component != dl.component) continue;
            const double coupling = std::sqrt(ml.weight) *
                                    op.alpha_table()(ml.nu_index, ml.voxel) * sw * alpha0;
            psi(nf + i) -= E(nf + i) * coupling;
        }
    }

    PolaritonEigenfunction out;
    out.family = family;
    out.label = label;
    out.lambda = lambda;
    out.sign = reg.sign;
    out.pv_node_warning = perturbed;
    const Eigen::VectorXcd func = psi.cwiseQuotient(op.sqrt_weights().cast<cplx>());
    out.blocks = BlockVector::from_flat(grid, func);
    Eigen::VectorXcd r = op.apply_coupling_weighted(psi);
    r.array() += (op.diagonal().array() - lambda * lambda) * psi.array();
    out.residual_full = r.norm() / psi.norm();
    out.residual = out.residual_full;
    return out;
}

}  // namespace polariton
