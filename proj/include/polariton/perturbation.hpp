#pragma once

#include <Eigen/Core>

#include "polariton/ls_solver.hpp"

namespace polariton {

using Tensor3c = Eigen::Matrix3cd;
using Tensor3d = Eigen::Matrix3d;

/// Quadrature parameters for the closed-form kernel integrals. The omega
/// integrals run over [0, omega_max] on a composite rule dense enough for
/// the cos(omega d / c) oscillation, with a smooth high-order taper over the
/// last taper_fraction of the range. The taper realizes the improper
/// (Abel-summed) large-omega limit; the discarded tail magnitude is
/// reported, never silently dropped.
struct KernelQuadrature {
    double omega_max = 30.0;
    int per_panel = 8;
    double panels_per_period = 2.5;  // omega panels per oscillation period
    int min_panels = 32;
    double taper_fraction = 0.4;
    int taper_order = 9;
    int t_per_panel = 8;  // angular cosine-moment quadrature
    int pv_stencil = 4;

    static KernelQuadrature from_grid(const SpectralGrid& grid) {
        KernelQuadrature kq;
        kq.omega_max = grid.radial_omega_rule().hi;
        return kq;
    }
};

/// Angular-reduced transverse mode density
///   g(omega; r', r) = sum_{d_omega} phi(r') (x) phi(r)
/// evaluated with the analytic polarization sum and azimuthal reduction;
/// only the polar cosine moments are integrated numerically.
Tensor3d g_tensor(double omega, const Vec3& r_src, const Vec3& r_obs, double c,
                  const KernelQuadrature& kq);

/// Brute-force product-angular-quadrature evaluation of g (oracle path).
Tensor3d g_tensor_bruteforce(double omega, const Vec3& r_src, const Vec3& r_obs, double c,
                             int n_theta, int n_eta);

/// Vacuum Green kernel G0 = c^2 \int dw g(w; r', r) / (w^2 - nu^2 +- i0+).
/// The paper's outgoing (Sommerfeld) kernel G0^- corresponds to sign=plus.
Tensor3c green_vacuum(double nu, const Vec3& r_src, const Vec3& r_obs, I0Sign sign,
                      const PhysicalConstants& k, const KernelQuadrature& kq);

/// Near-field tensor, real and traceless, with the d^-3 dipole pattern.
Tensor3d near_field_F(double nu, const Vec3& r_src, const Vec3& r_obs,
                      const PhysicalConstants& k);

/// Far part of the transverse delta function; the contact term is never
/// evaluated (exterior points only).
Tensor3d transverse_delta_far(const Vec3& dr);

enum class KernelPath { direct, decomposed };

/// L(nu; r', r): either the defining PV+delta omega integral (direct) or
/// (nu^2/c^2) (G0 + F_nf) (decomposed).
Tensor3c kernel_L(double nu, const Vec3& r_src, const Vec3& r_obs, I0Sign sign,
                  const PhysicalConstants& k, const KernelQuadrature& kq,
                  KernelPath path = KernelPath::direct);

struct CompletenessResult {
    Tensor3d integral;      // tapered \int dw g(w; r', r)
    double tail_estimate;   // magnitude bound for the discarded tail
};

/// Completeness integral \int dw g, which must reproduce the far part of the
/// transverse delta once omega_max |r - r'| is large.
CompletenessResult delta_completeness(const Vec3& r_src, const Vec3& r_obs, double c,
                                      const KernelQuadrature& kq);

/// First-order Lippmann-Schwinger eigenfunction from the closed appendix
/// forms, regularized with the same policy object as the solver.
PolaritonEigenfunction first_order_psi(const OperatorHandle& op, Family family,
                                       std::size_t label, const RegularizationPolicy& reg);

}  // namespace polariton
