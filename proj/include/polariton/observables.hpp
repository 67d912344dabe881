#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "polariton/perturbation.hpp"

namespace polariton {

/// Electric-field mode-coefficient functions at exterior evaluation points,
/// split into the e-family and m-family contributions. Column l of each
/// matrix holds the complex 3-vector coefficients of mode l stacked over
/// points (3 rows per point).
struct FieldModeMap {
    std::vector<Vec3> points;
    Eigen::MatrixXcd e_coeffs;  // 3*n_points x n_field
    Eigen::MatrixXcd m_coeffs;  // 3*n_points x n_medium
    I0Sign sign = I0Sign::plus;

    Eigen::Vector3cd e_coeff(std::size_t point, std::size_t mode) const {
        return e_coeffs.block<3, 1>(3 * point, mode);
    }
    Eigen::Vector3cd m_coeff(std::size_t point, std::size_t mode) const {
        return m_coeffs.block<3, 1>(3 * point, mode);
    }

    double e_norm() const { return e_coeffs.norm(); }
    double m_norm() const { return m_coeffs.norm(); }
};

/// Validates that every point lies outside the medium; throws ConfigError
/// listing offending indices otherwise.
void validate_exterior_points(const MediumModel& medium, const std::vector<Vec3>& points);

/// Mode map from an assembled wave operator (all grid labels solved).
FieldModeMap efield_mode_map(const OperatorHandle& op, const WaveOperatorMatrix& wave,
                             const std::vector<Vec3>& points);

/// Mode map from a full list of solved eigenfunctions; throws SolverError
/// listing missing labels when the list does not cover the grid.
FieldModeMap efield_mode_map(const OperatorHandle& op,
                             const std::vector<PolaritonEigenfunction>& solutions,
                             const std::vector<Vec3>& points);

/// Zero-coupling coefficients: the free-field formula assembled with the
/// same discrete measure bookkeeping (m-family identically zero).
FieldModeMap free_field_coefficients(const OperatorHandle& op, const std::vector<Vec3>& points);

/// First-order field kernel sqrt(hbar mu0 / (pi c^2)) nu^2 eps_i^{1/2} (G0 + F_nf);
/// r_src must lie in the medium, r_obs outside.
Tensor3c first_order_field_kernel(const MediumModel& model, double nu, const Vec3& r_src,
                                  const Vec3& r_obs, I0Sign sign, const KernelQuadrature& kq);

struct BulkIdentityResult {
    Tensor3c lhs;       // (nu^2/c^2) \int_Vm eps_i G0^T(r, rA) G0^*(r, rB) d^3r
    Tensor3d rhs;       // Im G0(rA, rB)
    Tensor3c residual;  // lhs - rhs
    double ratio;       // ||residual||_F / ||rhs||_F
};

/// Diagnostic for the bulk Green-identity: reported, never asserted, since
/// the identity fails for finite media.
BulkIdentityResult bulk_identity_residual(const MediumModel& model, double nu, const Vec3& rA,
                                          const Vec3& rB, const KernelQuadrature& kq,
                                          I0Sign sign = I0Sign::plus);

struct SpectralReport {
    struct Mode {
        Family family;
        std::size_t label;
        double lambda;
        double norm;
        double residual;
    };
    std::vector<Mode> e_modes;
    std::vector<Mode> m_modes;
    double max_residual = 0.0;
    std::size_t n_field_expected = 0;
    std::size_t n_medium_expected = 0;

    std::string to_json() const;
};

/// Two-family inventory of the diagonalized spectrum; throws SolverError
/// listing missing modes if the solution set is incomplete.
SpectralReport spectral_report(const OperatorHandle& op,
                               const std::vector<PolaritonEigenfunction>& solutions);

}  // namespace polariton
