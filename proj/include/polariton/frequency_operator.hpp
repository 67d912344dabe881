#pragma once

#include <Eigen/Core>

#include "polariton/block_vector.hpp"
#include "polariton/medium.hpp"
#include "polariton/spectral_grid.hpp"

namespace polariton {

/// Discretized frequency operators Omega0^2 (diagonal) and the coupling V
/// with blocks B, B^T, A. Holds the cached voxel-basis overlap table
/// T[kappa, 3m+j] = phi_kappa(r_m)_j and the eps0-absorbed coupling table.
///
/// Two coordinate systems:
///  - function coordinates (BlockVector): nodal values, V symmetric w.r.t.
///    the quadrature inner product;
///  - weighted coordinates: x_w = sqrt(W) x, where Omega^2 is Euclidean
///    symmetric. All dense solves run there.
///
/// In weighted coordinates the coupling factorizes as Vw = Z C Z^T with
/// rank <= 6 * n_voxels; the solver exploits this for direct solves.
class OperatorHandle {
public:
    OperatorHandle(const MediumModel& medium, const SpectralGrid& grid);

    const SpectralGrid& grid() const { return *grid_; }
    const MediumModel& medium() const { return *medium_; }

    std::size_t size() const { return grid_->n_total(); }

    /// u'(kappa) = omega_kappa^2 u(kappa); v'(nu,r,j) = nu^2 v(nu,r,j).
    BlockVector apply_omega0_sq(const BlockVector& x) const;

    /// Coupling action in function coordinates (quadrature weights applied
    /// inside the sums, matching the continuum operator).
    BlockVector apply_coupling_V(const BlockVector& x) const;

    /// Diagonal of Omega0^2 over the flat index (field block first).
    const Eigen::VectorXd& diagonal() const { return diag_; }

    /// Quadrature weights over the flat index, and their square roots.
    const Eigen::VectorXd& weights() const { return weights_; }
    const Eigen::VectorXd& sqrt_weights() const { return sqrt_weights_; }

    /// Weighted-coordinate coupling applied matrix-free via Z C Z^T.
    Eigen::VectorXcd apply_coupling_weighted(const Eigen::VectorXcd& xw) const;

    /// Full weighted-coordinate operator: diag + Z C Z^T.
    Eigen::VectorXcd apply_sym(const Eigen::VectorXcd& xw) const;

    /// Dense symmetric matrix of Omega^2 in weighted coordinates.
    /// Refuses when size() exceeds the cap.
    Eigen::MatrixXd assemble_dense(std::size_t cap = 4000) const;

    const Eigen::MatrixXd& low_rank_Z() const { return Z_; }
    const Eigen::MatrixXd& low_rank_C() const { return C_; }
    const Eigen::MatrixXd& low_rank_C_inverse() const { return C_inv_; }

    /// phi_kappa(r_m)_j, n_field x 3*n_vox.
    const Eigen::MatrixXd& overlap_table() const { return T_; }
    /// alpha_scaled(nu_a, voxel m), n_nu x n_vox.
    const Eigen::MatrixXd& alpha_table() const { return alpha_; }

private:
    const MediumModel* medium_;
    const SpectralGrid* grid_;
    Eigen::MatrixXd T_;
    Eigen::MatrixXd alpha_;
    Eigen::VectorXd diag_;
    Eigen::VectorXd weights_;
    Eigen::VectorXd sqrt_weights_;
    Eigen::MatrixXd Z_;
    Eigen::MatrixXd C_;
    Eigen::MatrixXd C_inv_;
};

}  // namespace polariton
