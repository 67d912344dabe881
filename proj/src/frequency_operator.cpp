#include "polariton/frequency_operator.hpp"

#include <cmath>
#include <sstream>

#include "polariton/errors.hpp"

namespace polariton {

cplx weighted_dot(const SpectralGrid& grid, const BlockVector& x, const BlockVector& y) {
    if (!x.conforms(grid) || !y.conforms(grid))
        throw std::invalid_argument("weighted_dot: shape mismatch");
    cplx acc(0.0, 0.0);
    const auto& fl = grid.field_labels();
    const auto& ml = grid.medium_labels();
    for (std::size_t i = 0; i < fl.size(); ++i)
        acc += fl[i].weight * std::conj(x.u(i)) * y.u(i);
    for (std::size_t i = 0; i < ml.size(); ++i)
        acc += ml[i].weight * std::conj(x.v(i)) * y.v(i);
    return acc;
}

double weighted_norm(const SpectralGrid& grid, const BlockVector& x) {
    return std::sqrt(std::abs(weighted_dot(grid, x, x)));
}

OperatorHandle::OperatorHandle(const MediumModel& medium, const SpectralGrid& grid)
    : medium_(&medium), grid_(&grid) {
    const std::size_t nf = grid.n_field();
    const std::size_t nm = grid.n_medium();
    const std::size_t nvox = medium.voxel_count();
    const std::size_t nnu = grid.nu_rule().size();
    const double h3 = std::pow(medium.edge(), 3);

    T_.resize(nf, 3 * nvox);
    const double bound = basis_norm_constant() * (1.0 + 1e-12);
    for (std::size_t kap = 0; kap < nf; ++kap) {
        const auto& lbl = grid.field_labels()[kap];
        for (std::size_t m = 0; m < nvox; ++m) {
            const Vec3 phi = basis_eval(lbl, medium.voxels()[m].center);
            for (int j = 0; j < 3; ++j) {
                T_(kap, 3 * m + j) = phi(j);
                if (!(std::abs(phi(j)) <= bound))
                    throw std::logic_error("overlap table exceeds the basis amplitude bound");
            }
        }
    }

    alpha_.resize(nnu, nvox);
    for (std::size_t a = 0; a < nnu; ++a)
        for (std::size_t m = 0; m < nvox; ++m)
            alpha_(a, m) = alpha_scaled(medium, m, grid.nu_rule().nodes[a]);

    const std::size_t n = nf + nm;
    diag_.resize(n);
    weights_.resize(n);
    for (std::size_t i = 0; i < nf; ++i) {
        const auto& lbl = grid.field_labels()[i];
        diag_(i) = lbl.omega * lbl.omega;
        weights_(i) = lbl.weight;
    }
    for (std::size_t i = 0; i < nm; ++i) {
        const auto& lbl = grid.medium_labels()[i];
        diag_(nf + i) = lbl.nu * lbl.nu;
        weights_(nf + i) = lbl.weight;
    }
    sqrt_weights_ = weights_.cwiseSqrt();

    // Low-rank factorization of the weighted coupling: Z = [U | S] with
    // U[kappa, (m,j)] = sqrt(w_kappa) omega_kappa T(kappa, mj)  (field block),
    // S[(a,m,j), (m,j)] = sqrt(w_nu h^3) alpha(a, m)             (medium block),
    // and C = [[0, I], [I, I/h^3]].
    const std::size_t p0 = 3 * nvox;
    Z_ = Eigen::MatrixXd::Zero(n, 2 * p0);
    for (std::size_t kap = 0; kap < nf; ++kap) {
        const auto& lbl = grid.field_labels()[kap];
        const double f = std::sqrt(lbl.weight) * lbl.omega;
        for (std::size_t col = 0; col < p0; ++col) Z_(kap, col) = f * T_(kap, col);
    }
    for (std::size_t i = 0; i < nm; ++i) {
        const auto& lbl = grid.medium_labels()[i];
        const std::size_t col = p0 + 3 * lbl.voxel + lbl.component;
        Z_(nf + i, col) = std::sqrt(lbl.weight) * alpha_(lbl.nu_index, lbl.voxel);
    }
    C_ = Eigen::MatrixXd::Zero(2 * p0, 2 * p0);
    C_inv_ = Eigen::MatrixXd::Zero(2 * p0, 2 * p0);
    for (std::size_t i = 0; i < p0; ++i) {
        C_(i, p0 + i) = 1.0;
        C_(p0 + i, i) = 1.0;
        C_(p0 + i, p0 + i) = 1.0 / h3;
        C_inv_(i, i) = -1.0 / h3;
        C_inv_(i, p0 + i) = 1.0;
        C_inv_(p0 + i, i) = 1.0;
    }
}

BlockVector OperatorHandle::apply_omega0_sq(const BlockVector& x) const {
    if (!x.conforms(*grid_)) throw std::invalid_argument("apply_omega0_sq: shape mismatch");
    BlockVector y = x;
    const auto& fl = grid_->field_labels();
    const auto& ml = grid_->medium_labels();
    for (std::size_t i = 0; i < fl.size(); ++i) y.u(i) *= fl[i].omega * fl[i].omega;
    for (std::size_t i = 0; i < ml.size(); ++i) y.v(i) *= ml[i].nu * ml[i].nu;
    return y;
}

BlockVector OperatorHandle::apply_coupling_V(const BlockVector& x) const {
    if (!x.conforms(*grid_)) throw std::invalid_argument("apply_coupling_V: shape mismatch");
    const std::size_t nf = grid_->n_field();
    const std::size_t nvox = medium_->voxel_count();
    const std::size_t nnu = grid_->nu_rule().size();
    const auto& nu_w = grid_->nu_rule().weights;
    const double h3 = std::pow(medium_->edge(), 3);

    BlockVector y = BlockVector::zero(*grid_);

    // (B v)(kappa) = omega_kappa sum_{nu,m,j} w_nu h^3 alpha(nu,m) T(kappa,mj) v
    Eigen::VectorXcd P = Eigen::VectorXcd::Zero(3 * nvox);
    for (std::size_t a = 0; a < nnu; ++a)
        for (std::size_t m = 0; m < nvox; ++m) {
            const double f = nu_w[a] * h3 * alpha_(a, m);
            for (int j = 0; j < 3; ++j)
                P(3 * m + j) += f * x.v(grid_->medium_index(static_cast<int>(a),
                                                            static_cast<int>(m), j));
        }
    Eigen::VectorXcd TP = T_ * P;
    for (std::size_t kap = 0; kap < nf; ++kap)
        y.u(kap) = grid_->field_labels()[kap].omega * TP(kap);

    // (B^T u)(nu,m,j) = alpha(nu,m) sum_kappa w_kappa omega_kappa T(kappa,mj) u
    Eigen::VectorXcd wu(nf);
    for (std::size_t kap = 0; kap < nf; ++kap) {
        const auto& lbl = grid_->field_labels()[kap];
        wu(kap) = lbl.weight * lbl.omega * x.u(kap);
    }
    Eigen::VectorXcd Q = T_.transpose() * wu;

    // (A v)(nu,m,j) = alpha(nu,m) sum_{nu'} w_nu' alpha(nu',m) v(nu',m,j)
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(nvox, 3);
    for (std::size_t a = 0; a < nnu; ++a)
        for (std::size_t m = 0; m < nvox; ++m)
            for (int j = 0; j < 3; ++j)
                S(m, j) += nu_w[a] * alpha_(a, m) *
                           x.v(grid_->medium_index(static_cast<int>(a), static_cast<int>(m), j));

    for (std::size_t a = 0; a < nnu; ++a)
        for (std::size_t m = 0; m < nvox; ++m)
            for (int j = 0; j < 3; ++j) {
                const std::size_t d =
                    grid_->medium_index(static_cast<int>(a), static_cast<int>(m), j);
                y.v(d) = alpha_(a, m) * (Q(3 * m + j) + S(m, j));
            }
    return y;
}

Eigen::VectorXcd OperatorHandle::apply_coupling_weighted(const Eigen::VectorXcd& xw) const {
    if (xw.size() != static_cast<Eigen::Index>(size()))
        throw std::invalid_argument("apply_coupling_weighted: shape mismatch");
    return Z_ * (C_ * (Z_.transpose() * xw));
}

Eigen::VectorXcd OperatorHandle::apply_sym(const Eigen::VectorXcd& xw) const {
    Eigen::VectorXcd y = apply_coupling_weighted(xw);
    y.array() += diag_.array() * xw.array();
    return y;
}

Eigen::MatrixXd OperatorHandle::assemble_dense(std::size_t cap) const {
    const std::size_t n = size();
    if (n > cap) {
        std::ostringstream msg;
        msg << "assemble_dense: system size " << n << " exceeds the dense cap " << cap
            << "; reduce the grid or raise the cap";
        throw SolverError(msg.str());
    }
    Eigen::MatrixXd M = Z_ * C_ * Z_.transpose();
    M.diagonal() += diag_;
    // enforce exact symmetry against round-off
    M = 0.5 * (M + M.transpose()).eval();
    return M;
}

}  // namespace polariton
