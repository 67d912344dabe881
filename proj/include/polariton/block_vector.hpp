#pragma once

#include <Eigen/Core>

#include "polariton/spectral_grid.hpp"

namespace polariton {

/// Two-block state mirroring the (field, medium) phase-space split:
/// u indexed by FieldLabel, v by MediumLabel. Stored in function
/// coordinates (raw nodal values; quadrature weights live in the grid).
struct BlockVector {
    Eigen::VectorXcd u;
    Eigen::VectorXcd v;

    static BlockVector zero(const SpectralGrid& grid) {
        BlockVector x;
        x.u = Eigen::VectorXcd::Zero(grid.n_field());
        x.v = Eigen::VectorXcd::Zero(grid.n_medium());
        return x;
    }

    static BlockVector unit_field(const SpectralGrid& grid, std::size_t kappa) {
        BlockVector x = zero(grid);
        x.u(kappa) = 1.0;
        return x;
    }

    static BlockVector unit_medium(const SpectralGrid& grid, std::size_t d) {
        BlockVector x = zero(grid);
        x.v(d) = 1.0;
        return x;
    }

    std::size_t size() const { return static_cast<std::size_t>(u.size() + v.size()); }

    Eigen::VectorXcd flat() const {
        Eigen::VectorXcd f(u.size() + v.size());
        f << u, v;
        return f;
    }

    static BlockVector from_flat(const SpectralGrid& grid, const Eigen::VectorXcd& f) {
        BlockVector x;
        x.u = f.head(grid.n_field());
        x.v = f.tail(grid.n_medium());
        return x;
    }

    bool conforms(const SpectralGrid& grid) const {
        return u.size() == static_cast<Eigen::Index>(grid.n_field()) &&
               v.size() == static_cast<Eigen::Index>(grid.n_medium());
    }
};

/// Quadrature-weighted inner product <x, y> = sum w_i conj(x_i) y_i.
cplx weighted_dot(const SpectralGrid& grid, const BlockVector& x, const BlockVector& y);

/// Norm induced by weighted_dot.
double weighted_norm(const SpectralGrid& grid, const BlockVector& x);

}  // namespace polariton
