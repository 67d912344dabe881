#pragma once

#include <vector>

#include "polariton/quadrature.hpp"

namespace polariton {

/// Concrete realization of the +-i0+ prescription in the resolvent.
struct RegularizationPolicy {
    enum class Kind { complex_shift, pv_split };

    Kind kind = Kind::complex_shift;
    I0Sign sign = I0Sign::plus;
    /// Shifts relative to lambda^2, strictly decreasing; Richardson
    /// extrapolation runs over this list.
    std::vector<double> eta_rel = {1e-2, 1e-3, 1e-4};
    /// Grid-resolution floor multiplier for discrete solves: each shift
    /// becomes eta_rel*lambda^2 + eta_floor*2*lambda*max(block spacing).
    /// Zero disables the floor; the extrapolation then targets eta -> 0.
    /// With the floor, extrapolation removes the eta_rel dependence and
    /// lands on the floored shift, which itself refines to zero with the
    /// grid. Needed because the bare eta -> 0 limit of a finite spectral
    /// grid is singular (point spectrum), which inflates wave-operator
    /// Gram defects at any fixed resolution.
    double eta_floor = 0.0;
    int pv_stencil = 4;

    void validate() const {
        if (kind == Kind::complex_shift) {
            if (eta_rel.size() < 2)
                throw std::invalid_argument("complex shift needs >= 2 eta values");
            for (std::size_t i = 0; i < eta_rel.size(); ++i) {
                if (eta_rel[i] <= 0.0)
                    throw std::invalid_argument("eta values must be positive");
                if (i > 0 && eta_rel[i] >= eta_rel[i - 1])
                    throw std::invalid_argument("eta values must strictly decrease");
            }
        }
        if (eta_floor < 0.0) throw std::invalid_argument("eta_floor must be >= 0");
        if (pv_stencil < 2) throw std::invalid_argument("pv stencil must have >= 2 nodes");
    }

    static RegularizationPolicy complex_shift(I0Sign s = I0Sign::plus) {
        RegularizationPolicy p;
        p.kind = Kind::complex_shift;
        p.sign = s;
        return p;
    }

    static RegularizationPolicy pv_split(I0Sign s = I0Sign::plus) {
        RegularizationPolicy p;
        p.kind = Kind::pv_split;
        p.sign = s;
        return p;
    }

    std::vector<double> etas_absolute(double lambda) const {
        std::vector<double> out;
        out.reserve(eta_rel.size());
        for (double e : eta_rel) out.push_back(e * lambda * lambda);
        return out;
    }
};

}  // namespace polariton
