#pragma once

#include <cmath>
#include <stdexcept>

namespace polariton {

enum class UnitSystem { natural, si };

/// Fundamental constants of the field-medium model. The relation
/// eps0 * mu0 * c^2 = 1 is enforced at construction; the natural system
/// sets all four constants to one so grids and tolerances stay O(1).
struct PhysicalConstants {
    double eps0 = 1.0;
    double mu0 = 1.0;
    double c = 1.0;
    double hbar = 1.0;
    UnitSystem unit_system = UnitSystem::natural;

    static PhysicalConstants natural() { return PhysicalConstants{}; }

    static PhysicalConstants si() {
        PhysicalConstants k;
        k.eps0 = 8.8541878128e-12;
        k.mu0 = 1.25663706212e-6;
        k.c = 2.99792458e8;
        k.hbar = 1.054571817e-34;
        k.unit_system = UnitSystem::si;
        k.validate();
        return k;
    }

    void validate() const {
        if (eps0 <= 0 || mu0 <= 0 || c <= 0 || hbar <= 0)
            throw std::invalid_argument("physical constants must be positive");
        const double rel = eps0 * mu0 * c * c - 1.0;
        if (std::abs(rel) > 1e-9)
            throw std::invalid_argument("eps0*mu0*c^2 must equal 1");
    }
};

}  // namespace polariton
