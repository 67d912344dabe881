#pragma once

#include <variant>
#include <vector>

#include "polariton/errors.hpp"

namespace polariton {

/// Constant absorption value on a frequency band, exactly zero outside.
struct ConstantDielectric {
    double value = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
};

struct DrudeLorentzTerm {
    double plasma_freq = 0.0;  // omega_p
    double damping = 0.0;      // gamma
    double resonance = 0.0;    // nu_0; zero gives the plain Drude form
};

struct DrudeLorentzDielectric {
    std::vector<DrudeLorentzTerm> terms;
};

/// Piecewise-linear table; clamps to zero outside the tabulated range.
struct TabulatedDielectric {
    std::vector<double> nu;
    std::vector<double> value;
};

/// Imaginary part of the dielectric response, eps_i(nu) >= 0 for nu > 0.
class DielectricModel {
public:
    using Variant = std::variant<ConstantDielectric, DrudeLorentzDielectric, TabulatedDielectric>;

    DielectricModel() : variant_(ConstantDielectric{}) {}
    explicit DielectricModel(Variant v, bool strict_positivity = false);

    /// eps_i(nu); nu must be positive.
    double epsilon_imag(double nu) const;

    bool strict_positivity() const { return strict_positivity_; }
    const Variant& variant() const { return variant_; }

    /// Model scaled so that the coupling alpha picks up the factor `s`
    /// (eps_i scales by s^2).
    DielectricModel scaled_coupling(double s) const;

private:
    Variant variant_;
    bool strict_positivity_ = false;
};

}  // namespace polariton
