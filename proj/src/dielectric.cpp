#include "polariton/dielectric.hpp"

#include <algorithm>
#include <cmath>

namespace polariton {

namespace {

struct Validator {
    bool strict;
    void operator()(const ConstantDielectric& c) const {
        if (c.value < 0.0)
            throw std::invalid_argument("constant eps_i must be nonnegative");
        if (c.band_hi <= c.band_lo)
            throw std::invalid_argument("constant eps_i band must be nonempty");
        if (strict && c.value <= 0.0)
            throw std::invalid_argument("strict positivity requires eps_i > 0 on the band");
    }
    void operator()(const DrudeLorentzDielectric& d) const {
        for (const auto& t : d.terms) {
            if (t.plasma_freq < 0.0 || t.damping < 0.0 || t.resonance < 0.0)
                throw std::invalid_argument("Drude-Lorentz parameters must be nonnegative");
        }
        if (strict) {
            bool any = false;
            for (const auto& t : d.terms)
                if (t.plasma_freq > 0.0 && t.damping > 0.0) any = true;
            if (!any)
                throw std::invalid_argument(
                    "strict positivity requires a term with plasma_freq > 0 and damping > 0");
        }
    }
    void operator()(const TabulatedDielectric& t) const {
        if (t.nu.size() != t.value.size() || t.nu.size() < 2)
            throw std::invalid_argument("tabulated eps_i needs >= 2 matching samples");
        if (!std::is_sorted(t.nu.begin(), t.nu.end()))
            throw std::invalid_argument("tabulated nu grid must ascend");
        for (double v : t.value)
            if (v < 0.0) throw std::invalid_argument("tabulated eps_i values must be nonnegative");
        if (strict)
            for (double v : t.value)
                if (v <= 0.0)
                    throw std::invalid_argument("strict positivity requires tabulated eps_i > 0");
    }
};

struct Evaluator {
    double nu;
    double operator()(const ConstantDielectric& c) const {
        return (nu >= c.band_lo && nu <= c.band_hi) ? c.value : 0.0;
    }
    double operator()(const DrudeLorentzDielectric& d) const {
        double acc = 0.0;
        for (const auto& t : d.terms) {
            const double wp2 = t.plasma_freq * t.plasma_freq;
            const double det = t.resonance * t.resonance - nu * nu;
            acc += wp2 * t.damping * nu / (det * det + t.damping * t.damping * nu * nu);
        }
        return acc;
    }
    double operator()(const TabulatedDielectric& t) const {
        if (nu <= t.nu.front() || nu >= t.nu.back()) {
            // exact endpoints still count as inside
            if (nu == t.nu.front()) return t.value.front();
            if (nu == t.nu.back()) return t.value.back();
            return 0.0;
        }
        const auto it = std::upper_bound(t.nu.begin(), t.nu.end(), nu);
        const std::size_t i = static_cast<std::size_t>(it - t.nu.begin());
        const double x0 = t.nu[i - 1], x1 = t.nu[i];
        const double y0 = t.value[i - 1], y1 = t.value[i];
        return y0 + (y1 - y0) * (nu - x0) / (x1 - x0);
    }
};

struct Scaler {
    double s2;
    DielectricModel::Variant operator()(ConstantDielectric c) const {
        c.value *= s2;
        return c;
    }
    DielectricModel::Variant operator()(DrudeLorentzDielectric d) const {
        for (auto& t : d.terms) t.plasma_freq *= std::sqrt(s2);
        return d;
    }
    DielectricModel::Variant operator()(TabulatedDielectric t) const {
        for (auto& v : t.value) v *= s2;
        return t;
    }
};

}  // namespace

DielectricModel::DielectricModel(Variant v, bool strict_positivity)
    : variant_(std::move(v)), strict_positivity_(strict_positivity) {
    std::visit(Validator{strict_positivity_}, variant_);
}

double DielectricModel::epsilon_imag(double nu) const {
    if (nu <= 0.0) throw std::domain_error("epsilon_imag: nu must be positive");
    return std::visit(Evaluator{nu}, variant_);
}

DielectricModel DielectricModel::scaled_coupling(double s) const {
    if (s < 0.0) throw std::domain_error("scaled_coupling: scale must be nonnegative");
    return DielectricModel(std::visit(Scaler{s * s}, variant_), false);
}

}  // namespace polariton
