#include "polariton/spectral_grid.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polariton/errors.hpp"

namespace polariton {

std::pair<Vec3, Vec3> polarization_vectors(const Vec3& direction) {
    const double n = direction.norm();
    if (n == 0.0) throw std::domain_error("polarization_vectors: zero direction");
    const Vec3 khat = direction / n;
    Vec3 ref = Vec3::UnitZ();
    if (std::abs(khat.dot(Vec3::UnitZ())) > 1.0 - 1e-12) ref = Vec3::UnitX();
    Vec3 ep = khat.cross(ref);
    ep.normalize();
    const Vec3 em = khat.cross(ep);
    return {ep, em};
}

double basis_norm_constant() {
    return 1.0 / (2.0 * std::pow(std::numbers::pi, 1.5));
}

Vec3 basis_eval(const FieldLabel& label, const Vec3& r) {
    const double phase = label.k.dot(r);
    const double osc = (label.parity == Parity::cos) ? std::cos(phase) : std::sin(phase);
    return basis_norm_constant() * osc * label.eps;
}

SpectralGrid::SpectralGrid(const GridConfig& cfg, const MediumModel& medium)
    : cfg_(cfg), c_(medium.constants().c), n_vox_(medium.voxel_count()) {
    if (cfg.n_k < 1 || cfg.n_theta < 1 || cfg.n_eta < 1 || cfg.n_nu < 1)
        throw ConfigError("grid node counts must be positive");
    if (cfg.k_max <= 0.0) throw ConfigError("k_max must be positive");
    if (cfg.nu_min < 0.0 || cfg.nu_max <= cfg.nu_min)
        throw ConfigError("nu range must satisfy 0 <= nu_min < nu_max");

    Rule1D k_rule = gauss_legendre_rule(cfg.n_k, 0.0, cfg.k_max);
    radial_omega_.lo = 0.0;
    radial_omega_.hi = c_ * cfg.k_max;
    radial_omega_.nodes.resize(k_rule.size());
    radial_omega_.weights.resize(k_rule.size());
    for (std::size_t i = 0; i < k_rule.size(); ++i) {
        radial_omega_.nodes[i] = c_ * k_rule.nodes[i];
        radial_omega_.weights[i] = c_ * k_rule.weights[i];
    }

    theta_rule_ = gauss_legendre_rule(cfg.n_theta, 0.0, 0.5 * std::numbers::pi);
    eta_rule_ = gauss_legendre_rule(cfg.n_eta, 0.0, 2.0 * std::numbers::pi);
    nu_rule_ = gauss_legendre_rule(cfg.n_nu, cfg.nu_min, cfg.nu_max);

    if (cfg.pv_mode) {
        std::ostringstream collisions;
        bool any = false;
        for (std::size_t i = 0; i < radial_omega_.size(); ++i)
            for (std::size_t a = 0; a < nu_rule_.size(); ++a) {
                const double w = radial_omega_.nodes[i], nu = nu_rule_.nodes[a];
                if (std::abs(w - nu) < 1e-9 * std::max(1.0, std::abs(w))) {
                    collisions << (any ? ", " : "") << "(omega[" << i << "]=" << w
                               << ", nu[" << a << "]=" << nu << ")";
                    any = true;
                }
            }
        if (any)
            throw ConfigError("PV quadrature requires disjoint omega/nu nodes; colliding: " +
                              collisions.str());
    }

    field_.reserve(static_cast<std::size_t>(cfg.n_k) * cfg.n_theta * cfg.n_eta * 4);
    for (int ir = 0; ir < cfg.n_k; ++ir) {
        const double k = k_rule.nodes[ir];
        const double wk = k_rule.weights[ir] * k * k;  // omega^2/c^3 measure in k form
        for (int it = 0; it < cfg.n_theta; ++it) {
            const double th = theta_rule_.nodes[it];
            const double wt = theta_rule_.weights[it] * std::sin(th);
            for (int ie = 0; ie < cfg.n_eta; ++ie) {
                const double et = eta_rule_.nodes[ie];
                const double we = eta_rule_.weights[ie];
                const Vec3 khat(std::sin(th) * std::cos(et), std::sin(th) * std::sin(et),
                                std::cos(th));
                const auto [ep, em] = polarization_vectors(khat);
                for (int s = 0; s < 2; ++s) {
                    for (int p = 0; p < 2; ++p) {
                        FieldLabel lbl;
                        lbl.k = k * khat;
                        lbl.k_magnitude = k;
                        lbl.theta = th;
                        lbl.eta = et;
                        lbl.sigma = static_cast<Polarization>(s);
                        lbl.parity = static_cast<Parity>(p);
                        lbl.eps = (s == 0) ? ep : em;
                        lbl.omega = c_ * k;
                        lbl.weight = wk * wt * we;
                        lbl.radial_index = ir;
                        field_.push_back(lbl);
                    }
                }
            }
        }
    }

    const double h3 = std::pow(medium.edge(), 3);
    medium_.reserve(static_cast<std::size_t>(cfg.n_nu) * n_vox_ * 3);
    for (int a = 0; a < cfg.n_nu; ++a) {
        for (std::size_t m = 0; m < n_vox_; ++m) {
            for (int j = 0; j < 3; ++j) {
                MediumLabel lbl;
                lbl.nu = nu_rule_.nodes[a];
                lbl.nu_index = a;
                lbl.voxel = static_cast<int>(m);
                lbl.component = j;
                lbl.weight = nu_rule_.weights[a] * h3;
                medium_.push_back(lbl);
            }
        }
    }
}

std::size_t SpectralGrid::field_index(int ir, int it, int ie, Polarization s, Parity p) const {
    const std::size_t idx =
        (((static_cast<std::size_t>(ir) * cfg_.n_theta + it) * cfg_.n_eta + ie) * 2 +
         static_cast<std::size_t>(s)) *
            2 +
        static_cast<std::size_t>(p);
    return idx;
}

std::size_t SpectralGrid::medium_index(int inu, int voxel, int j) const {
    return (static_cast<std::size_t>(inu) * n_vox_ + voxel) * 3 + j;
}

SpectralGrid build_grids(const GridConfig& cfg, const MediumModel& medium) {
    return SpectralGrid(cfg, medium);
}

std::string SpectralGrid::to_json() const {
    nlohmann::json j;
    j["n_k"] = cfg_.n_k;
    j["n_theta"] = cfg_.n_theta;
    j["n_eta"] = cfg_.n_eta;
    j["n_nu"] = cfg_.n_nu;
    j["k_max"] = cfg_.k_max;
    j["nu_min"] = cfg_.nu_min;
    j["nu_max"] = cfg_.nu_max;
    j["n_field_labels"] = n_field();
    j["n_medium_labels"] = n_medium();
    j["omega_nodes"] = radial_omega_.nodes;
    j["omega_weights"] = radial_omega_.weights;
    j["nu_nodes"] = nu_rule_.nodes;
    j["nu_weights"] = nu_rule_.weights;
    return j.dump(2);
}

}  // namespace polariton
