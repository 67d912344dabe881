#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "polariton/medium.hpp"
#include "polariton/quadrature.hpp"

namespace polariton {

enum class Polarization : std::uint8_t { plus = 0, minus = 1 };
enum class Parity : std::uint8_t { cos = 0, sin = 1 };

/// One discretized field mode kappa = (k, sigma, parity) with its quadrature
/// weight under the measure (omega^2/c^3) sin(theta) dtheta deta domega.
struct FieldLabel {
    Vec3 k;              // wave vector
    double k_magnitude;  // |k|
    double theta;        // polar angle in [0, pi/2] (half sphere)
    double eta;          // azimuth in [0, 2 pi)
    Polarization sigma;
    Parity parity;
    Vec3 eps;            // polarization unit vector eps_sigma(k)
    double omega;        // c |k|
    double weight;       // full d-kappa weight
    int radial_index;
};

/// One discretized medium oscillator (nu, voxel, orientation j).
struct MediumLabel {
    double nu;
    int nu_index;
    int voxel;
    int component;  // j in {0, 1, 2}
    double weight;  // w_nu * h^3
};

struct GridConfig {
    int n_k = 8;
    int n_theta = 3;
    int n_eta = 6;
    int n_nu = 8;
    double k_max = 4.0;
    double nu_min = 0.0;
    double nu_max = 3.0;
    bool pv_mode = false;  // reject omega/nu node coincidences
};

/// Deterministic polarization pair: eps_plus = normalized k x z (fallback
/// k x x near the pole), eps_minus = k_hat x eps_plus.
std::pair<Vec3, Vec3> polarization_vectors(const Vec3& direction);

/// All spectral labels and the 1-D rules behind them. Immutable after build.
class SpectralGrid {
public:
    SpectralGrid(const GridConfig& cfg, const MediumModel& medium);

    const std::vector<FieldLabel>& field_labels() const { return field_; }
    const std::vector<MediumLabel>& medium_labels() const { return medium_; }

    std::size_t n_field() const { return field_.size(); }
    std::size_t n_medium() const { return medium_.size(); }
    std::size_t n_total() const { return field_.size() + medium_.size(); }

    /// Radial rule expressed in omega: nodes c*k_i, plain d-omega weights.
    const Rule1D& radial_omega_rule() const { return radial_omega_; }
    /// nu rule with plain d-nu weights.
    const Rule1D& nu_rule() const { return nu_rule_; }

    const Rule1D& theta_rule() const { return theta_rule_; }  // weights exclude sin(theta)
    const Rule1D& eta_azimuth_rule() const { return eta_rule_; }

    std::size_t field_index(int ir, int it, int ie, Polarization s, Parity p) const;
    std::size_t medium_index(int inu, int voxel, int j) const;

    const GridConfig& config() const { return cfg_; }
    double c() const { return c_; }
    std::size_t voxel_count() const { return n_vox_; }

    std::string to_json() const;

private:
    GridConfig cfg_;
    double c_;
    std::size_t n_vox_;
    std::vector<FieldLabel> field_;
    std::vector<MediumLabel> medium_;
    Rule1D radial_omega_;
    Rule1D nu_rule_;
    Rule1D theta_rule_;
    Rule1D eta_rule_;
};

SpectralGrid build_grids(const GridConfig& cfg, const MediumModel& medium);

/// Transverse plane-wave basis function: (1/(2 pi^{3/2})) eps_sigma(k) times
/// cos(k.r) for parity c, sin(k.r) for parity s.
Vec3 basis_eval(const FieldLabel& label, const Vec3& r);

/// Normalization 1/(2 pi^{3/2}) shared with the kernel integrals.
double basis_norm_constant();

}  // namespace polariton
