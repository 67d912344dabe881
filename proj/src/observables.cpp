#include "polariton/observables.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polariton/errors.hpp"

namespace polariton {

void validate_exterior_points(const MediumModel& medium, const std::vector<Vec3>& points) {
    std::ostringstream bad;
    bool any = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (medium.contains(points[i])) {
            bad << (any ? ", " : "") << i;
            any = true;
        }
    }
    if (any)
        throw ConfigError("evaluation points inside the medium at indices: " + bad.str());
}

namespace {

/// B[3p+i, kappa] = sqrt(w_kappa) beta_kappa(r_p)_i with
/// beta = -sqrt(hbar/(2 eps0)) omega_kappa phi_kappa(r).
Eigen::MatrixXd beta_matrix(const OperatorHandle& op, const std::vector<Vec3>& points) {
    const auto& grid = op.grid();
    const auto& k = op.medium().constants();
    const double pref = -std::sqrt(k.hbar / (2.0 * k.eps0));
    Eigen::MatrixXd B(3 * points.size(), grid.n_field());
    for (std::size_t kap = 0; kap < grid.n_field(); ++kap) {
        const auto& lbl = grid.field_labels()[kap];
        const double f = pref * std::sqrt(lbl.weight) * lbl.omega;
        for (std::size_t p = 0; p < points.size(); ++p) {
            const Vec3 phi = basis_eval(lbl, points[p]);
            for (int i = 0; i < 3; ++i) B(3 * p + i, kap) = f * phi(i);
        }
    }
    return B;
}

FieldModeMap map_from_weighted_columns(const OperatorHandle& op,
                                       const Eigen::MatrixXcd& columns, I0Sign sign,
                                       const std::vector<Vec3>& points) {
    const auto& grid = op.grid();
    validate_exterior_points(op.medium(), points);
    const Eigen::MatrixXd B = beta_matrix(op, points);
    Eigen::MatrixXcd coeffs = B * columns.topRows(grid.n_field());
    // per-mode 1/sqrt(lambda)
    for (std::size_t l = 0; l < grid.n_field(); ++l)
        coeffs.col(l) /= std::sqrt(grid.field_labels()[l].omega);
    for (std::size_t l = 0; l < grid.n_medium(); ++l)
        coeffs.col(grid.n_field() + l) /= std::sqrt(grid.medium_labels()[l].nu);

    FieldModeMap map;
    map.points = points;
    map.sign = sign;
    map.e_coeffs = coeffs.leftCols(grid.n_field());
    map.m_coeffs = coeffs.rightCols(grid.n_medium());
    return map;
}

}  // namespace

FieldModeMap efield_mode_map(const OperatorHandle& op, const WaveOperatorMatrix& wave,
                             const std::vector<Vec3>& points) {
    if (wave.n_field != op.grid().n_field() || wave.n_medium != op.grid().n_medium())
        throw std::invalid_argument("efield_mode_map: wave operator grid mismatch");
    return map_from_weighted_columns(op, wave.W, wave.sign, points);
}

FieldModeMap efield_mode_map(const OperatorHandle& op,
                             const std::vector<PolaritonEigenfunction>& solutions,
                             const std::vector<Vec3>& points) {
    const auto& grid = op.grid();
    const std::size_t n = grid.n_total();
    Eigen::MatrixXcd columns = Eigen::MatrixXcd::Zero(n, n);
    std::vector<char> seen(n, 0);
    I0Sign sign = I0Sign::plus;
    for (const auto& psi : solutions) {
        const std::size_t col = column_index(grid, psi.family, psi.label);
        columns.col(col) = psi.blocks.flat().cwiseProduct(op.sqrt_weights().cast<cplx>());
        seen[col] = 1;
        sign = psi.sign;
    }
    std::ostringstream missing;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) {
            missing << (any ? ", " : "") << (i < grid.n_field() ? "e:" : "m:")
                    << (i < grid.n_field() ? i : i - grid.n_field());
            any = true;
        }
    if (any) throw SolverError("efield_mode_map: missing modes: " + missing.str());
    return map_from_weighted_columns(op, columns, sign, points);
}

FieldModeMap free_field_coefficients(const OperatorHandle& op, const std::vector<Vec3>& points) {
    const auto& grid = op.grid();
    validate_exterior_points(op.medium(), points);
    const auto& k = op.medium().constants();
    FieldModeMap map;
    map.points = points;
    map.e_coeffs = Eigen::MatrixXcd::Zero(3 * points.size(), grid.n_field());
    map.m_coeffs = Eigen::MatrixXcd::Zero(3 * points.size(), grid.n_medium());
    for (std::size_t l = 0; l < grid.n_field(); ++l) {
        const auto& lbl = grid.field_labels()[l];
        const double f = -std::sqrt(lbl.weight) * std::sqrt(k.hbar * lbl.omega / (2.0 * k.eps0));
        for (std::size_t p = 0; p < points.size(); ++p) {
            const Vec3 phi = basis_eval(lbl, points[p]);
            for (int i = 0; i < 3; ++i) map.e_coeffs(3 * p + i, l) = f * phi(i);
        }
    }
    return map;
}

Tensor3c first_order_field_kernel(const MediumModel& model, double nu, const Vec3& r_src,
                                  const Vec3& r_obs, I0Sign sign, const KernelQuadrature& kq) {
    const auto vox = model.voxel_at(r_src);
    if (!vox) throw ConfigError("first_order_field_kernel: r_src must lie in the medium");
    if (model.contains(r_obs))
        throw ConfigError("first_order_field_kernel: r_obs must lie outside the medium");
    const double eps_i = model.epsilon_imag(*vox, nu);
    if (eps_i == 0.0) return Tensor3c::Zero();
    const auto& k = model.constants();
    const Tensor3c g0 = green_vacuum(nu, r_src, r_obs, sign, k, kq);
    const Tensor3d fnf = near_field_F(nu, r_src, r_obs, k);
    const double pref =
        std::sqrt(k.hbar * k.mu0 / (std::numbers::pi * k.c * k.c)) * nu * nu * std::sqrt(eps_i);
    return pref * (g0 + fnf.cast<cplx>());
}

BulkIdentityResult bulk_identity_residual(const MediumModel& model, double nu, const Vec3& rA,
                                          const Vec3& rB, const KernelQuadrature& kq,
                                          I0Sign sign) {
    if (model.contains(rA) || model.contains(rB))
        throw ConfigError("bulk_identity_residual: rA and rB must lie outside the medium");
    const auto& k = model.constants();
    const double h3 = std::pow(model.edge(), 3);
    Tensor3c lhs = Tensor3c::Zero();
    for (std::size_t m = 0; m < model.voxel_count(); ++m) {
        const Vec3 r = model.voxels()[m].center;
        const double eps_i = model.epsilon_imag(m, nu);
        if (eps_i == 0.0) continue;
        const Tensor3c gA = green_vacuum(nu, r, rA, sign, k, kq);
        const Tensor3c gB = green_vacuum(nu, r, rB, sign, k, kq);
        lhs += h3 * eps_i * (gA.transpose() * gB.conjugate());
    }
    lhs *= nu * nu / (k.c * k.c);

    BulkIdentityResult out;
    out.lhs = lhs;
    out.rhs = green_vacuum(nu, rA, rB, sign, k, kq).imag();
    out.residual = lhs - out.rhs.cast<cplx>();
    out.ratio = out.residual.norm() / out.rhs.norm();
    return out;
}

SpectralReport spectral_report(const OperatorHandle& op,
                               const std::vector<PolaritonEigenfunction>& solutions) {
    const auto& grid = op.grid();
    SpectralReport rep;
    rep.n_field_expected = grid.n_field();
    rep.n_medium_expected = grid.n_medium();
    std::vector<char> seen(grid.n_total(), 0);
    for (const auto& psi : solutions) {
        SpectralReport::Mode m;
        m.family = psi.family;
        m.label = psi.label;
        m.lambda = psi.lambda;
        m.norm = weighted_norm(grid, psi.blocks);
        m.residual = psi.residual;
        rep.max_residual = std::max(rep.max_residual, psi.residual);
        (psi.family == Family::e ? rep.e_modes : rep.m_modes).push_back(m);
        seen[column_index(grid, psi.family, psi.label)] = 1;
    }
    std::ostringstream missing;
    bool any = false;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) {
            missing << (any ? ", " : "") << (i < grid.n_field() ? "e:" : "m:")
                    << (i < grid.n_field() ? i : i - grid.n_field());
            any = true;
        }
    if (any) throw SolverError("spectral_report: missing modes: " + missing.str());
    if (rep.e_modes.size() != rep.n_field_expected ||
        rep.m_modes.size() != rep.n_medium_expected)
        throw SolverError("spectral_report: family counts do not match the grid");
    return rep;
}

std::string SpectralReport::to_json() const {
    nlohmann::json j;
    j["n_e_modes"] = e_modes.size();
    j["n_m_modes"] = m_modes.size();
    j["n_field_expected"] = n_field_expected;
    j["n_medium_expected"] = n_medium_expected;
    j["max_residual"] = max_residual;
    auto dump = [](const std::vector<Mode>& modes) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& m : modes) {
            arr.push_back({{"label", m.label},
                           {"lambda", m.lambda},
                           {"norm", m.norm},
                           {"residual", m.residual}});
        }
        return arr;
    };
    j["e_modes"] = dump(e_modes);
    j["m_modes"] = dump(m_modes);
    return j.dump(2);
}

}  // namespace polariton
