#include "polariton/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "polariton/perturbation.hpp"

namespace polariton {

namespace {

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool monotone_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] >= v[i - 1]) return false;
    return true;
}

std::vector<Vec3> exterior_points(const MediumModel& medium, std::mt19937& rng, int count,
                                  double min_dist, double max_dist) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ud(min_dist, max_dist);
    std::vector<Vec3> pts;
    while (static_cast<int>(pts.size()) < count) {
        Vec3 dir(u(rng), u(rng), u(rng));
        if (dir.norm() < 1e-3) continue;
        dir.normalize();
        const Vec3 p = dir * ud(rng);
        if (!medium.contains(p)) pts.push_back(p);
    }
    return pts;
}

/// Aggregate Frobenius norm of (full - first order) over every grid label.
double full_vs_pert1_norm(const OperatorHandle& op, const RegularizationPolicy& reg,
                          const SolveOptions& opts) {
    const auto wave = assemble_wave_operator(op, reg, opts);
    const auto& grid = op.grid();
    double acc = 0.0;
    for (std::size_t l = 0; l < grid.n_field(); ++l) {
        const auto p1 = first_order_psi(op, Family::e, l, reg);
        const Eigen::VectorXcd w1 =
            p1.blocks.flat().cwiseProduct(op.sqrt_weights().cast<cplx>());
        acc += (wave.W.col(l) - w1).squaredNorm();
    }
    for (std::size_t l = 0; l < grid.n_medium(); ++l) {
        const auto p1 = first_order_psi(op, Family::m, l, reg);
        const Eigen::VectorXcd w1 =
            p1.blocks.flat().cwiseProduct(op.sqrt_weights().cast<cplx>());
        acc += (wave.W.col(grid.n_field() + l) - w1).squaredNorm();
    }
    return std::sqrt(acc);
}

double kde_l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    // bandwidth from the reference (grid) spacing
    std::vector<double> gaps;
    for (std::size_t i = 1; i < sb.size(); ++i) gaps.push_back(sb[i] - sb[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    double med = gaps.empty() ? 1.0 : gaps[gaps.size() / 2];
    if (med <= 0.0) med = (sb.back() - sb.front()) / std::max<std::size_t>(sb.size(), 2);
    const double bw = 3.0 * med;
    const double lo = std::min(sa.front(), sb.front()) - 4.0 * bw;
    const double hi = std::max(sa.back(), sb.back()) + 4.0 * bw;
    const int nx = 801;
    const double dx = (hi - lo) / (nx - 1);
    auto kde = [&](const std::vector<double>& vals, double x) {
        double acc = 0.0;
        for (double v : vals) {
            const double t = (x - v) / bw;
            acc += std::exp(-0.5 * t * t);
        }
        return acc / (vals.size() * bw * std::sqrt(2.0 * std::numbers::pi));
    };
    double l1 = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double x = lo + i * dx;
        l1 += std::abs(kde(sa, x) - kde(sb, x)) * dx;
    }
    return 0.5 * l1;  // total variation style distance in [0, 1]
}

GridConfig refined(const GridConfig& base, int factor) {
    GridConfig g = base;
    g.n_k *= factor;
    g.n_nu *= factor;
    return g;
}

}  // namespace

GridConfig oracle_grid(const GridConfig& grid, std::size_t target_cap, std::size_t n_vox) {
    GridConfig g = grid;
    g.n_theta = std::min(g.n_theta, 2);
    g.n_eta = std::min(g.n_eta, 4);
    const std::size_t field_per_k = static_cast<std::size_t>(g.n_theta) * g.n_eta * 4;
    const std::size_t med_per_nu = 3 * n_vox;
    while (static_cast<std::size_t>(g.n_k) * field_per_k > target_cap / 2 && g.n_k > 3) --g.n_k;
    while (static_cast<std::size_t>(g.n_nu) * med_per_nu > target_cap / 2 && g.n_nu > 4) --g.n_nu;
    return g;
}

CheckResult check_orthonormality(const WaveOperatorMatrix& wave) {
    CheckResult r;
    r.name = "orthonormality";
    r.tolerance = 1e-3;
    r.criterion = "unitarity and completeness defects <= tol";
    r.values["unitarity_defect"] = wave.unitarity_defect;
    r.values["completeness_defect"] = wave.completeness_defect;
    r.pass = wave.unitarity_defect <= r.tolerance && wave.completeness_defect <= r.tolerance;
    return r;
}

CheckResult check_orthonormality_refinement(const RunConfig& cfg) {
    CheckResult r;
    r.name = "orthonormality_refinement";
    r.tolerance = 1e-3;
    r.criterion =
        "unitarity and completeness defects decrease over 3 factor-2 refinements; "
        "final unitarity defect <= tol; defect(W+) within 2x of defect(W-)";

    const MediumModel medium = cfg.make_medium();
    const SolveOptions opts = cfg.make_solve_options();
    GridConfig base = cfg.grid;
    base.n_k = std::max(2, base.n_k / 4);
    base.n_nu = std::max(2, base.n_nu / 4);

    std::vector<double> uni, comp;
    WaveOperatorMatrix finest;
    for (int level = 0; level < 3; ++level) {
        const GridConfig g = refined(base, 1 << level);
        const SpectralGrid grid(g, medium);
        const OperatorHandle op(medium, grid);
        auto wave = assemble_wave_operator(op, cfg.make_policy(), opts);
        uni.push_back(wave.unitarity_defect);
        comp.push_back(wave.completeness_defect);
        if (level == 2) finest = std::move(wave);
    }
    // opposite-sign defect at the finest level
    {
        RegularizationPolicy reg = cfg.make_policy();
        reg.sign = conjugate(reg.sign);
        const GridConfig g = refined(base, 4);
        const SpectralGrid grid(g, medium);
        const OperatorHandle op(medium, grid);
        const auto wave_conj = assemble_wave_operator(op, reg, opts);
        r.values["unitarity_defect_conj_sign"] = wave_conj.unitarity_defect;
        const double ratio =
            std::max(wave_conj.unitarity_defect, 1e-300) / std::max(finest.unitarity_defect, 1e-300);
        r.values["sign_defect_ratio"] = ratio;
        r.pass = ratio <= 2.0 && ratio >= 0.5;
    }
    r.trend = uni;
    for (double c : comp) r.trend.push_back(c);
    r.values["final_unitarity_defect"] = uni.back();
    r.values["final_completeness_defect"] = comp.back();
    r.pass = r.pass && monotone_decreasing(uni) && monotone_decreasing(comp) &&
             uni.back() <= r.tolerance && comp.back() <= r.tolerance;
    return r;
}

CheckResult check_zero_coupling(const RunConfig& cfg) {
    CheckResult r;
    r.name = "zero_coupling_exact";
    r.tolerance = 1e-14;
    r.criterion =
        "W = I with defect <= 1e-14; m-family coefficients exactly zero; "
        "e-family matches the free-field coefficients to 1e-12";

    const MediumModel medium = cfg.make_medium().scaled_coupling(0.0);
    const SpectralGrid grid(cfg.grid, medium);
    const OperatorHandle op(medium, grid);
    const auto wave = assemble_wave_operator(op, cfg.make_policy(), cfg.make_solve_options());
    r.values["unitarity_defect"] = wave.unitarity_defect;
    r.values["completeness_defect"] = wave.completeness_defect;

    std::mt19937 rng(cfg.seed);
    const double span = 3.0 * std::max({medium.edge(), cfg.lx, cfg.ly, cfg.lz});
    const auto pts = exterior_points(medium, rng, 4, 1.2 * medium.edge(), span);
    const auto map = efield_mode_map(op, wave, pts);
    const auto free = free_field_coefficients(op, pts);
    r.values["m_family_norm"] = map.m_norm();
    const double e_diff = (map.e_coeffs - free.e_coeffs).cwiseAbs().maxCoeff();
    r.values["e_vs_free_max"] = e_diff;
    r.pass = wave.unitarity_defect <= 1e-14 && wave.completeness_defect <= 1e-14 &&
             map.m_norm() == 0.0 && e_diff <= 1e-12;
    return r;
}

CheckResult check_order_scaling(const RunConfig& cfg) {
    CheckResult r;
    r.name = "order_scaling";
    r.tolerance = 0.1;  // slope window half-width around 2
    r.criterion =
        "log-log slope of ||psi_full - psi_pert1|| vs s in [1.9, 2.1]; "
        "||v_pert1(s)||/s constant within 1%; s=0 difference exactly zero";

    std::vector<double> scales = cfg.scales;
    std::sort(scales.begin(), scales.end(), std::greater<>());
    if (scales.size() < 3) throw ConfigError("order scaling needs >= 3 coupling scales");

    const MediumModel medium0 = cfg.make_medium();
    const RegularizationPolicy reg = cfg.make_policy();
    const SolveOptions opts = cfg.make_solve_options();

    std::vector<double> diffs, linear_ratios;
    for (double s : scales) {
        const MediumModel medium = medium0.scaled_coupling(s);
        const SpectralGrid grid(cfg.grid, medium);
        const OperatorHandle op(medium, grid);
        diffs.push_back(full_vs_pert1_norm(op, reg, opts));
        // the first-order medium block is linear in s
        const auto p1 = first_order_psi(op, Family::e, grid.n_field() / 2, reg);
        double v2 = 0.0;
        for (std::size_t i = 0; i < grid.n_medium(); ++i)
            v2 += grid.medium_labels()[i].weight * std::norm(p1.blocks.v(i));
        linear_ratios.push_back(std::sqrt(v2) / s);
    }
    const double slope = fit_loglog_slope(scales, diffs);
    r.values["slope"] = slope;
    r.trend = diffs;

    double lin_dev = 0.0;
    for (double q : linear_ratios)
        lin_dev = std::max(lin_dev, std::abs(q / linear_ratios.front() - 1.0));
    r.values["linearity_deviation"] = lin_dev;

    // s = 0: solved equals uncoupled exactly
    const MediumModel mz = medium0.scaled_coupling(0.0);
    const SpectralGrid gz(cfg.grid, mz);
    const OperatorHandle oz(mz, gz);
    const auto psi0 = solve_ls(oz, Family::e, 0, reg, opts);
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(oz.size());
    phi0(0) = 1.0 / oz.sqrt_weights()(0);
    const double zero_diff = (psi0.blocks.flat() - phi0).norm();
    r.values["zero_coupling_diff"] = zero_diff;

    r.pass = slope >= 1.9 && slope <= 2.1 && lin_dev <= 0.01 && zero_diff == 0.0;
    return r;
}

CheckResult check_kernel_identities(const RunConfig& cfg) {
    CheckResult r;
    r.name = "kernel_identities";
    r.tolerance = 1e-6;
    r.criterion =
        "L two-path relative agreement <= 1e-6; transverse-delta completeness <= 1e-3 "
        "for separations in [2,10] voxel lengths with omega_max*d >= 50; "
        "Sokhotski-Plemelj cross-method <= 1e-4; F_nf traceless";

    const MediumModel medium = cfg.make_medium();
    const auto& k = medium.constants();
    const KernelQuadrature kq = cfg.kernel;
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    const double h = medium.edge();
    const double nu = 0.5 * (cfg.grid.nu_min + cfg.grid.nu_max);

    double l_two_path = 0.0;
    double completeness = 0.0;
    for (double mult : {2.0, 4.0, 7.0, 10.0}) {
        Vec3 dir(u(rng), u(rng), u(rng));
        dir.normalize();
        const Vec3 r_src = medium.voxels().front().center;
        const Vec3 r_obs = r_src + mult * h * dir;
        const double d = mult * h;

        if (kq.omega_max * d / k.c >= 50.0) {
            const auto comp = delta_completeness(r_src, r_obs, k.c, kq);
            const Tensor3d ref = transverse_delta_far(r_obs - r_src);
            completeness = std::max(completeness, (comp.integral - ref).norm() / ref.norm());
        }
        const Tensor3c direct = kernel_L(nu, r_src, r_obs, I0Sign::plus, k, kq,
                                         KernelPath::direct);
        const Tensor3c decomp = kernel_L(nu, r_src, r_obs, I0Sign::plus, k, kq,
                                         KernelPath::decomposed);
        l_two_path = std::max(l_two_path, (direct - decomp).norm() / direct.norm());
    }
    r.values["l_two_path_max"] = l_two_path;
    r.values["delta_completeness_max"] = completeness;

    // Sokhotski-Plemelj cross-validation on Gaussian test functions
    double pv_cross = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const double mu = 1.0 + 0.5 * trial;
        const double lam = 1.3 + 0.3 * trial;
        auto f = [mu](double w) { return std::exp(-(w - mu) * (w - mu)); };
        const Rule1D rule = gauss_legendre_rule(240, 0.0, 6.0);
        std::vector<double> samples(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) samples[i] = f(rule.nodes[i]);
        const cplx pv = pv_quadrature(samples, rule, lam, I0Sign::minus, cfg.kernel.pv_stencil);
        const cplx cs = complex_shift_integral(
            f, 0.0, 6.0, lam, I0Sign::minus,
            {1e-2 * lam * lam, 1e-3 * lam * lam, 1e-4 * lam * lam});
        pv_cross = std::max(pv_cross, std::abs(pv - cs) / std::abs(pv));
    }
    r.values["pv_cross_method"] = pv_cross;

    double trace_rel = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        Vec3 dir(u(rng), u(rng), u(rng));
        dir.normalize();
        const Tensor3d F = near_field_F(nu, Vec3::Zero(), (2.0 + trial) * h * dir, k);
        trace_rel = std::max(trace_rel, std::abs(F.trace()) / F.norm());
    }
    r.values["fnf_trace_rel"] = trace_rel;

    r.pass = l_two_path <= 1e-6 && completeness <= 1e-3 && completeness > 0.0 &&
             pv_cross <= 1e-4 && trace_rel <= 1e-14;
    return r;
}

CheckResult check_kernel_teeth(const RunConfig& cfg) {
    CheckResult r;
    r.name = "kernel_check_teeth";
    r.tolerance = 2.0;
    r.criterion = "halving omega_max degrades the completeness match by at least 2x";

    const MediumModel medium = cfg.make_medium();
    const double h = medium.edge();
    const Vec3 r_src = medium.voxels().front().center;
    const Vec3 r_obs = r_src + Vec3(0.6, 0.48, 0.64).normalized() * 3.0 * h;
    const Tensor3d ref = transverse_delta_far(r_obs - r_src);

    KernelQuadrature kq = cfg.kernel;
    const auto full = delta_completeness(r_src, r_obs, medium.constants().c, kq);
    KernelQuadrature half = kq;
    half.omega_max *= 0.5;
    const auto halved = delta_completeness(r_src, r_obs, medium.constants().c, half);

    const double e_full = (full.integral - ref).norm() / ref.norm();
    const double e_half = (halved.integral - ref).norm() / ref.norm();
    r.values["error_full"] = e_full;
    r.values["error_half"] = e_half;
    r.values["degradation"] = e_half / std::max(e_full, 1e-300);
    r.pass = e_half >= 2.0 * e_full;
    return r;
}

CheckResult check_dense_oracle(const RunConfig& cfg) {
    CheckResult r;
    r.name = "dense_oracle";
    r.tolerance = 0.02;
    r.criterion =
        "min eigenvalue >= -1e-8 ||M||; smoothed spectral density within 2% L1; "
        "two-point function within 2% relative";

    const MediumModel medium = cfg.make_medium();
    const GridConfig g = oracle_grid(cfg.grid, 500, medium.voxel_count());
    const SpectralGrid grid(g, medium);
    const OperatorHandle op(medium, grid);

    const Eigen::MatrixXd M = op.assemble_dense(1000);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const Eigen::VectorXd eig = es.eigenvalues();
    const double scale = eig.cwiseAbs().maxCoeff();
    r.values["min_eig_over_norm"] = eig.minCoeff() / scale;

    std::vector<double> dense_vals(eig.data(), eig.data() + eig.size());
    const auto& d0 = op.diagonal();
    std::vector<double> grid_vals(d0.data(), d0.data() + d0.size());
    const double l1 = kde_l1_distance(dense_vals, grid_vals);
    r.values["density_l1"] = l1;

    // two-point function at two exterior points
    std::mt19937 rng(cfg.seed + 1);
    const auto pts = exterior_points(medium, rng, 2, 1.5 * medium.edge(), 4.0 * medium.edge());
    const auto wave = assemble_wave_operator(op, cfg.make_policy(), cfg.make_solve_options());
    const auto map = efield_mode_map(op, wave, pts);
    Eigen::MatrixXcd coeffs(map.e_coeffs.rows(), grid.n_total());
    coeffs << map.e_coeffs, map.m_coeffs;
    const Eigen::MatrixXcd T_ls = coeffs * coeffs.adjoint();

    // dense counterpart from the eigendecomposition
    const auto free = free_field_coefficients(op, pts);  // reuse beta assembly shape
    (void)free;
    Eigen::MatrixXcd T_dense = Eigen::MatrixXcd::Zero(T_ls.rows(), T_ls.cols());
    {
        // beta matrix rows for the two points
        const auto& kconst = medium.constants();
        Eigen::MatrixXd B(3 * pts.size(), grid.n_field());
        const double pref = -std::sqrt(kconst.hbar / (2.0 * kconst.eps0));
        for (std::size_t kap = 0; kap < grid.n_field(); ++kap) {
            const auto& lbl = grid.field_labels()[kap];
            const double f = pref * std::sqrt(lbl.weight) * lbl.omega;
            for (std::size_t p = 0; p < pts.size(); ++p) {
                const Vec3 phi = basis_eval(lbl, pts[p]);
                for (int i = 0; i < 3; ++i) B(3 * p + i, kap) = f * phi(i);
            }
        }
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            const double mu = std::sqrt(std::max(eig(i), 1e-300));
            const Eigen::VectorXd chi_u = es.eigenvectors().col(i).head(grid.n_field());
            const Eigen::VectorXcd c = (B * chi_u).cast<cplx>() / std::sqrt(mu);
            T_dense += c * c.adjoint();
        }
    }
    const double two_point = (T_ls - T_dense).norm() / T_dense.norm();
    r.values["two_point_rel"] = two_point;

    r.pass = eig.minCoeff() >= -1e-8 * scale && l1 <= 0.02 && two_point <= 0.02;
    return r;
}

CheckResult check_residual_bound(const RunConfig& cfg) {
    CheckResult r;
    r.name = "residual_bound";
    r.tolerance = 1e-6;
    r.criterion = "max eigen-residual (complex shift, extrapolated) <= 1e-6";

    const MediumModel medium = cfg.make_medium();
    const GridConfig g = oracle_grid(cfg.grid, 500, medium.voxel_count());
    const SpectralGrid grid(g, medium);
    const OperatorHandle op(medium, grid);
    RegularizationPolicy reg = RegularizationPolicy::complex_shift(cfg.make_policy().sign);
    reg.eta_rel = cfg.eta_rel;
    const auto wave = assemble_wave_operator(op, reg, cfg.make_solve_options());
    r.values["max_residual"] = wave.max_residual;
    r.values["max_residual_full"] = wave.max_residual_full;
    r.pass = wave.max_residual <= r.tolerance;
    return r;
}

CheckResult check_conjugation(const RunConfig& cfg) {
    CheckResult r;
    r.name = "pm_conjugation";
    r.tolerance = 1e-13;
    r.criterion = "psi(minus) equals conj(psi(plus)) elementwise";

    const MediumModel medium = cfg.make_medium();
    const GridConfig g = oracle_grid(cfg.grid, 400, medium.voxel_count());
    const SpectralGrid grid(g, medium);
    const OperatorHandle op(medium, grid);
    const SolveOptions opts = cfg.make_solve_options();

    RegularizationPolicy plus = cfg.make_policy();
    plus.sign = I0Sign::plus;
    RegularizationPolicy minus = plus;
    minus.sign = I0Sign::minus;

    double dev = 0.0;
    const std::vector<std::pair<Family, std::size_t>> picks = {
        {Family::e, 0},
        {Family::e, grid.n_field() / 2},
        {Family::m, 0},
        {Family::m, grid.n_medium() / 2}};
    for (const auto& [fam, lbl] : picks) {
        const auto pp = solve_ls(op, fam, lbl, plus, opts);
        const auto pm = solve_ls(op, fam, lbl, minus, opts);
        dev = std::max(dev,
                       (pm.blocks.flat() - pp.blocks.flat().conjugate()).cwiseAbs().maxCoeff());
    }
    r.values["max_deviation"] = dev;
    r.pass = dev <= r.tolerance;
    return r;
}

CheckResult check_bulk_identity(const RunConfig& cfg) {
    CheckResult r;
    r.name = "bulk_identity_failure";
    r.tolerance = 0.5;
    r.criterion =
        "||LHS - Im G0|| / ||Im G0|| >= 0.5 for the small medium and decreases "
        "monotonically as the medium grows over 3 sizes";

    const double h = cfg.h;
    const double nu = 0.5 * (cfg.grid.nu_min + cfg.grid.nu_max);
    DielectricModel diel(ConstantDielectric{cfg.eps_i, cfg.band_lo, cfg.band_hi});
    const Vec3 rA(0.35 * h, -0.2 * h, 2.6 * h);
    const Vec3 rB(-0.3 * h, 0.45 * h, 3.2 * h);

    std::vector<double> ratios;
    for (int layers = 1; layers <= 3; ++layers) {
        const SlabShape slab{2.0 * h, 2.0 * h, layers * h};
        const MediumModel medium = voxelize(slab, h, diel, PhysicalConstants::natural());
        const auto res = bulk_identity_residual(medium, nu, rA, rB, cfg.kernel);
        ratios.push_back(res.ratio);
    }
    r.trend = ratios;
    r.values["ratio_small"] = ratios.front();
    r.values["ratio_large"] = ratios.back();
    r.pass = ratios.front() >= 0.5 && monotone_decreasing(ratios);
    return r;
}

VerifyVerdict run_verify(const RunConfig& cfg) {
    VerifyVerdict verdict;
    verdict.config_hash = cfg.config_hash;
    const std::vector<CheckResult (*)(const RunConfig&)> battery = {
        &check_zero_coupling,     &check_order_scaling,   &check_orthonormality_refinement,
        &check_residual_bound,    &check_conjugation,     &check_kernel_identities,
        &check_kernel_teeth,      &check_dense_oracle,    &check_bulk_identity,
    };
    for (auto fn : battery) {
        CheckResult res = fn(cfg);
        verdict.all_pass = verdict.all_pass && res.pass;
        verdict.checks.push_back(std::move(res));
    }
    return verdict;
}

std::string VerifyVerdict::to_json() const {
    nlohmann::json j;
    j["all_pass"] = all_pass;
    j["config_sha256"] = config_hash;
    nlohmann::json checks;
    for (const auto& c : this->checks) {
        nlohmann::json e;
        e["pass"] = c.pass;
        e["tolerance"] = c.tolerance;
        e["criterion"] = c.criterion;
        nlohmann::json vals;
        for (const auto& [k, v] : c.values) vals[k] = v;
        e["values"] = vals;
        if (!c.trend.empty()) e["trend"] = c.trend;
        checks[c.name] = e;
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

}  // namespace polariton
