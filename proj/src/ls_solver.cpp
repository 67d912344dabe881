#include "polariton/ls_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <thread>

#include "polariton/errors.hpp"

namespace polariton {

double label_lambda(const SpectralGrid& grid, Family family, std::size_t label) {
    if (family == Family::e) {
        if (label >= grid.n_field()) throw std::out_of_range("field label out of range");
        return grid.field_labels()[label].omega;
    }
    if (label >= grid.n_medium()) throw std::out_of_range("medium label out of range");
    return grid.medium_labels()[label].nu;
}

std::size_t column_index(const SpectralGrid& grid, Family family, std::size_t label) {
    return family == Family::e ? label : grid.n_field() + label;
}

namespace {

struct PVDiag {
    Eigen::VectorXcd entries;
    std::vector<int> field_stencil;
    std::vector<int> medium_stencil;
    bool perturbed = false;
    double lambda_used = 0.0;
};

bool strictly_inside(double x, const Rule1D& rule) {
    return x > rule.lo && x < rule.hi;
}

double nearest_node_distance(double lambda, const Rule1D& rule) {
    double d = std::numeric_limits<double>::infinity();
    for (double x : rule.nodes) d = std::min(d, std::abs(x - lambda));
    return d;
}

PVDiag build_pv_diag(const OperatorHandle& op, double lambda, const RegularizationPolicy& reg,
                     bool allow_perturb) {
    const auto& grid = op.grid();
    const Rule1D& wrule = grid.radial_omega_rule();
    const Rule1D& nrule = grid.nu_rule();

    PVDiag out;
    out.lambda_used = lambda;
    const double scale = std::max(1.0, std::abs(lambda));
    const double d_near = std::min(nearest_node_distance(lambda, wrule),
                                   nearest_node_distance(lambda, nrule));
    if (allow_perturb && d_near < 1e-9 * scale) {
        // grid-construction coincidence; nudge off the node and flag it
        out.lambda_used = lambda * (1.0 + 1e-9);
        out.perturbed = true;
    }
    const double lam = out.lambda_used;
    const double lam2 = lam * lam;

    std::optional<PVContext> ctx_f, ctx_m;
    if (strictly_inside(lam, wrule))
        ctx_f.emplace(wrule, lam, reg.sign, reg.pv_stencil);
    if (strictly_inside(lam, nrule))
        ctx_m.emplace(nrule, lam, reg.sign, reg.pv_stencil);

    const std::size_t nf = grid.n_field();
    const std::size_t nm = grid.n_medium();
    out.entries.resize(nf + nm);
    for (std::size_t i = 0; i < nf; ++i) {
        const auto& lbl = grid.field_labels()[i];
        out.entries(i) = ctx_f ? ctx_f->effective_entry(lbl.radial_index)
                               : cplx(1.0 / (lbl.omega * lbl.omega - lam2), 0.0);
    }
    for (std::size_t i = 0; i < nm; ++i) {
        const auto& lbl = grid.medium_labels()[i];
        out.entries(nf + i) = ctx_m ? ctx_m->effective_entry(lbl.nu_index)
                                    : cplx(1.0 / (lbl.nu * lbl.nu - lam2), 0.0);
    }
    if (ctx_f) out.field_stencil = ctx_f->stencil();
    if (ctx_m) out.medium_stencil = ctx_m->stencil();
    return out;
}

Eigen::VectorXcd shifted_diag(const OperatorHandle& op, double lambda, double eta, I0Sign sign) {
    const double s = (sign == I0Sign::plus) ? 1.0 : -1.0;
    const cplx shift(0.0, s * eta);
    const auto& d = op.diagonal();
    Eigen::VectorXcd e(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i)
        e(i) = 1.0 / (d(i) - lambda * lambda + shift);
    return e;
}

/// Direct solve of (I + diag(E) Vw) psi = e_col for a batch of unit columns.
class GroupSolver {
public:
    GroupSolver(const OperatorHandle& op, const Eigen::VectorXcd& E, SolveOptions::Method method,
                std::size_t dense_cap, const Eigen::MatrixXd* vw_dense)
        : op_(&op), E_(&E) {
        const std::size_t n = op.size();
        const std::size_t p = static_cast<std::size_t>(op.low_rank_Z().cols());
        bool use_woodbury;
        switch (method) {
            case SolveOptions::Method::dense_lu: use_woodbury = false; break;
            case SolveOptions::Method::woodbury: use_woodbury = true; break;
            default: use_woodbury = (p * 2 <= n) || (n > dense_cap);
        }
        if (use_woodbury) {
            const Eigen::MatrixXd& Z = op.low_rank_Z();
            EZ_ = E.asDiagonal() * Z.cast<cplx>();
            Eigen::MatrixXcd K = op.low_rank_C_inverse().cast<cplx>() + Z.transpose() * EZ_;
            lu_p_.compute(K);
            check_condition(lu_p_.matrixLU().diagonal());
            woodbury_ = true;
        } else {
            if (n > dense_cap) {
                std::ostringstream msg;
                msg << "dense LU refused: system size " << n << " exceeds cap " << dense_cap;
                throw SolverError(msg.str());
            }
            Eigen::MatrixXcd A;
            if (vw_dense) {
                A = E.asDiagonal() * vw_dense->cast<cplx>();
            } else {
                const Eigen::MatrixXd vw =
                    op.low_rank_Z() * op.low_rank_C() * op.low_rank_Z().transpose();
                A = E.asDiagonal() * vw.cast<cplx>();
            }
            A.diagonal().array() += 1.0;
            lu_n_.compute(A);
            check_condition(lu_n_.matrixLU().diagonal());
            woodbury_ = false;
        }
    }

    Eigen::VectorXcd solve_unit(std::size_t col) const {
        const std::size_t n = op_->size();
        if (woodbury_) {
            const Eigen::VectorXcd z = op_->low_rank_Z().row(col).transpose().cast<cplx>();
            const Eigen::VectorXcd g = lu_p_.solve(z);
            Eigen::VectorXcd psi = -(EZ_ * g);
            psi(col) += 1.0;
            return psi;
        }
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        rhs(col) = 1.0;
        return lu_n_.solve(rhs);
    }

    Eigen::VectorXcd solve_rhs(const Eigen::VectorXcd& rhs) const {
        if (woodbury_) {
            const Eigen::VectorXcd z = op_->low_rank_Z().transpose().cast<cplx>() * rhs;
            const Eigen::VectorXcd g = lu_p_.solve(z);
            return rhs - EZ_ * g;
        }
        return lu_n_.solve(rhs);
    }

private:
    static void check_condition(const Eigen::VectorXcd& lu_diag) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (Eigen::Index i = 0; i < lu_diag.size(); ++i) {
            const double a = std::abs(lu_diag(i));
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        if (lo == 0.0 || hi / lo > 1e14) {
            std::ostringstream msg;
            msg << "singular Lippmann-Schwinger system (pivot-ratio condition estimate "
                << (lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo) << ")";
            throw SolverError(msg.str());
        }
    }

    const OperatorHandle* op_;
    const Eigen::VectorXcd* E_;
    Eigen::MatrixXcd EZ_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_p_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_n_;
    bool woodbury_ = false;
};

std::vector<char> exclusion_mask(const OperatorHandle& op, double lambda,
                                 const RegularizationPolicy& reg, const PVDiag* pv) {
    const auto& grid = op.grid();
    std::vector<char> mask(op.size(), 0);
    if (reg.kind == RegularizationPolicy::Kind::pv_split && pv) {
        for (std::size_t i = 0; i < grid.n_field(); ++i)
            for (int s : pv->field_stencil)
                if (grid.field_labels()[i].radial_index == s) mask[i] = 1;
        for (std::size_t i = 0; i < grid.n_medium(); ++i)
            for (int s : pv->medium_stencil)
                if (grid.medium_labels()[i].nu_index == s) mask[grid.n_field() + i] = 1;
    } else {
        const double eta_max = etas_effective(op, lambda, reg).front();
        const auto& d = op.diagonal();
        for (Eigen::Index i = 0; i < d.size(); ++i)
            if (std::abs(d(i) - lambda * lambda) <= 10.0 * eta_max) mask[i] = 1;
    }
    return mask;
}

struct ResidualPair {
    double excluded;
    double full;
};

ResidualPair column_residual(const OperatorHandle& op, double lambda,
                             const Eigen::VectorXcd& psi, const std::vector<char>& mask) {
    Eigen::VectorXcd r = op.apply_coupling_weighted(psi);
    r.array() += (op.diagonal().array() - lambda * lambda) * psi.array();
    const double norm = psi.norm();
    if (norm == 0.0) return {0.0, 0.0};
    double full = r.norm() / norm;
    double excl2 = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i)
        if (!mask[static_cast<std::size_t>(i)]) excl2 += std::norm(r(i));
    return {std::sqrt(excl2) / norm, full};
}

struct LambdaGroup {
    double lambda;
    Family family;
    std::vector<std::size_t> labels;   // family-local label indices
};

std::vector<LambdaGroup> make_groups(const SpectralGrid& grid) {
    std::vector<LambdaGroup> groups;
    const int nk = grid.config().n_k;
    groups.reserve(nk + grid.config().n_nu);
    for (int ir = 0; ir < nk; ++ir) {
        LambdaGroup g;
        g.lambda = grid.radial_omega_rule().nodes[ir];
        g.family = Family::e;
        for (std::size_t i = 0; i < grid.n_field(); ++i)
            if (grid.field_labels()[i].radial_index == ir) g.labels.push_back(i);
        groups.push_back(std::move(g));
    }
    for (int a = 0; a < grid.config().n_nu; ++a) {
        LambdaGroup g;
        g.lambda = grid.nu_rule().nodes[a];
        g.family = Family::m;
        for (std::size_t i = 0; i < grid.n_medium(); ++i)
            if (grid.medium_labels()[i].nu_index == a) g.labels.push_back(i);
        groups.push_back(std::move(g));
    }
    return groups;
}

void parallel_over(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    unsigned n = workers > 0 ? static_cast<unsigned>(workers)
                             : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(count));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < count; i += n) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

Eigen::VectorXcd pv_resolvent_diagonal(const OperatorHandle& op, double lambda,
                                       const RegularizationPolicy& reg) {
    return build_pv_diag(op, lambda, reg, false).entries;
}

std::vector<double> etas_effective(const OperatorHandle& op, double lambda,
                                   const RegularizationPolicy& reg) {
    std::vector<double> out = reg.etas_absolute(lambda);
    if (reg.eta_floor > 0.0) {
        const auto& wr = op.grid().radial_omega_rule();
        const auto& nr = op.grid().nu_rule();
        const double dw = (wr.hi - wr.lo) / static_cast<double>(wr.size());
        const double dn = (nr.hi - nr.lo) / static_cast<double>(nr.size());
        const double floor = reg.eta_floor * 2.0 * lambda * std::max(dw, dn);
        for (double& e : out) e += floor;
    }
    return out;
}

Eigen::VectorXcd cs_resolvent_diagonal(const OperatorHandle& op, double lambda,
                                       const RegularizationPolicy& reg) {
    const auto etas = etas_effective(op, lambda, reg);
    // weights come from the bare list: with a floor the extrapolation
    // removes the eta_rel dependence and targets the floored shift
    const auto c = richardson_weights(reg.eta_rel);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(op.size());
    for (std::size_t i = 0; i < etas.size(); ++i)
        acc += c[i] * shifted_diag(op, lambda, etas[i], reg.sign);
    return acc;
}

Eigen::VectorXcd solve_resolvent_diagonal(const OperatorHandle& op, double lambda,
                                          const RegularizationPolicy& reg, bool* perturbed) {
    if (reg.kind == RegularizationPolicy::Kind::pv_split) {
        const PVDiag pv = build_pv_diag(op, lambda, reg, true);
        if (perturbed) *perturbed = pv.perturbed;
        return pv.entries;
    }
    if (perturbed) *perturbed = false;
    return cs_resolvent_diagonal(op, lambda, reg);
}

BlockVector resolvent_solve(const OperatorHandle& op, double lambda, const BlockVector& rhs,
                            const RegularizationPolicy& reg) {
    if (lambda <= 0.0) throw std::domain_error("resolvent_solve: lambda must be positive");
    if (!rhs.conforms(op.grid())) throw std::invalid_argument("resolvent_solve: shape mismatch");
    reg.validate();
    const Eigen::VectorXcd diag = (reg.kind == RegularizationPolicy::Kind::pv_split)
                                      ? pv_resolvent_diagonal(op, lambda, reg)
                                      : cs_resolvent_diagonal(op, lambda, reg);
    Eigen::VectorXcd flat = rhs.flat().cwiseProduct(diag);
    return BlockVector::from_flat(op.grid(), flat);
}

namespace {

struct SolvedColumn {
    Eigen::VectorXcd psi;                 // extrapolated weighted column
    std::vector<Eigen::VectorXcd> per_eta;  // ComplexShift only
    ResidualPair residual{0.0, 0.0};
    bool pv_warn = false;
};

/// Solve every requested label of one lambda group.
std::vector<SolvedColumn> solve_lambda_group(const OperatorHandle& op, const LambdaGroup& grp,
                                             const RegularizationPolicy& reg,
                                             const SolveOptions& opts,
                                             const Eigen::MatrixXd* vw_dense, bool keep_eta) {
    const auto& grid = op.grid();
    std::vector<SolvedColumn> out(grp.labels.size());
    std::vector<std::size_t> cols(grp.labels.size());
    for (std::size_t i = 0; i < grp.labels.size(); ++i)
        cols[i] = column_index(grid, grp.family, grp.labels[i]);

    if (reg.kind == RegularizationPolicy::Kind::pv_split) {
        const PVDiag pv = build_pv_diag(op, grp.lambda, reg, true);
        GroupSolver solver(op, pv.entries, opts.method, opts.dense_cap, vw_dense);
        const auto mask = exclusion_mask(op, pv.lambda_used, reg, &pv);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out[i].psi = solver.solve_unit(cols[i]);
            out[i].residual = column_residual(op, pv.lambda_used, out[i].psi, mask);
            out[i].pv_warn = pv.perturbed;
        }
        return out;
    }

    const auto etas = etas_effective(op, grp.lambda, reg);
    const auto c = richardson_weights(reg.eta_rel);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out[i].psi = Eigen::VectorXcd::Zero(op.size());
        if (keep_eta) out[i].per_eta.resize(etas.size());
    }
    for (std::size_t e = 0; e < etas.size(); ++e) {
        const Eigen::VectorXcd E = shifted_diag(op, grp.lambda, etas[e], reg.sign);
        GroupSolver solver(op, E, opts.method, opts.dense_cap, vw_dense);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            Eigen::VectorXcd psi_eta = solver.solve_unit(cols[i]);
            out[i].psi += c[e] * psi_eta;
            if (keep_eta) out[i].per_eta[e] = std::move(psi_eta);
        }
    }
    const auto mask = exclusion_mask(op, grp.lambda, reg, nullptr);
    for (std::size_t i = 0; i < cols.size(); ++i)
        out[i].residual = column_residual(op, grp.lambda, out[i].psi, mask);
    return out;
}

PolaritonEigenfunction make_eigenfunction(const OperatorHandle& op, Family family,
                                          std::size_t label, double lambda, I0Sign sign,
                                          const SolvedColumn& col) {
    PolaritonEigenfunction psi;
    psi.family = family;
    psi.label = label;
    psi.lambda = lambda;
    psi.sign = sign;
    Eigen::VectorXcd func = col.psi.cwiseQuotient(op.sqrt_weights().cast<cplx>());
    psi.blocks = BlockVector::from_flat(op.grid(), func);
    psi.residual = col.residual.excluded;
    psi.residual_full = col.residual.full;
    psi.pv_node_warning = col.pv_warn;
    return psi;
}

}  // namespace

PolaritonEigenfunction solve_ls(const OperatorHandle& op, Family family, std::size_t label,
                                const RegularizationPolicy& reg, const SolveOptions& opts) {
    reg.validate();
    LambdaGroup grp;
    grp.lambda = label_lambda(op.grid(), family, label);
    grp.family = family;
    grp.labels = {label};
    const auto solved = solve_lambda_group(op, grp, reg, opts, nullptr, false);
    return make_eigenfunction(op, family, label, grp.lambda, reg.sign, solved.front());
}

BornResult born_series(const OperatorHandle& op, Family family, std::size_t label,
                       const RegularizationPolicy& reg, int max_order, double tol) {
    reg.validate();
    if (max_order < 0) throw std::invalid_argument("born_series: max_order must be >= 0");
    const auto& grid = op.grid();
    const double lambda = label_lambda(grid, family, label);
    const std::size_t col = column_index(grid, family, label);

    std::vector<Eigen::VectorXcd> diags;
    std::vector<double> cweights;
    if (reg.kind == RegularizationPolicy::Kind::pv_split) {
        diags.push_back(build_pv_diag(op, lambda, reg, true).entries);
        cweights.push_back(1.0);
    } else {
        const auto etas = etas_effective(op, lambda, reg);
        const auto c = richardson_weights(reg.eta_rel);
        for (std::size_t e = 0; e < etas.size(); ++e) {
            diags.push_back(shifted_diag(op, lambda, etas[e], reg.sign));
            cweights.push_back(c[e]);
        }
    }

    const std::size_t kvar = diags.size();
    std::vector<Eigen::VectorXcd> term(kvar), sum(kvar);
    for (std::size_t v = 0; v < kvar; ++v) {
        term[v] = Eigen::VectorXcd::Zero(op.size());
        term[v](col) = 1.0;
        sum[v] = term[v];
    }

    BornResult result;
    result.order_used = 0;
    result.converged = false;
    auto combine = [&](const std::vector<Eigen::VectorXcd>& parts) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(op.size());
        for (std::size_t v = 0; v < kvar; ++v) acc += cweights[v] * parts[v];
        return acc;
    };

    for (int order = 1; order <= max_order; ++order) {
        for (std::size_t v = 0; v < kvar; ++v) {
            term[v] = -(diags[v].cwiseProduct(op.apply_coupling_weighted(term[v])));
            sum[v] += term[v];
        }
        const double inc = combine(term).norm();
        result.increments.push_back(inc);
        // a vanishing first correction means the label is uncoupled
        result.order_used = (order == 1 && inc == 0.0) ? 0 : order;
        const double ref = std::max(combine(sum).norm(), 1e-300);
        if (inc <= tol * ref) {
            result.converged = true;
            break;
        }
    }
    if (max_order == 0) result.converged = true;

    SolvedColumn colres;
    colres.psi = combine(sum);
    if (reg.kind == RegularizationPolicy::Kind::pv_split) {
        const PVDiag pv = build_pv_diag(op, lambda, reg, true);
        const auto mask = exclusion_mask(op, pv.lambda_used, reg, &pv);
        colres.residual = column_residual(op, pv.lambda_used, colres.psi, mask);
        colres.pv_warn = pv.perturbed;
    } else {
        const auto mask = exclusion_mask(op, lambda, reg, nullptr);
        colres.residual = column_residual(op, lambda, colres.psi, mask);
    }
    result.psi = make_eigenfunction(op, family, label, lambda, reg.sign, colres);
    return result;
}

WaveOperatorMatrix assemble_wave_operator(const OperatorHandle& op,
                                          const RegularizationPolicy& reg,
                                          const SolveOptions& opts) {
    reg.validate();
    const auto& grid = op.grid();
    const std::size_t n = op.size();
    const bool cs = reg.kind == RegularizationPolicy::Kind::complex_shift;
    const std::size_t keta = cs ? reg.eta_rel.size() : 0;

    WaveOperatorMatrix wave;
    wave.sign = reg.sign;
    wave.kind = reg.kind;
    wave.etas_rel = reg.eta_rel;
    wave.n_field = grid.n_field();
    wave.n_medium = grid.n_medium();
    wave.W = Eigen::MatrixXcd::Zero(n, n);
    wave.W_eta.assign(keta, Eigen::MatrixXcd::Zero(n, n));

    // dense V is shared by all LU group solves
    std::unique_ptr<Eigen::MatrixXd> vw;
    const std::size_t p = static_cast<std::size_t>(op.low_rank_Z().cols());
    const bool lu_path = (opts.method == SolveOptions::Method::dense_lu) ||
                         (opts.method == SolveOptions::Method::automatic && p * 2 > n);
    if (lu_path) {
        if (n > opts.dense_cap)
            throw SolverError("assemble_wave_operator: size exceeds dense cap");
        vw = std::make_unique<Eigen::MatrixXd>(op.low_rank_Z() * op.low_rank_C() *
                                               op.low_rank_Z().transpose());
    }

    const auto groups = make_groups(grid);
    std::vector<std::string> failures(groups.size());
    std::vector<double> residuals(n, 0.0), residuals_full(n, 0.0);

    parallel_over(groups.size(), opts.workers, [&](std::size_t gi) {
        const auto& grp = groups[gi];
        try {
            const auto solved = solve_lambda_group(op, grp, reg, opts, vw.get(), cs);
            for (std::size_t i = 0; i < grp.labels.size(); ++i) {
                const std::size_t col = column_index(grid, grp.family, grp.labels[i]);
                wave.W.col(col) = solved[i].psi;
                for (std::size_t e = 0; e < keta; ++e)
                    wave.W_eta[e].col(col) = solved[i].per_eta[e];
                residuals[col] = solved[i].residual.excluded;
                residuals_full[col] = solved[i].residual.full;
            }
        } catch (const std::exception& ex) {
            std::ostringstream msg;
            msg << (grp.family == Family::e ? "e" : "m") << "-group lambda=" << grp.lambda
                << ": " << ex.what();
            failures[gi] = msg.str();
        }
    });

    std::string failed;
    for (const auto& f : failures)
        if (!f.empty()) failed += (failed.empty() ? "" : "; ") + f;
    if (!failed.empty())
        throw SolverError("assemble_wave_operator: column solves failed: " + failed);

    wave.max_residual = *std::max_element(residuals.begin(), residuals.end());
    wave.max_residual_full = *std::max_element(residuals_full.begin(), residuals_full.end());
    wave.residuals = Eigen::Map<const Eigen::VectorXd>(residuals.data(), residuals.size());
    wave.residuals_full =
        Eigen::Map<const Eigen::VectorXd>(residuals_full.data(), residuals_full.size());

    // Gram and conjugation defects. Under ComplexShift the quadratic forms
    // are extrapolated entrywise over matched eta pairs, which is the
    // distributional limit the mode family actually possesses.
    const Eigen::MatrixXd omega_dense = [&] {
        Eigen::MatrixXd m = op.low_rank_Z() * op.low_rank_C() * op.low_rank_Z().transpose();
        m.diagonal() += op.diagonal();
        return m;
    }();
    const Eigen::VectorXd d0 = op.diagonal();

    Eigen::MatrixXcd gram, comp, conj_m;
    if (cs) {
        // Richardson weights are scale-invariant; relative etas suffice.
        const auto c = richardson_weights(reg.eta_rel);
        gram = Eigen::MatrixXcd::Zero(n, n);
        comp = Eigen::MatrixXcd::Zero(n, n);
        conj_m = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t e = 0; e < keta; ++e) {
            gram += c[e] * (wave.W_eta[e].adjoint() * wave.W_eta[e]);
            comp += c[e] * (wave.W_eta[e] * wave.W_eta[e].adjoint());
            conj_m += c[e] * (wave.W_eta[e] * d0.asDiagonal() * wave.W_eta[e].adjoint());
        }
    } else {
        gram = wave.W.adjoint() * wave.W;
        comp = wave.W * wave.W.adjoint();
        conj_m = wave.W * d0.asDiagonal() * wave.W.adjoint();
    }
    gram.diagonal().array() -= 1.0;
    comp.diagonal().array() -= 1.0;
    conj_m -= omega_dense.cast<cplx>();
    wave.unitarity_defect = gram.cwiseAbs().maxCoeff();
    wave.completeness_defect = comp.cwiseAbs().maxCoeff();
    wave.conjugation_defect = conj_m.cwiseAbs().maxCoeff();
    return wave;
}

std::vector<PolaritonEigenfunction> extract_solutions(const OperatorHandle& op,
                                                      const WaveOperatorMatrix& wave) {
    const auto& grid = op.grid();
    std::vector<PolaritonEigenfunction> out;
    out.reserve(op.size());
    for (std::size_t col = 0; col < op.size(); ++col) {
        PolaritonEigenfunction psi;
        psi.family = col < grid.n_field() ? Family::e : Family::m;
        psi.label = col < grid.n_field() ? col : col - grid.n_field();
        psi.lambda = label_lambda(grid, psi.family, psi.label);
        psi.sign = wave.sign;
        const Eigen::VectorXcd func =
            wave.W.col(col).cwiseQuotient(op.sqrt_weights().cast<cplx>());
        psi.blocks = BlockVector::from_flat(grid, func);
        psi.residual = wave.residuals.size() ? wave.residuals(col) : 0.0;
        psi.residual_full = wave.residuals_full.size() ? wave.residuals_full(col) : 0.0;
        out.push_back(std::move(psi));
    }
    return out;
}

Eigen::MatrixXcd scattering_matrix(const WaveOperatorMatrix& w_plus,
                                   const WaveOperatorMatrix& w_minus,
                                   double* unitarity_defect) {
    if (w_plus.n_field != w_minus.n_field || w_plus.n_medium != w_minus.n_medium)
        throw std::invalid_argument("scattering_matrix: grid mismatch");
    if (w_plus.kind != w_minus.kind || w_plus.etas_rel != w_minus.etas_rel)
        throw std::invalid_argument("scattering_matrix: regularization mismatch");

    Eigen::MatrixXcd S;
    if (w_plus.kind == RegularizationPolicy::Kind::complex_shift && !w_plus.W_eta.empty()) {
        const auto c = richardson_weights(w_plus.etas_rel);
        S = Eigen::MatrixXcd::Zero(w_plus.W.rows(), w_plus.W.cols());
        for (std::size_t e = 0; e < w_plus.W_eta.size(); ++e)
            S += c[e] * (w_plus.W_eta[e].adjoint() * w_minus.W_eta[e]);
    } else {
        S = w_plus.W.adjoint() * w_minus.W;
    }
    if (unitarity_defect) {
        Eigen::MatrixXcd g = S.adjoint() * S;
        g.diagonal().array() -= 1.0;
        *unitarity_defect = g.cwiseAbs().maxCoeff();
    }
    return S;
}

}  // namespace polariton
