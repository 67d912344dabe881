#pragma once

#include <map>
#include <string>
#include <vector>

#include "polariton/config.hpp"
#include "polariton/ls_solver.hpp"
#include "polariton/observables.hpp"

namespace polariton {

/// One verification outcome. The tolerance is declared by the check itself
/// before any evaluation; trend carries refinement-study data when the pass
/// rule involves one.
struct CheckResult {
    std::string name;
    std::map<std::string, double> values;
    double tolerance = 0.0;
    std::string criterion;
    bool pass = false;
    std::vector<double> trend;
};

struct VerifyVerdict {
    std::vector<CheckResult> checks;
    bool all_pass = true;
    std::string config_hash;

    std::string to_json() const;
};

/// Orthonormality/completeness defects of an assembled wave operator.
CheckResult check_orthonormality(const WaveOperatorMatrix& wave);

/// Defect decrease over 3 factor-2 refinements of (n_k, n_nu); final
/// unitarity defect must not exceed 1e-3.
CheckResult check_orthonormality_refinement(const RunConfig& cfg);

/// Zero-coupling exactness: W = I to 1e-14, m-family coefficients exactly
/// zero, e-family equal to the free-field coefficients to 1e-12.
CheckResult check_zero_coupling(const RunConfig& cfg);

/// log-log slope of ||psi_full - psi_pert1|| vs coupling scale in [1.9, 2.1],
/// first-order linearity within 1%, exact zero at s = 0.
CheckResult check_order_scaling(const RunConfig& cfg);

/// Kernel identity battery: L two-path agreement (1e-6), transverse-delta
/// completeness (1e-3), Sokhotski-Plemelj cross-method (1e-4), F_nf
/// tracelessness.
CheckResult check_kernel_identities(const RunConfig& cfg);

/// Negative control: halving omega_max must degrade the completeness match.
CheckResult check_kernel_teeth(const RunConfig& cfg);

/// Dense-oracle equivalence on a capped system: spectrum nonnegativity,
/// smoothed spectral density within 2% L1, two-point function within 2%.
CheckResult check_dense_oracle(const RunConfig& cfg);

/// Max eigen-residual of the ComplexShift-extrapolated solves <= 1e-6 on the
/// dense-verified system.
CheckResult check_residual_bound(const RunConfig& cfg);

/// Plus/minus conjugation: psi(-) equals conj(psi(+)) elementwise.
CheckResult check_conjugation(const RunConfig& cfg);

/// Bulk-identity failure: ratio >= 0.5 for the small medium and monotone
/// decrease as the medium grows over 3 sizes.
CheckResult check_bulk_identity(const RunConfig& cfg);

/// Full battery in deterministic order.
VerifyVerdict run_verify(const RunConfig& cfg);

/// Reduced copy of the grid used for dense-oracle style checks.
GridConfig oracle_grid(const GridConfig& grid, std::size_t target_cap, std::size_t n_vox);

}  // namespace polariton
