#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "polariton/block_vector.hpp"
#include "polariton/frequency_operator.hpp"
#include "polariton/regularization.hpp"

namespace polariton {

enum class Family { e, m };

/// A solved generalized eigenfunction of Omega^2. `blocks` holds function
/// coordinates; the weighted-basis column is sqrt(W) * blocks. At zero
/// coupling the weighted column equals the unit vector of its own label.
struct PolaritonEigenfunction {
    Family family = Family::e;
    std::size_t label = 0;   // index into field labels (e) or medium labels (m)
    double lambda = 0.0;     // omega_label or nu_label
    I0Sign sign = I0Sign::plus;
    BlockVector blocks;
    double residual = 0.0;       // excluding the singular-node neighborhood
    double residual_full = 0.0;  // over all nodes
    bool pv_node_warning = false;
};

struct SolveOptions {
    enum class Method { automatic, dense_lu, woodbury };
    Method method = Method::automatic;
    std::size_t dense_cap = 4000;
    int workers = 0;  // 0 = hardware concurrency
};

/// R0(lambda) rhs with the policy's realization of (Omega0^2 - lambda^2 +- i0+)^{-1}.
/// ComplexShift: elementwise division per eta, Richardson-extrapolated.
/// PVSplit: principal-value corrected diagonal plus the Sokhotski-Plemelj
/// delta term attributed to the nodes nearest lambda.
BlockVector resolvent_solve(const OperatorHandle& op, double lambda, const BlockVector& rhs,
                            const RegularizationPolicy& reg);

/// Effective complex resolvent diagonal over the flat weighted index for a
/// PVSplit policy (also used by the perturbation module).
Eigen::VectorXcd pv_resolvent_diagonal(const OperatorHandle& op, double lambda,
                                       const RegularizationPolicy& reg);

/// ComplexShift-extrapolated resolvent diagonal.
Eigen::VectorXcd cs_resolvent_diagonal(const OperatorHandle& op, double lambda,
                                       const RegularizationPolicy& reg);

/// Resolvent diagonal with the solver's node tie-break: when lambda sits on
/// a grid node under PVSplit it is perturbed by 1e-9 relative and flagged.
Eigen::VectorXcd solve_resolvent_diagonal(const OperatorHandle& op, double lambda,
                                          const RegularizationPolicy& reg,
                                          bool* perturbed = nullptr);

/// Effective complex shifts for grid solves: eta_rel * lambda^2 plus the
/// policy's grid-resolution floor.
std::vector<double> etas_effective(const OperatorHandle& op, double lambda,
                                   const RegularizationPolicy& reg);

/// Solve the Lippmann-Schwinger equation (I + R0(lambda) V) psi = phi for
/// one label of one family, lambda pinned to the label's grid eigenvalue.
PolaritonEigenfunction solve_ls(const OperatorHandle& op, Family family, std::size_t label,
                                const RegularizationPolicy& reg, const SolveOptions& opts = {});

struct BornResult {
    PolaritonEigenfunction psi;
    int order_used = 0;
    bool converged = false;
    std::vector<double> increments;  // per-order update norms
};

/// Born expansion psi = [1 - R0 V + (R0 V)^2 - ...] phi, truncated when the
/// extrapolated increment drops below tol or max_order is reached.
BornResult born_series(const OperatorHandle& op, Family family, std::size_t label,
                       const RegularizationPolicy& reg, int max_order, double tol);

/// Discrete Moller wave operator: columns are the solved eigenfunctions in
/// the weighted basis, ordered field labels first then medium labels.
struct WaveOperatorMatrix {
    Eigen::MatrixXcd W;                    // extrapolated columns
    std::vector<Eigen::MatrixXcd> W_eta;   // per-eta columns (ComplexShift only)
    std::vector<double> etas_rel;
    I0Sign sign = I0Sign::plus;
    RegularizationPolicy::Kind kind = RegularizationPolicy::Kind::complex_shift;
    std::size_t n_field = 0;
    std::size_t n_medium = 0;

    double unitarity_defect = 0.0;     // ||W'W - I||_max
    double completeness_defect = 0.0;  // ||WW' - I||_max
    double conjugation_defect = 0.0;   // ||W D W' - Omega^2||_max
    double max_residual = 0.0;         // max column eigen-residual (excluded)
    double max_residual_full = 0.0;
    Eigen::VectorXd residuals;         // per column, excluded neighborhood
    Eigen::VectorXd residuals_full;
};

WaveOperatorMatrix assemble_wave_operator(const OperatorHandle& op,
                                          const RegularizationPolicy& reg,
                                          const SolveOptions& opts = {});

/// S = W+' W-; both operators must come from the same grid. Under
/// ComplexShift the product is extrapolated over matched eta pairs.
Eigen::MatrixXcd scattering_matrix(const WaveOperatorMatrix& w_plus,
                                   const WaveOperatorMatrix& w_minus,
                                   double* unitarity_defect = nullptr);

/// Per-column eigenfunctions recovered from an assembled wave operator.
std::vector<PolaritonEigenfunction> extract_solutions(const OperatorHandle& op,
                                                      const WaveOperatorMatrix& wave);

/// Eigenvalue of the uncoupled label backing a (family, label) pair.
double label_lambda(const SpectralGrid& grid, Family family, std::size_t label);

/// Flat column index of a (family, label) pair.
std::size_t column_index(const SpectralGrid& grid, Family family, std::size_t label);

}  // namespace polariton
