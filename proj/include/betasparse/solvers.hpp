#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "betasparse/divergence.hpp"
#include "betasparse/observation.hpp"
#include "betasparse/operators.hpp"

namespace betasparse {

enum class StopReason { MaxIters, LossStall, DivergenceTolerance };

const char* to_string(StopReason reason);

struct SolveReport {
    explicit SolveReport(DiscreteMeasure initial) : final_mu(std::move(initial)) {}

    std::vector<DiscreteMeasure> snapshots;
    std::vector<std::size_t> snapshot_iterations;
    std::vector<double> loss_trace;  // loss at iterates 0..iterations_run
    std::vector<double> max_trace;   // max node mass at the same iterates
    // PDHG only: objective of the running (ergodic) average of the iterates.
    std::vector<double> averaged_loss_trace;
    DiscreteMeasure final_mu;
    std::size_t iterations_run = 0;
    StopReason stop_reason = StopReason::MaxIters;
    // Loss increases beyond 1e-10 (1 + |loss|); only beta < 1 can report any,
    // beta in [1,2] aborts instead.
    std::size_t monotonicity_violations = 0;
};

/// D_beta(y|w), or (1/2)|y - w|^2 for signed Euclidean data.
ExtReal objective(const Observation& y, std::span<const double> w, const BetaParam& beta);

/// One multiplicative update mu * A*((A mu)^(beta-2) y) / A*((A mu)^(beta-1)).
/// Zero components of A mu are masked (0/0 = 0). For signed data (beta = 2)
/// the update is mu * A*(y+) / (A*(A mu) + A*(y-)).
DiscreteMeasure multiplicative_step(const DiscreteMeasure& mu, const Observation& y,
                                    const ForwardOperator& A, const BetaParam& beta);

struct MultiplicativeOptions {
    std::size_t max_iters = 1000;
    double stall_tol = 1e-12;
    std::size_t stall_window = 10;
    std::size_t snapshot_every = 0;  // 0: no snapshots
    std::optional<double> divergence_tol;  // stop once loss <= tol
    // Called after every iteration k >= 1 with the new iterate.
    std::function<void(std::size_t, const DiscreteMeasure&)> observer;
};

/// Iterates multiplicative_step from a strictly positive mu0.
SolveReport run_multiplicative(const DiscreteMeasure& mu0, const Observation& y,
                               const ForwardOperator& A, const BetaParam& beta,
                               const MultiplicativeOptions& options);
SolveReport run_multiplicative(const DiscreteMeasure& mu0, const Observation& y,
                               const ForwardOperator& A, const BetaParam& beta,
                               std::size_t max_iters, double stall_tol = 1e-12,
                               std::size_t snapshot_every = 0);

/// Constant 1 * quad weight per node.
DiscreteMeasure default_initial_measure(const GridPtr& grid);

struct KktResidual {
    double min_phi = 0.0;                  // min over nodes of A* lambda(mu)
    double max_abs_phi_on_support = 0.0;   // over nodes with mass > tol * max mass
};

KktResidual kkt_residual(const DiscreteMeasure& mu, const Observation& y, const ForwardOperator& A,
                         const BetaParam& beta, double support_tol);

struct PdhgConfig {
    double rho = 0.0;
    double primal_step = 0.0;
    double dual_step = 0.0;
    std::size_t iterations = 1000;
    double theta = 1.0;
    // K = (A; c D) with rho |Dx|_1 written as (rho / c) |c D x|_1; the
    // problem is unchanged, only the balance between the two dual blocks.
    double tv_scale = 1.0;
};

using LinearMap = std::function<std::vector<double>(std::span<const double>)>;

/// Power iteration on K*K from a seeded random start; returns sqrt of the
/// final Rayleigh quotient.
double estimate_opnorm(const LinearMap& apply, const LinearMap& adjoint, std::size_t domain_size,
                       std::size_t iters, std::uint64_t seed);

/// Forward differences on the grid: 1D x_{j+1} - x_j; 2D both axes
/// (anisotropic), horizontal block first.
std::vector<double> forward_difference(const Grid& grid, std::span<const double> x);
std::vector<double> forward_difference_adjoint(const Grid& grid, std::span<const double> q);
double total_variation(const Grid& grid, std::span<const double> x);

/// Norm of the stacked operator (A; D).
double stacked_opnorm(const ForwardOperator& A, std::size_t iters = 200, std::uint64_t seed = 0);

/// theta = 1, tau = sigma = 0.99 / (1.01 * ||(A; D)||).
PdhgConfig default_pdhg_config(const ForwardOperator& A, double rho, std::size_t iterations);

/// min_{x >= 0} (1/2)|Ax - y|^2 + rho |Dx|_1 by primal-dual hybrid gradient.
/// loss_trace holds this objective for the iterates, averaged_loss_trace for
/// their running averages. Starts from x = 0.
SolveReport pdhg_tv(const Observation& y, const ForwardOperator& A, const PdhgConfig& config);

}  // namespace betasparse
