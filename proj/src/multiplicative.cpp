#include <algorithm>
#include <cmath>
#include <string>

#include "betasparse/dual.hpp"
#include "betasparse/errors.hpp"
#include "betasparse/solvers.hpp"

namespace betasparse {

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::MaxIters: return "max_iters";
        case StopReason::LossStall: return "loss_stall";
        case StopReason::DivergenceTolerance: return "divergence_tolerance";
    }
    return "unknown";
}

ExtReal objective(const Observation& y, std::span<const double> w, const BetaParam& beta) {
    if (y.is_nonnegative()) return D_beta(y.values(), w, beta);
    if (beta.regime() != BetaRegime::Euclidean) {
        throw InvalidArgument("objective: signed data requires beta = 2");
    }
    if (w.size() != y.size()) throw InvalidArgument("objective: length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) total += 0.5 * (y[i] - w[i]) * (y[i] - w[i]);
    return total;
}

DiscreteMeasure multiplicative_step(const DiscreteMeasure& mu, const Observation& y,
                                    const ForwardOperator& A, const BetaParam& beta) {
    if (!mu.grid()->same_as(*A.grid())) {
        throw InvalidArgument("multiplicative_step: measure lives on a different grid");
    }
    if (y.size() != A.rows()) throw InvalidArgument("multiplicative_step: data length mismatch");
    const bool euclidean = beta.regime() == BetaRegime::Euclidean;
    if (!y.is_nonnegative() && !euclidean) {
        throw InvalidArgument("multiplicative_step: signed data requires beta = 2");
    }

    const auto w = A.apply(mu);
    const double b = beta.value();
    std::vector<double> num_weights(w.size(), 0.0);
    std::vector<double> den_weights(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double yi = y[i];
        if (euclidean) {
            num_weights[i] = std::max(yi, 0.0);
            den_weights[i] = w[i] + std::max(-yi, 0.0);
            continue;
        }
        if (w[i] > 0.0) {
            const double wp = std::pow(w[i], b - 2.0);
            num_weights[i] = wp * yi;
            den_weights[i] = wp * w[i];
        } else if (yi > 0.0) {
            throw DegenerateError("multiplicative_step: (A mu)_" + std::to_string(i) + " = 0 while y_" +
                                  std::to_string(i) + " > 0");
        }
    }
    const auto numerator = A.adjoint(num_weights);
    const auto denominator = A.adjoint(den_weights);

    auto masses = mu.masses();
    std::vector<double> next(masses.size(), 0.0);
    for (std::size_t j = 0; j < masses.size(); ++j) {
        if (masses[j] == 0.0) continue;
        if (!(denominator[j] > 0.0)) {
            throw DegenerateError("multiplicative_step: zero denominator at node " + std::to_string(j) +
                                  " carrying positive mass");
        }
        next[j] = masses[j] * (numerator[j] / denominator[j]);
    }
    return DiscreteMeasure(mu.grid(), std::move(next));
}

DiscreteMeasure default_initial_measure(const GridPtr& grid) {
    return DiscreteMeasure::uniform_density(grid, 1.0);
}

SolveReport run_multiplicative(const DiscreteMeasure& mu0, const Observation& y,
                               const ForwardOperator& A, const BetaParam& beta,
                               const MultiplicativeOptions& options) {
    for (double m : mu0.masses()) {
        if (!(m > 0.0)) throw InvalidArgument("run_multiplicative: mu0 must be strictly positive");
    }
    if (y.size() != A.rows()) throw InvalidArgument("run_multiplicative: data length mismatch");
    const bool guaranteed_monotone = beta.value() >= 1.0;

    SolveReport report(mu0);
    DiscreteMeasure mu = mu0;
    double loss = objective(y, A.apply(mu), beta);
    report.loss_trace.push_back(loss);
    report.max_trace.push_back(mu.max_mass());

    std::size_t stalled = 0;
    std::size_t k = 0;
    while (k < options.max_iters) {
        DiscreteMeasure next = multiplicative_step(mu, y, A, beta);
        const double next_loss = objective(y, A.apply(next), beta);
        ++k;

        if (next_loss > loss + 1e-10 * (1.0 + std::abs(loss))) {
            if (guaranteed_monotone) {
                throw MonotonicityViolation("run_multiplicative: loss increased from " +
                                            std::to_string(loss) + " to " + std::to_string(next_loss) +
                                            " at iteration " + std::to_string(k) +
                                            " (beta = " + std::to_string(beta.value()) + ")");
            }
            ++report.monotonicity_violations;
        }

        const double decrease = loss - next_loss;
        const double relative = loss > 0.0 && std::isfinite(loss) ? decrease / loss : 0.0;
        stalled = relative < options.stall_tol ? stalled + 1 : 0;

        mu = std::move(next);
        loss = next_loss;
        report.loss_trace.push_back(loss);
        report.max_trace.push_back(mu.max_mass());
        if (options.snapshot_every > 0 && k % options.snapshot_every == 0) {
            report.snapshots.push_back(mu);
            report.snapshot_iterations.push_back(k);
        }
        if (options.observer) options.observer(k, mu);

        if (options.divergence_tol && loss <= *options.divergence_tol) {
            report.stop_reason = StopReason::DivergenceTolerance;
            break;
        }
        if (stalled >= options.stall_window) {
            report.stop_reason = StopReason::LossStall;
            break;
        }
    }
    report.iterations_run = k;
    report.final_mu = std::move(mu);
    return report;
}

SolveReport run_multiplicative(const DiscreteMeasure& mu0, const Observation& y,
                               const ForwardOperator& A, const BetaParam& beta,
                               std::size_t max_iters, double stall_tol, std::size_t snapshot_every) {
    MultiplicativeOptions options;
    options.max_iters = max_iters;
    options.stall_tol = stall_tol;
    options.snapshot_every = snapshot_every;
    return run_multiplicative(mu0, y, A, beta, options);
}

KktResidual kkt_residual(const DiscreteMeasure& mu, const Observation& y, const ForwardOperator& A,
                         const BetaParam& beta, double support_tol) {
    const DualVector lambda = lambda_of(mu, y, A, beta);
    const auto phi = A.adjoint(lambda.values);
    const double threshold = support_tol * mu.max_mass();
    KktResidual out;
    out.min_phi = *std::min_element(phi.begin(), phi.end());
    for (std::size_t j = 0; j < phi.size(); ++j) {
        if (mu[j] > threshold) out.max_abs_phi_on_support = std::max(out.max_abs_phi_on_support, std::abs(phi[j]));
    }
    return out;
}

}  // namespace betasparse
