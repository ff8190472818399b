#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "betasparse/errors.hpp"
#include "betasparse/solvers.hpp"

namespace betasparse {

double estimate_opnorm(const LinearMap& apply, const LinearMap& adjoint, std::size_t domain_size,
                       std::size_t iters, std::uint64_t seed) {
    if (iters < 1) throw InvalidArgument("estimate_opnorm: iters must be >= 1");
    if (domain_size == 0) throw InvalidArgument("estimate_opnorm: empty domain");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> x(domain_size);
    for (double& v : x) v = unif(rng);

    auto normalize = [](std::vector<double>& v) {
        const double n = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (n > 0.0) {
            for (double& e : v) e /= n;
        }
        return n;
    };
    normalize(x);
    double estimate = 0.0;
    for (std::size_t it = 0; it < iters; ++it) {
        const auto kx = apply(x);
        // |Kx|^2 with |x| = 1 is the Rayleigh quotient of K*K.
        estimate = std::sqrt(std::inner_product(kx.begin(), kx.end(), kx.begin(), 0.0));
        x = adjoint(kx);
        if (normalize(x) == 0.0) break;
    }
    return estimate;
}

std::vector<double> forward_difference(const Grid& grid, std::span<const double> x) {
    if (x.size() != grid.size()) throw InvalidArgument("forward_difference: size mismatch");
    const std::size_t nx = grid.nx();
    const std::size_t ny = grid.ny();
    std::vector<double> out;
    if (grid.dim() == 1) {
        out.resize(nx - 1);
        for (std::size_t j = 0; j + 1 < nx; ++j) out[j] = x[j + 1] - x[j];
        return out;
    }
    out.reserve((nx - 1) * ny + nx * (ny - 1));
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix + 1 < nx; ++ix) out.push_back(x[iy * nx + ix + 1] - x[iy * nx + ix]);
    }
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) out.push_back(x[(iy + 1) * nx + ix] - x[iy * nx + ix]);
    }
    return out;
}

std::vector<double> forward_difference_adjoint(const Grid& grid, std::span<const double> q) {
    const std::size_t nx = grid.nx();
    const std::size_t ny = grid.ny();
    std::vector<double> out(grid.size(), 0.0);
    if (grid.dim() == 1) {
        if (q.size() != nx - 1) throw InvalidArgument("forward_difference_adjoint: size mismatch");
        for (std::size_t j = 0; j + 1 < nx; ++j) {
            out[j + 1] += q[j];
            out[j] -= q[j];
        }
        return out;
    }
    if (q.size() != (nx - 1) * ny + nx * (ny - 1)) {
        throw InvalidArgument("forward_difference_adjoint: size mismatch");
    }
    std::size_t k = 0;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix + 1 < nx; ++ix, ++k) {
            out[iy * nx + ix + 1] += q[k];
            out[iy * nx + ix] -= q[k];
        }
    }
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix, ++k) {
            out[(iy + 1) * nx + ix] += q[k];
            out[iy * nx + ix] -= q[k];
        }
    }
    return out;
}

double total_variation(const Grid& grid, std::span<const double> x) {
    const auto d = forward_difference(grid, x);
    double tv = 0.0;
    for (double v : d) tv += std::abs(v);
    return tv;
}

double stacked_opnorm(const ForwardOperator& A, std::size_t iters, std::uint64_t seed, double tv_scale) {
    const Grid& grid = *A.grid();
    const std::size_t m = A.rows();
    LinearMap apply = [&](std::span<const double> x) {
        auto out = A.apply(x);
        auto d = forward_difference(grid, x);
        for (double& v : d) v *= tv_scale;
        out.insert(out.end(), d.begin(), d.end());
        return out;
    };
    LinearMap adjoint = [&](std::span<const double> v) {
        auto out = A.adjoint(v.first(m));
        const auto d = forward_difference_adjoint(grid, v.subspan(m));
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += tv_scale * d[j];
        return out;
    };
    return estimate_opnorm(apply, adjoint, grid.size(), iters, seed);
}

PdhgConfig default_pdhg_config(const ForwardOperator& A, double rho, std::size_t iterations) {
    const Grid& grid = *A.grid();
    const LinearMap fwd = [&](std::span<const double> x) { return A.apply(x); };
    const LinearMap adj = [&](std::span<const double> v) { return A.adjoint(v); };
    const LinearMap dif = [&](std::span<const double> x) { return forward_difference(grid, x); };
    const LinearMap dif_adj = [&](std::span<const double> v) { return forward_difference_adjoint(grid, v); };
    const double a_norm = estimate_opnorm(fwd, adj, grid.size(), 200, 0);
    const double d_norm = estimate_opnorm(dif, dif_adj, grid.size(), 200, 0);
    PdhgConfig config;
    config.tv_scale = d_norm > 0.0 ? a_norm / d_norm : 1.0;
    const double norm = 1.01 * stacked_opnorm(A, 200, 0, config.tv_scale);
    config.rho = rho;
    config.primal_step = 0.99 / norm;
    config.dual_step = 0.99 / norm;
    config.iterations = iterations;
    config.theta = 1.0;
    return config;
}

namespace {

double tv_objective(const ForwardOperator& A, const Observation& y, double rho,
                    std::span<const double> x) {
    const auto ax = A.apply(x);
    double fit = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) fit += 0.5 * (ax[i] - y[i]) * (ax[i] - y[i]);
    return fit + (rho > 0.0 ? rho * total_variation(*A.grid(), x) : 0.0);
}

}  // namespace

SolveReport pdhg_tv(const Observation& y, const ForwardOperator& A, const PdhgConfig& config) {
    if (y.size() != A.rows()) throw InvalidArgument("pdhg_tv: data length mismatch");
    if (!(config.rho >= 0.0)) throw InvalidArgument("pdhg_tv: rho must be non-negative");
    if (!(config.primal_step > 0.0) || !(config.dual_step > 0.0)) {
        throw InvalidArgument("pdhg_tv: step sizes must be positive");
    }
    if (!(config.theta >= 0.0 && config.theta <= 1.0)) throw InvalidArgument("pdhg_tv: theta must be in [0,1]");
    if (!(config.tv_scale > 0.0) || !std::isfinite(config.tv_scale)) {
        throw InvalidArgument("pdhg_tv: tv_scale must be positive");
    }
    const double norm = stacked_opnorm(A, 100, 0, config.tv_scale);
    if (config.primal_step * config.dual_step * norm * norm > 1.0 + 1e-9) {
        throw InvalidArgument("pdhg_tv: primal_step * dual_step * |K|^2 = " +
                              std::to_string(config.primal_step * config.dual_step * norm * norm) +
                              " exceeds 1");
    }

    const Grid& grid = *A.grid();
    const double tau = config.primal_step;
    const double sigma = config.dual_step;
    const double rho = config.rho;
    const double c = config.tv_scale;
    const std::size_t n = grid.size();

    std::vector<double> x(n, 0.0);
    std::vector<double> x_bar = x;
    std::vector<double> x_prev(n, 0.0);
    std::vector<double> x_sum(n, 0.0);
    std::vector<double> x_avg(n, 0.0);
    std::vector<double> p(A.rows(), 0.0);
    std::vector<double> q(forward_difference(grid, x).size(), 0.0);

    SolveReport report(DiscreteMeasure::zero(A.grid()));
    const double initial = tv_objective(A, y, rho, x);
    report.loss_trace.push_back(initial);
    report.averaged_loss_trace.push_back(initial);
    report.max_trace.push_back(0.0);

    for (std::size_t k = 1; k <= config.iterations; ++k) {
        const auto ax = A.apply(x_bar);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = (p[i] + sigma * (ax[i] - y[i])) / (1.0 + sigma);
        if (rho > 0.0) {
            const auto dx = forward_difference(grid, x_bar);
            for (std::size_t k2 = 0; k2 < q.size(); ++k2) q[k2] = std::clamp(q[k2] + sigma * c * dx[k2], -rho / c, rho / c);
        }
        auto grad = A.adjoint(p);
        if (rho > 0.0) {
            const auto dq = forward_difference_adjoint(grid, q);
            for (std::size_t j = 0; j < n; ++j) grad[j] += c * dq[j];
        }
        x_prev = x;
        double max_x = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = std::max(0.0, x[j] - tau * grad[j]);
            x_bar[j] = x[j] + config.theta * (x[j] - x_prev[j]);
            x_sum[j] += x[j];
            x_avg[j] = x_sum[j] / static_cast<double>(k);
            max_x = std::max(max_x, x[j]);
        }
        report.loss_trace.push_back(tv_objective(A, y, rho, x));
        report.averaged_loss_trace.push_back(tv_objective(A, y, rho, x_avg));
        report.max_trace.push_back(max_x);
    }
    report.iterations_run = config.iterations;
    report.stop_reason = StopReason::MaxIters;
    report.final_mu = DiscreteMeasure(A.grid(), x);
    return report;
}

}  // namespace betasparse
