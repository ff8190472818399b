#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "betasparse/dual.hpp"
#include "betasparse/errors.hpp"
#include "betasparse/solvers.hpp"
#include "doctest.h"

using namespace betasparse;

namespace {

std::vector<double> random_positive(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = unif(rng);
    return v;
}

}  // namespace

TEST_CASE("multiplicative step: fixed point, ML-EM form and zero preservation") {
    const auto A = make_toy_operator(21);
    std::mt19937_64 rng(1);
    const DiscreteMeasure mu(A.grid(), random_positive(rng, 21, 0.1, 1.0));
    const Observation y_fit(A.apply(mu));
    for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        const auto next = multiplicative_step(mu, y_fit, A, BetaParam(b));
        for (std::size_t j = 0; j < mu.size(); ++j) CHECK(next[j] == doctest::Approx(mu[j]).epsilon(1e-12));
    }

    // ML-EM written out by hand.
    const Observation y({0.7, 0.2});
    const auto w = A.apply(mu);
    const auto next = multiplicative_step(mu, y, A, BetaParam(1.0));
    for (std::size_t j = 0; j < mu.size(); ++j) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            num += A.entry(i, j) * y[i] / w[i];
            den += A.entry(i, j);
        }
        CHECK(next[j] == doctest::Approx(mu[j] * num / den).epsilon(1e-12));
    }

    std::vector<double> masses(mu.masses().begin(), mu.masses().end());
    masses[3] = 0.0;
    masses[10] = 0.0;
    const auto stepped = multiplicative_step(DiscreteMeasure(A.grid(), masses), y, A, BetaParam(1.3));
    CHECK(stepped[3] == 0.0);
    CHECK(stepped[10] == 0.0);
}

TEST_CASE("multiplicative step degenerate inputs") {
    const auto A = make_toy_operator(11);
    const Observation y({1.0, 1.0});
    CHECK_THROWS_AS(multiplicative_step(DiscreteMeasure::zero(A.grid()), y, A, BetaParam(1.0)), DegenerateError);
    // Only the node at x = 0 is charged: (A mu)_1 = 0 while y_1 > 0.
    CHECK_THROWS_AS(multiplicative_step(DiscreteMeasure::dirac(A.grid(), 0, 1.0), y, A, BetaParam(0.5)),
                    DegenerateError);
    // y_1 = 0 masks the zero component.
    const Observation y0({1.0, 0.0});
    const auto next = multiplicative_step(DiscreteMeasure::dirac(A.grid(), 0, 2.0), y0, A, BetaParam(0.5));
    CHECK(next[0] == doctest::Approx(1.0));
}

TEST_CASE("run_multiplicative rejects a non-positive start") {
    const auto A = make_toy_operator(11);
    const Observation y({1.0, 1.0});
    CHECK_THROWS_AS(run_multiplicative(DiscreteMeasure::dirac(A.grid(), 3, 1.0), y, A, BetaParam(1.0), 10),
                    InvalidArgument);
}

TEST_CASE("consistent data under ML-EM drives the loss to zero") {
    const auto A = make_toy_operator(101);
    const Observation y(A.apply(DiscreteMeasure::dirac(A.grid(), 30, 1.5)));
    const auto report = run_multiplicative(default_initial_measure(A.grid()), y, A, BetaParam(1.0), 2000, 0.0);
    CHECK(report.loss_trace.size() == report.iterations_run + 1);
    CHECK(report.max_trace.size() == report.iterations_run + 1);
    CHECK(report.loss_trace.back() < 1e-8);
}

TEST_CASE("toy y = (0,1) under ISRA converges to the projection loss") {
    const auto A = make_toy_operator(101);
    const Observation y({0.0, 1.0});
    const auto report = run_multiplicative(default_initial_measure(A.grid()), y, A, BetaParam(2.0), 5000);
    CHECK(std::abs(report.loss_trace.back() - 0.25) <= 1e-4);
}

TEST_CASE("stall detection at a fixed point") {
    const auto A = make_toy_operator(31);
    const auto mu0 = default_initial_measure(A.grid());
    const Observation y(A.apply(mu0));
    const auto report = run_multiplicative(mu0, y, A, BetaParam(1.5), 500);
    CHECK(report.stop_reason == StopReason::LossStall);
    CHECK(report.iterations_run == 10);
}

TEST_CASE("snapshots and divergence tolerance") {
    const auto A = make_toy_operator(31);
    const Observation y({1.0, 0.3});
    MultiplicativeOptions options;
    options.max_iters = 40;
    options.stall_tol = 0.0;
    options.snapshot_every = 10;
    std::size_t calls = 0;
    options.observer = [&](std::size_t k, const DiscreteMeasure&) { calls = k; };
    const auto report = run_multiplicative(default_initial_measure(A.grid()), y, A, BetaParam(1.0), options);
    CHECK(report.snapshot_iterations == std::vector<std::size_t>{10, 20, 30, 40});
    CHECK(report.snapshots.size() == 4);
    CHECK(calls == 40);

    options.snapshot_every = 0;
    options.divergence_tol = 1e-3;
    options.max_iters = 100000;
    const auto early = run_multiplicative(default_initial_measure(A.grid()), y, A, BetaParam(1.0), options);
    CHECK(early.stop_reason == StopReason::DivergenceTolerance);
    CHECK(early.loss_trace.back() <= 1e-3);
}

TEST_CASE("monotonicity, non-negativity and support inclusion on random instances") {
    std::mt19937_64 rng(23);
    const auto grid = Grid::uniform_1d(51);
    const std::vector<Point> centers{{0.05, 0}, {0.3, 0}, {0.5, 0}, {0.55, 0}, {0.8, 0}, {1.0, 0}};
    const auto A = make_kernel_operator(grid, centers, 0.15);
    for (double b : {1.0, 1.2, 1.5, 2.0, 0.0, 0.5}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Observation y(random_positive(rng, A.rows(), 0.05, 2.0));
            MultiplicativeOptions options;
            options.max_iters = 300;
            bool nonneg = true;
            options.observer = [&](std::size_t, const DiscreteMeasure& mu) {
                for (double m : mu.masses()) nonneg = nonneg && m >= 0.0;
            };
            const auto report = run_multiplicative(default_initial_measure(grid), y, A, BetaParam(b), options);
            CHECK(nonneg);
            if (b >= 1.0) {
                for (std::size_t k = 1; k < report.loss_trace.size(); ++k) {
                    const double prev = report.loss_trace[k - 1];
                    CHECK(report.loss_trace[k] <= prev + 1e-10 * (1.0 + std::abs(prev)));
                }
            }
            for (double w : A.apply(report.final_mu)) CHECK(w > 0.0);
        }
    }
}

TEST_CASE("kkt residual examples") {
    const auto A = make_toy_operator(101);
    const Observation y({0.0, 1.0});
    const BetaParam two(2.0);
    const auto opt = DiscreteMeasure::dirac(A.grid(), 100, 0.5);
    const auto r = kkt_residual(opt, y, A, two, 1e-6);
    CHECK(std::abs(r.min_phi) <= 1e-15);
    CHECK(r.max_abs_phi_on_support <= 1e-10);

    const auto fit = DiscreteMeasure::dirac(A.grid(), 40, 1.0);
    const auto rf = kkt_residual(fit, Observation(A.apply(fit)), A, BetaParam(1.2), 1e-6);
    CHECK(rf.min_phi == 0.0);
    CHECK(rf.max_abs_phi_on_support == 0.0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.0, 0.2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> masses(101, 0.0);
        masses[100] = 0.5 + unif(rng) - 0.1;
        masses[static_cast<std::size_t>(trial)] += unif(rng) + 1e-3;
        const auto rp = kkt_residual(DiscreteMeasure(A.grid(), masses), y, A, two, 1e-6);
        CHECK((rp.min_phi < -1e-8 || rp.max_abs_phi_on_support > 1e-8));
    }
}

TEST_CASE("KKT sufficiency against the best loss found") {
    const auto grid = Grid::uniform_1d(41);
    const std::vector<Point> centers{{0.0, 0}, {0.35, 0}, {0.7, 0}, {1.0, 0}};
    const auto A = make_kernel_operator(grid, centers, 0.2);
    const Observation y({1.0, 0.2, 1.3, 0.1});
    for (double b : {1.0, 1.5, 2.0}) {
        const BetaParam beta(b);
        const auto report = run_multiplicative(default_initial_measure(grid), y, A, beta, 20000, 0.0);
        const auto r = kkt_residual(report.final_mu, y, A, beta, 1e-6);
        // A Dirac at any node is also a candidate; the optimal one has mass
        // minimising the loss along its ray.
        double best = report.loss_trace.back();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            for (double m = 0.01; m < 4.0; m += 0.01) {
                const auto w = A.apply(DiscreteMeasure::dirac(grid, j, m));
                best = std::min(best, D_beta(y.values(), w, beta));
            }
        }
        if (r.min_phi >= -1e-8 && r.max_abs_phi_on_support <= 1e-8) {
            CHECK(report.loss_trace.back() <= best + 1e-6);
        }
        CHECK(report.loss_trace.back() <= best + 1e-6);
    }
}

TEST_CASE("operator norm estimates") {
    const LinearMap identity = [](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); };
    CHECK(estimate_opnorm(identity, identity, 5, 50, 1) == doctest::Approx(1.0).epsilon(1e-6));

    const LinearMap diag = [](std::span<const double> x) { return std::vector<double>{2.0 * x[0], x[1]}; };
    CHECK(estimate_opnorm(diag, diag, 2, 200, 1) == doctest::Approx(2.0).epsilon(1e-6));

    const auto A = make_toy_operator(101);
    Eigen::MatrixXd dense(2, 101);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 101; ++j) dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = A.entry(i, j);
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues()(0);
    const LinearMap fwd = [&](std::span<const double> x) { return A.apply(x); };
    const LinearMap adj = [&](std::span<const double> x) { return A.adjoint(x); };
    const double est = estimate_opnorm(fwd, adj, 101, 200, 3);
    CHECK(std::abs(est - sigma) <= 1e-6);
    CHECK(estimate_opnorm(fwd, adj, 101, 200, 3) == est);
}

TEST_CASE("difference operator and its adjoint") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const auto& grid : {Grid::uniform_1d(17), Grid::pixels_2d(6)}) {
        std::vector<double> x(grid->size());
        for (auto& v : x) v = normal(rng);
        const auto dx = forward_difference(*grid, x);
        std::vector<double> q(dx.size());
        for (auto& v : q) v = normal(rng);
        const auto dtq = forward_difference_adjoint(*grid, q);
        const double lhs = std::inner_product(dx.begin(), dx.end(), q.begin(), 0.0);
        const double rhs = std::inner_product(x.begin(), x.end(), dtq.begin(), 0.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    const auto g1 = Grid::uniform_1d(4);
    const std::vector<double> x{1.0, 3.0, 2.0, 2.0};
    CHECK(forward_difference(*g1, x) == std::vector<double>{2.0, -1.0, 0.0});
    CHECK(total_variation(*g1, x) == doctest::Approx(3.0));
    const auto g2 = Grid::pixels_2d(2);
    CHECK(forward_difference(*g2, std::vector<double>{0.0, 1.0, 2.0, 4.0}) == std::vector<double>{1.0, 2.0, 2.0, 3.0});
}

TEST_CASE("pdhg on the toy problem") {
    const auto A = make_toy_operator(101);
    const Observation y({0.0, 1.0});
    const auto plain = pdhg_tv(y, A, default_pdhg_config(A, 0.0, 20000));
    const auto& x = plain.final_mu;
    const double total = x.total_mass();
    CHECK(std::abs(total - 0.5) <= 0.025);
    double near_end = 0.0;
    for (std::size_t j = 98; j <= 100; ++j) near_end += x[j];
    CHECK(near_end >= 0.95 * total);
    for (double m : x.masses()) CHECK(m >= 0.0);

    const auto heavy = pdhg_tv(y, A, default_pdhg_config(A, 10.0, 20000));
    CHECK(total_variation(*A.grid(), heavy.final_mu.masses()) <= total_variation(*A.grid(), x.masses()));

    const auto& avg = plain.averaged_loss_trace;
    REQUIRE(avg.size() == plain.iterations_run + 1);
    for (std::size_t k = 51; k < avg.size(); ++k) CHECK(avg[k] <= avg[k - 1] + 1e-8);
}

TEST_CASE("pdhg config validation") {
    const auto A = make_toy_operator(11);
    const Observation y({0.0, 1.0});
    auto config = default_pdhg_config(A, 0.1, 10);
    CHECK(config.theta == 1.0);
    CHECK(config.primal_step == config.dual_step);
    auto bad = config;
    bad.primal_step *= 3.0;
    CHECK_THROWS_AS(pdhg_tv(y, A, bad), InvalidArgument);
    bad = config;
    bad.rho = -1.0;
    CHECK_THROWS_AS(pdhg_tv(y, A, bad), InvalidArgument);
    bad = config;
    bad.theta = 1.5;
    CHECK_THROWS_AS(pdhg_tv(y, A, bad), InvalidArgument);
}
