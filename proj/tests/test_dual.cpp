#include <cmath>
#include <random>
#include <vector>

#include "betasparse/dual.hpp"
#include "betasparse/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace betasparse;

TEST_CASE("w_opt examples") {
    CHECK(w_opt(1.0, -2.0, BetaParam(0.0)) == doctest::Approx((std::sqrt(9.0) - 1.0) / 4.0));
    CHECK(w_opt(2.0, -1.0, BetaParam(1.0)) == doctest::Approx(1.0));
    for (double b : {0.0, 0.3, 0.5, 1.0, 1.2, 1.5, 1.8, 2.0}) CHECK(w_opt(1.0, 0.0, BetaParam(b)) == doctest::Approx(1.0));
    CHECK(w_opt(0.0, 1.0, BetaParam(1.5)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto brute = oracle::brute_force_h(0.0, 1.0, 1.5, 1e-3, 1e-6);
    CHECK(std::abs(brute.argmin - 1.0) < 1e-4);
    CHECK(w_opt(1.0, -3.0, BetaParam(2.0)) == 0.0);
}

TEST_CASE("w_opt refuses parameters without a minimiser") {
    CHECK_THROWS_AS(w_opt(1.0, 0.5, BetaParam(0.0)), DomainError);
    CHECK_THROWS_AS(w_opt(0.0, -1.0, BetaParam(0.0)), DomainError);
    CHECK_THROWS_AS(w_opt(1.0, 0.1, BetaParam(0.5)), DomainError);
    CHECK_THROWS_AS(w_opt(1.0, 1.0, BetaParam(1.0)), DomainError);
    CHECK_THROWS_AS(w_opt(1.0, 1.5, BetaParam(1.0)), DomainError);
    CHECK(w_opt(0.0, 1.0, BetaParam(1.0)) == 0.0);
}

TEST_CASE("h examples") {
    for (double b : {0.0, 0.5, 1.0, 1.2, 2.0}) {
        for (double y : {0.5, 1.0, 3.0}) CHECK(h(y, 0.0, BetaParam(b)) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(h(2.0, -1.0, BetaParam(1.0)) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    const auto brute = oracle::brute_force_h(2.0, -1.0, 1.0, 1e-5, 1e-7);
    CHECK(std::abs(brute.value - 2.0 * std::log(2.0)) < 1e-4);
    CHECK(h(1.0, 1.0, BetaParam(2.0)) == doctest::Approx(-1.5));
    CHECK(h(1.0, 0.5, BetaParam(0.5)) == -kInf);
    CHECK(h(1.0, -2.0, BetaParam(0.0)) == doctest::Approx(3.0 - std::log(2.0) - 1.0).epsilon(1e-12));
    CHECK(h(1.0, 1.0, BetaParam(1.0)) == -kInf);
    CHECK(h(0.0, 1.0, BetaParam(1.0)) == 0.0);
    CHECK(h(1.0, 1.2, BetaParam(1.0)) == -kInf);
}

TEST_CASE("g examples") {
    const Observation y({0.0, 1.0});
    CHECK(g(y, DualVector({0.0, 0.0}), BetaParam(1.3)) == 0.0);
    CHECK(g(y, DualVector({0.5, -0.5}), BetaParam(2.0)) == doctest::Approx(0.25));
    CHECK(g(y, DualVector({0.0, 0.5}), BetaParam(0.5)) == -kInf);
    CHECK_THROWS_AS(g(y, DualVector({0.0}), BetaParam(2.0)), InvalidArgument);
}

TEST_CASE("dual cone membership") {
    const auto A = make_toy_operator(101);
    CHECK(in_dual_cone(A, DualVector({1.0, 1.0})));
    CHECK(in_dual_cone(A, DualVector({0.5, -0.5})));
    CHECK_FALSE(in_dual_cone(A, DualVector({-1.0, 0.0})));
    CHECK(in_dual_cone(A, DualVector({-1.0, 0.0}), 1.0));
}

TEST_CASE("certificate shift") {
    const auto A = make_toy_operator(101);
    const auto same = certificate_shift(A, DualVector({0.5, -0.5}));
    CHECK(same.shift_c == 0.0);
    CHECK(same.lambda_tilde.values == std::vector<double>{0.5, -0.5});

    const auto shifted = certificate_shift(A, DualVector({-0.5, 0.0}));
    CHECK(shifted.shift_c == doctest::Approx(0.5));
    CHECK(shifted.lambda_tilde[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(shifted.lambda_tilde[1] == doctest::Approx(0.5));
    CHECK(in_dual_cone(A, shifted.lambda_tilde, 1e-12));

    // The shift is minimal: backing it off by 1e-9 leaves the cone.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        DualVector lambda({normal(rng), normal(rng)});
        const auto s = certificate_shift(A, lambda);
        CHECK(in_dual_cone(A, s.lambda_tilde, 1e-12));
        if (s.shift_c > 0.0) {
            std::vector<double> less = s.lambda_tilde.values;
            for (auto& v : less) v -= 1e-9;
            CHECK_FALSE(in_dual_cone(A, DualVector(less), 1e-12));
        }
    }
}

TEST_CASE("certificate shift ignores nodes no row sees") {
    // A* lambda vanishes wherever S does, so such nodes never force a shift.
    const auto grid = Grid::uniform_1d(3);
    const ForwardOperator A(grid, {{1.0, 1.0, 0.0}});
    CHECK(certificate_shift(A, DualVector({-1.0})).shift_c == doctest::Approx(1.0));
    CHECK(certificate_shift(A, DualVector({1.0})).shift_c == 0.0);
}

TEST_CASE("dual certificate examples") {
    const auto A = make_toy_operator(101);
    const BetaParam two(2.0);

    const auto mu_fit = DiscreteMeasure::dirac(A.grid(), 50, 2.0);
    const Observation y_fit(A.apply(mu_fit));
    const auto fit = dual_certificate(mu_fit, y_fit, A, two);
    CHECK(fit.dual_value == 0.0);
    CHECK_FALSE(fit.certified);

    const Observation y({0.0, 1.0});
    const auto opt = dual_certificate(DiscreteMeasure::dirac(A.grid(), 100, 0.5), y, A, two);
    CHECK(opt.lambda_tilde[0] == doctest::Approx(0.5));
    CHECK(opt.lambda_tilde[1] == doctest::Approx(-0.5));
    CHECK(opt.shift_c == 0.0);
    CHECK(opt.dual_value == doctest::Approx(0.25));
    CHECK(opt.certified);

    // y = (1, 0.5) = A delta_{0.5} lies in the cone.
    const Observation y_in({1.0, 0.5});
    const auto inside = dual_certificate(DiscreteMeasure::dirac(A.grid(), 50, 1.0), y_in, A, two);
    CHECK_FALSE(inside.certified);

    const Observation y_pos({1.0, 1.0});
    CHECK_THROWS_AS(dual_certificate(DiscreteMeasure::zero(A.grid()), y_pos, A, BetaParam(1.0)),
                    DegenerateError);
}

TEST_CASE("h agrees with brute-force minimisation") {
    for (double b : {0.0, 0.3, 0.5, 0.7, 1.0, 1.2, 1.5, 1.8, 2.0}) {
        const BetaParam beta(b);
        for (double y : {0.0, 0.5, 1.0, 2.0}) {
            if (b == 0.0 && y == 0.0) {
                CHECK_THROWS_AS(h(y, -1.0, beta), DomainError);
                continue;
            }
            for (double lambda : {-2.0, -1.0, -0.1, 0.0, 0.1, 0.9, 1.0, 2.0}) {
                CAPTURE(b);
                CAPTURE(y);
                CAPTURE(lambda);
                const double value = h(y, lambda, beta);
                if (oracle::h_is_minus_infinity(y, lambda, b)) {
                    CHECK(value == -kInf);
                    continue;
                }
                REQUIRE(std::isfinite(value));
                const auto brute = oracle::brute_force_h(y, lambda, b, 1e-3, 1e-6);
                CHECK(std::abs(value - brute.value) <= 1e-4);
            }
        }
    }
}

TEST_CASE("w_opt satisfies the stationarity equation") {
    for (double b : {0.0, 0.3, 0.5, 0.7, 1.0, 1.2, 1.5, 1.8, 2.0}) {
        for (double y : {0.0, 0.5, 1.0, 2.0, 7.0}) {
            for (double lambda : {-5.0, -2.0, -1.0, -0.1, 0.0, 0.1, 0.9, 2.0, 4.0}) {
                if (oracle::h_is_minus_infinity(y, lambda, b)) continue;
                if (b == 0.0 && y == 0.0) continue;
                const double w = w_opt(y, lambda, BetaParam(b));
                CHECK(w >= 0.0);
                if (w > 0.0) {
                    const double residual = std::pow(w, b - 2.0) * (w - y) - lambda;
                    CHECK(std::abs(residual) <= 1e-10 * (1.0 + std::abs(lambda)));
                }
            }
        }
    }
}

TEST_CASE("weak duality on random feasible pairs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto grid = Grid::uniform_1d(41);
    const std::vector<Point> centers{{0.1, 0.0}, {0.4, 0.0}, {0.6, 0.0}, {0.95, 0.0}};
    const std::vector<ForwardOperator> ops{make_toy_operator(41), make_kernel_operator(grid, centers, 0.2)};
    for (double b : {0.5, 1.0, 1.5, 2.0}) {
        const BetaParam beta(b);
        for (const auto& A : ops) {
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<double> yv(A.rows());
                for (auto& v : yv) v = 2.0 * unif(rng);
                const Observation y(yv);
                std::vector<double> masses(A.nodes());
                for (auto& m : masses) m = unif(rng) < 0.3 ? unif(rng) : 0.0;
                masses[trial % masses.size()] += 0.1;
                const auto w = A.apply(DiscreteMeasure(A.grid(), masses));
                std::vector<double> lv(A.rows());
                for (auto& v : lv) v = normal(rng);
                const auto lambda = certificate_shift(A, DualVector(lv)).lambda_tilde;
                const double dual = g(y, lambda, beta);
                const double primal = D_beta(y.values(), w, beta);
                CHECK(dual <= primal + 1e-9);
            }
        }
    }
}
