#include <sstream>
#include <string>
#include <vector>

#include "betasparse/csv_io.hpp"
#include "betasparse/errors.hpp"
#include "doctest.h"

using namespace betasparse;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5}) {
        CHECK(std::stod(csv::format_double(v)) == v);
    }
    CHECK(csv::format_double(kInf) == "inf");
    CHECK(csv::format_double(-kInf) == "-inf");
}

TEST_CASE("operator round-trip") {
    const auto A = make_radon_operator(4, 5, 6);
    std::stringstream ss;
    csv::write_operator(ss, A);
    const auto text = ss.str();
    CHECK(lines(text).front().rfind("row,n0,n1,", 0) == 0);
    CHECK(lines(text).size() == A.rows() + 1);
    const auto B = csv::read_operator(ss, A.grid());
    REQUIRE(B.rows() == A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) CHECK(B.dense_row(i) == A.dense_row(i));
}

TEST_CASE("measure and observation round-trip") {
    const auto grid = Grid::uniform_1d(7);
    const DiscreteMeasure mu(grid, {0.0, 1e-7, 2.0, 0.25, 0.0, 3.0, 1.0 / 7.0});
    std::stringstream ms;
    csv::write_measure(ms, mu);
    CHECK(lines(ms.str()).front() == "node,mass");
    const auto back = csv::read_measure(ms, grid);
    for (std::size_t j = 0; j < mu.size(); ++j) CHECK(back[j] == mu[j]);

    const Observation y({0.5, 0.0, 2.0 / 3.0});
    std::stringstream os;
    csv::write_observation(os, y);
    const auto y2 = csv::read_observation(os);
    CHECK(y2.is_nonnegative());
    CHECK(std::vector<double>(y2.values().begin(), y2.values().end()) ==
          std::vector<double>(y.values().begin(), y.values().end()));
    CHECK(y2.support() == std::vector<std::size_t>{0, 2});

    std::stringstream signed_stream("index,y\n0,-1\n1,2\n");
    CHECK_FALSE(csv::read_observation(signed_stream).is_nonnegative());

    std::stringstream broken("index,y\n0,abc\n");
    CHECK_THROWS_AS(csv::read_observation(broken), InvalidArgument);
}

TEST_CASE("certificate, report and diagnostics layouts") {
    const auto A = make_toy_operator(11);
    const Observation y({0.0, 1.0});
    const auto mu = DiscreteMeasure::dirac(A.grid(), 10, 0.5);
    const auto cert = dual_certificate(mu, y, A, BetaParam(2.0));
    std::stringstream cs;
    csv::write_certificate(cs, cert);
    const auto cl = lines(cs.str());
    REQUIRE(cl.size() == 6);
    CHECK(cl[0] == "field,index,value");
    CHECK(cl[1] == "lambda_tilde,0,0.5");
    CHECK(cl[2] == "lambda_tilde,1,-0.5");
    CHECK(cl[3] == "shift_c,,0");
    CHECK(cl[4] == "dual_value,,0.25");
    CHECK(cl[5] == "certified,,1");

    const auto report = run_multiplicative(default_initial_measure(A.grid()), y, A, BetaParam(2.0), 5, 0.0);
    std::stringstream rs;
    csv::write_solve_report(rs, report);
    const auto rl = lines(rs.str());
    CHECK(rl.front() == "iteration,loss,max_mass");
    CHECK(rl.size() == 7);

    std::stringstream ds;
    csv::write_diagnostics(ds, sparsity_diagnostics(mu, y, A, BetaParam(2.0)));
    const auto dl = lines(ds.str());
    CHECK(dl.front() == "field,value");
    CHECK(dl.back() == "certified_sparse,1");

    std::stringstream gs;
    csv::write_grid(gs, *A.grid());
    CHECK(lines(gs.str()).front() == "node,x,y,quad_weight");
    CHECK(lines(gs.str()).size() == 12);
}
