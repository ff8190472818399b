#include "betasparse/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "betasparse/errors.hpp"

namespace betasparse::csv {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("csv: not a number: '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("csv: trailing characters in '" + s + "'");
    return v;
}

// Reads "key,value" style rows (header skipped) and returns the value column.
std::vector<double> read_two_column(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument(std::string("csv: empty ") + what + " file");
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 2) throw InvalidArgument(std::string("csv: malformed ") + what + " row");
        if (static_cast<std::size_t>(parse_double(cells[0])) != values.size()) {
            throw InvalidArgument(std::string("csv: ") + what + " rows out of order");
        }
        values.push_back(parse_double(cells[1]));
    }
    return values;
}

}  // namespace

void write_grid(std::ostream& os, const Grid& grid) {
    os << "node,x,y,quad_weight\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
        os << j << ',' << format_double(grid.node(j).x) << ',' << format_double(grid.node(j).y) << ','
           << format_double(grid.quad_weights()[j]) << '\n';
    }
}

void write_operator(std::ostream& os, const ForwardOperator& A) {
    os << "row";
    for (std::size_t j = 0; j < A.nodes(); ++j) os << ",n" << j;
    os << '\n';
    for (std::size_t i = 0; i < A.rows(); ++i) {
        os << i;
        for (double v : A.dense_row(i)) os << ',' << format_double(v);
        os << '\n';
    }
}

void write_measure(std::ostream& os, const DiscreteMeasure& mu) {
    os << "node,mass\n";
    for (std::size_t j = 0; j < mu.size(); ++j) os << j << ',' << format_double(mu[j]) << '\n';
}

void write_observation(std::ostream& os, std::span<const double> y) {
    os << "index,y\n";
    for (std::size_t i = 0; i < y.size(); ++i) os << i << ',' << format_double(y[i]) << '\n';
}

void write_observation(std::ostream& os, const Observation& y) { write_observation(os, y.values()); }

void write_certificate(std::ostream& os, const CertificateReport& report) {
    os << "field,index,value\n";
    for (std::size_t i = 0; i < report.lambda_tilde.size(); ++i) {
        os << "lambda_tilde," << i << ',' << format_double(report.lambda_tilde[i]) << '\n';
    }
    os << "shift_c,," << format_double(report.shift_c) << '\n';
    os << "dual_value,," << format_double(report.dual_value) << '\n';
    os << "certified,," << (report.certified ? 1 : 0) << '\n';
}

void write_solve_report(std::ostream& os, const SolveReport& report) {
    const bool averaged = !report.averaged_loss_trace.empty();
    os << "iteration,loss,max_mass" << (averaged ? ",averaged_loss" : "") << '\n';
    for (std::size_t k = 0; k < report.loss_trace.size(); ++k) {
        os << k << ',' << format_double(report.loss_trace[k]) << ',' << format_double(report.max_trace[k]);
        if (averaged) os << ',' << format_double(report.averaged_loss_trace[k]);
        os << '\n';
    }
}

void write_diagnostics(std::ostream& os, const SparsityDiagnostics& diag) {
    os << "field,value\n";
    os << "support_size," << diag.support_nodes.size() << '\n';
    os << "phi_star_min," << format_double(diag.phi_star_min) << '\n';
    os << "phi_star_range," << format_double(diag.phi_star_range) << '\n';
    os << "stationarity_residual," << format_double(diag.stationarity_residual) << '\n';
    os << "support_outside_argmin," << diag.support_outside_argmin << '\n';
    os << "support_in_near_argmin," << (diag.support_in_near_argmin ? 1 : 0) << '\n';
    os << "sign_split," << (diag.sign_split ? 1 : 0) << '\n';
    os << "shift_c," << format_double(diag.certificate.shift_c) << '\n';
    os << "dual_value," << format_double(diag.certificate.dual_value) << '\n';
    os << "certified_sparse," << (diag.certified_sparse ? 1 : 0) << '\n';
}

ForwardOperator read_operator(std::istream& is, GridPtr grid) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("csv: empty operator file");
    if (split(line).size() != grid->size() + 1) {
        throw InvalidArgument("csv: operator header does not match grid size");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != grid->size() + 1) throw InvalidArgument("csv: malformed operator row");
        std::vector<double> row(grid->size());
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = parse_double(cells[j + 1]);
        rows.push_back(std::move(row));
    }
    return ForwardOperator(std::move(grid), rows);
}

DiscreteMeasure read_measure(std::istream& is, GridPtr grid) {
    return DiscreteMeasure(std::move(grid), read_two_column(is, "measure"));
}

Observation read_observation(std::istream& is) {
    auto values = read_two_column(is, "observation");
    for (double v : values) {
        if (v < 0.0) return Observation::signed_data(std::move(values));
    }
    return Observation(std::move(values));
}

}  // namespace betasparse::csv
