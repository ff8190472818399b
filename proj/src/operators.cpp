#include "betasparse/operators.hpp"

#include <cmath>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

ForwardOperator::ForwardOperator(GridPtr grid, const std::vector<std::vector<double>>& dense_rows)
    : grid_(std::move(grid)) {
    if (!grid_) throw InvalidArgument("ForwardOperator: null grid");
    row_ptr_.push_back(0);
    for (const auto& row : dense_rows) {
        if (row.size() != grid_->size()) {
            throw InvalidArgument("ForwardOperator: row length " + std::to_string(row.size()) +
                                  " does not match grid size " + std::to_string(grid_->size()));
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] != 0.0) {
                col_.push_back(j);
                values_.push_back(row[j]);
            }
        }
        row_ptr_.push_back(col_.size());
    }
    finalize();
}

ForwardOperator::ForwardOperator(GridPtr grid, std::vector<std::vector<Entry>> rows)
    : grid_(std::move(grid)) {
    if (!grid_) throw InvalidArgument("ForwardOperator: null grid");
    row_ptr_.push_back(0);
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k].node >= grid_->size()) throw InvalidArgument("ForwardOperator: node out of range");
            if (k > 0 && row[k].node <= row[k - 1].node) {
                throw InvalidArgument("ForwardOperator: row nodes must be strictly increasing");
            }
            col_.push_back(row[k].node);
            values_.push_back(row[k].value);
        }
        row_ptr_.push_back(col_.size());
    }
    finalize();
}

void ForwardOperator::finalize() {
    if (rows() == 0) throw InvalidArgument("ForwardOperator: at least one row required");
    for (std::size_t i = 0; i < rows(); ++i) {
        bool positive = false;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const double v = values_[k];
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw InvalidArgument("ForwardOperator: row " + std::to_string(i) +
                                      " has a negative or non-finite entry");
            }
            positive = positive || v > 0.0;
        }
        if (!positive) {
            throw InvalidArgument("ForwardOperator: row " + std::to_string(i) + " is identically zero");
        }
    }
    std::vector<double> ones(rows(), 1.0);
    column_sums_ = adjoint(ones);
}

std::span<const std::size_t> ForwardOperator::row_nodes(std::size_t i) const {
    return std::span<const std::size_t>(col_).subspan(row_ptr_.at(i), row_ptr_[i + 1] - row_ptr_[i]);
}

std::span<const double> ForwardOperator::row_values(std::size_t i) const {
    return std::span<const double>(values_).subspan(row_ptr_.at(i), row_ptr_[i + 1] - row_ptr_[i]);
}

std::vector<double> ForwardOperator::dense_row(std::size_t i) const {
    std::vector<double> out(nodes(), 0.0);
    const auto cols = row_nodes(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) out[cols[k]] = vals[k];
    return out;
}

double ForwardOperator::entry(std::size_t i, std::size_t node) const {
    const auto cols = row_nodes(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] == node) return vals[k];
    }
    return 0.0;
}

std::vector<double> ForwardOperator::apply(const DiscreteMeasure& mu) const {
    if (!mu.grid()->same_as(*grid_)) throw InvalidArgument("apply: measure lives on a different grid");
    return apply(mu.masses());
}

std::vector<double> ForwardOperator::apply(std::span<const double> masses) const {
    if (masses.size() != nodes()) {
        throw InvalidArgument("apply: expected " + std::to_string(nodes()) + " node masses, got " +
                              std::to_string(masses.size()));
    }
    std::vector<double> out(rows(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) {
        double acc = 0.0;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += values_[k] * masses[col_[k]];
        out[i] = acc;
    }
    return out;
}

std::vector<double> ForwardOperator::adjoint(std::span<const double> lambda) const {
    if (lambda.size() != rows()) {
        throw InvalidArgument("adjoint: expected " + std::to_string(rows()) + " entries, got " +
                              std::to_string(lambda.size()));
    }
    std::vector<double> out(nodes(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) {
        const double l = lambda[i];
        if (l == 0.0) continue;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out[col_[k]] += l * values_[k];
    }
    return out;
}

ForwardOperator make_toy_operator(std::size_t n_nodes) {
    if (n_nodes < 2) throw InvalidArgument("make_toy_operator: need at least 2 nodes");
    auto grid = Grid::uniform_1d(n_nodes, 0.0, 1.0);
    std::vector<std::vector<double>> rows(2, std::vector<double>(n_nodes, 1.0));
    for (std::size_t j = 0; j < n_nodes; ++j) rows[1][j] = grid->node(j).x;
    return ForwardOperator(std::move(grid), rows);
}

ForwardOperator make_kernel_operator(GridPtr grid, std::span<const Point> centers,
                                     double bandwidth) {
    if (!(bandwidth > 0.0)) throw InvalidArgument("make_kernel_operator: bandwidth must be positive");
    if (centers.empty()) throw InvalidArgument("make_kernel_operator: no centers");
    const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
    std::vector<std::vector<double>> rows;
    rows.reserve(centers.size());
    for (const Point& c : centers) {
        if (!grid->contains(c)) throw InvalidArgument("make_kernel_operator: center outside the domain");
        std::vector<double> row(grid->size());
        for (std::size_t j = 0; j < grid->size(); ++j) {
            const Point& p = grid->node(j);
            const double dx = p.x - c.x;
            const double dy = grid->dim() == 2 ? p.y - c.y : 0.0;
            row[j] = std::exp(-(dx * dx + dy * dy) * inv);
        }
        rows.push_back(std::move(row));
    }
    return ForwardOperator(std::move(grid), rows);
}

}  // namespace betasparse
