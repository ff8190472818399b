#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "betasparse/grid.hpp"

namespace betasparse {

/// m sampled row functionals a_i on a grid: rows[i][j] = a_i(node_j).
/// Stored compressed by row; every entry is >= 0 and every row has at least
/// one strictly positive entry.
class ForwardOperator {
public:
    struct Entry {
        std::size_t node;
        double value;
    };

    ForwardOperator(GridPtr grid, const std::vector<std::vector<double>>& dense_rows);
    /// rows[i] lists (node, value) pairs; nodes must be strictly increasing.
    ForwardOperator(GridPtr grid, std::vector<std::vector<Entry>> rows);

    const GridPtr& grid() const noexcept { return grid_; }
    std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
    std::size_t nodes() const noexcept { return grid_->size(); }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_nodes(std::size_t i) const;
    std::span<const double> row_values(std::size_t i) const;
    std::vector<double> dense_row(std::size_t i) const;
    double entry(std::size_t i, std::size_t node) const;

    /// (A mu)_i = sum_j rows[i][j] * mass_j.
    std::vector<double> apply(const DiscreteMeasure& mu) const;
    std::vector<double> apply(std::span<const double> masses) const;

    /// Node j -> sum_i lambda_i rows[i][j]; a sampled continuous function, no
    /// quadrature weights.
    std::vector<double> adjoint(std::span<const double> lambda) const;

    /// A* applied to the all-ones vector.
    const std::vector<double>& column_sums() const noexcept { return column_sums_; }

private:
    void finalize();

    GridPtr grid_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_;
    std::vector<double> values_;
    std::vector<double> column_sums_;
};

/// K = [0,1], a_0 = 1, a_1(x) = x, on n_nodes uniform nodes (trapezoidal).
ForwardOperator make_toy_operator(std::size_t n_nodes);

/// Gaussian kernel rows a_i(x) = exp(-|c_i - x|^2 / (2 bandwidth^2)).
ForwardOperator make_kernel_operator(GridPtr grid, std::span<const Point> centers,
                                     double bandwidth);

/// A parallel-beam ray: points x with <x - (0.5,0.5), normal> = offset,
/// normal = (-sin theta, cos theta). theta = 0 is a horizontal ray.
struct Ray {
    double theta = 0.0;
    double offset = 0.0;
};

struct RadonSystem {
    ForwardOperator op;
    std::vector<Ray> rays;  // one per kept row
};

/// Parallel-beam line integrals on an n_pixels x n_pixels grid over [0,1]^2.
/// Angles theta_k = k pi / n_angles; offsets uniform (cell centred) across a
/// detector of half-width sqrt(2)/2. Entries are exact ray/pixel intersection
/// lengths divided by the pixel area, so that sum_j a_ij mass_j integrates the
/// density along the ray. Rays that miss the domain are dropped.
RadonSystem make_radon_system(std::size_t n_pixels, std::size_t n_angles, std::size_t n_tangential);
ForwardOperator make_radon_operator(std::size_t n_pixels, std::size_t n_angles,
                                    std::size_t n_tangential);

/// Exact intersection lengths of a ray with the pixels of an n x n lattice on
/// [0,1]^2, as (node, length) pairs sorted by node.
std::vector<ForwardOperator::Entry> trace_ray(const Ray& ray, std::size_t n_pixels);

}  // namespace betasparse
