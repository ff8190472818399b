#include "betasparse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

Grid::Grid(int dim, std::vector<Point> nodes, std::vector<double> quad_weights, std::size_t nx,
           std::size_t ny, Point lower, Point upper)
    : dim_(dim),
      nodes_(std::move(nodes)),
      quad_weights_(std::move(quad_weights)),
      nx_(nx),
      ny_(ny),
      lower_(lower),
      upper_(upper) {
    if (dim_ != 1 && dim_ != 2) throw InvalidArgument("Grid: dim must be 1 or 2");
    if (nodes_.empty()) throw InvalidArgument("Grid: at least one node required");
    if (quad_weights_.size() != nodes_.size()) {
        throw InvalidArgument("Grid: one quadrature weight per node required");
    }
    for (double w : quad_weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("Grid: quadrature weights must be positive");
        }
    }
    if (nx_ * ny_ != nodes_.size()) throw InvalidArgument("Grid: nx * ny must equal node count");
    if (dim_ == 1 && ny_ != 1) throw InvalidArgument("Grid: 1D grids have ny = 1");
}

std::shared_ptr<const Grid> Grid::uniform_1d(std::size_t n, double lo, double hi) {
    if (n < 2) throw InvalidArgument("Grid::uniform_1d: need at least 2 nodes");
    if (!(hi > lo)) throw InvalidArgument("Grid::uniform_1d: empty interval");
    const double h = (hi - lo) / static_cast<double>(n - 1);
    std::vector<Point> nodes(n);
    std::vector<double> weights(n, h);
    for (std::size_t j = 0; j < n; ++j) {
        nodes[j].x = j + 1 == n ? hi : lo + h * static_cast<double>(j);
    }
    weights.front() = weights.back() = 0.5 * h;
    return std::make_shared<const Grid>(1, std::move(nodes), std::move(weights), n, 1,
                                        Point{lo, 0.0}, Point{hi, 0.0});
}

std::shared_ptr<const Grid> Grid::pixels_2d(std::size_t n) {
    if (n < 1) throw InvalidArgument("Grid::pixels_2d: need at least one pixel");
    const double h = 1.0 / static_cast<double>(n);
    std::vector<Point> nodes;
    nodes.reserve(n * n);
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            nodes.push_back({(static_cast<double>(ix) + 0.5) * h, (static_cast<double>(iy) + 0.5) * h});
        }
    }
    std::vector<double> weights(n * n, h * h);
    return std::make_shared<const Grid>(2, std::move(nodes), std::move(weights), n, n,
                                        Point{0.0, 0.0}, Point{1.0, 1.0});
}

bool Grid::contains(const Point& p) const noexcept {
    const bool in_x = p.x >= lower_.x && p.x <= upper_.x;
    if (dim_ == 1) return in_x;
    return in_x && p.y >= lower_.y && p.y <= upper_.y;
}

bool Grid::same_as(const Grid& other) const noexcept {
    if (this == &other) return true;
    if (dim_ != other.dim_ || nx_ != other.nx_ || ny_ != other.ny_) return false;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (nodes_[j].x != other.nodes_[j].x || nodes_[j].y != other.nodes_[j].y ||
            quad_weights_[j] != other.quad_weights_[j]) {
            return false;
        }
    }
    return true;
}

DiscreteMeasure::DiscreteMeasure(GridPtr grid, std::vector<double> masses)
    : grid_(std::move(grid)), masses_(std::move(masses)) {
    if (!grid_) throw InvalidArgument("DiscreteMeasure: null grid");
    if (masses_.size() != grid_->size()) {
        throw InvalidArgument("DiscreteMeasure: expected " + std::to_string(grid_->size()) +
                              " masses, got " + std::to_string(masses_.size()));
    }
    for (double m : masses_) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw InvalidArgument("DiscreteMeasure: masses must be finite and non-negative");
        }
    }
}

DiscreteMeasure DiscreteMeasure::zero(GridPtr grid) {
    const std::size_t n = grid->size();
    return DiscreteMeasure(std::move(grid), std::vector<double>(n, 0.0));
}

DiscreteMeasure DiscreteMeasure::dirac(GridPtr grid, std::size_t node, double mass) {
    std::vector<double> masses(grid->size(), 0.0);
    masses.at(node) = mass;
    return DiscreteMeasure(std::move(grid), std::move(masses));
}

DiscreteMeasure DiscreteMeasure::uniform_density(GridPtr grid, double density) {
    auto q = grid->quad_weights();
    std::vector<double> masses(q.begin(), q.end());
    for (double& m : masses) m *= density;
    return DiscreteMeasure(std::move(grid), std::move(masses));
}

double DiscreteMeasure::total_mass() const noexcept {
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

double DiscreteMeasure::max_mass() const noexcept {
    return masses_.empty() ? 0.0 : *std::max_element(masses_.begin(), masses_.end());
}

}  // namespace betasparse
