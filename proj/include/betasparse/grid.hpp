#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace betasparse {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Discretization of the compact domain K. Nodes carry positive quadrature
/// weights (Lebesgue measure per node). In 2D the nodes are pixel centres of
/// a regular lattice, stored row-major (node = iy * nx + ix).
class Grid {
public:
    Grid(int dim, std::vector<Point> nodes, std::vector<double> quad_weights, std::size_t nx,
         std::size_t ny, Point lower, Point upper);

    /// n >= 2 nodes on [lo, hi], endpoints included, trapezoidal weights.
    static std::shared_ptr<const Grid> uniform_1d(std::size_t n, double lo = 0.0, double hi = 1.0);
    /// n x n pixels covering [0,1]^2, pixel-area weights.
    static std::shared_ptr<const Grid> pixels_2d(std::size_t n);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    const Point& node(std::size_t j) const { return nodes_.at(j); }
    std::span<const Point> nodes() const noexcept { return nodes_; }
    std::span<const double> quad_weights() const noexcept { return quad_weights_; }
    Point lower() const noexcept { return lower_; }
    Point upper() const noexcept { return upper_; }
    bool contains(const Point& p) const noexcept;

    bool same_as(const Grid& other) const noexcept;

private:
    int dim_;
    std::vector<Point> nodes_;
    std::vector<double> quad_weights_;
    std::size_t nx_;
    std::size_t ny_;
    Point lower_;
    Point upper_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Non-negative node masses (density times quadrature weight), so a Dirac
/// mass is a single non-zero entry.
class DiscreteMeasure {
public:
    DiscreteMeasure(GridPtr grid, std::vector<double> masses);

    static DiscreteMeasure zero(GridPtr grid);
    static DiscreteMeasure dirac(GridPtr grid, std::size_t node, double mass);
    /// Constant density; masses are density * quad weight.
    static DiscreteMeasure uniform_density(GridPtr grid, double density);

    const GridPtr& grid() const noexcept { return grid_; }
    std::span<const double> masses() const noexcept { return masses_; }
    std::size_t size() const noexcept { return masses_.size(); }
    double operator[](std::size_t j) const { return masses_[j]; }

    double total_mass() const noexcept;
    double max_mass() const noexcept;

private:
    GridPtr grid_;
    std::vector<double> masses_;
};

}  // namespace betasparse
