#include <algorithm>
#include <cmath>
#include <numbers>

#include "betasparse/errors.hpp"
#include "betasparse/operators.hpp"

namespace betasparse {

namespace {

constexpr double kParallelEps = 1e-14;

// Clip the parameter interval of p0 + t d against [0,1]^2 (slab method).
bool clip_unit_square(Point p0, Point d, double& t_lo, double& t_hi) {
    t_lo = -std::numeric_limits<double>::infinity();
    t_hi = std::numeric_limits<double>::infinity();
    const double origin[2] = {p0.x, p0.y};
    const double dir[2] = {d.x, d.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(dir[axis]) < kParallelEps) {
            if (origin[axis] < 0.0 || origin[axis] > 1.0) return false;
            continue;
        }
        double a = (0.0 - origin[axis]) / dir[axis];
        double b = (1.0 - origin[axis]) / dir[axis];
        if (a > b) std::swap(a, b);
        t_lo = std::max(t_lo, a);
        t_hi = std::min(t_hi, b);
    }
    return t_hi > t_lo;
}

}  // namespace

// Siddon-style tracing: the ray is cut at every lattice line it crosses; each
// resulting segment lies inside exactly one pixel, found from its midpoint.
std::vector<ForwardOperator::Entry> trace_ray(const Ray& ray, std::size_t n_pixels) {
    const double c = std::cos(ray.theta);
    const double s = std::sin(ray.theta);
    const Point dir{std::abs(c) < kParallelEps ? 0.0 : c, std::abs(s) < kParallelEps ? 0.0 : s};
    const Point p0{0.5 - s * ray.offset, 0.5 + c * ray.offset};

    double t_lo = 0.0;
    double t_hi = 0.0;
    if (!clip_unit_square(p0, dir, t_lo, t_hi)) return {};

    const double n = static_cast<double>(n_pixels);
    std::vector<double> cuts{t_lo, t_hi};
    const double origin[2] = {p0.x, p0.y};
    const double step[2] = {dir.x, dir.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (step[axis] == 0.0) continue;
        for (std::size_t k = 0; k <= n_pixels; ++k) {
            const double t = (static_cast<double>(k) / n - origin[axis]) / step[axis];
            if (t > t_lo && t < t_hi) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    std::vector<ForwardOperator::Entry> hits;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double len = cuts[k + 1] - cuts[k];
        if (len <= 1e-15) continue;
        const double tm = 0.5 * (cuts[k] + cuts[k + 1]);
        const double mx = p0.x + tm * dir.x;
        const double my = p0.y + tm * dir.y;
        const auto ix = static_cast<std::size_t>(std::clamp(std::floor(mx * n), 0.0, n - 1.0));
        const auto iy = static_cast<std::size_t>(std::clamp(std::floor(my * n), 0.0, n - 1.0));
        hits.push_back({iy * n_pixels + ix, len});
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    std::vector<ForwardOperator::Entry> merged;
    for (const auto& h : hits) {
        if (!merged.empty() && merged.back().node == h.node) {
            merged.back().value += h.value;
        } else {
            merged.push_back(h);
        }
    }
    return merged;
}

RadonSystem make_radon_system(std::size_t n_pixels, std::size_t n_angles,
                              std::size_t n_tangential) {
    if (n_pixels < 1 || n_angles < 1 || n_tangential < 1) {
        throw InvalidArgument("make_radon_operator: sizes must be positive");
    }
    auto grid = Grid::pixels_2d(n_pixels);
    const double inv_area = static_cast<double>(n_pixels * n_pixels);
    const double half_width = std::numbers::sqrt2 / 2.0;
    const double ds = 2.0 * half_width / static_cast<double>(n_tangential);

    std::vector<std::vector<ForwardOperator::Entry>> rows;
    std::vector<Ray> rays;
    for (std::size_t k = 0; k < n_angles; ++k) {
        const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_angles);
        for (std::size_t l = 0; l < n_tangential; ++l) {
            const Ray ray{theta, -half_width + (static_cast<double>(l) + 0.5) * ds};
            auto hits = trace_ray(ray, n_pixels);
            if (hits.empty()) continue;
            for (auto& h : hits) h.value *= inv_area;
            rows.push_back(std::move(hits));
            rays.push_back(ray);
        }
    }
    if (rows.empty()) throw InvalidArgument("make_radon_operator: no ray meets the domain");
    return RadonSystem{ForwardOperator(std::move(grid), std::move(rows)), std::move(rays)};
}

ForwardOperator make_radon_operator(std::size_t n_pixels, std::size_t n_angles,
                                    std::size_t n_tangential) {
    return make_radon_system(n_pixels, n_angles, n_tangential).op;
}

}  // namespace betasparse
