#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "experiments.hpp"

namespace betasparse::experiments {

namespace {

// Discs of radius r on a triangular lattice with `rows` rows, apex at the
// top, pitch 4r.
void add_triangle(std::vector<Shape>& out, double apex_x, double apex_y, double r, int rows,
                  double value) {
    const double pitch = 4.0 * r;
    const double dy = pitch * std::sqrt(3.0) / 2.0;
    for (int row = 0; row < rows; ++row) {
        for (int k = 0; k <= row; ++k) {
            const double x = apex_x + (static_cast<double>(k) - 0.5 * row) * pitch;
            const double y = apex_y - row * dy;
            out.push_back({x, y, r, r, 0.0, value});
        }
    }
}

}  // namespace

std::vector<Shape> derenzo_shapes() {
    std::vector<Shape> shapes;
    // Activities are in expected counts per unit chord at dose t = 1.
    add_triangle(shapes, 0.30, 0.80, 0.045, 3, 100.0);
    add_triangle(shapes, 0.72, 0.82, 0.030, 4, 200.0);
    add_triangle(shapes, 0.30, 0.42, 0.022, 5, 200.0);
    add_triangle(shapes, 0.70, 0.44, 0.016, 6, 100.0);
    return shapes;
}

std::vector<Shape> shepp_logan_shapes() {
    struct Raw {
        double x, y, a, b, deg, value;
    };
    static const Raw raw[] = {
        {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
        {0.22, 0.0, 0.11, 0.31, -18.0, -0.2},    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.2},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},       {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},     {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
        {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},   {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
    };
    std::vector<Shape> shapes;
    for (const auto& e : raw) {
        shapes.push_back({0.5 * (e.x + 1.0), 0.5 * (e.y + 1.0), 0.5 * e.a, 0.5 * e.b,
                          e.deg * std::numbers::pi / 180.0, 100.0 * e.value});
    }
    return shapes;
}

std::vector<Shape> read_shapes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open phantom file " + path.string());
    std::vector<Shape> shapes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string kind;
        if (!(ss >> kind)) continue;
        Shape s;
        bool ok = false;
        if (kind == "disc") {
            double r = 0.0;
            ok = static_cast<bool>(ss >> s.cx >> s.cy >> r >> s.value);
            s.a = s.b = r;
        } else if (kind == "ellipse") {
            double deg = 0.0;
            ok = static_cast<bool>(ss >> s.cx >> s.cy >> s.a >> s.b >> deg >> s.value);
            s.angle = deg * std::numbers::pi / 180.0;
        }
        if (!ok || !(s.a > 0.0) || !(s.b > 0.0)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad shape line");
        }
        shapes.push_back(s);
    }
    if (shapes.empty()) throw std::runtime_error("phantom file " + path.string() + " has no shapes");
    return shapes;
}

std::vector<double> rasterize(const std::vector<Shape>& shapes, std::size_t n) {
    const std::size_t sub = 4;
    std::vector<double> density(n * n, 0.0);
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            double acc = 0.0;
            for (std::size_t sy = 0; sy < sub; ++sy) {
                for (std::size_t sx = 0; sx < sub; ++sx) {
                    const double x = (static_cast<double>(ix) + (sx + 0.5) / sub) * h;
                    const double y = (static_cast<double>(iy) + (sy + 0.5) / sub) * h;
                    for (const auto& s : shapes) {
                        const double dx = x - s.cx;
                        const double dy = y - s.cy;
                        const double u = dx * std::cos(s.angle) + dy * std::sin(s.angle);
                        const double v = -dx * std::sin(s.angle) + dy * std::cos(s.angle);
                        if ((u * u) / (s.a * s.a) + (v * v) / (s.b * s.b) <= 1.0) acc += s.value;
                    }
                }
            }
            density[iy * n + ix] = std::max(0.0, acc / static_cast<double>(sub * sub));
        }
    }
    return density;
}

}  // namespace betasparse::experiments
