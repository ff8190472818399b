#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "betasparse/analysis.hpp"
#include "betasparse/noise.hpp"
#include "betasparse/solvers.hpp"

namespace betasparse::experiments {

enum class Experiment { Toy, Tomo, RhoSweep, NoiseDemo };

struct ToyPoint {
    double y0 = 0.0;
    double y1 = 0.0;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::Toy;
    double beta = 2.0;
    std::size_t iterations = 1000;
    // Noise: phi is 1 / t for the tomography runs.
    NoiseModel noise_model = NoiseModel::ScaledPoisson;
    double t = 1.0;
    double phi = 0.1;
    std::uint64_t seed = 0;
    std::size_t n_pixels = 64;
    std::size_t n_angles = 60;
    std::size_t n_tangential = 95;
    std::size_t n_nodes = 101;
    std::vector<double> rho_list;
    std::filesystem::path output_dir;  // empty: nothing written
    std::size_t certificate_every = 10;
    std::vector<ToyPoint> toy_points;
    std::vector<double> phis;        // noise demo dispersion grid
    std::size_t draws = 20000;       // noise demo draws per component
    std::filesystem::path phantom_file;  // optional shape list replacing the built-in phantom

    void validate() const;
};

/// Defaults for one experiment: beta 2 and 5000 iterations for the toy,
/// beta 1.2 and 1000 iterations for tomography, beta 2 for the sweep.
ExperimentConfig default_config(Experiment experiment);

Experiment parse_experiment(const std::string& name);
/// key=value lines; readable back as a config file.
std::string config_echo(const ExperimentConfig& config);
std::string to_string(Experiment experiment);

// ---- Phantoms -------------------------------------------------------------

/// Disc (a = b, angle 0) or rotated ellipse with additive intensity, in
/// unit-square coordinates.
struct Shape {
    double cx = 0.5;
    double cy = 0.5;
    double a = 0.1;
    double b = 0.1;
    double angle = 0.0;  // radians
    double value = 1.0;
};

/// Clusters of discs at two intensities on a zero background.
std::vector<Shape> derenzo_shapes();
/// The modified Shepp-Logan ellipses mapped into [0,1]^2.
std::vector<Shape> shepp_logan_shapes();
/// Lines "disc cx cy r value" or "ellipse cx cy a b angle_deg value";
/// '#' starts a comment.
std::vector<Shape> read_shapes(const std::filesystem::path& path);
/// Pixel densities on an n x n grid (4 x 4 supersampling), clamped at 0.
std::vector<double> rasterize(const std::vector<Shape>& shapes, std::size_t n);

// ---- Results ---------------------------------------------------------------

struct ToyPointResult {
    ToyPoint y;
    ToyOracleResult oracle;
    bool has_oracle = false;
    double solver_loss = 0.0;
    double solver_mass = 0.0;
    double mass_near_prediction = 0.0;  // fraction within 2 nodes of the predicted Dirac
    CertificateReport certificate;
    DiscreteMeasure profile;
    std::vector<SolveReport> pdhg;  // one per rho
};

struct ToyResult {
    std::vector<ToyPointResult> points;
    std::vector<double> rho_list;
};

struct CertificatePoint {
    std::size_t iteration = 0;
    double shift_c = 0.0;
    double dual_value = 0.0;
    bool certified = false;
};

struct TomoResult {
    std::vector<double> phantom;  // masses
    Observation y{std::vector<double>{}};
    SolveReport report{DiscreteMeasure::zero(Grid::uniform_1d(2))};
    std::vector<CertificatePoint> certificates;
    SparsityDiagnostics diagnostics;
    double positive_window_fraction = 0.0;  // 50-iteration windows of the max trace
};

struct RhoEntry {
    double rho = 0.0;
    double max_value = 0.0;  // max pixel density of the reconstruction
    double objective = 0.0;
    double tv = 0.0;
    DiscreteMeasure reconstruction;
};

struct RhoSweepResult {
    std::vector<RhoEntry> entries;
};

struct NoiseRow {
    NoiseModel model = NoiseModel::Gaussian;
    double phi = 0.0;
    std::size_t component = 0;
    double w = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double median_abs_error = 0.0;
};

struct NoiseDemoResult {
    std::vector<NoiseRow> rows;
    std::vector<double> means;  // the mean vector w
};

/// Fraction of consecutive windows of `window` iterations over which the
/// trace ends higher than it started.
double positive_window_fraction(const std::vector<double>& trace, std::size_t window = 50);

ToyResult toy_experiment(const ExperimentConfig& config);
TomoResult tomo_experiment(const ExperimentConfig& config);
RhoSweepResult rho_sweep_experiment(const ExperimentConfig& config);
NoiseDemoResult noise_demo_experiment(const ExperimentConfig& config);

/// Exit-code wrappers: 0 on success, 1 with a message on stderr otherwise.
int run_toy(const ExperimentConfig& config);
int run_tomo(const ExperimentConfig& config);
int run_rho_sweep(const ExperimentConfig& config);
int run_noise_demo(const ExperimentConfig& config);

/// Command-line entry point (subcommands toy, tomo, rho-sweep, noise-demo).
int run_cli(int argc, const char* const* argv);

}  // namespace betasparse::experiments
