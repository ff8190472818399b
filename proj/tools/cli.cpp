#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "experiments.hpp"

namespace betasparse::experiments {

namespace {

ToyPoint parse_point(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("toy point '" + text + "' is not y0:y1");
    std::size_t used0 = 0;
    std::size_t used1 = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    ToyPoint p{std::stod(a, &used0), std::stod(b, &used1)};
    if (used0 != a.size() || used1 != b.size()) throw std::invalid_argument("toy point '" + text + "' is not y0:y1");
    return p;
}

struct Overrides {
    std::optional<double> beta;
    std::optional<std::size_t> iters;
    std::optional<double> t;
    std::optional<double> phi;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> n_pixels, n_angles, n_tangential, n_nodes, certificate_every, draws;
    std::vector<double> rho;
    std::vector<double> phis;
    std::vector<std::string> points;
    std::optional<std::string> phantom;

    void apply(ExperimentConfig& c) const {
        if (beta) c.beta = *beta;
        if (iters) c.iterations = *iters;
        if (t) c.t = *t;
        if (phi) c.phi = *phi;
        if (seed) c.seed = *seed;
        if (out) c.output_dir = *out;
        if (n_pixels) c.n_pixels = *n_pixels;
        if (n_angles) c.n_angles = *n_angles;
        if (n_tangential) c.n_tangential = *n_tangential;
        if (n_nodes) c.n_nodes = *n_nodes;
        if (certificate_every) c.certificate_every = *certificate_every;
        if (draws) c.draws = *draws;
        if (!rho.empty()) c.rho_list = rho;
        if (!phis.empty()) c.phis = phis;
        if (!points.empty()) {
            c.toy_points.clear();
            for (const auto& p : points) c.toy_points.push_back(parse_point(p));
        }
        if (phantom) c.phantom_file = *phantom;
    }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Non-negative inverse problems with beta-divergences: experiment driver"};
    app.fallthrough();
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence")
        ->check(CLI::ExistingFile);

    Overrides o;
    app.add_option("--beta", o.beta, "Divergence parameter in [0, 2]");
    app.add_option("--iters", o.iters, "Iteration count");
    app.add_option("--t", o.t, "Dose: tomography data are (1/t) Poisson(t A mu)");
    app.add_option("--phi", o.phi, "Dispersion (unused by the tomography runs, which use 1/t)");
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--rho", o.rho, "Comma-separated regularisation weights")->delimiter(',');
    app.add_option("--n_pixels", o.n_pixels, "Image side length in pixels");
    app.add_option("--n_angles", o.n_angles, "Projection angles");
    app.add_option("--n_tangential", o.n_tangential, "Tangential detector positions");
    app.add_option("--n_nodes", o.n_nodes, "Toy grid nodes on [0, 1]");
    app.add_option("--certificate_every", o.certificate_every, "Certificate cadence (iterations)");
    app.add_option("--phis", o.phis, "Comma-separated dispersion grid for noise-demo")->delimiter(',');
    app.add_option("--draws", o.draws, "Draws per component for noise-demo");
    app.add_option("--points", o.points, "Toy data points y0:y1, comma separated")->delimiter(',');
    app.add_option("--phantom", o.phantom, "Shape file replacing the built-in phantom")->check(CLI::ExistingFile);

    auto* toy = app.add_subcommand("toy", "Two-detector toy problem on [0, 1]");
    auto* tomo = app.add_subcommand("tomo", "Unregularised tomography with ML-type iterations");
    auto* sweep = app.add_subcommand("rho-sweep", "TV-regularised tomography over a list of rho");
    auto* noise = app.add_subcommand("noise-demo", "Moments of the four noise models over a dispersion grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    Experiment which = Experiment::Toy;
    if (*tomo) which = Experiment::Tomo;
    if (*sweep) which = Experiment::RhoSweep;
    if (*noise) which = Experiment::NoiseDemo;
    (void)toy;

    ExperimentConfig config = default_config(which);
    try {
        o.apply(config);
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    if (config.output_dir.empty()) config.output_dir = "out/" + to_string(which);
    switch (which) {
        case Experiment::Toy: return run_toy(config);
        case Experiment::Tomo: return run_tomo(config);
        case Experiment::RhoSweep: return run_rho_sweep(config);
        case Experiment::NoiseDemo: return run_noise_demo(config);
    }
    return 1;
}

}  // namespace betasparse::experiments
