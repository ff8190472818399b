#include <cmath>
#include <stdexcept>

#include "experiments.hpp"

namespace betasparse::experiments {

std::string to_string(Experiment experiment) {
    switch (experiment) {
        case Experiment::Toy: return "toy";
        case Experiment::Tomo: return "tomo";
        case Experiment::RhoSweep: return "rho-sweep";
        case Experiment::NoiseDemo: return "noise-demo";
    }
    return "unknown";
}

Experiment parse_experiment(const std::string& name) {
    for (auto e : {Experiment::Toy, Experiment::Tomo, Experiment::RhoSweep, Experiment::NoiseDemo}) {
        if (name == to_string(e)) return e;
    }
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

ExperimentConfig default_config(Experiment experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    switch (experiment) {
        case Experiment::Toy:
            c.beta = 2.0;
            c.iterations = 5000;
            c.rho_list = {0.0, 0.01, 0.1, 1.0};
            c.toy_points = {{0.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}, {2.0, 1.0}};
            break;
        case Experiment::Tomo:
            c.beta = 1.2;
            c.iterations = 1000;
            c.t = 1.0;
            break;
        case Experiment::RhoSweep:
            c.beta = 2.0;
            c.iterations = 5000;
            c.t = 1.0;
            c.rho_list = {0.0, 30.0, 100.0, 300.0, 1000.0, 3000.0};
            break;
        case Experiment::NoiseDemo:
            c.beta = 0.5;
            c.phis = {0.01, 0.1, 1.0};
            c.draws = 20000;
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (!(beta >= 0.0 && beta <= 2.0)) throw std::invalid_argument("beta must lie in [0, 2]");
    if (iterations < 1) throw std::invalid_argument("iterations must be positive");
    if (n_pixels < 1 || n_angles < 1 || n_tangential < 1) {
        throw std::invalid_argument("operator sizes must be positive");
    }
    if (n_nodes < 2) throw std::invalid_argument("n_nodes must be at least 2");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
    if (!(phi > 0.0) || !std::isfinite(phi)) throw std::invalid_argument("phi must be positive");
    for (double rho : rho_list) {
        if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho values must be >= 0");
    }
    for (double p : phis) {
        if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("phis must be positive");
    }
    if (experiment == Experiment::RhoSweep) {
        if (beta != 2.0) throw std::invalid_argument("rho-sweep requires beta = 2");
        if (rho_list.empty()) throw std::invalid_argument("rho-sweep needs at least one rho");
    }
    if (experiment == Experiment::Toy) {
        if (toy_points.empty()) throw std::invalid_argument("toy needs at least one point");
        for (const auto& p : toy_points) {
            if ((p.y0 < 0.0 || p.y1 < 0.0) && beta != 2.0) {
                throw std::invalid_argument("toy points with negative data require beta = 2");
            }
        }
    }
    if (experiment == Experiment::NoiseDemo) {
        if (phis.empty()) throw std::invalid_argument("noise-demo needs at least one phi");
        if (draws < 2) throw std::invalid_argument("noise-demo needs at least 2 draws");
    }
    if (certificate_every < 1) throw std::invalid_argument("certificate_every must be positive");
}

}  // namespace betasparse::experiments
