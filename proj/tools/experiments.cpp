#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "betasparse/csv_io.hpp"
#include "betasparse/errors.hpp"
#include "image.hpp"

namespace betasparse::experiments {

namespace fs = std::filesystem;
using csv::format_double;

namespace {

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + format_double(v[k]);
    return out;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
}

std::vector<double> densities(const DiscreteMeasure& mu) {
    std::vector<double> d(mu.size());
    const auto q = mu.grid()->quad_weights();
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = mu[j] / q[j];
    return d;
}

Observation make_observation(std::vector<double> y) {
    const bool negative = std::any_of(y.begin(), y.end(), [](double v) { return v < 0.0; });
    return negative ? Observation::signed_data(std::move(y)) : Observation(std::move(y));
}

std::vector<Shape> phantom_shapes(const ExperimentConfig& config, std::vector<Shape> (*builtin)()) {
    return config.phantom_file.empty() ? builtin() : read_shapes(config.phantom_file);
}

std::vector<double> to_masses(const std::vector<double>& density, const Grid& grid) {
    std::vector<double> m(density.size());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = density[j] * grid.quad_weights()[j];
    return m;
}

}  // namespace

std::string config_echo(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "experiment=" << to_string(c.experiment) << '\n'
       << "beta=" << format_double(c.beta) << '\n'
       << "iters=" << c.iterations << '\n'
       << "t=" << format_double(c.t) << '\n'
       << "phi=" << format_double(c.phi) << '\n'
       << "seed=" << c.seed << '\n'
       << "n_pixels=" << c.n_pixels << '\n'
       << "n_angles=" << c.n_angles << '\n'
       << "n_tangential=" << c.n_tangential << '\n'
       << "n_nodes=" << c.n_nodes << '\n'
       << "rho=" << join(c.rho_list) << '\n'
       << "certificate_every=" << c.certificate_every << '\n'
       << "phis=" << join(c.phis) << '\n'
       << "draws=" << c.draws << '\n';
    os << "points=";
    for (std::size_t k = 0; k < c.toy_points.size(); ++k) {
        os << (k ? "," : "") << format_double(c.toy_points[k].y0) << ':' << format_double(c.toy_points[k].y1);
    }
    os << '\n';
    if (!c.phantom_file.empty()) os << "phantom=" << c.phantom_file.string() << '\n';
    return os.str();
}

double positive_window_fraction(const std::vector<double>& trace, std::size_t window) {
    if (window == 0 || trace.size() <= window) return 0.0;
    std::size_t windows = 0;
    std::size_t rising = 0;
    for (std::size_t start = 0; start + window < trace.size(); start += window) {
        ++windows;
        if (trace[start + window] > trace[start]) ++rising;
    }
    return static_cast<double>(rising) / static_cast<double>(windows);
}

// ---- toy --------------------------------------------------------------------

ToyResult toy_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto A = make_toy_operator(config.n_nodes);
    const BetaParam beta(config.beta);
    const std::size_t last = config.n_nodes - 1;
    ToyResult result;
    result.rho_list = config.rho_list;
    for (const auto& point : config.toy_points) {
        const auto y = make_observation({point.y0, point.y1});
        auto report = run_multiplicative(default_initial_measure(A.grid()), y, A, beta, config.iterations);
        ToyPointResult r{point, {}, false, report.loss_trace.back(), report.final_mu.total_mass(), 0.0,
                         dual_certificate(report.final_mu, y, A, beta), report.final_mu, {}};
        if (config.beta == 2.0) {
            r.has_oracle = true;
            r.oracle = toy_oracle(point.y0, point.y1);
            const auto& mu = report.final_mu;
            double near = 0.0;
            if (r.oracle.region == ToyRegion::DiracAt0) {
                for (std::size_t j = 0; j <= 2; ++j) near += mu[j];
            } else if (r.oracle.region == ToyRegion::DiracAt1) {
                for (std::size_t j = last - 2; j <= last; ++j) near += mu[j];
            }
            r.mass_near_prediction = mu.total_mass() > 0.0 ? near / mu.total_mass() : 0.0;
            for (double rho : config.rho_list) {
                r.pdhg.push_back(pdhg_tv(y, A, default_pdhg_config(A, rho, config.iterations)));
            }
        }
        result.points.push_back(std::move(r));
    }

    if (config.output_dir.empty()) return result;
    fs::create_directories(config.output_dir);
    const std::string echo = config_echo(config);
    auto summary = open_output(config.output_dir, "toy_summary.csv");
    summary << "point,y0,y1,method,rho,region,oracle_xi,oracle_loss,loss,total_mass,mass_near_prediction,"
               "certificate_value,certified\n";
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        const auto& r = result.points[k];
        const std::string region = r.has_oracle ? std::string(to_string(r.oracle.region)) : "";
        const std::string xi = r.has_oracle ? format_double(r.oracle.xi) : "";
        const std::string oloss = r.has_oracle ? format_double(r.oracle.optimal_loss) : "";
        summary << k << ',' << format_double(r.y.y0) << ',' << format_double(r.y.y1) << ",multiplicative,,"
                << region << ',' << xi << ',' << oloss << ',' << format_double(r.solver_loss) << ','
                << format_double(r.solver_mass) << ',' << format_double(r.mass_near_prediction) << ','
                << format_double(r.certificate.dual_value) << ',' << (r.certificate.certified ? 1 : 0) << '\n';
        for (std::size_t p = 0; p < r.pdhg.size(); ++p) {
            const auto& rep = r.pdhg[p];
            summary << k << ',' << format_double(r.y.y0) << ',' << format_double(r.y.y1) << ",pdhg,"
                    << format_double(result.rho_list[p]) << ',' << region << ',' << xi << ',' << oloss << ','
                    << format_double(rep.loss_trace.back()) << ',' << format_double(rep.final_mu.total_mass())
                    << ",,,\n";
        }

        auto profile = open_output(config.output_dir, "toy_point" + std::to_string(k) + "_profile.csv");
        profile << "node,x,multiplicative";
        for (std::size_t p = 0; p < r.pdhg.size(); ++p) profile << ",pdhg_rho" << p;
        profile << '\n';
        for (std::size_t j = 0; j < A.nodes(); ++j) {
            profile << j << ',' << format_double(A.grid()->node(j).x) << ',' << format_double(r.profile[j]);
            for (const auto& rep : r.pdhg) profile << ',' << format_double(rep.final_mu[j]);
            profile << '\n';
        }
        write_profile_png(config.output_dir / ("toy_point" + std::to_string(k) + "_multiplicative.png"),
                          r.profile.masses(), echo + "point=" + std::to_string(k) + "\nmethod=multiplicative\n");
        for (std::size_t p = 0; p < r.pdhg.size(); ++p) {
            write_profile_png(
                config.output_dir / ("toy_point" + std::to_string(k) + "_rho" + std::to_string(p) + ".png"),
                r.pdhg[p].final_mu.masses(),
                echo + "point=" + std::to_string(k) + "\nmethod=pdhg\nrho_value=" + format_double(result.rho_list[p]) + '\n');
        }
    }
    return result;
}

// ---- tomography -------------------------------------------------------------

TomoResult tomo_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto A = make_radon_operator(config.n_pixels, config.n_angles, config.n_tangential);
    const auto& grid = A.grid();
    const BetaParam beta(config.beta);

    TomoResult result;
    result.phantom = to_masses(rasterize(phantom_shapes(config, derenzo_shapes), config.n_pixels), *grid);
    const auto w = A.apply(result.phantom);
    const NoiseSpec spec{NoiseModel::ScaledPoisson, 1.0 / config.t, std::nullopt, config.seed};
    result.y = Observation(sample(w, spec).y);

    MultiplicativeOptions options;
    options.max_iters = config.iterations;
    options.stall_tol = 0.0;
    options.snapshot_every = std::max<std::size_t>(1, config.iterations / 10);
    options.observer = [&](std::size_t k, const DiscreteMeasure& mu) {
        if (k % config.certificate_every != 0 && k != config.iterations) return;
        const auto cert = dual_certificate(mu, result.y, A, beta);
        result.certificates.push_back({k, cert.shift_c, cert.dual_value, cert.certified});
    };
    result.report = run_multiplicative(default_initial_measure(grid), result.y, A, beta, options);
    result.diagnostics = sparsity_diagnostics(result.report.final_mu, result.y, A, beta);
    result.positive_window_fraction = positive_window_fraction(result.report.max_trace, 50);

    if (config.output_dir.empty()) return result;
    fs::create_directories(config.output_dir);
    const std::string echo = config_echo(config);
    const std::size_t n = config.n_pixels;
    {
        auto os = open_output(config.output_dir, "tomo_trace.csv");
        csv::write_solve_report(os, result.report);
    }
    {
        auto os = open_output(config.output_dir, "tomo_certificates.csv");
        os << "iteration,shift_c,dual_value,certified\n";
        for (const auto& c : result.certificates) {
            os << c.iteration << ',' << format_double(c.shift_c) << ',' << format_double(c.dual_value) << ','
               << (c.certified ? 1 : 0) << '\n';
        }
    }
    {
        auto os = open_output(config.output_dir, "tomo_diagnostics.csv");
        csv::write_diagnostics(os, result.diagnostics);
    }
    {
        auto os = open_output(config.output_dir, "tomo_observation.csv");
        csv::write_observation(os, result.y);
    }
    {
        auto os = open_output(config.output_dir, "tomo_final_measure.csv");
        csv::write_measure(os, result.report.final_mu);
    }
    {
        auto os = open_output(config.output_dir, "tomo_summary.csv");
        os << "field,value\n"
           << "rows," << A.rows() << '\n'
           << "final_loss," << format_double(result.report.loss_trace.back()) << '\n'
           << "final_max_mass," << format_double(result.report.max_trace.back()) << '\n'
           << "max_trace_positive_window_fraction," << format_double(result.positive_window_fraction) << '\n'
           << "final_certified," << (result.diagnostics.certificate.certified ? 1 : 0) << '\n'
           << "final_dual_value," << format_double(result.diagnostics.certificate.dual_value) << '\n';
    }
    write_grayscale_png(config.output_dir / "tomo_phantom.png", densities(DiscreteMeasure(grid, result.phantom)), n, n,
                        echo + "image=phantom\n");
    const std::size_t first = options.snapshot_every;
    for (std::size_t s = 0; s < result.report.snapshots.size(); ++s) {
        const std::size_t k = result.report.snapshot_iterations[s];
        if (k != first && k != config.iterations) continue;
        write_grayscale_png(config.output_dir / ("tomo_iter" + std::to_string(k) + ".png"),
                            densities(result.report.snapshots[s]), n, n, echo + "iteration=" + std::to_string(k) + '\n');
    }
    return result;
}

// ---- regularisation sweep ---------------------------------------------------

RhoSweepResult rho_sweep_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto A = make_radon_operator(config.n_pixels, config.n_angles, config.n_tangential);
    const auto& grid = A.grid();
    const auto phantom = to_masses(rasterize(phantom_shapes(config, shepp_logan_shapes), config.n_pixels), *grid);
    const NoiseSpec spec{NoiseModel::ScaledPoisson, 1.0 / config.t, std::nullopt, config.seed};
    const Observation y(sample(A.apply(phantom), spec).y);

    // Step sizes depend only on the operator, so one norm estimate serves
    // every rho.
    const PdhgConfig base = default_pdhg_config(A, 0.0, config.iterations);
    std::vector<std::future<SolveReport>> jobs;
    for (double rho : config.rho_list) {
        PdhgConfig pc = base;
        pc.rho = rho;
        jobs.push_back(std::async(std::launch::async, [&y, &A, pc] { return pdhg_tv(y, A, pc); }));
    }
    RhoSweepResult result;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        auto report = jobs[k].get();
        const auto d = densities(report.final_mu);
        result.entries.push_back({config.rho_list[k], *std::max_element(d.begin(), d.end()), report.loss_trace.back(),
                                  total_variation(*grid, report.final_mu.masses()), report.final_mu});
        if (!config.output_dir.empty()) {
            fs::create_directories(config.output_dir);
            auto os = open_output(config.output_dir, "rho_sweep_trace" + std::to_string(k) + ".csv");
            csv::write_solve_report(os, report);
        }
    }

    if (config.output_dir.empty()) return result;
    const std::string echo = config_echo(config);
    {
        auto os = open_output(config.output_dir, "rho_sweep.csv");
        os << "rho,max_value,objective,tv\n";
        for (const auto& e : result.entries) {
            os << format_double(e.rho) << ',' << format_double(e.max_value) << ',' << format_double(e.objective) << ','
               << format_double(e.tv) << '\n';
        }
    }
    const auto [lo, hi] = std::minmax_element(result.entries.begin(), result.entries.end(),
                                              [](const RhoEntry& a, const RhoEntry& b) { return a.rho < b.rho; });
    const std::size_t n = config.n_pixels;
    write_grayscale_png(config.output_dir / "rho_sweep_phantom.png", densities(DiscreteMeasure(grid, phantom)), n, n,
                        echo + "image=phantom\n");
    write_grayscale_png(config.output_dir / "rho_sweep_min_rho.png", densities(lo->reconstruction), n, n,
                        echo + "rho_value=" + format_double(lo->rho) + '\n');
    write_grayscale_png(config.output_dir / "rho_sweep_max_rho.png", densities(hi->reconstruction), n, n,
                        echo + "rho_value=" + format_double(hi->rho) + '\n');
    return result;
}

// ---- noise ------------------------------------------------------------------

NoiseDemoResult noise_demo_experiment(const ExperimentConfig& config) {
    config.validate();
    NoiseDemoResult result;
    result.means = {0.5, 1.0, 2.0, 4.0};
    const std::size_t m = result.means.size();
    const std::size_t draws = config.draws;
    // Component-major replication: entry c * draws + d is draw d of component c.
    std::vector<double> w(m * draws);
    for (std::size_t c = 0; c < m; ++c) std::fill_n(w.begin() + static_cast<std::ptrdiff_t>(c * draws), draws, result.means[c]);
    const BetaParam cp_beta(config.beta > 0.0 && config.beta < 1.0 ? config.beta : 0.5);

    std::uint64_t model_index = 0;
    for (auto model : {NoiseModel::Gaussian, NoiseModel::ScaledPoisson, NoiseModel::CompoundPoissonGamma,
                       NoiseModel::MultiplicativeGamma}) {
        NoiseSpec base{model, 1.0, std::nullopt, config.seed + 1000003ULL * model_index++};
        if (model == NoiseModel::CompoundPoissonGamma) base.beta = cp_beta;
        const auto samples = dispersion_sweep(w, base, config.phis);
        for (std::size_t p = 0; p < config.phis.size(); ++p) {
            const auto& y = samples[p].y;
            for (std::size_t c = 0; c < m; ++c) {
                const auto first = y.begin() + static_cast<std::ptrdiff_t>(c * draws);
                std::vector<double> block(first, first + static_cast<std::ptrdiff_t>(draws));
                double mean = 0.0;
                for (double v : block) mean += v;
                mean /= static_cast<double>(draws);
                double var = 0.0;
                for (double v : block) var += (v - mean) * (v - mean);
                var /= static_cast<double>(draws - 1);
                std::vector<double> err(draws);
                for (std::size_t d = 0; d < draws; ++d) err[d] = std::abs(block[d] - result.means[c]);
                std::nth_element(err.begin(), err.begin() + static_cast<std::ptrdiff_t>(draws / 2), err.end());
                result.rows.push_back({model, config.phis[p], c, result.means[c], mean, var,
                                       std::sqrt(var / static_cast<double>(draws)), err[draws / 2]});
            }
        }
    }

    if (config.output_dir.empty()) return result;
    fs::create_directories(config.output_dir);
    auto os = open_output(config.output_dir, "noise_demo.csv");
    os << "model,phi,component,w,mean,variance,std_error,median_abs_error\n";
    for (const auto& r : result.rows) {
        os << to_string(r.model) << ',' << format_double(r.phi) << ',' << r.component << ',' << format_double(r.w)
           << ',' << format_double(r.mean) << ',' << format_double(r.variance) << ',' << format_double(r.std_error)
           << ',' << format_double(r.median_abs_error) << '\n';
    }
    return result;
}

// ---- exit-code wrappers -----------------------------------------------------

namespace {

template <class F>
int guarded(const char* name, F&& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int run_toy(const ExperimentConfig& config) { return guarded("toy", [&] { toy_experiment(config); }); }
int run_tomo(const ExperimentConfig& config) { return guarded("tomo", [&] { tomo_experiment(config); }); }
int run_rho_sweep(const ExperimentConfig& config) {
    return guarded("rho-sweep", [&] { rho_sweep_experiment(config); });
}
int run_noise_demo(const ExperimentConfig& config) {
    return guarded("noise-demo", [&] { noise_demo_experiment(config); });
}

}  // namespace betasparse::experiments
