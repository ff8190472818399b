#include "betasparse/noise.hpp"

#include <cmath>
#include <random>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

std::string_view to_string(NoiseModel model) {
    switch (model) {
        case NoiseModel::Gaussian: return "gaussian";
        case NoiseModel::ScaledPoisson: return "scaled_poisson";
        case NoiseModel::CompoundPoissonGamma: return "compound_poisson_gamma";
        case NoiseModel::MultiplicativeGamma: return "multiplicative_gamma";
    }
    return "unknown";
}

NoiseModel parse_noise_model(std::string_view name) {
    for (auto m : {NoiseModel::Gaussian, NoiseModel::ScaledPoisson, NoiseModel::CompoundPoissonGamma,
                   NoiseModel::MultiplicativeGamma}) {
        if (name == to_string(m)) return m;
    }
    throw InvalidArgument("unknown noise model '" + std::string(name) + "'");
}

double compound_poisson_rate(double w, double phi, const BetaParam& beta) {
    const double b = beta.value();
    return std::pow(w, b) / (phi * b);
}

namespace {

void validate(std::span<const double> w, const NoiseSpec& spec) {
    if (!(spec.phi > 0.0) || !std::isfinite(spec.phi)) {
        throw InvalidArgument("noise: dispersion phi must be positive");
    }
    for (double wi : w) {
        if (!(wi >= 0.0) || !std::isfinite(wi)) throw InvalidArgument("noise: mean must be non-negative");
    }
    if (spec.model == NoiseModel::CompoundPoissonGamma) {
        if (!spec.beta || !(spec.beta->value() > 0.0 && spec.beta->value() < 1.0)) {
            throw InvalidArgument("noise: compound Poisson-Gamma requires 0 < beta < 1");
        }
    }
    if (spec.model == NoiseModel::MultiplicativeGamma) {
        for (double wi : w) {
            if (!(wi > 0.0)) throw InvalidArgument("noise: multiplicative Gamma requires w > 0");
        }
    }
}

}  // namespace

NoiseSample sample(std::span<const double> w, const NoiseSpec& spec) {
    validate(w, spec);
    std::mt19937_64 rng(spec.seed);
    NoiseSample out;
    out.y.resize(w.size());
    const double phi = spec.phi;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double wi = w[i];
        double yi = 0.0;
        switch (spec.model) {
            case NoiseModel::Gaussian: {
                std::normal_distribution<double> normal(wi, std::sqrt(phi));
                yi = normal(rng);
                if (yi < 0.0) {
                    yi = 0.0;
                    ++out.clamped;
                }
                break;
            }
            case NoiseModel::ScaledPoisson: {
                if (wi > 0.0) {
                    std::poisson_distribution<long long> poisson(wi / phi);
                    yi = phi * static_cast<double>(poisson(rng));
                }
                break;
            }
            case NoiseModel::CompoundPoissonGamma: {
                if (wi == 0.0) break;
                const double b = spec.beta->value();
                std::poisson_distribution<long long> count(compound_poisson_rate(wi, phi, *spec.beta));
                const long long n = count(rng);
                if (n == 0) break;
                // A sum of n iid Gamma(a, rate) draws is Gamma(n a, rate).
                const double shape = static_cast<double>(n) * b / (1.0 - b);
                const double rate = std::pow(wi, b - 1.0) / (phi * (1.0 - b));
                std::gamma_distribution<double> gamma(shape, 1.0 / rate);
                yi = gamma(rng);
                break;
            }
            case NoiseModel::MultiplicativeGamma: {
                std::gamma_distribution<double> gamma(1.0 / phi, phi);
                yi = wi * gamma(rng);
                break;
            }
        }
        out.y[i] = yi;
    }
    return out;
}

std::vector<NoiseSample> dispersion_sweep(std::span<const double> w, const NoiseSpec& spec_base,
                                          std::span<const double> phis) {
    std::vector<NoiseSample> out;
    out.reserve(phis.size());
    for (std::size_t k = 0; k < phis.size(); ++k) {
        NoiseSpec spec = spec_base;
        spec.phi = phis[k];
        std::seed_seq seq{static_cast<std::uint32_t>(spec_base.seed),
                          static_cast<std::uint32_t>(spec_base.seed >> 32),
                          static_cast<std::uint32_t>(k)};
        std::uint32_t words[2];
        seq.generate(words, words + 2);
        spec.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
        out.push_back(sample(w, spec));
    }
    return out;
}

}  // namespace betasparse
