#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "betasparse/divergence.hpp"

namespace betasparse {

enum class NoiseModel { Gaussian, ScaledPoisson, CompoundPoissonGamma, MultiplicativeGamma };

std::string_view to_string(NoiseModel model);
NoiseModel parse_noise_model(std::string_view name);

struct NoiseSpec {
    NoiseModel model = NoiseModel::ScaledPoisson;
    double phi = 1.0;                 // dispersion
    std::optional<BetaParam> beta;    // compound Poisson-Gamma only, 0 < beta < 1
    std::uint64_t seed = 0;
};

struct NoiseSample {
    std::vector<double> y;
    std::size_t clamped = 0;  // Gaussian draws below zero, set to 0
};

/// Independent draws with mean w:
///   Gaussian             y ~ N(w, phi), phi the variance, negatives clamped to 0
///   ScaledPoisson        y = phi P(w / phi)
///   CompoundPoissonGamma y = sum_{j<n} g_j, n ~ P(w^b / (phi b)),
///                        g_j ~ Gamma(b / (1-b), rate w^(b-1) / (phi (1-b)))
///   MultiplicativeGamma  y = w Gamma(1/phi, rate 1/phi)
/// Deterministic given the seed.
NoiseSample sample(std::span<const double> w, const NoiseSpec& spec);

/// Poisson rate of the compound model for one component.
double compound_poisson_rate(double w, double phi, const BetaParam& beta);

/// One draw per phi, the k-th seeded from (spec_base.seed, k).
std::vector<NoiseSample> dispersion_sweep(std::span<const double> w, const NoiseSpec& spec_base,
                                          std::span<const double> phis);

}  // namespace betasparse
