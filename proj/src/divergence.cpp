#include "betasparse/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

namespace {

constexpr double kBoundaryEps = 1e-9;

BetaRegime classify(double b) {
    if (b == 0.0) return BetaRegime::ItakuraSaito;
    if (b < 1.0) return BetaRegime::FracLow;
    if (b == 1.0) return BetaRegime::KullbackLeibler;
    if (b < 2.0) return BetaRegime::FracHigh;
    return BetaRegime::Euclidean;
}

void require_nonneg(double u, double v) {
    if (!(u >= 0.0) || !(v >= 0.0)) {
        throw DomainError("d_beta: arguments must be non-negative (u=" + std::to_string(u) +
                          ", v=" + std::to_string(v) + ")");
    }
}

double itakura_saito(double u, double v) {
    if (u == 0.0 || v == 0.0) return kInf;
    const double r = u / v;
    return r - std::log(r) - 1.0;
}

double kullback_leibler(double u, double v) {
    if (v == 0.0) return u > 0.0 ? kInf : 0.0;
    if (u == 0.0) return v;
    return u * std::log(u / v) - u + v;
}

// u, v > 0. Written as v^b f(u/v) with f(r) = (r^b - 1 - b (r - 1)) / (b (b - 1)).
double generic_positive(double u, double v, double b) {
    const double t = (u - v) / v;
    const double rb_m1 = std::expm1(b * std::log1p(t));
    const double f = (rb_m1 - b * t) / (b * (b - 1.0));
    return std::max(0.0, std::pow(v, b) * f);
}

}  // namespace

std::string_view to_string(BetaRegime regime) {
    switch (regime) {
        case BetaRegime::ItakuraSaito: return "itakura_saito";
        case BetaRegime::FracLow: return "frac_low";
        case BetaRegime::KullbackLeibler: return "kullback_leibler";
        case BetaRegime::FracHigh: return "frac_high";
        case BetaRegime::Euclidean: return "euclidean";
    }
    return "unknown";
}

BetaParam::BetaParam(double value) : value_(value), regime_(BetaRegime::Euclidean) {
    if (!(value >= 0.0 && value <= 2.0)) {
        throw DomainError("beta must lie in [0, 2], got " + std::to_string(value));
    }
    regime_ = classify(value);
}

bool BetaParam::near_itakura_saito() const noexcept { return value_ < kBoundaryEps; }

bool BetaParam::near_kullback_leibler() const noexcept {
    return std::abs(value_ - 1.0) < kBoundaryEps;
}

ExtReal d_beta(double u, double v, const BetaParam& beta) {
    require_nonneg(u, v);
    if (beta.near_itakura_saito()) return itakura_saito(u, v);
    if (beta.near_kullback_leibler()) return kullback_leibler(u, v);

    const double b = beta.value();
    if (beta.regime() == BetaRegime::Euclidean) return 0.5 * (u - v) * (u - v);
    if (u == v) return 0.0;

    if (v == 0.0) {
        // u > 0 here.
        if (b < 1.0) return kInf;
        return std::pow(u, b) / (b * (b - 1.0));
    }
    if (u == 0.0) return std::pow(v, b) / b;
    return generic_positive(u, v, b);
}

double d_beta_dv(double u, double v, const BetaParam& beta) {
    require_nonneg(u, v);
    if (beta.regime() == BetaRegime::Euclidean) return v - u;
    if (v == 0.0) {
        throw DomainError("d_beta_dv: v -> d_beta(u|v) is not differentiable at v = 0 for beta < 2");
    }
    return std::pow(v, beta.value() - 2.0) * (v - u);
}

ExtReal D_beta(std::span<const double> y, std::span<const double> w, const BetaParam& beta) {
    if (y.size() != w.size()) {
        throw InvalidArgument("D_beta: length mismatch (" + std::to_string(y.size()) + " vs " +
                              std::to_string(w.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = d_beta(y[i], w[i], beta);
        if (d == kInf) return kInf;
        total += d;
    }
    return total;
}

}  // namespace betasparse
