#pragma once

#include <limits>
#include <span>
#include <string_view>

namespace betasparse {

// Divergence values live in [0, +inf]; dual values may also be -inf.
// Both are carried as IEEE doubles with infinities as ordinary values.
using ExtReal = double;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class BetaRegime { ItakuraSaito, FracLow, KullbackLeibler, FracHigh, Euclidean };

std::string_view to_string(BetaRegime regime);

/// A validated beta in [0, 2]. The boundary values 0, 1 and 2 belong to the
/// named regimes, never to the open intervals between them.
class BetaParam {
public:
    explicit BetaParam(double value);

    double value() const noexcept { return value_; }
    BetaRegime regime() const noexcept { return regime_; }

    // Within 1e-9 of 0 or 1 the closed-form IS/KL expressions are used
    // instead of the generic fraction.
    bool near_itakura_saito() const noexcept;
    bool near_kullback_leibler() const noexcept;

    friend bool operator==(const BetaParam&, const BetaParam&) = default;

private:
    double value_;
    BetaRegime regime_;
};

/// d_beta(u|v) for u, v >= 0, with 0/0 = 0 and 0 log 0 = 0.
/// Returns +inf for beta <= 1 with v = 0 < u and for beta = 0 with u = 0 or v = 0.
ExtReal d_beta(double u, double v, const BetaParam& beta);

/// Partial derivative in v: v^(beta-2) (v - u). Defined at v = 0 only for beta = 2.
double d_beta_dv(double u, double v, const BetaParam& beta);

/// Componentwise sum of d_beta; +inf absorbs.
ExtReal D_beta(std::span<const double> y, std::span<const double> w, const BetaParam& beta);

}  // namespace betasparse
