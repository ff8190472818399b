#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls into the dual module.

#include <algorithm>
#include <cmath>
#include <limits>

#include "betasparse/divergence.hpp"

namespace oracle {

// Where min_{w >= 0} d_beta(y|w) - lambda w is unbounded below. For beta in
// [0,1) the objective grows like w^beta at infinity, so any lambda > 0 wins;
// for beta = 1 it grows like w, so lambda > 1 wins, and lambda = 1 leaves
// -y log w, unbounded near 0 when y > 0.
inline bool h_is_minus_infinity(double y, double lambda, double beta) {
    if (beta < 1.0) return lambda > 0.0;
    if (beta == 1.0) return lambda > 1.0 || (lambda == 1.0 && y > 0.0);
    return false;
}

struct BruteMin {
    double value = std::numeric_limits<double>::infinity();
    double argmin = 0.0;
};

// Grid search of psi(w) = d_beta(y|w) - lambda w over w in {0, step, ...}
// up to w_max, followed by a finer search around the coarse minimiser. The
// upper bound is doubled while the minimiser sits on it.
inline BruteMin brute_force_h(double y, double lambda, double beta, double coarse = 1e-4,
                              double fine = 1e-6) {
    const betasparse::BetaParam b(beta);
    auto psi = [&](double w) { return betasparse::d_beta(y, w, b) - lambda * w; };
    double w_max = 10.0 * (y + std::abs(lambda) + 1.0);
    BruteMin best;
    for (int doubling = 0; doubling < 12; ++doubling) {
        best = BruteMin{};
        const auto n = static_cast<long>(std::ceil(w_max / coarse));
        for (long k = 0; k <= n; ++k) {
            const double w = coarse * static_cast<double>(k);
            const double v = psi(w);
            if (v < best.value) best = {v, w};
        }
        if (best.argmin < w_max - 2.0 * coarse) break;
        w_max *= 2.0;
    }
    const double lo = std::max(0.0, best.argmin - 2.0 * coarse);
    const double hi = best.argmin + 2.0 * coarse;
    const auto n = static_cast<long>(std::ceil((hi - lo) / fine));
    for (long k = 0; k <= n; ++k) {
        const double w = lo + fine * static_cast<double>(k);
        const double v = psi(w);
        if (v < best.value) best = {v, w};
    }
    return best;
}

}  // namespace oracle
