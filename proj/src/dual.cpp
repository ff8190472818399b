#include "betasparse/dual.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

DualVector::DualVector(std::vector<double> v) : values(std::move(v)) {
    for (double x : values) {
        if (!std::isfinite(x)) throw InvalidArgument("DualVector: entries must be finite");
    }
}

namespace {

enum class Case { ItakuraSaito, FracLow, KullbackLeibler, FracHigh, Euclidean };

Case dispatch(const BetaParam& beta) {
    if (beta.near_itakura_saito()) return Case::ItakuraSaito;
    if (beta.near_kullback_leibler()) return Case::KullbackLeibler;
    switch (beta.regime()) {
        case BetaRegime::FracLow: return Case::FracLow;
        case BetaRegime::FracHigh: return Case::FracHigh;
        case BetaRegime::Euclidean: return Case::Euclidean;
        default: break;
    }
    return beta.regime() == BetaRegime::ItakuraSaito ? Case::ItakuraSaito : Case::KullbackLeibler;
}

[[noreturn]] void no_minimiser(double y, double lambda, const BetaParam& beta) {
    throw DomainError("w_opt: h(y, lambda) = -inf, no minimiser (y=" + std::to_string(y) +
                      ", lambda=" + std::to_string(lambda) + ", beta=" + std::to_string(beta.value()) +
                      ")");
}

// Root of w^(b-2) (w - y) = lambda on a bracket where the left side increases.
double bisect_stationary(double y, double lambda, double b, double lo, double hi) {
    auto phi = [&](double w) { return std::pow(w, b - 2.0) * (w - y) - lambda; };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f = phi(mid);
        if (f == 0.0) return mid;
        (f < 0.0 ? lo : hi) = mid;
    }
    // Return whichever endpoint has the smaller residual.
    return std::abs(phi(lo)) <= std::abs(phi(hi)) ? lo : hi;
}

// Negative y only makes sense for the Euclidean case, where d_2 extends to R.
void require_y(double y, const BetaParam& beta) {
    if (!std::isfinite(y)) throw DomainError("h: y must be finite");
    if (y < 0.0 && beta.regime() != BetaRegime::Euclidean) {
        throw DomainError("h: y must be non-negative, got " + std::to_string(y));
    }
}

}  // namespace

double w_opt(double y, double lambda, const BetaParam& beta) {
    require_y(y, beta);
    if (!std::isfinite(lambda)) throw DomainError("w_opt: lambda must be finite");
    const double b = beta.value();
    switch (dispatch(beta)) {
        case Case::ItakuraSaito:
            if (y == 0.0) throw DomainError("w_opt: beta = 0 requires y > 0");
            if (lambda > 0.0) no_minimiser(y, lambda, beta);
            // (sqrt(1 - 4 lambda y) - 1) / (-2 lambda), rationalised; equals y at lambda = 0.
            return 2.0 * y / (1.0 + std::sqrt(1.0 - 4.0 * lambda * y));
        case Case::FracLow:
            if (lambda > 0.0) no_minimiser(y, lambda, beta);
            if (y == 0.0) return 0.0;
            if (lambda == 0.0) return y;
            // The stationarity map increases on (0, y) from -inf to 0.
            return bisect_stationary(y, lambda, b, 0.0, y);
        case Case::KullbackLeibler:
            if (lambda > 1.0 || (lambda == 1.0 && y > 0.0)) no_minimiser(y, lambda, beta);
            if (y == 0.0) return 0.0;
            return y / (1.0 - lambda);
        case Case::FracHigh: {
            if (y == 0.0) return lambda <= 0.0 ? 0.0 : std::pow(lambda, 1.0 / (b - 1.0));
            if (lambda == 0.0) return y;
            if (lambda < 0.0) return bisect_stationary(y, lambda, b, 0.0, y);
            double hi = 2.0 * y;
            while (std::pow(hi, b - 2.0) * (hi - y) < lambda) hi *= 2.0;
            return bisect_stationary(y, lambda, b, y, hi);
        }
        case Case::Euclidean:
            return std::max(0.0, lambda + y);
    }
    return 0.0;
}

ExtReal h(double y, double lambda, const BetaParam& beta) {
    require_y(y, beta);
    if (!std::isfinite(lambda)) throw DomainError("h: lambda must be finite");
    const double b = beta.value();
    switch (dispatch(beta)) {
        case Case::ItakuraSaito: {
            if (y == 0.0) throw DomainError("h: beta = 0 requires y > 0");
            if (lambda > 0.0) return -kInf;
            const double s = std::sqrt(1.0 - 4.0 * lambda * y);
            return s - std::log(0.5 * (s + 1.0)) - 1.0;
        }
        case Case::FracLow: {
            if (lambda > 0.0) return -kInf;
            if (y == 0.0 || lambda == 0.0) return 0.0;
            const double w = w_opt(y, lambda, beta);
            return d_beta(y, w, beta) - lambda * w;
        }
        case Case::KullbackLeibler:
            if (lambda > 1.0) return -kInf;
            if (lambda == 1.0) return y > 0.0 ? -kInf : 0.0;
            return y * std::log1p(-lambda);
        case Case::FracHigh: {
            if (y == 0.0) {
                if (lambda <= 0.0) return 0.0;
                return std::pow(lambda, b / (b - 1.0)) * (1.0 / b - 1.0);
            }
            if (lambda == 0.0) return 0.0;
            const double w = w_opt(y, lambda, beta);
            return d_beta(y, w, beta) - lambda * w;
        }
        case Case::Euclidean:
            // Unconstrained minimiser lambda + y; when negative the constraint
            // w >= 0 is active and the minimum is d_2(y|0).
            if (lambda + y >= 0.0) return -0.5 * (lambda + y) * (lambda + y) + 0.5 * y * y;
            return 0.5 * y * y;
    }
    return -kInf;
}

ExtReal g(const Observation& y, const DualVector& lambda, const BetaParam& beta) {
    if (y.size() != lambda.size()) {
        throw InvalidArgument("g: length mismatch (" + std::to_string(y.size()) + " vs " +
                              std::to_string(lambda.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double hi = h(y[i], lambda[i], beta);
        if (hi == -kInf) return -kInf;
        total += hi;
    }
    return total;
}

double default_cone_tolerance(const ForwardOperator& A, const DualVector& lambda) {
    const auto phi = A.adjoint(lambda.values);
    double norm = 0.0;
    for (double v : phi) norm = std::max(norm, std::abs(v));
    return 1e-12 * (1.0 + norm);
}

bool in_dual_cone(const ForwardOperator& A, const DualVector& lambda, std::optional<double> tol) {
    const auto phi = A.adjoint(lambda.values);
    double norm = 0.0;
    double lowest = kInf;
    for (double v : phi) {
        norm = std::max(norm, std::abs(v));
        lowest = std::min(lowest, v);
    }
    const double t = tol.value_or(1e-12 * (1.0 + norm));
    return lowest >= -t;
}

ShiftedDual certificate_shift(const ForwardOperator& A, const DualVector& lambda) {
    const auto phi = A.adjoint(lambda.values);
    const auto& S = A.column_sums();
    double c = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        if (phi[j] >= 0.0) continue;
        if (S[j] <= 0.0) {
            throw InfeasibleShiftError("certificate_shift: node " + std::to_string(j) +
                                       " has A* lambda < 0 but no row touches it");
        }
        c = std::max(c, -phi[j] / S[j]);
    }
    ShiftedDual out;
    out.shift_c = c;
    out.lambda_tilde = lambda;
    if (c > 0.0) {
        for (double& v : out.lambda_tilde.values) v += c;
    }
    return out;
}

DualVector lambda_of(std::span<const double> w, const Observation& y, const BetaParam& beta) {
    if (w.size() != y.size()) throw InvalidArgument("lambda_of: length mismatch");
    const bool euclidean = beta.regime() == BetaRegime::Euclidean;
    if (!euclidean && !y.is_nonnegative()) {
        throw InvalidArgument("lambda_of: signed data is only meaningful for beta = 2");
    }
    const double p = beta.value() - 2.0;
    std::vector<double> lambda(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (euclidean) {
            lambda[i] = w[i] - y[i];
        } else if (w[i] > 0.0) {
            lambda[i] = std::pow(w[i], p) * (w[i] - y[i]);
        } else if (y[i] > 0.0) {
            throw DegenerateError("lambda(mu): (A mu)_" + std::to_string(i) + " = 0 while y_" +
                                  std::to_string(i) + " > 0");
        }
    }
    return DualVector(std::move(lambda));
}

DualVector lambda_of(const DiscreteMeasure& mu, const Observation& y, const ForwardOperator& A,
                     const BetaParam& beta) {
    return lambda_of(A.apply(mu), y, beta);
}

CertificateReport dual_certificate(const DiscreteMeasure& mu, const Observation& y,
                                   const ForwardOperator& A, const BetaParam& beta) {
    const DualVector lambda = lambda_of(mu, y, A, beta);
    ShiftedDual shifted = certificate_shift(A, lambda);
    CertificateReport report;
    report.dual_value = g(y, shifted.lambda_tilde, beta);
    report.shift_c = shifted.shift_c;
    report.certified = report.dual_value > 0.0 && in_dual_cone(A, shifted.lambda_tilde);
    report.lambda_tilde = std::move(shifted.lambda_tilde);
    return report;
}

}  // namespace betasparse
