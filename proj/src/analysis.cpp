#include "betasparse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

std::vector<std::size_t> support_detect(const DiscreteMeasure& mu, double rel_tol) {
    if (!(rel_tol >= 0.0 && rel_tol < 1.0)) throw InvalidArgument("support_detect: rel_tol must be in [0,1)");
    std::vector<std::size_t> nodes;
    const double peak = mu.max_mass();
    if (peak <= 0.0) return nodes;
    const double threshold = rel_tol * peak;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        if (mu[j] > threshold) nodes.push_back(j);
    }
    return nodes;
}

namespace {

void check_zero_components(std::span<const double> w, const Observation& y, const char* who) {
    if (w.size() != y.size()) throw InvalidArgument(std::string(who) + ": length mismatch");
    if (!y.is_nonnegative()) throw InvalidArgument(std::string(who) + ": data must be non-negative");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0)) throw InvalidArgument(std::string(who) + ": w must be non-negative");
        if (w[i] == 0.0 && y[i] > 0.0) {
            throw DegenerateError(std::string(who) + ": w_" + std::to_string(i) + " = 0 while y_" +
                                  std::to_string(i) + " > 0");
        }
    }
}

}  // namespace

double stationarity_residual(std::span<const double> w, const Observation& y, const BetaParam& beta) {
    check_zero_components(w, y, "stationarity_residual");
    const double b = beta.value();
    double fitted = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const double wp = std::pow(w[i], b - 1.0);
        fitted += wp * w[i];
        weighted += y[i] * wp;
    }
    return std::abs(fitted - weighted) / std::max(1.0, fitted);
}

double variational_residual(std::span<const double> w, std::span<const double> v,
                            const Observation& y, const BetaParam& beta) {
    check_zero_components(w, y, "variational_residual");
    if (v.size() != w.size()) throw InvalidArgument("variational_residual: length mismatch");
    const double b = beta.value();
    const bool needs_support = b > 0.0 && b < 1.0;
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(v[i] >= 0.0)) throw InvalidArgument("variational_residual: v must be non-negative");
        if (w[i] == 0.0) {
            if (needs_support && v[i] > 0.0) {
                throw InvalidArgument("variational_residual: supp(v) must lie inside supp(w) for 0 < beta < 1");
            }
            continue;
        }
        total += std::pow(w[i], b - 2.0) * (w[i] - y[i]) * (w[i] - v[i]);
    }
    return total;
}

double dirac_amplitude(std::size_t node, const Observation& y, const ForwardOperator& A,
                       const BetaParam& beta) {
    if (node >= A.nodes()) throw InvalidArgument("dirac_amplitude: node out of range");
    if (y.size() != A.rows()) throw InvalidArgument("dirac_amplitude: data length mismatch");
    const double b = beta.value();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double a = A.entry(i, node);
        if (a == 0.0) continue;
        const double ap = std::pow(a, b - 1.0);
        num += y[i] * ap;
        den += ap * a;
    }
    if (!(den > 0.0)) throw DegenerateError("dirac_amplitude: every row vanishes at the node");
    return num / den;
}

std::string_view to_string(ToyRegion region) {
    switch (region) {
        case ToyRegion::InsideCone: return "inside_cone";
        case ToyRegion::ZeroMeasure: return "zero_measure";
        case ToyRegion::DiracAt0: return "dirac_at_0";
        case ToyRegion::DiracAt1: return "dirac_at_1";
    }
    return "unknown";
}

ToyOracleResult toy_oracle(double y0, double y1) {
    ToyOracleResult out;
    if (0.0 <= y1 && y1 <= y0) return out;
    if (y0 <= 0.0 && y0 + y1 <= 0.0) {
        out.region = ToyRegion::ZeroMeasure;
        out.optimal_loss = 0.5 * (y0 * y0 + y1 * y1);
        return out;
    }
    // Outside C and its polar: the projection lies on one of the two
    // generating rays A delta_0 = (1, 0) and A delta_1 = (1, 1).
    const double xi0 = std::max(0.0, y0);
    const double dist0 = (y0 - xi0) * (y0 - xi0) + y1 * y1;
    const double xi1 = std::max(0.0, 0.5 * (y0 + y1));
    const double dist1 = (y0 - xi1) * (y0 - xi1) + (y1 - xi1) * (y1 - xi1);
    if (dist0 <= dist1) {
        out.region = ToyRegion::DiracAt0;
        out.xi = xi0;
        out.optimal_loss = 0.5 * dist0;
    } else {
        out.region = ToyRegion::DiracAt1;
        out.xi = xi1;
        out.optimal_loss = 0.5 * dist1;
    }
    return out;
}

bool sign_split_check(const DualVector& lambda) {
    double norm = 0.0;
    for (double v : lambda.values) norm = std::max(norm, std::abs(v));
    if (norm == 0.0) return false;
    const double tol = 1e-10 * norm;
    bool positive = false;
    bool negative = false;
    for (double v : lambda.values) {
        positive = positive || v > tol;
        negative = negative || v < -tol;
    }
    return positive && negative;
}

bool sign_split_check(const DiscreteMeasure& mu, const Observation& y, const ForwardOperator& A,
                      const BetaParam& beta) {
    return sign_split_check(lambda_of(mu, y, A, beta));
}

SparsityDiagnostics sparsity_diagnostics(const DiscreteMeasure& mu, const Observation& y,
                                         const ForwardOperator& A, const BetaParam& beta,
                                         double support_rel_tol, double argmin_tol) {
    SparsityDiagnostics out;
    out.support_nodes = support_detect(mu, support_rel_tol);
    const auto w = A.apply(mu);
    const DualVector lambda = lambda_of(w, y, beta);
    const auto phi = A.adjoint(lambda.values);
    const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    out.phi_star_min = *lo;
    out.phi_star_range = *hi - *lo;
    const double cutoff = out.phi_star_min + argmin_tol * out.phi_star_range;
    for (std::size_t j : out.support_nodes) {
        if (phi[j] > cutoff) ++out.support_outside_argmin;
    }
    out.support_in_near_argmin = out.support_outside_argmin == 0;
    out.stationarity_residual = y.is_nonnegative() ? stationarity_residual(w, y, beta) : 0.0;
    out.sign_split = sign_split_check(lambda);
    out.certificate = dual_certificate(mu, y, A, beta);
    out.certified_sparse = out.certificate.certified;
    return out;
}

}  // namespace betasparse
