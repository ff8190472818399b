#pragma once

#include <optional>
#include <span>
#include <vector>

#include "betasparse/divergence.hpp"
#include "betasparse/observation.hpp"
#include "betasparse/operators.hpp"

namespace betasparse {

/// A vector of m finite reals, paired with data through <lambda, w>.
struct DualVector {
    std::vector<double> values;

    DualVector() = default;
    explicit DualVector(std::vector<double> v);
    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

struct CertificateReport {
    DualVector lambda_tilde;
    double shift_c = 0.0;
    ExtReal dual_value = -kInf;
    bool certified = false;
};

/// Minimiser over w >= 0 of d_beta(y|w) - lambda w. Throws DomainError where
/// h(y, lambda) = -inf (no minimiser exists) and for beta = 0 with y = 0.
double w_opt(double y, double lambda, const BetaParam& beta);

/// h(y, lambda) = min_{w >= 0} d_beta(y|w) - lambda w, possibly -inf.
/// beta = 0 requires y > 0.
ExtReal h(double y, double lambda, const BetaParam& beta);

/// g(lambda) = sum_i h(y_i, lambda_i), -inf absorbing.
ExtReal g(const Observation& y, const DualVector& lambda, const BetaParam& beta);

/// 1e-12 (1 + ||A* lambda||_inf).
double default_cone_tolerance(const ForwardOperator& A, const DualVector& lambda);

/// min over nodes of A* lambda >= -tol. Without tol, default_cone_tolerance.
bool in_dual_cone(const ForwardOperator& A, const DualVector& lambda,
                  std::optional<double> tol = std::nullopt);

struct ShiftedDual {
    DualVector lambda_tilde;
    double shift_c = 0.0;
};

/// Smallest c >= 0 such that A*(lambda + c 1) >= 0 at every node:
/// c = max(0, max_x -A*lambda(x) / S(x)) with S = A* 1.
ShiftedDual certificate_shift(const ForwardOperator& A, const DualVector& lambda);

/// lambda(mu) = (A mu)^(beta-2) (A mu - y), with 0/0 = 0. Throws
/// DegenerateError when (A mu)_i = 0 < y_i (allowed for beta = 2, where the
/// power is identically 1).
DualVector lambda_of(std::span<const double> w, const Observation& y, const BetaParam& beta);
DualVector lambda_of(const DiscreteMeasure& mu, const Observation& y, const ForwardOperator& A,
                     const BetaParam& beta);

/// lambda(mu), shifted into the dual cone, and its dual value. certified is
/// true iff the shifted vector passes the cone test and g > 0.
CertificateReport dual_certificate(const DiscreteMeasure& mu, const Observation& y,
                                   const ForwardOperator& A, const BetaParam& beta);

}  // namespace betasparse
