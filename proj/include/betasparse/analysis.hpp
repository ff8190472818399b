#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "betasparse/dual.hpp"

namespace betasparse {

/// Nodes with mass > rel_tol * max mass; empty for the zero measure.
std::vector<std::size_t> support_detect(const DiscreteMeasure& mu, double rel_tol = 1e-6);

/// |sum w^beta - sum y w^(beta-1)| / max(1, sum w^beta), with 0/0 = 0 on
/// components where w_i = y_i = 0. Vanishes at optimal w.
double stationarity_residual(std::span<const double> w, const Observation& y, const BetaParam& beta);

/// sum_i w_i^(beta-2) (w_i - y_i) (w_i - v_i); <= 0 at an optimum for every
/// v in the cone (with supp v inside supp w when 0 < beta < 1).
double variational_residual(std::span<const double> w, std::span<const double> v,
                            const Observation& y, const BetaParam& beta);

/// Mass of the single-Dirac optimiser at a node:
/// sum_i y_i a_i(x)^(beta-1) / sum_i a_i(x)^beta, rows vanishing at x skipped.
double dirac_amplitude(std::size_t node, const Observation& y, const ForwardOperator& A,
                       const BetaParam& beta);

enum class ToyRegion { InsideCone, ZeroMeasure, DiracAt0, DiracAt1 };

std::string_view to_string(ToyRegion region);

struct ToyOracleResult {
    ToyRegion region = ToyRegion::InsideCone;
    double xi = 0.0;
    double optimal_loss = 0.0;
};

/// Exact beta = 2 optimum for a_0 = 1, a_1(x) = x on [0, 1]: the Euclidean
/// projection of y onto C = {0 <= w_1 <= w_0}.
ToyOracleResult toy_oracle(double y0, double y1);

/// lambda has a component > tol and one < -tol, tol = 1e-10 |lambda|_inf.
bool sign_split_check(const DualVector& lambda);
bool sign_split_check(const DiscreteMeasure& mu, const Observation& y, const ForwardOperator& A,
                      const BetaParam& beta);

struct SparsityDiagnostics {
    std::vector<std::size_t> support_nodes;
    double phi_star_min = 0.0;
    double phi_star_range = 0.0;
    double stationarity_residual = 0.0;
    // Support nodes whose phi lies above min + argmin_tol * range.
    std::size_t support_outside_argmin = 0;
    bool support_in_near_argmin = false;
    bool sign_split = false;
    CertificateReport certificate;
    bool certified_sparse = false;  // certificate.certified
};

SparsityDiagnostics sparsity_diagnostics(const DiscreteMeasure& mu, const Observation& y,
                                         const ForwardOperator& A, const BetaParam& beta,
                                         double support_rel_tol = 1e-6, double argmin_tol = 1e-6);

}  // namespace betasparse
