#pragma once

#include <iosfwd>
#include <string>

#include "betasparse/analysis.hpp"
#include "betasparse/dual.hpp"
#include "betasparse/operators.hpp"
#include "betasparse/solvers.hpp"

// CSV layouts (UTF-8, comma separated, one header row, doubles printed with
// 17 significant digits so they round-trip):
//
//   grid         node,x,y,quad_weight
//   operator     row,n0,n1,...,n{N-1}      one line per operator row, node-major
//   measure      node,mass
//   observation  index,y
//   certificate  field,index,value         lambda_tilde rows, then shift_c,
//                                          dual_value and certified (0/1)
//   solve report iteration,loss,max_mass[,averaged_loss]
//   diagnostics  field,value
namespace betasparse::csv {

std::string format_double(double v);

void write_grid(std::ostream& os, const Grid& grid);
void write_operator(std::ostream& os, const ForwardOperator& A);
void write_measure(std::ostream& os, const DiscreteMeasure& mu);
void write_observation(std::ostream& os, const Observation& y);
void write_observation(std::ostream& os, std::span<const double> y);
void write_certificate(std::ostream& os, const CertificateReport& report);
void write_solve_report(std::ostream& os, const SolveReport& report);
void write_diagnostics(std::ostream& os, const SparsityDiagnostics& diag);

ForwardOperator read_operator(std::istream& is, GridPtr grid);
DiscreteMeasure read_measure(std::istream& is, GridPtr grid);
Observation read_observation(std::istream& is);

}  // namespace betasparse::csv
