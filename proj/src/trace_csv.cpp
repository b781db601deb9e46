#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "splitfix/run.hpp"

namespace splitfix {

namespace {

// 17 significant digits: the shortest count that makes text -> double -> text
// the identity for every finite double.
std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

void write_trace_csv(const IterationTrace<double>& trace, const std::optional<Vector<double>>& xbar,
                     std::size_t thin, std::ostream& os) {
  if (trace.x.empty()) {
    throw std::invalid_argument("write_trace_csv: empty trace");
  }
  if (thin == 0) {
    throw std::invalid_argument("write_trace_csv: thin must be at least 1");
  }
  const Eigen::Index dim = trace.x.front().size();
  if (xbar && xbar->size() != dim) {
    throw std::invalid_argument("write_trace_csv: reference point dimension mismatch");
  }

  os << "# splitfix-trace-v1\n";
  os << "n";
  for (Eigen::Index j = 0; j < dim; ++j) os << ",x" << (j + 1);
  for (Eigen::Index j = 0; j < dim; ++j) os << ",shadow" << (j + 1);
  for (Eigen::Index j = 0; j < dim; ++j) os << ",reflectedShadow" << (j + 1);
  os << ",stepDiffNorm";
  if (xbar) os << ",distShadowToXbar";
  os << "\n";

  const std::size_t last = trace.x.size() - 1;
  for (std::size_t n = 0; n <= last; ++n) {
    if (n % thin != 0 && n != last) continue;
    os << n;
    for (Eigen::Index j = 0; j < dim; ++j) os << ',' << format_double(trace.x[n][j]);
    for (Eigen::Index j = 0; j < dim; ++j) os << ',' << format_double(trace.shadow[n][j]);
    for (Eigen::Index j = 0; j < dim; ++j) os << ',' << format_double(trace.reflectedShadow[n][j]);
    os << ',';
    if (n < trace.stepDiff.size()) os << format_double(trace.stepDiff[n].norm());
    if (xbar) os << ',' << format_double((trace.shadow[n] - *xbar).norm());
    os << "\n";
  }
}

}  // namespace splitfix
