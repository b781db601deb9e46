#pragma once

// Post-processing and certification on top of the splitting iteration:
// estimating the minimal displacement vector from a trace, checking that the
// estimate scales with the relaxation parameter in the prescribed way,
// computing normal solutions through the shifted fixed-point map, verifying
// the translated-orbit identity, and probing operators for (cyclic)
// monotonicity on sampled graph points.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitfix/splitting.hpp"

namespace splitfix {

/// The shifted fixed-point iteration stops once a single governing step falls
/// below this; at that scale the residual is dominated by rounding anyway.
inline constexpr double kShiftedStepTol = 1e-11;

/// Default seed for the sampled searches below. Fixed so that repeated runs
/// explore the identical sequence of candidates.
inline constexpr std::uint64_t kSearchSeed = 0x5eed5eedULL;

template <class Scalar>
struct DisplacementEstimate {
  Vector<Scalar> v;
  Scalar lambdaUsed;
  Scalar tailResidual;
};

/// Estimate the displacement vector as the average of d_n / (2 lambda) over
/// the last 10 recorded steps. Requires an averaged iteration, so lambda must
/// lie strictly inside (0, 1); the fully reflected case has no such limit.
template <class Scalar>
DisplacementEstimate<Scalar> estimate_displacement(const IterationTrace<Scalar>& trace, Scalar lambda) {
  if (!(lambda > Scalar(0)) || !(lambda < Scalar(1))) {
    throw std::invalid_argument("estimate_displacement: lambda must lie in (0, 1)");
  }
  if (trace.steps() < 20) {
    throw std::invalid_argument("estimate_displacement: trace must contain at least 20 steps");
  }
  const std::size_t tail = 10;
  const std::size_t first = trace.steps() - tail;
  Vector<Scalar> v = Vector<Scalar>::Zero(trace.stepDiff.back().size());
  for (std::size_t n = first; n < trace.steps(); ++n) {
    v += trace.stepDiff[n] / (2 * lambda);
  }
  v /= Scalar(tail);
  Scalar tailResidual = 0;
  for (std::size_t n = first; n < trace.steps(); ++n) {
    tailResidual = std::max(tailResidual, Scalar((trace.stepDiff[n] / (2 * lambda) - v).norm()));
  }
  return DisplacementEstimate<Scalar>{std::move(v), lambda, tailResidual};
}

template <class Scalar>
struct ScalingLawReport {
  std::vector<Scalar> lambdas;
  std::vector<Vector<Scalar>> normalizedEstimates;
  Scalar maxPairwiseDeviation;
};

/// Run the iteration at each relaxation parameter and compare the normalized
/// displacement estimates; they all target the same vector, so the max
/// pairwise deviation measures how well the 2*lambda scaling holds.
template <class Scalar>
ScalingLawReport<Scalar> scaling_law_check(const ResolventOperator<Scalar>& a,
                                           const ResolventOperator<Scalar>& b,
                                           const Vector<Scalar>& x0,
                                           const std::vector<Scalar>& lambdas,
                                           const StopRule<Scalar>& stop = {}) {
  ScalingLawReport<Scalar> report;
  report.lambdas = lambdas;
  for (Scalar lam : lambdas) {
    SplittingOperator<Scalar> split(a, b, lam);
    auto trace = iterate(split, x0, stop);
    report.normalizedEstimates.push_back(estimate_displacement(trace, lam).v);
  }
  Scalar dev = 0;
  for (std::size_t i = 0; i < report.normalizedEstimates.size(); ++i) {
    for (std::size_t j = i + 1; j < report.normalizedEstimates.size(); ++j) {
      dev = std::max(dev,
                     Scalar((report.normalizedEstimates[i] - report.normalizedEstimates[j]).norm()));
    }
  }
  report.maxPairwiseDeviation = dev;
  return report;
}

template <class Scalar>
struct NormalSolution {
  Vector<Scalar> xbar;
  Vector<Scalar> y;
  Scalar residual;
};

/// Find y with y = v + T(y) by iterating the shifted averaged map
/// x |-> 2 lambda v + T_lambda(x), then read off xbar = J_A(y). The fixed-point
/// set does not depend on lambda, but convergence needs lambda in (0, 1).
/// The residual reported (and the invariant xbar = J_A(y)) are stated against
/// the lambda = 1/2 operator.
template <class Scalar>
NormalSolution<Scalar> solve_shifted_fixed_point(const ResolventOperator<Scalar>& a,
                                                 const ResolventOperator<Scalar>& b, Scalar lambda,
                                                 const Vector<Scalar>& v, const Vector<Scalar>& x0,
                                                 const StopRule<Scalar>& stop = {}) {
  if (!(lambda > Scalar(0)) || !(lambda < Scalar(1))) {
    throw std::invalid_argument("solve_shifted_fixed_point: lambda must lie in (0, 1)");
  }
  require_finite(v, "solve_shifted_fixed_point displacement");
  SplittingOperator<Scalar> split(a, b, lambda);
  const Vector<Scalar> shift = 2 * lambda * v;

  Vector<Scalar> x = x0;
  bool converged = false;
  for (std::size_t k = 0; k < stop.maxIters; ++k) {
    Vector<Scalar> next = shift + evaluate_T(split, x);
    if (!next.allFinite()) {
      throw std::runtime_error("solve_shifted_fixed_point: non-finite iterate");
    }
    const Scalar step = (next - x).norm();
    x = std::move(next);
    if (step < Scalar(kShiftedStepTol)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error(
        "solve_shifted_fixed_point: no convergence within the iteration budget "
        "(no normal solution, or the displacement vector is off)");
  }

  SplittingOperator<Scalar> base(a, b, Scalar(0.5));
  NormalSolution<Scalar> sol;
  sol.y = x;
  sol.xbar = resolvent(a, x);
  sol.residual = (v + evaluate_T(base, x) - x).norm();
  return sol;
}

/// Max over n <= N of the distance between the actual orbit T_lambda^n y and
/// the straight line y - 2 lambda n v it must follow when y is a fixed point
/// of v + T. Requires y to be such a fixed point to within 1e-9.
template <class Scalar>
Scalar translation_identity_check(const SplittingOperator<Scalar>& split, const Vector<Scalar>& y,
                                  const Vector<Scalar>& v, std::size_t N) {
  const Scalar lam = split.lambda;
  const Scalar fixres = Scalar((2 * lam * v + evaluate_T(split, y) - y).norm() / (2 * lam));
  if (!(fixres <= Scalar(1e-9))) {
    throw std::invalid_argument("translation_identity_check: y is not a fixed point of v + T");
  }
  Scalar worst = 0;
  Vector<Scalar> z = y;
  for (std::size_t n = 0; n <= N; ++n) {
    const Vector<Scalar> predicted = y - 2 * lam * Scalar(n) * v;
    worst = std::max(worst, Scalar((z - predicted).norm()));
    z = evaluate_T(split, z);
  }
  return worst;
}

template <class Scalar>
struct CyclicViolation {
  std::vector<Vector<Scalar>> points;  // x_1 .. x_n in dom A
  std::vector<Vector<Scalar>> images;  // x_i* in A(x_i)
  Scalar cyclicSum;                    // sum <x_{i+1} - x_i, x_i*> over the cycle
};

namespace detail {

template <class Scalar>
Vector<Scalar> sample_in_box(const Box<Scalar>& box, std::mt19937_64& rng) {
  Vector<Scalar> z(box.lo.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    std::uniform_real_distribution<double> coord(static_cast<double>(box.lo[i]),
                                                 static_cast<double>(box.hi[i]));
    z[i] = Scalar(coord(rng));
  }
  return z;
}

template <class Scalar>
void require_bounded(const Box<Scalar>& box, const char* what) {
  if (!box.lo.allFinite() || !box.hi.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": sample box must be bounded");
  }
}

/// Cyclic sum for resolvent arguments z_i: graph points are (J z_i, z_i - J z_i).
template <class Scalar>
Scalar cyclic_sum(const ResolventOperator<Scalar>& op, const std::vector<Vector<Scalar>>& zs) {
  const std::size_t n = zs.size();
  std::vector<Vector<Scalar>> xs(n), stars(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = resolvent(op, zs[i]);
    stars[i] = zs[i] - xs[i];
  }
  Scalar sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += Scalar((xs[(i + 1) % n] - xs[i]).dot(stars[i]));
  }
  return sum;
}

}  // namespace detail

/// Search for a cycle of graph points whose cyclic sum is positive, which
/// certifies that the operator is not cyclically monotone. Graph points come
/// from the resolvent parametrization z |-> (J z, z - J z) with z sampled
/// uniformly in sampleBox; the best random candidate is then refined by
/// seeded hill-climbing. Returns the witness cycle if the sum exceeds 1e-6
/// within the trial budget, and nothing otherwise; not finding a violation is
/// a legitimate outcome, not an error.
template <class Scalar>
std::optional<CyclicViolation<Scalar>> cyclic_monotonicity_search(
    const ResolventOperator<Scalar>& op, std::size_t cycleLen, std::size_t trials,
    const Box<Scalar>& sampleBox, std::uint64_t seed = kSearchSeed) {
  if (cycleLen < 3) {
    throw std::invalid_argument("cyclic_monotonicity_search: cycleLen must be at least 3");
  }
  if (trials == 0) {
    throw std::invalid_argument("cyclic_monotonicity_search: trials must be positive");
  }
  detail::require_bounded(sampleBox, "cyclic_monotonicity_search");

  std::mt19937_64 rng(seed);
  const Scalar threshold = Scalar(1e-6);

  auto build = [&](const std::vector<Vector<Scalar>>& zs, Scalar sum) {
    CyclicViolation<Scalar> result;
    result.cyclicSum = sum;
    for (const auto& z : zs) {
      result.points.push_back(resolvent(op, z));
      result.images.push_back((z - result.points.back()).eval());
    }
    return result;
  };

  std::vector<Vector<Scalar>> best;
  Scalar bestSum = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Vector<Scalar>> zs(cycleLen);
    for (auto& z : zs) z = detail::sample_in_box(sampleBox, rng);
    const Scalar sum = detail::cyclic_sum(op, zs);
    if (sum > threshold) return build(zs, sum);
    if (sum > bestSum) {
      bestSum = sum;
      best = zs;
    }
  }

  // Refine the best candidate: random coordinate perturbations with a
  // shrinking radius, keeping improvements.
  Scalar radius = Scalar((sampleBox.hi - sampleBox.lo).norm() / 10);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int round = 0; round < 2000; ++round) {
    std::vector<Vector<Scalar>> probe = best;
    for (auto& z : probe) {
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] += radius * Scalar(gauss(rng));
    }
    const Scalar sum = detail::cyclic_sum(op, probe);
    if (sum > bestSum) {
      bestSum = sum;
      best = std::move(probe);
      if (bestSum > threshold) return build(best, bestSum);
    }
    radius *= Scalar(0.998);
  }
  return std::nullopt;
}

/// Min of <x - y, x* - y*> over sampled graph pairs. Nonnegative (up to
/// rounding) exactly when the sampled operator behaves monotonically.
template <class Scalar>
Scalar monotonicity_certificate(const ResolventOperator<Scalar>& op, std::size_t pairs,
                                const Box<Scalar>& sampleBox, std::uint64_t seed = kSearchSeed) {
  detail::require_bounded(sampleBox, "monotonicity_certificate");
  std::mt19937_64 rng(seed);
  Scalar lowest = std::numeric_limits<Scalar>::infinity();
  for (std::size_t k = 0; k < pairs; ++k) {
    const Vector<Scalar> zx = detail::sample_in_box(sampleBox, rng);
    const Vector<Scalar> zy = detail::sample_in_box(sampleBox, rng);
    const Vector<Scalar> x = resolvent(op, zx), y = resolvent(op, zy);
    const Vector<Scalar> xs = zx - x, ys = zy - y;
    lowest = std::min(lowest, Scalar((x - y).dot(xs - ys)));
  }
  return lowest;
}

}  // namespace splitfix
