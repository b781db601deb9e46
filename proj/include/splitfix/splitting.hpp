#pragma once

// The relaxed splitting operator T_lambda = (1-lambda) Id + lambda R_B R_A
// built from two resolvent-represented operators, and the iteration that
// records the governing sequence together with its two shadow sequences.
//
// T is evaluated as x - 2 lambda J_A x + 2 lambda J_B(2 J_A x - x), one
// resolvent call per operator per step. With that form the step difference
// x_n - x_{n+1} equals 2 lambda (s_n - t_n) to machine precision, where
// s_n = J_A x_n and t_n = J_B R_A x_n.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splitfix/operators.hpp"

namespace splitfix {

/// lambda = 1/2 gives the classical averaged iteration; lambda = 1 the fully
/// reflected one. Anything in (0,1] is accepted.
template <class Scalar>
struct SplittingOperator {
  ResolventOperator<Scalar> A;
  ResolventOperator<Scalar> B;
  Scalar lambda;

  SplittingOperator(ResolventOperator<Scalar> a, ResolventOperator<Scalar> b, Scalar lam)
      : A(std::move(a)), B(std::move(b)), lambda(lam) {
    if (!(lambda > Scalar(0)) || !(lambda <= Scalar(1))) {
      throw std::invalid_argument("SplittingOperator: lambda must lie in (0, 1]");
    }
    if (A.dimension != B.dimension) {
      throw std::invalid_argument("SplittingOperator: operand dimensions differ");
    }
  }
};

enum class StopReason { MaxIters, ShadowSettled };

inline const char* stop_reason_name(StopReason r) {
  return r == StopReason::MaxIters ? "max_iters" : "shadow_settled";
}

/// Iteration stops once the shadow step ||s_{n+1} - s_n|| has been below
/// shadowTol for 10 consecutive steps, or at maxIters, whichever comes first.
/// The governing sequence never settles when the problem has no common point,
/// so stopping keys on the shadow.
template <class Scalar>
struct StopRule {
  std::size_t maxIters = 100000;
  Scalar shadowTol = Scalar(1e-10);
};

/// Everything the iteration produces. x, shadow, and reflectedShadow have one
/// entry per visited point (steps()+1 of them); stepDiff[n] = x_n - x_{n+1}.
template <class Scalar>
struct IterationTrace {
  std::vector<Vector<Scalar>> x;
  std::vector<Vector<Scalar>> shadow;
  std::vector<Vector<Scalar>> reflectedShadow;
  std::vector<Vector<Scalar>> stepDiff;
  StopReason stopReason = StopReason::MaxIters;
  Scalar lambda = Scalar(0);

  std::size_t steps() const { return stepDiff.size(); }
};

template <class Scalar, class Derived>
Vector<Scalar> evaluate_T(const SplittingOperator<Scalar>& split, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  Vector<Scalar> s = resolvent(split.A, x);
  Vector<Scalar> t = resolvent(split.B, (2 * s - x).eval());
  return x + 2 * split.lambda * (t - s);
}

template <class Scalar>
IterationTrace<Scalar> iterate(const SplittingOperator<Scalar>& split, const Vector<Scalar>& x0,
                               const StopRule<Scalar>& stop = {}) {
  if (stop.maxIters == 0) {
    throw std::invalid_argument("iterate: maxIters must be positive");
  }
  if (!(stop.shadowTol > Scalar(0))) {
    throw std::invalid_argument("iterate: shadowTol must be positive");
  }

  IterationTrace<Scalar> trace;
  trace.lambda = split.lambda;
  trace.x.reserve(stop.maxIters + 1);
  trace.shadow.reserve(stop.maxIters + 1);
  trace.reflectedShadow.reserve(stop.maxIters + 1);
  trace.stepDiff.reserve(stop.maxIters);

  auto push_point = [&](const Vector<Scalar>& x, std::size_t step) {
    Vector<Scalar> s = resolvent(split.A, x);
    if (!s.allFinite()) {
      throw std::runtime_error("iterate: non-finite resolvent value at step " + std::to_string(step));
    }
    Vector<Scalar> t = resolvent(split.B, (2 * s - x).eval());
    if (!t.allFinite()) {
      throw std::runtime_error("iterate: non-finite resolvent value at step " + std::to_string(step));
    }
    trace.x.push_back(x);
    trace.shadow.push_back(std::move(s));
    trace.reflectedShadow.push_back(std::move(t));
  };

  push_point(x0, 0);

  int settledStreak = 0;
  for (std::size_t n = 0; n < stop.maxIters; ++n) {
    const Vector<Scalar>& xn = trace.x.back();
    Vector<Scalar> xnext =
        xn + 2 * split.lambda * (trace.reflectedShadow.back() - trace.shadow.back());
    if (!xnext.allFinite()) {
      throw std::runtime_error("iterate: non-finite iterate at step " + std::to_string(n + 1));
    }
    trace.stepDiff.push_back(xn - xnext);
    const Vector<Scalar>& sPrev = trace.shadow.back();
    Vector<Scalar> sPrevCopy = sPrev;  // push_point invalidates the reference
    push_point(xnext, n + 1);
    if ((trace.shadow.back() - sPrevCopy).norm() < stop.shadowTol) {
      if (++settledStreak >= 10) {
        trace.stopReason = StopReason::ShadowSettled;
        return trace;
      }
    } else {
      settledStreak = 0;
    }
  }
  trace.stopReason = StopReason::MaxIters;
  return trace;
}

}  // namespace splitfix
