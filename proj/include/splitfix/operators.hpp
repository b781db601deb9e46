#pragma once

// Catalogue of maximally monotone operators given by their resolvents
// J = (Id + A)^{-1} in closed form. Each factory returns a ResolventOperator
// whose evaluator is the exact nearest-point or linear-solve formula; the
// reflected map 2J - Id and the inverse-operator resolvent Id - J are derived
// uniformly. Every map here is firmly nonexpansive with full domain, which is
// what the splitting iteration downstream relies on.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "splitfix/geometry.hpp"

namespace splitfix {

/// A maximally monotone operator represented by its resolvent evaluator.
/// The evaluator must be defined on all of R^dimension.
template <class Scalar>
struct ResolventOperator {
  std::function<Vector<Scalar>(const Vector<Scalar>&)> evaluator;
  std::string label;
  Eigen::Index dimension = 0;
};

template <class Scalar, class Derived>
Vector<Scalar> resolvent(const ResolventOperator<Scalar>& op, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  require_dimension(x, op.dimension, "resolvent");
  require_finite(x, "resolvent");
  return op.evaluator(x);
}

/// Reflected resolvent 2J - Id.
template <class Scalar, class Derived>
Vector<Scalar> reflected(const ResolventOperator<Scalar>& op, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  Vector<Scalar> j = resolvent(op, x);
  return 2 * j - x;
}

/// Resolvent of the inverse operator: J_{A^{-1}} = Id - J_A.
template <class Scalar, class Derived>
Vector<Scalar> inverse_resolvent(const ResolventOperator<Scalar>& op, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  Vector<Scalar> j = resolvent(op, x);
  return x - j;
}

/// Parameters of the planar monotone linear operator alpha*Id + beta*S where
/// S is skew with S^2 = -gamma*Id. alpha, gamma >= 0; beta is free.
template <class Scalar>
struct SkewLinearSpec {
  Scalar alpha;
  Scalar beta;
  Scalar gamma;
  Matrix2<Scalar> S;

  SkewLinearSpec(Scalar a, Scalar b, Scalar g, Matrix2<Scalar> s)
      : alpha(a), beta(b), gamma(g), S(std::move(s)) {
    if (!(alpha >= Scalar(0)) || !(gamma >= Scalar(0))) {
      throw std::invalid_argument("SkewLinearSpec: alpha and gamma must be nonnegative");
    }
    if ((S + S.transpose()).norm() > Scalar(1e-12)) {
      throw std::invalid_argument("SkewLinearSpec: S must be skew-symmetric");
    }
    Matrix2<Scalar> shouldBeZero = S * S + gamma * Matrix2<Scalar>::Identity();
    if (shouldBeZero.norm() > Scalar(1e-10)) {
      throw std::invalid_argument("SkewLinearSpec: S^2 must equal -gamma*Id");
    }
  }
};

/// Resolvent of alpha*Id + beta*S, in closed form:
///   J = ((1 + alpha) Id - beta S) / ((1 + alpha)^2 + beta^2 gamma).
template <class Scalar>
ResolventOperator<Scalar> resolvent_skew_linear(const SkewLinearSpec<Scalar>& spec) {
  const Scalar denom = (1 + spec.alpha) * (1 + spec.alpha) + spec.beta * spec.beta * spec.gamma;
  Matrix2<Scalar> j = ((1 + spec.alpha) * Matrix2<Scalar>::Identity() - spec.beta * spec.S) / denom;
  auto eval = [j](const Vector<Scalar>& x) { return apply_matrix(j, x); };
  return ResolventOperator<Scalar>{eval, "skew_linear", 2};
}

/// Reflected resolvent of the same operator without going through J:
///   2J - Id = ((1 - alpha^2 - beta^2 gamma) Id - 2 beta S) / denom.
template <class Scalar>
Matrix2<Scalar> reflected_skew_linear_matrix(const SkewLinearSpec<Scalar>& spec) {
  const Scalar denom = (1 + spec.alpha) * (1 + spec.alpha) + spec.beta * spec.beta * spec.gamma;
  return ((1 - spec.alpha * spec.alpha - spec.beta * spec.beta * spec.gamma) * Matrix2<Scalar>::Identity() -
          2 * spec.beta * spec.S) /
         denom;
}

/// Resolvent of the rotation-plus-unit-ball-normal-cone operator
/// R_theta + N_{ball(0,1)} for theta in [0, pi/2). Two regimes split at
/// ||x||^2 <= 2(1 + cos theta): inside, J x = (x + R_{-theta} x) / (2(1 + cos theta));
/// outside, J x lands exactly on the unit sphere.
template <class Scalar>
ResolventOperator<Scalar> resolvent_rotation_ball(Scalar theta) {
  if (!(theta >= Scalar(0)) || !(theta < Scalar(1.5707963267948966))) {
    throw std::invalid_argument("resolvent_rotation_ball: theta must lie in [0, pi/2)");
  }
  const Scalar c = std::cos(theta), s = std::sin(theta);
  const Matrix2<Scalar> rInv = rotation_matrix(-theta);
  auto eval = [c, s, rInv](const Vector<Scalar>& x) -> Vector<Scalar> {
    const Scalar n2 = x.squaredNorm();
    if (n2 <= 2 * (1 + c)) {
      Vector<Scalar> rx = apply_matrix(rInv, x);
      return (x + rx) / (2 * (1 + c));
    }
    Scalar arg = n2 - s * s;
    if (arg < Scalar(0)) {
      if (arg < Scalar(-1e-12)) {
        throw std::logic_error("resolvent_rotation_ball: negative square root argument");
      }
      arg = Scalar(0);
    }
    const Scalar coeff = std::sqrt(arg) - c;
    Vector<Scalar> rx = apply_matrix(rInv, x);
    return (coeff * x + rx) / n2;
  };
  return ResolventOperator<Scalar>{eval, "rotation_ball", 2};
}

/// Resolvent of L + N_H for a monotone linear map L and the halfspace
/// H = {x : <x, u> <= 0} with unit normal u. Evaluate y = (Id + L)^{-1} x;
/// if y is in H it is the answer, otherwise the solution slides along the
/// boundary: J x = (<x, u_perp> / kappa) u_perp with u_perp the rotated
/// normal and kappa = 1 + <u_perp, L u_perp>.
template <class DerivedL, class DerivedU>
auto resolvent_linear_halfspace(const Eigen::MatrixBase<DerivedL>& le,
                                const Eigen::MatrixBase<DerivedU>& ue)
    -> ResolventOperator<typename DerivedL::Scalar> {
  using Scalar = typename DerivedL::Scalar;
  const Matrix2<Scalar> l = le;
  const Vector<Scalar> u = detail::as_vector<Scalar>(ue);
  require_dimension(u, 2, "resolvent_linear_halfspace normal");
  if (std::abs(static_cast<double>(u.norm()) - 1.0) > kUnitNormSlack) {
    throw std::invalid_argument("resolvent_linear_halfspace: normal must have unit norm");
  }
  // Monotonicity of [[a, b], [c, d]]: symmetric part positive semidefinite.
  const Scalar a = l(0, 0), b = l(0, 1), c = l(1, 0), d = l(1, 1);
  if (!(a >= Scalar(0)) || !(d >= Scalar(0)) ||
      !(4 * a * d >= (b + c) * (b + c) - Scalar(1e-12))) {
    throw std::invalid_argument("resolvent_linear_halfspace: L must be monotone");
  }
  const Matrix2<Scalar> jl = (Matrix2<Scalar>::Identity() + l).inverse();
  Vector<Scalar> uPerp(2);
  uPerp << -u[1], u[0];
  const Scalar kappa = 1 + uPerp.dot((l * uPerp.template head<2>()).eval());
  auto eval = [jl, u, uPerp, kappa](const Vector<Scalar>& x) -> Vector<Scalar> {
    Vector<Scalar> y = apply_matrix(jl, x);
    if (y.dot(u) < Scalar(0)) return y;
    return (x.dot(uPerp) / kappa) * uPerp;
  };
  return ResolventOperator<Scalar>{eval, "linear_halfspace", 2};
}

/// Resolvent of x |-> b + N_{ball(c, r)}(x), a constant shift plus the normal
/// cone of a shifted ball: J x = P_{ball(c, r)}(x - b).
template <class DerivedB, class DerivedC>
auto resolvent_shifted_ball_normal(const Eigen::MatrixBase<DerivedB>& be,
                                   const Eigen::MatrixBase<DerivedC>& ce,
                                   typename DerivedB::Scalar r)
    -> ResolventOperator<typename DerivedB::Scalar> {
  using Scalar = typename DerivedB::Scalar;
  const Vector<Scalar> b = detail::as_vector<Scalar>(be);
  const Vector<Scalar> c = detail::as_vector<Scalar>(ce);
  if (b.size() != c.size()) {
    throw std::invalid_argument("resolvent_shifted_ball_normal: shift and center dimensions differ");
  }
  Ball<Scalar> ball(c, r);
  auto eval = [b, ball](const Vector<Scalar>& x) -> Vector<Scalar> {
    Vector<Scalar> shifted = x - b;
    return project(ball, shifted);
  };
  return ResolventOperator<Scalar>{eval, "shifted_ball_normal", b.size()};
}

/// Proximity operator of f(x) = (gamma/2) ||x - w||^2 + indicator of the line
/// U (through the origin), with w on U:
///   prox_f(x) = P_U((x + gamma w) / (1 + gamma)).
template <class Derived>
auto prox_quadratic_on_line(typename Derived::Scalar gamma,
                            const Eigen::MatrixBase<Derived>& we,
                            const LineThroughOrigin<typename Derived::Scalar>& u)
    -> ResolventOperator<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  const Vector<Scalar> w = detail::as_vector<Scalar>(we);
  if (!(gamma > Scalar(0)) || !std::isfinite(static_cast<double>(gamma))) {
    throw std::invalid_argument("prox_quadratic_on_line: gamma must be positive and finite");
  }
  require_dimension(w, dimension(u), "prox_quadratic_on_line anchor");
  if ((w - project(u, w)).norm() > Scalar(1e-9)) {
    throw std::invalid_argument("prox_quadratic_on_line: anchor must lie on the line");
  }
  auto eval = [gamma, w, u](const Vector<Scalar>& x) -> Vector<Scalar> {
    Vector<Scalar> pulled = (x + gamma * w) / (1 + gamma);
    return project(u, pulled);
  };
  return ResolventOperator<Scalar>{eval, "prox_quadratic_on_line", w.size()};
}

/// Proximity operator of the indicator of a box, i.e. the clamp.
template <class DerivedL, class DerivedH>
auto prox_box_indicator(const Eigen::MatrixBase<DerivedL>& loe,
                        const Eigen::MatrixBase<DerivedH>& hie)
    -> ResolventOperator<typename DerivedL::Scalar> {
  using Scalar = typename DerivedL::Scalar;
  Box<Scalar> box(detail::as_vector<Scalar>(loe), detail::as_vector<Scalar>(hie));
  const Eigen::Index dim = dimension(box);
  auto eval = [box](const Vector<Scalar>& x) { return project(box, x); };
  return ResolventOperator<Scalar>{eval, "prox_box_indicator", dim};
}

}  // namespace splitfix
