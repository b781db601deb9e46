#pragma once

// Primitive Euclidean geometry: dense vector/matrix aliases, the small family
// of convex sets every resolvent formula in this library projects onto, and
// their exact nearest-point maps. Dimension is dynamic (any n >= 1) even
// though the worked scenarios live in the plane. Free functions accept Eigen
// expressions and materialize them once on entry.

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

namespace splitfix {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Slack allowed when validating that a stored direction has unit norm.
inline constexpr double kUnitNormSlack = 1e-12;

template <class Scalar>
void require_finite(const Vector<Scalar>& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

template <class Scalar>
void require_dimension(const Vector<Scalar>& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(dim) + ", got " + std::to_string(v.size()));
  }
}

template <class Scalar>
Vector<Scalar> make_vector(std::initializer_list<Scalar> entries) {
  Vector<Scalar> v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (Scalar e : entries) v[i++] = e;
  return v;
}

/// Closed ball {x : ||x - center|| <= radius}, radius strictly positive.
template <class Scalar>
struct Ball {
  Vector<Scalar> center;
  Scalar radius;

  Ball(Vector<Scalar> c, Scalar r) : center(std::move(c)), radius(r) {
    require_finite(center, "Ball center");
    if (!(radius > Scalar(0)) || !std::isfinite(static_cast<double>(radius))) {
      throw std::invalid_argument("Ball radius must be positive and finite");
    }
  }
};

/// Axis-aligned box {x : lo <= x <= hi componentwise}. Infinite bounds are
/// permitted (the clamp is still well defined); NaN bounds are not.
template <class Scalar>
struct Box {
  Vector<Scalar> lo;
  Vector<Scalar> hi;

  Box(Vector<Scalar> lo_, Vector<Scalar> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) {
      throw std::invalid_argument("Box bounds must have equal dimensions");
    }
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (!(lo[i] <= hi[i])) {
        throw std::invalid_argument("Box requires lo <= hi componentwise");
      }
    }
  }
};

/// Halfspace {x : <x, unitNormal> <= 0} through the origin.
template <class Scalar>
struct Halfspace {
  Vector<Scalar> unitNormal;

  explicit Halfspace(Vector<Scalar> n) : unitNormal(std::move(n)) {
    require_finite(unitNormal, "Halfspace normal");
    if (std::abs(static_cast<double>(unitNormal.norm()) - 1.0) > kUnitNormSlack) {
      throw std::invalid_argument("Halfspace normal must have unit norm");
    }
  }
};

/// One-dimensional subspace {t * unitDirection : t real}.
template <class Scalar>
struct LineThroughOrigin {
  Vector<Scalar> unitDirection;

  explicit LineThroughOrigin(Vector<Scalar> d) : unitDirection(std::move(d)) {
    require_finite(unitDirection, "Line direction");
    if (std::abs(static_cast<double>(unitDirection.norm()) - 1.0) > kUnitNormSlack) {
      throw std::invalid_argument("Line direction must have unit norm");
    }
  }
};

template <class Scalar>
using PrimitiveSet = std::variant<Ball<Scalar>, Box<Scalar>, Halfspace<Scalar>, LineThroughOrigin<Scalar>>;

template <class Scalar>
Eigen::Index dimension(const Ball<Scalar>& b) { return b.center.size(); }
template <class Scalar>
Eigen::Index dimension(const Box<Scalar>& b) { return b.lo.size(); }
template <class Scalar>
Eigen::Index dimension(const Halfspace<Scalar>& h) { return h.unitNormal.size(); }
template <class Scalar>
Eigen::Index dimension(const LineThroughOrigin<Scalar>& l) { return l.unitDirection.size(); }
template <class Scalar>
Eigen::Index dimension(const PrimitiveSet<Scalar>& s) {
  return std::visit([](const auto& v) { return dimension(v); }, s);
}

namespace detail {
/// Materialize an expression into a concrete vector after scalar-type check.
template <class Scalar, class Derived>
Vector<Scalar> as_vector(const Eigen::MatrixBase<Derived>& x) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                "argument scalar type must match the set's scalar type");
  return x;
}
}  // namespace detail

// Nearest-point maps. Boundary comparisons are exact floating comparisons by
// design; tolerances belong to tests, not to the projection itself.

template <class Scalar, class Derived>
Vector<Scalar> project(const Ball<Scalar>& set, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  require_dimension(x, dimension(set), "project(Ball)");
  require_finite(x, "project(Ball)");
  Vector<Scalar> d = x - set.center;
  const Scalar dist = d.norm();
  if (dist <= set.radius) return x;  // includes x == center
  return set.center + (set.radius / dist) * d;
}

template <class Scalar, class Derived>
Vector<Scalar> project(const Box<Scalar>& set, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  require_dimension(x, dimension(set), "project(Box)");
  require_finite(x, "project(Box)");
  return x.cwiseMax(set.lo).cwiseMin(set.hi);
}

template <class Scalar, class Derived>
Vector<Scalar> project(const Halfspace<Scalar>& set, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  require_dimension(x, dimension(set), "project(Halfspace)");
  require_finite(x, "project(Halfspace)");
  const Scalar t = set.unitNormal.dot(x);
  if (t <= Scalar(0)) return x;
  return x - t * set.unitNormal;
}

template <class Scalar, class Derived>
Vector<Scalar> project(const LineThroughOrigin<Scalar>& set, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  require_dimension(x, dimension(set), "project(Line)");
  require_finite(x, "project(Line)");
  return set.unitDirection.dot(x) * set.unitDirection;
}

template <class Scalar, class Derived>
Vector<Scalar> project(const PrimitiveSet<Scalar>& set, const Eigen::MatrixBase<Derived>& x) {
  return std::visit([&](const auto& s) { return project(s, x); }, set);
}

// Membership predicates with an explicit tolerance, used by tests and by the
// normal-cone checks in the analysis layer.

template <class Scalar>
bool contains(const Ball<Scalar>& set, const Vector<Scalar>& x, Scalar tol) {
  return (x - set.center).norm() <= set.radius + tol;
}

template <class Scalar>
bool contains(const Box<Scalar>& set, const Vector<Scalar>& x, Scalar tol) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < set.lo[i] - tol || x[i] > set.hi[i] + tol) return false;
  }
  return true;
}

template <class Scalar>
bool contains(const Halfspace<Scalar>& set, const Vector<Scalar>& x, Scalar tol) {
  return set.unitNormal.dot(x) <= tol;
}

template <class Scalar>
bool contains(const LineThroughOrigin<Scalar>& set, const Vector<Scalar>& x, Scalar tol) {
  return (x - project(set, x)).norm() <= tol;
}

template <class Scalar>
bool contains(const PrimitiveSet<Scalar>& set, const Vector<Scalar>& x, Scalar tol) {
  return std::visit([&](const auto& s) { return contains(s, x, tol); }, set);
}

template <class Scalar, class Derived>
Vector<Scalar> apply_matrix(const Matrix2<Scalar>& m, const Eigen::MatrixBase<Derived>& xe) {
  const Vector<Scalar> x = detail::as_vector<Scalar>(xe);
  require_dimension(x, 2, "apply_matrix");
  require_finite(x, "apply_matrix");
  Vector<Scalar> y(2);
  y = m * x.template head<2>();
  return y;
}

/// Counterclockwise rotation by theta: cos(theta) Id + sin(theta) S with the
/// generator S = [[0,-1],[1,0]]. This fixes the sign convention used by every
/// rotation in the library.
template <class Scalar>
Matrix2<Scalar> rotation_matrix(Scalar theta) {
  const Scalar c = std::cos(theta), s = std::sin(theta);
  Matrix2<Scalar> r;
  r << c, -s, s, c;
  return r;
}

/// The rotation generator S = [[0,-1],[1,0]] (S^2 = -Id, <x, Sx> = 0).
template <class Scalar>
Matrix2<Scalar> rotation_generator() {
  Matrix2<Scalar> s;
  s << Scalar(0), Scalar(-1), Scalar(1), Scalar(0);
  return s;
}

}  // namespace splitfix
