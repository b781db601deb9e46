#include "doctest.h"

#include <splitfix/splitting.hpp>

#include "support/testutil.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace splitfix;
using testutil::vec2;
using Vec = Vector<double>;

namespace {

ResolventOperator<double> identity_resolvent() {
  return resolvent_skew_linear(SkewLinearSpec<double>(0, 0, 0, Matrix2<double>::Zero()));
}

/// Rotation-plus-ball against a shifted-ball normal cone; no common zero for
/// these parameters, displacement vector (1, 0).
SplittingOperator<double> two_balls_pair(double lambda) {
  return SplittingOperator<double>(resolvent_rotation_ball(M_PI / 4),
                                   resolvent_shifted_ball_normal(vec2(0, 0.7071068), vec2(-3.5, 0), 1.5),
                                   lambda);
}

/// Quadratic-on-a-line against a disjoint box; displacement vector (0, -1).
SplittingOperator<double> line_box_pair(double lambda) {
  const LineThroughOrigin<double> axis(vec2(1, 0));
  return SplittingOperator<double>(prox_quadratic_on_line(1.0, vec2(1, 0), axis),
                                   prox_box_indicator(vec2(-1, 1), vec2(1, 3)), lambda);
}

}  // namespace

TEST_SUITE("splitting") {

TEST_CASE("operator evaluation on degenerate pairs") {
  // A = B = 0: both resolvents are the identity, so T is the identity for any lambda.
  auto zero = identity_resolvent();
  for (double lam : {0.25, 0.5, 1.0}) {
    SplittingOperator<double> split(zero, zero, lam);
    CHECK((evaluate_T(split, vec2(3, -1)) - vec2(3, -1)).norm() == 0);
  }

  // lambda = 1 with J_A = (1/2) Id and B = 0: R_A = 0, R_B = Id, so T collapses to 0.
  ResolventOperator<double> halfId{[](const Vec& x) -> Vec { return 0.5 * x; }, "half_identity", 2};
  SplittingOperator<double> collapse(halfId, zero, 1.0);
  CHECK(evaluate_T(collapse, vec2(5, 5)).norm() == 0);
}

TEST_CASE("operator value at the origin for the two-balls pair") {
  auto split = two_balls_pair(0.5);

  // J_A(0) = 0 (interior branch is linear), so T(0) = J_B(0) and J_B is the
  // nearest-point map of ball((-3.5, 0), 1.5) applied to -b.
  Ball<double> ball(vec2(-3.5, 0), 1.5);
  const Vec expected = project(ball, vec2(0, -0.7071068));
  CHECK((evaluate_T(split, vec2(0, 0)) - expected).norm() < 1e-12);
  CHECK((expected - vec2(-2.0297059, -0.2970443)).norm() < 1e-6);

  // The one-call-per-operator form agrees with composing reflections.
  auto rng = testutil::make_rng(21);
  for (double lam : {0.25, 0.5, 1.0}) {
    auto sp = two_balls_pair(lam);
    for (int k = 0; k < 100; ++k) {
      const Vec x = testutil::rand_vec(rng, -8, 8);
      const Vec viaReflections = (1 - lam) * x + lam * reflected(sp.B, reflected(sp.A, x));
      CHECK((evaluate_T(sp, x) - viaReflections).norm() < 1e-12);
    }
  }
}

TEST_CASE("step differences decompose through the two shadows") {
  auto rng = testutil::make_rng(22);
  for (double lam : {0.5, 0.75, 1.0}) {
    for (auto split : {two_balls_pair(lam), line_box_pair(lam)}) {
      const Vec x0 = testutil::rand_vec(rng, -3, 3);
      auto trace = iterate(split, x0, StopRule<double>{300, 1e-14});

      REQUIRE(trace.x.size() == trace.steps() + 1);
      REQUIRE(trace.shadow.size() == trace.x.size());
      REQUIRE(trace.reflectedShadow.size() == trace.x.size());

      for (std::size_t n = 0; n < trace.steps(); ++n) {
        CHECK((trace.stepDiff[n] - (trace.x[n] - trace.x[n + 1])).norm() == 0);
        const Vec viaShadows = 2 * lam * (trace.shadow[n] - trace.reflectedShadow[n]);
        CHECK((trace.stepDiff[n] - viaShadows).norm() < 1e-12);
      }
      for (std::size_t n = 0; n + 1 < trace.steps(); ++n) {
        CHECK(trace.stepDiff[n + 1].norm() <= trace.stepDiff[n].norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("constant trace settles after ten steps") {
  auto zero = identity_resolvent();
  SplittingOperator<double> split(zero, zero, 0.5);
  auto trace = iterate(split, vec2(4, -7));

  CHECK(trace.stopReason == StopReason::ShadowSettled);
  CHECK(trace.x.size() == 11);
  for (const auto& d : trace.stepDiff) CHECK(d.norm() == 0);
  for (const auto& x : trace.x) CHECK((x - vec2(4, -7)).norm() == 0);
}

TEST_CASE("iteration cap and stop-rule validation") {
  auto split = two_balls_pair(0.5);
  auto trace = iterate(split, vec2(0, 0), StopRule<double>{5, 1e-10});
  CHECK(trace.stopReason == StopReason::MaxIters);
  CHECK(trace.steps() == 5);

  CHECK_THROWS_AS(iterate(split, vec2(0, 0), StopRule<double>{0, 1e-10}), std::invalid_argument);
  CHECK_THROWS_AS(iterate(split, vec2(0, 0), StopRule<double>{10, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(iterate(split, vec2(0, 0), StopRule<double>{10, -1.0}), std::invalid_argument);
}

TEST_CASE("shadow tails reach the documented limits") {
  auto tb = iterate(two_balls_pair(0.5), vec2(0, 0), StopRule<double>{10000, 1e-10});
  CHECK((tb.shadow.back() - vec2(-1, 0)).norm() < 1e-6);

  auto lb = iterate(line_box_pair(0.5), vec2(0, 0), StopRule<double>{10000, 1e-10});
  CHECK((lb.shadow.back() - vec2(1, 0)).norm() < 1e-6);
  CHECK((lb.reflectedShadow.back() - vec2(1, 1)).norm() < 1e-6);
}

TEST_CASE("nonexpansiveness and averagedness on random pairs") {
  auto rng = testutil::make_rng(23);
  for (double lam : {0.25, 0.5, 0.75, 1.0}) {
    for (auto split : {two_balls_pair(lam), line_box_pair(lam)}) {
      for (int k = 0; k < 1000; ++k) {
        const Vec x = testutil::rand_vec(rng, -10, 10);
        const Vec y = testutil::rand_vec(rng, -10, 10);
        const Vec tx = evaluate_T(split, x), ty = evaluate_T(split, y);
        CHECK((tx - ty).norm() <= (x - y).norm() + 1e-12);
        if (lam < 1.0) {
          // lambda-averaged: the displacement term is controlled by (1-lambda)/lambda.
          const double drop = (x - y).squaredNorm() - (tx - ty).squaredNorm();
          const double disp = ((x - tx) - (y - ty)).squaredNorm();
          CHECK(drop >= (1 - lam) / lam * disp - 1e-10);
        }
      }
    }
  }
}

TEST_CASE("telescoping identity and its one-operator inequalities") {
  auto rng = testutil::make_rng(24);
  for (double lam : {0.25, 0.5, 1.0}) {
    for (auto split : {two_balls_pair(lam), line_box_pair(lam)}) {
      for (int k = 0; k < 300; ++k) {
        const Vec x = testutil::rand_vec(rng, -10, 10);
        const Vec y = testutil::rand_vec(rng, -10, 10);

        const Vec sx = resolvent(split.A, x), sy = resolvent(split.A, y);
        const Vec rx = (2 * sx - x).eval(), ry = (2 * sy - y).eval();
        const Vec tx = resolvent(split.B, rx), ty = resolvent(split.B, ry);
        const double termA = (sx - sy).dot((x - sx) - (y - sy));
        const double termB = (tx - ty).dot((rx - tx) - (ry - ty));

        const Vec Tx = evaluate_T(split, x), Ty = evaluate_T(split, y);
        const double lhs = lam * (x - y).squaredNorm() - lam * (Tx - Ty).squaredNorm() -
                           (1 - lam) * ((x - Tx) - (y - Ty)).squaredNorm();
        const double rhs = 4 * lam * lam * (termA + termB);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(std::abs(lhs - rhs) / scale < 1e-9);

        const double drop = (x - y).squaredNorm() - (Tx - Ty).squaredNorm();
        CHECK(drop >= 4 * lam * termA - 1e-10);
        CHECK(drop >= 4 * lam * termB - 1e-10);
      }
    }
  }
}

TEST_CASE("paired shadow inner products vanish along trajectories") {
  auto rng = testutil::make_rng(25);
  for (double lam : {0.5, 1.0}) {
    for (auto split : {two_balls_pair(lam), line_box_pair(lam)}) {
      const Vec x0 = testutil::rand_vec(rng, -5, 5);
      const Vec y0 = testutil::rand_vec(rng, -5, 5);
      auto tx = iterate(split, x0, StopRule<double>{10000, 1e-300});
      auto ty = iterate(split, y0, StopRule<double>{10000, 1e-300});

      const Vec ds = tx.shadow.back() - ty.shadow.back();
      const Vec dinv = (tx.x.back() - tx.shadow.back()) - (ty.x.back() - ty.shadow.back());
      CHECK(std::abs(ds.dot(dinv)) < 1e-8);
    }
  }
}

TEST_CASE("governing sequence grows linearly when no common point exists") {
  struct Setup {
    SplittingOperator<double> split;
    Vec v;
  };
  for (double lam : {0.25, 0.5, 0.75}) {
    for (const auto& setup : {Setup{two_balls_pair(lam), vec2(1, 0)},
                              Setup{line_box_pair(lam), vec2(0, -1)}}) {
      // Drive T directly: the stop rule would cut the trace short once the
      // shadow settles, and the growth claim is about the raw orbit.
      const double rate = 2 * lam * setup.v.norm();
      std::vector<double> norms;
      Vec x = vec2(0, 0);
      for (int n = 0; n <= 2000; ++n) {
        norms.push_back(x.norm());
        x = evaluate_T(setup.split, x);
      }

      double fitted = 0;
      for (std::size_t n = 0; n < norms.size(); ++n) {
        fitted = std::max(fitted, static_cast<double>(n) * rate - norms[n]);
      }
      CHECK(fitted < 50.0);
      CHECK(norms.back() > 100.0);
      // The fitted offset certifies the lower bound along the whole orbit.
      for (std::size_t n = 0; n < norms.size(); n += 100) {
        CHECK(norms[n] >= static_cast<double>(n) * rate - fitted - 1e-9);
      }
    }
  }
}

TEST_CASE("non-finite iterates raise an error naming the step") {
  ResolventOperator<double> overflow{[](const Vec& x) -> Vec { return 1e77 * x; }, "overflow", 2};
  SplittingOperator<double> split(overflow, overflow, 1.0);
  try {
    iterate(split, vec2(1, 1), StopRule<double>{100, 1e-10});
    FAIL("expected a runtime error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("construction validation") {
  auto zero = identity_resolvent();
  CHECK_THROWS_AS(SplittingOperator<double>(zero, zero, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SplittingOperator<double>(zero, zero, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(SplittingOperator<double>(zero, zero, 1.0 + 1e-9), std::invalid_argument);
  CHECK_NOTHROW(SplittingOperator<double>(zero, zero, 1.0));

  auto box3 = prox_box_indicator(Vec::Zero(3), Vec::Ones(3));
  CHECK_THROWS_AS(SplittingOperator<double>(zero, box3, 0.5), std::invalid_argument);

  // Dimension mismatch at evaluation time.
  SplittingOperator<double> split(zero, zero, 0.5);
  CHECK_THROWS_AS(evaluate_T(split, Vec::Zero(3).eval()), std::invalid_argument);
}

}  // TEST_SUITE
