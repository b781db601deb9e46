#pragma once

// Preset problem instances with their closed-form reference values. Tests and
// the CLI both pull ground truth from here, so the formulas live in exactly
// one place. Two families are provided: a rotated unit ball against a shifted
// ball (may or may not intersect, depending on the gap), and a quadratic on
// the x-axis against a box.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "splitfix/splitting.hpp"

namespace splitfix {

template <class Scalar>
struct ScenarioSpec {
  std::string name;
  ResolventOperator<Scalar> A;
  ResolventOperator<Scalar> B;
  Scalar lambda;
  Vector<Scalar> x0;
  std::map<std::string, Scalar> params;
};

/// Closed-form targets, where known. xbar is absent when no normal solution
/// exists (the shifted solve must then fail) and when no closed form is
/// available. consistent means the pair has a common zero, in which case the
/// displacement vector is zero.
template <class Scalar>
struct ScenarioReference {
  std::optional<Vector<Scalar>> v;
  std::optional<Vector<Scalar>> xbar;
  std::optional<Vector<Scalar>> reflectedShadowLimit;
  bool consistent = false;
};

template <class Scalar>
struct Scenario {
  ScenarioSpec<Scalar> spec;
  ScenarioReference<Scalar> reference;
};

/// How closely beta must match -sign(gamma) sin(theta) for the normal-solution
/// branch of the two-balls reference to apply. The match is exact in the
/// underlying formulas; the tolerance only absorbs decimal-literal rounding in
/// caller-supplied parameters.
inline constexpr double kBetaMatchTol = 1e-6;

/// A = R_theta + N_{ball(0,1)}, B = (0, beta) + N_{ball((gamma,0), r)}.
/// The reference displacement is (sign(gamma) min{0, r+1-|gamma|}, 0); when
/// the balls are separated (|gamma| >= r+1) and beta = -sign(gamma) sin(theta)
/// the normal solution is sign(gamma) (1, 0) with reflected-shadow limit
/// (gamma - sign(gamma) r, 0).
template <class Scalar>
Scenario<Scalar> preset_two_balls(Scalar theta, Scalar beta, Scalar gamma, Scalar r, Scalar lambda) {
  if (gamma == Scalar(0)) {
    throw std::invalid_argument(
        "preset_two_balls: gamma must be nonzero (the reference formulas split on its sign)");
  }
  if (!(lambda > Scalar(0)) || !(lambda <= Scalar(1))) {
    throw std::invalid_argument("preset_two_balls: lambda must lie in (0, 1]");
  }
  const Scalar sign = gamma > Scalar(0) ? Scalar(1) : Scalar(-1);

  Scenario<Scalar> scenario;
  scenario.spec.name = "two_balls";
  scenario.spec.A = resolvent_rotation_ball(theta);
  scenario.spec.B = resolvent_shifted_ball_normal(make_vector<Scalar>({Scalar(0), beta}),
                                                  make_vector<Scalar>({gamma, Scalar(0)}), r);
  scenario.spec.lambda = lambda;
  scenario.spec.x0 = Vector<Scalar>::Zero(2);
  scenario.spec.params = {{"theta", theta}, {"beta", beta}, {"gamma", gamma}, {"r", r}};

  ScenarioReference<Scalar>& ref = scenario.reference;
  const Scalar gap = r + 1 - std::abs(gamma);
  ref.v = make_vector<Scalar>({sign * std::min(Scalar(0), gap), Scalar(0)});
  ref.consistent = std::abs(gamma) < r + 1;
  if (std::abs(gamma) >= r + 1 &&
      std::abs(beta - (-sign * std::sin(theta))) <= Scalar(kBetaMatchTol)) {
    ref.xbar = make_vector<Scalar>({sign, Scalar(0)});
    ref.reflectedShadowLimit = make_vector<Scalar>({gamma - sign * r, Scalar(0)});
  }
  return scenario;
}

/// f = (gamma/2)||x - (w1,0)||^2 + indicator of the x-axis, g = indicator of
/// the box [a1,b1] x [a2,b2]. The displacement is vertical; the normal
/// solution clamps w1 into the box's horizontal extent.
template <class Scalar>
Scenario<Scalar> preset_line_box(Scalar gamma, Scalar w1, Scalar a1, Scalar b1, Scalar a2, Scalar b2,
                                 Scalar lambda) {
  if (!(lambda > Scalar(0)) || !(lambda <= Scalar(1))) {
    throw std::invalid_argument("preset_line_box: lambda must lie in (0, 1]");
  }

  Scenario<Scalar> scenario;
  scenario.spec.name = "line_box";
  const LineThroughOrigin<Scalar> axis(make_vector<Scalar>({Scalar(1), Scalar(0)}));
  scenario.spec.A = prox_quadratic_on_line(gamma, make_vector<Scalar>({w1, Scalar(0)}), axis);
  scenario.spec.B = prox_box_indicator(make_vector<Scalar>({a1, a2}), make_vector<Scalar>({b1, b2}));
  scenario.spec.lambda = lambda;
  scenario.spec.x0 = Vector<Scalar>::Zero(2);
  scenario.spec.params = {{"gamma", gamma}, {"w1", w1}, {"a1", a1},
                          {"b1", b1},       {"a2", a2}, {"b2", b2}};

  ScenarioReference<Scalar>& ref = scenario.reference;
  const Scalar v2 = std::min(std::max(Scalar(0), -b2), -a2);
  ref.v = make_vector<Scalar>({Scalar(0), v2});
  ref.consistent = v2 == Scalar(0);
  ref.xbar = make_vector<Scalar>({std::clamp(w1, a1, b1), Scalar(0)});
  ref.reflectedShadowLimit = (*ref.xbar - *ref.v).eval();
  return scenario;
}

/// Build a named scenario from defaults plus overrides. The names and the
/// override keys are the CLI contract; unknown keys are rejected rather than
/// ignored.
template <class Scalar>
Scenario<Scalar> make_scenario(const std::string& name,
                               const std::map<std::string, Scalar>& overrides, Scalar lambda) {
  std::map<std::string, Scalar> params;
  if (name == "two_balls") {
    params = {{"theta", Scalar(M_PI / 4)},
              {"beta", Scalar(0.7071068)},
              {"gamma", Scalar(-3.5)},
              {"r", Scalar(1.5)}};
  } else if (name == "line_box") {
    params = {{"gamma", Scalar(1)}, {"w1", Scalar(1)}, {"a1", Scalar(-1)},
              {"b1", Scalar(1)},    {"a2", Scalar(1)}, {"b2", Scalar(3)}};
  } else {
    throw std::invalid_argument("make_scenario: unknown scenario '" + name + "'");
  }
  for (const auto& [key, value] : overrides) {
    auto slot = params.find(key);
    if (slot == params.end()) {
      throw std::invalid_argument("make_scenario: unknown parameter '" + key + "' for scenario '" +
                                  name + "'");
    }
    slot->second = value;
  }
  if (name == "two_balls") {
    return preset_two_balls(params.at("theta"), params.at("beta"), params.at("gamma"),
                            params.at("r"), lambda);
  }
  return preset_line_box(params.at("gamma"), params.at("w1"), params.at("a1"), params.at("b1"),
                         params.at("a2"), params.at("b2"), lambda);
}

}  // namespace splitfix
