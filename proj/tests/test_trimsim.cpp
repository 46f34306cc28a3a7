// Copyright 2026 The qpaero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "json.hpp"
#include "qpaero/database.hpp"
#include "qpaero/error.hpp"
#include "qpaero/trimsim.hpp"

namespace qpaero {
namespace {

const CoefficientDatabase& Db() { return BuiltinDatabase(); }

const AeroEvaluator& Aero() {
  static const AeroEvaluator e(Db().aero, Db().atmosphere, Db().vehicle);
  return e;
}

bool Has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Force balance recomputed from the raw wrench: W = 1.684 * 9.81.
void ExpectBalanced(const TrimSolution& s) {
  const auto w = TotalWrench(Db().aero, Db().thrust_map, s.condition, Db().atmosphere,
                             Db().vehicle);
  const double weight = 1.684 * 9.81;
  const double th = s.condition.alpha_deg * M_PI / 180.0;
  EXPECT_LT(std::fabs(w.fx - weight * std::sin(th)), kForceResidualLimit);
  EXPECT_LT(std::fabs(w.fz + weight * std::cos(th)), kForceResidualLimit);
  EXPECT_LT(std::fabs(w.my), kMomentResidualLimit);
}

TEST(Hover, BalancesWeight) {
  const auto s = HoverTrim(Db().vehicle, Db().thrust_map);
  EXPECT_TRUE(s.feasible);
  EXPECT_LT(s.force_residual(), 1e-6);
  EXPECT_NEAR(s.thrust_vert, 16.52004, 1e-6);
  EXPECT_NEAR(DynamicThrust(Db().thrust_map, 90.0, 0.0, s.condition.esc_quad),
              16.52004 / 4.0, 1e-8);
  EXPECT_EQ(s.source, CoefficientSource::kNone);
  EXPECT_EQ(s.condition.esc_fwd, 1000.0);
}

TEST(Hover, TooHeavyIsInfeasible) {
  VehicleGeometry heavy;
  heavy.mass = 20.0;
  const auto s = HoverTrim(heavy, Db().thrust_map);
  EXPECT_FALSE(s.feasible);
  EXPECT_TRUE(Has(s.active_constraints, "thrust"));
  EXPECT_FALSE(s.reason.empty());
}

TEST(LevelTrim, PlaneCruise) {
  const auto s = LevelTrim(FlightMode::kPlane, 11.0, Aero(), Db().thrust_map);
  ASSERT_TRUE(s.feasible) << s.reason;
  EXPECT_NEAR(s.condition.alpha_deg, 7.594, 0.01);
  EXPECT_EQ(s.condition.esc_quad, 1000.0);
  EXPECT_GT(s.condition.esc_fwd, 1000.0);
  EXPECT_LT(std::fabs(s.condition.elevator), 1.0);
  EXPECT_EQ(s.source, CoefficientSource::kBucket);
  ExpectBalanced(s);
}

TEST(LevelTrim, PlaneCruiseSmallAngle) {
  TrimOptions o;
  o.lift_balance = LiftBalance::kSmallAngle;
  const auto s = LevelTrim(FlightMode::kPlane, 11.0, Aero(), Db().thrust_map, 0.0, o);
  // L = W with C_L = 0.3118 + 0.11 a at q S = 13.7706.
  const double qs = 0.5 * 1.225 * 121.0 * 1.2192 * 0.1524;
  EXPECT_NEAR(s.condition.alpha_deg, (16.52004 / qs - 0.3118) / 0.11, 1e-6);
  EXPECT_NEAR(s.condition.alpha_deg, 8.07, 0.1);
}

TEST(LevelTrim, PlaneLowSpeedStalls) {
  const auto s = LevelTrim(FlightMode::kPlane, 5.0, Aero(), Db().thrust_map);
  EXPECT_FALSE(s.feasible);
  EXPECT_TRUE(Has(s.active_constraints, "stall"));
  EXPECT_EQ(s.condition.alpha_deg, 5.0);
}

TEST(LevelTrim, PlaneAtRestHasNoLift) {
  const auto s = LevelTrim(FlightMode::kPlane, 0.0, Aero(), Db().thrust_map);
  EXPECT_FALSE(s.feasible);
  EXPECT_TRUE(Has(s.active_constraints, "no_lift"));
}

TEST(LevelTrim, HybridLowSpeed) {
  const auto s = LevelTrim(FlightMode::kHybrid, 5.0, Aero(), Db().thrust_map);
  ASSERT_TRUE(s.feasible) << s.reason;
  ExpectBalanced(s);
  // Closed form at alpha = 0: T_fwd = D, T_vert = W - L.
  const auto f = LiftDragForces(Db().aero, s.condition, Db().atmosphere, Db().vehicle);
  EXPECT_NEAR(s.thrust_fwd, f.drag, 1e-9);
  EXPECT_NEAR(s.thrust_vert, 16.52004 - f.lift, 1e-6);
}

TEST(LevelTrim, HybridCruiseLacksForwardThrust) {
  const auto s = LevelTrim(FlightMode::kHybrid, 11.0, Aero(), Db().thrust_map);
  EXPECT_FALSE(s.feasible);
  EXPECT_TRUE(Has(s.active_constraints, "thrust"));
  EXPECT_EQ(s.condition.esc_fwd, 2000.0);
}

TEST(LevelTrim, ThrustSplitPriority) {
  TrimOptions o;
  o.pitch_priority = PitchPriority::kThrustSplitFirst;
  const auto s = LevelTrim(FlightMode::kHybrid, 5.0, Aero(), Db().thrust_map, 0.0, o);
  ASSERT_TRUE(s.feasible) << s.reason;
  EXPECT_EQ(s.condition.elevator, 0.0);
  EXPECT_NE(s.condition.pitch_thrust_split, 0.0);
  ExpectBalanced(s);
}

TEST(LevelTrim, RejectsSpeedsPastTheTopBucket) {
  try {
    LevelTrim(FlightMode::kPlane, 16.5, Aero(), Db().thrust_map);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfEnvelope);
  }
  EXPECT_THROW(LevelTrim(FlightMode::kPlane, -1.0, Aero(), Db().thrust_map), Error);
}

TEST(TrimProperty, FeasibleSolutionsCloseTheBalance) {
  int feasible = 0;
  for (FlightMode m : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    for (double v : {0.0, 5.0, 11.0, 15.0}) {
      for (double a : {-5.0, 0.0, 5.0}) {
        const auto s = LevelTrim(m, v, Aero(), Db().thrust_map, a);
        EXPECT_EQ(s.feasible, s.active_constraints.empty());
        if (!s.feasible) continue;
        ++feasible;
        EXPECT_LT(std::fabs(s.residual_x), kForceResidualLimit);
        EXPECT_LT(std::fabs(s.residual_z), kForceResidualLimit);
        EXPECT_LT(std::fabs(s.residual_my), kMomentResidualLimit);
        ExpectBalanced(s);
      }
    }
  }
  EXPECT_GT(feasible, 3);
}

TEST(TrimProperty, PlaneSurplusIncreasesWithAlpha) {
  for (double v : {11.0, 15.0}) {
    double prev = PlaneLiftSurplus(Aero(), -5.0, v);
    for (double a = -4.5; a <= 10.0; a += 0.5) {
      const double s = PlaneLiftSurplus(Aero(), a, v);
      EXPECT_GT(s, prev) << v << " " << a;
      prev = s;
    }
  }
}

TEST(Evaluator, SourcesAndBounds) {
  EXPECT_EQ(Aero().SourceAt(FlightMode::kHybrid, 3.0), CoefficientSource::kFade);
  EXPECT_EQ(Aero().SourceAt(FlightMode::kHybrid, 5.0), CoefficientSource::kBucket);
  EXPECT_EQ(Aero().SourceAt(FlightMode::kHybrid, 9.0), CoefficientSource::kMesh);
  EXPECT_EQ(Aero().StallAlpha(FlightMode::kPlane, 5.0), 5.0);
  EXPECT_EQ(Aero().StallAlpha(FlightMode::kPlane, 8.0), 5.0);
  EXPECT_EQ(Aero().StallAlpha(FlightMode::kPlane, 13.0), 10.0);
  EXPECT_EQ(Aero().MinAlpha(FlightMode::kPlane, 13.0), -5.0);
  EXPECT_THROW(Aero().SourceAt(FlightMode::kPlane, 17.0), Error);
}

TEST(Evaluator, MeshMatchesBucketsOnGridLines) {
  FlightCondition c;
  c.mode = FlightMode::kHybrid;
  for (double v : {5.0, 11.0, 15.0}) {
    for (double a : {-5.0, 0.0, 5.0}) {
      c.airspeed = v;
      c.alpha_deg = a;
      const auto got = Aero().Forces(c);
      const auto want = AssembleAeroForces(CoefficientsFor(Db().aero, c), c,
                                           Db().atmosphere, Db().vehicle);
      EXPECT_NEAR(got.lift, want.lift, 1e-12);
      EXPECT_NEAR(got.drag, want.drag, 1e-12);
    }
  }
}

TEST(Evaluator, MeshBetweenBuckets) {
  const auto cl = BuildMesh(Db().aero, FlightMode::kHybrid, CoefficientKind::kLift);
  const auto k = Aero().Coefficients(FlightMode::kHybrid, -4.0, 9.0);
  EXPECT_NEAR(k.cl, Interp(cl, -4.0, 9.0), 1e-12);
}

TEST(Evaluator, FadeScalesLinearlyBelowLowestBucket) {
  FlightCondition c;
  c.mode = FlightMode::kHybrid;
  c.alpha_deg = 0.0;
  c.airspeed = 5.0;
  const auto at5 = Aero().Forces(c);
  for (double v : {1.0, 2.5, 4.0}) {
    c.airspeed = v;
    const auto f = Aero().Forces(c);
    EXPECT_NEAR(f.lift, at5.lift * v / 5.0, 1e-12);
    EXPECT_NEAR(f.drag, at5.drag * v / 5.0, 1e-12);
    EXPECT_NEAR(f.pitch_moment, at5.pitch_moment * v / 5.0, 1e-12);
  }
  c.airspeed = 0.0;
  EXPECT_EQ(Aero().Forces(c).lift, 0.0);
}

TEST(Transition, ShapeAndEndpoints) {
  const auto t = Transition(0.0, 11.0, 12, Aero(), Db().thrust_map);
  EXPECT_TRUE(t.accelerating);
  ASSERT_EQ(t.steps.size(), 12u);
  EXPECT_EQ(t.steps.front().airspeed, 0.0);
  EXPECT_EQ(t.steps.back().airspeed, 11.0);
  EXPECT_EQ(t.steps.front().trim.condition.mode, FlightMode::kQuad);
  EXPECT_NEAR(t.steps.front().trim.thrust_vert, 16.52004, 1e-6);
  const auto& last = t.steps.back().trim;
  EXPECT_EQ(last.condition.mode, FlightMode::kPlane);
  EXPECT_EQ(last.thrust_vert, 0.0);
  EXPECT_TRUE(last.feasible);
  for (size_t i = 1; i < t.steps.size(); ++i) {
    EXPECT_GT(t.steps[i].airspeed, t.steps[i - 1].airspeed);
  }
}

TEST(Transition, DecelerationMirrors) {
  const auto up = Transition(0.0, 11.0, 12, Aero(), Db().thrust_map);
  const auto down = Transition(11.0, 0.0, 12, Aero(), Db().thrust_map);
  EXPECT_FALSE(down.accelerating);
  ASSERT_EQ(up.steps.size(), down.steps.size());
  const size_t n = up.steps.size();
  for (size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(up.steps[i].airspeed, down.steps[n - 1 - i].airspeed, 1e-12);
    EXPECT_NEAR(up.steps[i].trim.thrust_vert, down.steps[n - 1 - i].trim.thrust_vert,
                1e-9);
  }
}

TEST(Transition, InfeasibleStepsCarryConstraints) {
  const auto t = Transition(0.0, 11.0, 12, Aero(), Db().thrust_map);
  for (const auto& s : t.steps) {
    EXPECT_EQ(s.trim.feasible, s.trim.active_constraints.empty()) << s.airspeed;
    if (!s.trim.feasible) EXPECT_FALSE(s.trim.reason.empty());
  }
}

TEST(Transition, MinVerticalThrustPolicyNeverWorseThanHold) {
  TransitionOptions hold, minv;
  minv.alpha_policy = AlphaPolicy::kMinVerticalThrust;
  const auto a = Transition(0.0, 11.0, 12, Aero(), Db().thrust_map, hold);
  const auto b = Transition(0.0, 11.0, 12, Aero(), Db().thrust_map, minv);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (size_t i = 0; i < a.steps.size(); ++i) {
    const auto& ha = a.steps[i].trim;
    const auto& hb = b.steps[i].trim;
    if (ha.feasible && hb.feasible && ha.condition.mode == FlightMode::kHybrid) {
      EXPECT_LE(hb.thrust_vert, ha.thrust_vert + 1e-6) << a.steps[i].airspeed;
    }
  }
}

TEST(Transition, SingleSpeed) {
  const auto t = Transition(5.0, 5.0, 10, Aero(), Db().thrust_map);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_THROW(Transition(0.0, 20.0, 10, Aero(), Db().thrust_map), Error);
  EXPECT_THROW(Transition(0.0, 11.0, 1, Aero(), Db().thrust_map), Error);
}

TEST(Envelope, KnownPoints) {
  const auto plane = Envelope(FlightMode::kPlane, Aero(), Db().thrust_map,
                              {-5, 0, 5, 10}, {5});
  for (const auto& p : plane.points) {
    EXPECT_FALSE(p.feasible);
    EXPECT_EQ(p.binding, "stall") << p.alpha_deg;
  }
  const auto quad = Envelope(FlightMode::kQuad, Aero(), Db().thrust_map, {0}, {0});
  ASSERT_EQ(quad.points.size(), 1u);
  EXPECT_TRUE(quad.points[0].feasible);
  const auto hyb = Envelope(FlightMode::kHybrid, Aero(), Db().thrust_map, {0}, {11});
  EXPECT_FALSE(hyb.points[0].feasible);
  EXPECT_EQ(hyb.points[0].binding, "thrust");
  EXPECT_LT(hyb.points[0].thrust_fwd_max, hyb.points[0].thrust_fwd_required);
}

TEST(EnvelopeProperty, MarginSignMatchesFeasibility) {
  for (FlightMode m : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    const auto map = Envelope(m, Aero(), Db().thrust_map, {-5, -2.5, 0, 2.5, 5, 7.5, 10},
                              {0, 3, 5, 8, 11, 13, 15});
    ASSERT_EQ(map.points.size(), 49u);
    for (const auto& p : map.points) {
      if (p.feasible) {
        EXPECT_GE(p.margin, 0.0) << ToString(m) << " " << p.alpha_deg << " " << p.airspeed;
      } else {
        EXPECT_LT(p.margin, 0.0) << ToString(m) << " " << p.alpha_deg << " " << p.airspeed;
        EXPECT_FALSE(p.binding.empty());
      }
    }
  }
}

TEST(EnvelopeProperty, Deterministic) {
  const auto a = Envelope(FlightMode::kHybrid, Aero(), Db().thrust_map,
                          {-5, 0, 5, 10}, {0, 5, 11, 15});
  const auto b = Envelope(FlightMode::kHybrid, Aero(), Db().thrust_map,
                          {-5, 0, 5, 10}, {0, 5, 11, 15});
  EXPECT_EQ(EnvelopeToJson(a), EnvelopeToJson(b));
}

TEST(Writers, JsonParses) {
  const auto s = LevelTrim(FlightMode::kPlane, 11.0, Aero(), Db().thrust_map);
  auto j = nlohmann::json::parse(TrimToJson(s));
  EXPECT_EQ(j["feasible"], true);
  auto t = nlohmann::json::parse(
      TransitionToJson(Transition(0.0, 11.0, 12, Aero(), Db().thrust_map)));
  EXPECT_EQ(t["steps"].size(), 12u);
  const std::string csv = TransitionToCsv(Transition(0.0, 11.0, 12, Aero(), Db().thrust_map));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
}

}  // namespace
}  // namespace qpaero
