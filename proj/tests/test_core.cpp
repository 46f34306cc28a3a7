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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qpaero/core.hpp"
#include "qpaero/error.hpp"

namespace qpaero {
namespace {

TEST(Reynolds, BucketSpeeds) {
  // Re = V c / nu with c = 0.1524, nu = 1.5111e-5.
  EXPECT_NEAR(Reynolds(5.0, 0.1524, 1.5111e-5), 50427.0, 1.0);
  EXPECT_NEAR(Reynolds(11.0, 0.1524, 1.5111e-5), 110939.0, 1.0);
  EXPECT_NEAR(Reynolds(15.0, 0.1524, 1.5111e-5), 151281.0, 1.0);
}

TEST(Reynolds, ZeroAirspeedIsZero) {
  EXPECT_EQ(Reynolds(0.0, 0.1524, 1.5111e-5), 0.0);
}

TEST(Reynolds, RejectsBadInputs) {
  try {
    Reynolds(-1.0, 0.15, 1.5e-5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  EXPECT_THROW(Reynolds(5.0, 0.15, 0.0), Error);
  EXPECT_THROW(Reynolds(5.0, -0.15, 1.5e-5), Error);
}

TEST(Geometry, DerivedQuantities) {
  VehicleGeometry g;
  EXPECT_NEAR(g.planform_area(), 1.2192 * 0.1524, 1e-15);
  EXPECT_NEAR(g.aspect_ratio(), 8.0, 1e-12);
  EXPECT_NEAR(g.weight(), 16.52004, 1e-9);
}

TEST(Angles, WingAndPropAlpha) {
  EXPECT_DOUBLE_EQ(WingAlpha(0.0, 5.0), 5.0);
  EXPECT_DOUBLE_EQ(WingAlpha(-4.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(PropAlpha(3.0, PropulsionModule::kForward), 3.0);
  EXPECT_DOUBLE_EQ(PropAlpha(3.0, PropulsionModule::kVertical), 93.0);
}

TEST(Esc, ThrottleMapping) {
  EXPECT_DOUBLE_EQ(ThrottleToEsc(0.0), 1000.0);
  EXPECT_DOUBLE_EQ(ThrottleToEsc(55.0), 1550.0);
  EXPECT_DOUBLE_EQ(ThrottleToEsc(100.0), 2000.0);
}

TEST(FlightModeNames, RoundTrip) {
  for (FlightMode m : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    auto parsed = ParseFlightMode(ToString(m));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, m);
  }
  EXPECT_FALSE(ParseFlightMode("glider").has_value());
}

TEST(Validate, ConditionChecks) {
  FlightCondition c;
  EXPECT_NO_THROW(Validate(c));
  c.esc_quad = 1500.0;
  try {
    Validate(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kContract);
  }
  c = {};
  c.elevator = 1.2;
  EXPECT_THROW(Validate(c), Error);
  c = {};
  c.esc_fwd = 2100.0;
  EXPECT_THROW(Validate(c), Error);
  c = {};
  c.mode = FlightMode::kQuad;
  c.esc_fwd = 1400.0;
  EXPECT_THROW(Validate(c), Error);
  c = {};
  c.airspeed = -1.0;
  EXPECT_THROW(Validate(c), Error);
}

TEST(Validate, AtmosphereAndGeometry) {
  Atmosphere a;
  a.density = 0.0;
  EXPECT_THROW(Validate(a), Error);
  VehicleGeometry g;
  g.wing_chord = -0.1;
  EXPECT_THROW(Validate(g), Error);
}

TEST(Frames, ZeroAlphaIsAxisFlip) {
  WindForces w{3.0, 1.5, 0.25};
  ForcesMoments b = WindToBody(w, 0.0);
  EXPECT_EQ(b.frame, Frame::kBody);
  EXPECT_NEAR(b.fx, -1.5, 1e-15);
  EXPECT_NEAR(b.fy, 0.25, 1e-15);
  EXPECT_NEAR(b.fz, -3.0, 1e-15);
}

TEST(Frames, BodyToWindRejectsWindTag) {
  ForcesMoments f;
  f.frame = Frame::kWind;
  try {
    BodyToWind(f, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kContract);
  }
}

// Wind axes: x along the relative wind, z down. The body vector is R_y(a)
// applied to (-D, SF, -L).
TEST(Frames, MatchesRotationMatrix) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> f(-50.0, 50.0), a(-30.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    WindForces w{f(rng), f(rng), f(rng)};
    double alpha = a(rng);
    double s = std::sin(alpha * M_PI / 180.0), c = std::cos(alpha * M_PI / 180.0);
    double wx = -w.drag, wy = w.side_force, wz = -w.lift;
    double bx = c * wx - s * wz;
    double by = wy;
    double bz = s * wx + c * wz;
    ForcesMoments b = WindToBody(w, alpha);
    EXPECT_NEAR(b.fx, bx, 1e-12);
    EXPECT_NEAR(b.fy, by, 1e-12);
    EXPECT_NEAR(b.fz, bz, 1e-12);
  }
}

TEST(FramesProperty, NormPreservedAndInverse) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f(-100.0, 100.0), a(-90.0, 90.0);
  for (int i = 0; i < 2000; ++i) {
    ForcesMoments b;
    b.fx = f(rng);
    b.fy = f(rng);
    b.fz = f(rng);
    double alpha = a(rng);
    WindForces w = BodyToWind(b, alpha);
    double n_body = std::sqrt(b.fx * b.fx + b.fy * b.fy + b.fz * b.fz);
    double n_wind = std::sqrt(w.lift * w.lift + w.drag * w.drag +
                              w.side_force * w.side_force);
    EXPECT_NEAR(n_body, n_wind, 1e-10 * std::max(1.0, n_body));
    ForcesMoments back = WindToBody(w, alpha);
    EXPECT_NEAR(back.fx, b.fx, 1e-10);
    EXPECT_NEAR(back.fy, b.fy, 1e-10);
    EXPECT_NEAR(back.fz, b.fz, 1e-10);
  }
}

TEST(Errors, CodeNamesAreDistinct) {
  EXPECT_EQ(ErrorCodeName(ErrorCode::kOk), "ok");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kStall), "stall");
  EXPECT_NE(ErrorCodeName(ErrorCode::kFormat), ErrorCodeName(ErrorCode::kIo));
  InfeasibleError e("x", 1.0, 2.0);
  EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  EXPECT_EQ(e.achievable_lo(), 1.0);
  EXPECT_EQ(e.achievable_hi(), 2.0);
}

}  // namespace
}  // namespace qpaero
