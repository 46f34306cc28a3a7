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

#include "model_compare.hpp"
#include "qpaero/database.hpp"
#include "qpaero/datared.hpp"
#include "qpaero/error.hpp"
#include "qpaero/fitting.hpp"

namespace qpaero {
namespace {

TEST(PolyFit, RecoversExactPolynomials) {
  std::vector<double> xs = {-5, -2.5, 0, 2.5, 5, 7.5, 10};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(0.3154 - 0.001331 * x + 0.001534 * x * x);
  auto f = PolyFit(xs, ys, 2);
  ASSERT_EQ(f.coefficients.size(), 3u);
  EXPECT_NEAR(f.coefficients[0], 0.3154, 1e-14);
  EXPECT_NEAR(f.coefficients[1], -0.001331, 1e-14);
  EXPECT_NEAR(f.coefficients[2], 0.001534, 1e-14);
  EXPECT_EQ(f.r_squared, 1.0);
  EXPECT_EQ(f.rmse, 0.0);
  EXPECT_EQ(f.n_points, 7u);
}

TEST(PolyFit, CubicOnEscScale) {
  std::vector<double> xs, ys;
  for (double nu = 1000; nu <= 2000; nu += 100) {
    xs.push_back(nu);
    ys.push_back(61.10 - 0.1420 * nu + 1.034e-04 * nu * nu - 2.246e-08 * nu * nu * nu);
  }
  auto f = PolyFit(xs, ys, 3);
  EXPECT_NEAR(f.coefficients[3], -2.246e-08, 2.246e-08 * 1e-8);
  EXPECT_NEAR(f.coefficients[0], 61.10, 61.10 * 1e-8);
}

// Simple linear regression by the textbook closed form.
TEST(PolyFit, LinearMatchesClosedForm) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> xs, ys;
  for (int i = 0; i < 40; ++i) {
    xs.push_back(-5.0 + 0.4 * i);
    ys.push_back(0.3 + 0.1 * xs.back() + noise(rng));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  auto f = PolyFit(xs, ys, 1);
  EXPECT_NEAR(f.coefficients[1], slope, 1e-12);
  EXPECT_NEAR(f.coefficients[0], icpt, 1e-12);
  double ss = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icpt + slope * xs[i]);
    ss += r * r;
  }
  EXPECT_NEAR(f.r_squared, 1.0 - ss / syy, 1e-12);
  EXPECT_NEAR(f.rmse, std::sqrt(ss / xs.size()), 1e-12);
}

TEST(PolyFit, ZeroInterceptThroughOrigin) {
  std::vector<double> xs = {-0.8, -0.4, 0.4, 0.8};
  std::vector<double> ys = {-0.66, -0.33, 0.34, 0.67};
  auto f = PolyFit(xs, ys, 1, Intercept::kZero);
  EXPECT_EQ(f.coefficients[0], 0.0);
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
  }
  EXPECT_NEAR(f.coefficients[1], sxy / sxx, 1e-14);
}

TEST(PolyFit, Errors) {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kOk;
  };
  EXPECT_EQ(code([] { PolyFit({1, 2}, {1}, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([] { PolyFit({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, 4); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([] { PolyFit({1, 2}, {1, 2}, 2); }), ErrorCode::kSingular);
  EXPECT_EQ(code([] { PolyFit({1, 1, 1}, {1, 2, 3}, 1); }), ErrorCode::kSingular);
  EXPECT_EQ(code([] { PolyFit({1, 2, NAN}, {1, 2, 3}, 1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([] { PolyFit({1, 1, 2, 2}, {1, 2, 3, 4}, 2); }),
            ErrorCode::kSingular);
}

// Least-squares residuals are orthogonal to every column of the design
// matrix: sum r_i x_i^k = 0 for k = 0..degree.
TEST(PolyFitProperty, ResidualOrthogonality) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = 1 + trial % 3;
    const double lo = -10.0 + 5.0 * u(rng), span = 2.0 + 10.0 * (u(rng) + 1.0);
    std::vector<double> xs, ys;
    const int n = 8 + trial % 20;
    for (int i = 0; i < n; ++i) {
      xs.push_back(lo + span * (0.5 + 0.5 * u(rng)));
      ys.push_back(3.0 * u(rng) + xs.back() * u(rng));
    }
    const auto f = PolyFit(xs, ys, degree);
    for (int k = 0; k <= degree; ++k) {
      double dot = 0.0, scale = 0.0;
      for (int i = 0; i < n; ++i) {
        const double r = ys[i] - f.Evaluate(xs[i]);
        const double xk = std::pow(xs[i], k);
        dot += r * xk;
        scale += std::fabs(ys[i] * xk);
      }
      EXPECT_NEAR(dot / scale, 0.0, 1e-9) << "trial " << trial << " k " << k;
    }
    EXPECT_GE(f.r_squared, 0.0);
    EXPECT_LE(f.r_squared, 1.0);
  }
}

TEST(PolyFitProperty, ZeroInterceptOrthogonality) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs, ys;
    for (int i = 0; i < 12; ++i) {
      xs.push_back(u(rng));
      ys.push_back(0.7 * xs.back() + 0.1 * u(rng));
    }
    const auto f = PolyFit(xs, ys, 1, Intercept::kZero);
    double dot = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) dot += (ys[i] - f.Evaluate(xs[i])) * xs[i];
    EXPECT_NEAR(dot, 0.0, 1e-12);
  }
}

TEST(ThrustTable, RoundTripShippedRows) {
  const ThrustMap& map = BuiltinDatabase().thrust_map;
  const auto fit = FitThrustTable(testing::SampleThrust(map));
  EXPECT_TRUE(fit.errors.empty());
  ASSERT_TRUE(fit.map.has_value());
  size_t checked = 0;
  const auto bad = testing::CompareThrust(fit, map, 1e-6, &checked);
  EXPECT_EQ(checked, 36u * 4u);
  for (const auto& m : bad) ADD_FAILURE() << m.where << " " << m.got << " vs " << m.want;
}

TEST(ThrustTable, ThinCellsAreReported) {
  std::vector<ThrustSamplePoint> s = {
      {0, 0, 1000, 0.1}, {0, 0, 1500, 3.0}, {0, 0, 2000, 8.0}, {0, 0, 2000, 8.1}};
  const auto fit = FitThrustTable(s);
  EXPECT_TRUE(fit.rows.empty());
  ASSERT_EQ(fit.errors.size(), 1u);
  EXPECT_FALSE(fit.map.has_value());
}

class AeroRoundTrip : public ::testing::TestWithParam<QuadDragForm> {};

TEST_P(AeroRoundTrip, RecoversShippedTables) {
  const auto& db = BuiltinDatabase();
  AeroModel model = db.aero;
  model.set_quad_drag_form(GetParam());
  const auto points = SampleAeroPoints(model, db.vehicle, db.atmosphere,
                                       {-5.0, 0.0, 5.0, 10.0}, {5.0, 11.0, 15.0});
  const auto fit = FitAeroSuite(points);
  for (const auto& b : fit.report.buckets) {
    EXPECT_TRUE(b.fitted) << ToString(b.mode) << " " << b.airspeed;
    for (const auto& m : b.messages) ADD_FAILURE() << m;
  }
  size_t checked = 0;
  const auto bad = testing::CompareAero(fit.model, model, 1e-6, GetParam(), &checked);
  EXPECT_GT(checked, 150u);
  for (const auto& m : bad) ADD_FAILURE() << m.where << " " << m.got << " vs " << m.want;
}

INSTANTIATE_TEST_SUITE_P(QuadDragForms, AeroRoundTrip,
                         ::testing::Values(QuadDragForm::kLinear,
                                           QuadDragForm::kQuadratic),
                         [](const auto& info) {
                           return info.param == QuadDragForm::kLinear
                                      ? std::string("Linear")
                                      : std::string("Quadratic");
                         });

TEST(AeroFit, StallPointsExcluded) {
  const auto& db = BuiltinDatabase();
  const auto points = SampleAeroPoints(db.aero, db.vehicle, db.atmosphere,
                                       {-5.0, 0.0, 5.0, 10.0}, {5.0});
  const auto fit = FitAeroSuite(points);
  for (const auto& b : fit.report.buckets) {
    EXPECT_EQ(b.n_excluded_stall, 1u);
    EXPECT_EQ(b.n_points, 3u);
  }
}

TEST(AeroFit, MissingPlaneDataIsReported) {
  const auto& db = BuiltinDatabase();
  auto points = SampleAeroPoints(db.aero, db.vehicle, db.atmosphere,
                                 {-5.0, 0.0, 5.0}, {11.0});
  std::vector<ReducedPoint> hybrid_only;
  for (const auto& p : points) {
    if (p.mode == FlightMode::kHybrid) hybrid_only.push_back(p);
  }
  const auto fit = FitAeroSuite(hybrid_only);
  ASSERT_EQ(fit.report.buckets.size(), 1u);
  EXPECT_FALSE(fit.report.buckets[0].fitted);
  EXPECT_FALSE(fit.report.buckets[0].messages.empty());
}

TEST(AeroFit, UnderdeterminedBucket) {
  const auto& db = BuiltinDatabase();
  auto points = SampleAeroPoints(db.aero, db.vehicle, db.atmosphere, {0.0, 5.0}, {11.0});
  const auto fit = FitAeroSuite(points);
  for (const auto& b : fit.report.buckets) EXPECT_FALSE(b.fitted);
}

}  // namespace
}  // namespace qpaero
