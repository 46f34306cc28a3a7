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
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "json.hpp"
#include "qpaero/database.hpp"
#include "qpaero/error.hpp"
#include "qpaero/meshlut.hpp"

namespace qpaero {
namespace {

const AeroModel& Model() { return BuiltinDatabase().aero; }

const std::vector<CoefficientKind> kAllKinds = {
    CoefficientKind::kLift,           CoefficientKind::kPlaneDrag,
    CoefficientKind::kQuadDrag,       CoefficientKind::kQuadDragQuadratic,
    CoefficientKind::kFormDrag,       CoefficientKind::kPitchStructural,
    CoefficientKind::kDifferentialMoment, CoefficientKind::kElevator,
    CoefficientKind::kRollAileron,    CoefficientKind::kRollRudder,
    CoefficientKind::kYawAileron,     CoefficientKind::kYawRudder,
    CoefficientKind::kSideForce0,     CoefficientKind::kSideForceRudder};

// Independent reference: find the cell, split along the lower-left to
// upper-right diagonal, blend the three corner values with weights from
// Cramer's rule.
double Reference(const AeroModel& m, FlightMode mode, CoefficientKind kind,
                 double a, double v) {
  const std::vector<double> as = {-5, 0, 5, 10}, vs = {5, 11, 15};
  size_t i = 0, j = 0;
  while (i + 2 < as.size() && a > as[i + 1]) ++i;
  while (j + 2 < vs.size() && v > vs[j + 1]) ++j;
  auto val = [&](size_t ia, size_t iv) {
    return BucketCoefficient(m.Bucket(mode, vs[iv]), kind, as[ia]);
  };
  const double s = (a - as[i]) / (as[i + 1] - as[i]);
  const double t = (v - vs[j]) / (vs[j + 1] - vs[j]);
  double x[3], y[3], z[3];
  if (t <= s) {  // lower-right triangle: ll, lr, ur
    x[0] = 0, y[0] = 0, z[0] = val(i, j);
    x[1] = 1, y[1] = 0, z[1] = val(i + 1, j);
    x[2] = 1, y[2] = 1, z[2] = val(i + 1, j + 1);
  } else {  // upper-left triangle: ll, ul, ur
    x[0] = 0, y[0] = 0, z[0] = val(i, j);
    x[1] = 0, y[1] = 1, z[1] = val(i, j + 1);
    x[2] = 1, y[2] = 1, z[2] = val(i + 1, j + 1);
  }
  const double det = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
  const double w1 = ((s - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (t - y[0])) / det;
  const double w2 = ((x[1] - x[0]) * (t - y[0]) - (s - x[0]) * (y[1] - y[0])) / det;
  return (1.0 - w1 - w2) * z[0] + w1 * z[1] + w2 * z[2];
}

TEST(Mesh, HybridWorkedExample) {
  auto cl = BuildMesh(Model(), FlightMode::kHybrid, CoefficientKind::kLift);
  auto cdp = BuildMesh(Model(), FlightMode::kHybrid, CoefficientKind::kPlaneDrag);
  auto cdq = BuildMesh(Model(), FlightMode::kHybrid, CoefficientKind::kQuadDrag);
  EXPECT_NEAR(Interp(cl, -4.0, 9.0), -0.2838, 0.002);
  EXPECT_NEAR(Interp(cdp, -4.0, 9.0), 0.5893, 0.002);
  EXPECT_NEAR(Interp(cdq, -4.0, 9.0), 0.4534, 0.002);
  const auto& p = cl.triangles[Locate(cl, -4.0, 9.0)].plane;
  EXPECT_NEAR(p.a, 0.0923, 0.002);
  EXPECT_NEAR(p.b, 0.0860, 0.002);
  EXPECT_NEAR(p.c, -0.9920, 0.002);
  EXPECT_NEAR(p.d, -0.6863, 0.002);
}

TEST(Mesh, Shape) {
  auto m = BuildMesh(Model(), FlightMode::kPlane, CoefficientKind::kLift);
  EXPECT_EQ(m.vertices.size(), 12u);
  EXPECT_EQ(m.triangles.size(), 12u);
  for (const auto& t : m.triangles) {
    const auto& p = t.plane;
    EXPECT_NEAR(p.a * p.a + p.b * p.b + p.c * p.c, 1.0, 1e-12);
  }
}

TEST(Mesh, MatchesIndependentBarycentric) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ua(-5.0, 10.0), uv(5.0, 15.0);
  for (FlightMode mode : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    for (CoefficientKind kind : kAllKinds) {
      auto mesh = BuildMesh(Model(), mode, kind);
      for (int i = 0; i < 100; ++i) {
        const double a = ua(rng), v = uv(rng);
        EXPECT_NEAR(Interp(mesh, a, v), Reference(Model(), mode, kind, a, v), 1e-10)
            << ToString(mode) << " " << ToString(kind) << " " << a << " " << v;
      }
    }
  }
}

TEST(Mesh, OutsideHull) {
  auto m = BuildMesh(Model(), FlightMode::kHybrid, CoefficientKind::kLift);
  for (auto [a, v] : std::vector<std::pair<double, double>>{
           {-6.0, 9.0}, {11.0, 9.0}, {0.0, 4.0}, {0.0, 16.0}}) {
    try {
      Interp(m, a, v);
      FAIL() << a << " " << v;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOutOfEnvelope);
    }
  }
}

TEST(Mesh, BuildErrors) {
  EXPECT_THROW(BuildMesh(Model(), FlightMode::kPlane, CoefficientKind::kLift, {0.0},
                         {5.0, 11.0}),
               Error);
  EXPECT_THROW(BuildMesh(Model(), FlightMode::kPlane, CoefficientKind::kLift,
                         {5.0, 0.0}, {5.0, 11.0}),
               Error);
  try {
    BuildMesh(Model(), FlightMode::kPlane, CoefficientKind::kLift, {0.0, 5.0},
              {5.0, 8.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBuild);
  }
  MeshVertex p{0, 0, 1};
  EXPECT_THROW(PlaneThrough(p, {1, 1, 2}, {2, 2, 3}), Error);
}

TEST(Mesh, KindNames) {
  std::set<std::string_view> seen;
  for (CoefficientKind k : kAllKinds) {
    auto back = ParseCoefficientKind(ToString(k));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, k);
    seen.insert(ToString(k));
  }
  EXPECT_EQ(seen.size(), kAllKinds.size());
  EXPECT_FALSE(ParseCoefficientKind("cx").has_value());
}

TEST(Mesh, JsonListsPlanes) {
  auto m = BuildMesh(Model(), FlightMode::kHybrid, CoefficientKind::kLift);
  auto j = nlohmann::json::parse(MeshToJson(m));
  EXPECT_EQ(j["mode"], "hybrid");
  EXPECT_EQ(j["triangles"].size(), 12u);
  EXPECT_EQ(j["triangles"][0]["plane"].size(), 4u);
}

TEST(MeshProperty, VertexExactness) {
  for (FlightMode mode : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    for (CoefficientKind kind : kAllKinds) {
      auto mesh = BuildMesh(Model(), mode, kind);
      for (const auto& t : mesh.triangles) {
        for (size_t vi : t.vertices) {
          const auto& v = mesh.vertices[vi];
          EXPECT_NEAR(t.plane.Solve(v.alpha_deg, v.airspeed), v.value,
                      1e-12 * std::max(1.0, std::fabs(v.value)));
        }
      }
      for (const auto& v : mesh.vertices) {
        const double expected =
            BucketCoefficient(Model().Bucket(mode, v.airspeed), kind, v.alpha_deg);
        EXPECT_NEAR(Interp(mesh, v.alpha_deg, v.airspeed), expected,
                    1e-12 * std::max(1.0, std::fabs(expected)));
      }
    }
  }
}

// Triangles sharing an edge agree along it.
TEST(MeshProperty, EdgeContinuity) {
  for (FlightMode mode : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    for (CoefficientKind kind : kAllKinds) {
      auto mesh = BuildMesh(Model(), mode, kind);
      std::map<std::pair<size_t, size_t>, std::vector<size_t>> edges;
      for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& v = mesh.triangles[ti].vertices;
        for (int e = 0; e < 3; ++e) {
          size_t p = v[e], q = v[(e + 1) % 3];
          edges[{std::min(p, q), std::max(p, q)}].push_back(ti);
        }
      }
      size_t shared = 0;
      for (const auto& [edge, tris] : edges) {
        if (tris.size() != 2) continue;
        ++shared;
        const auto& p = mesh.vertices[edge.first];
        const auto& q = mesh.vertices[edge.second];
        for (double s : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0}) {
          const double a = p.alpha_deg + s * (q.alpha_deg - p.alpha_deg);
          const double v = p.airspeed + s * (q.airspeed - p.airspeed);
          const double z0 = mesh.triangles[tris[0]].plane.Solve(a, v);
          const double z1 = mesh.triangles[tris[1]].plane.Solve(a, v);
          EXPECT_NEAR(z0, z1, 1e-12 * std::max(1.0, std::fabs(z0)));
        }
      }
      // 3x2 cells: 6 diagonals, 4 interior vertical and 3 horizontal edges.
      EXPECT_EQ(shared, 13u);
    }
  }
}

TEST(MeshProperty, ContinuousAcrossGridLines) {
  auto mesh = BuildMesh(Model(), FlightMode::kHybrid, CoefficientKind::kPlaneDrag);
  const double h = 1e-9;
  for (double v : {6.0, 9.0, 11.0, 13.0}) {
    for (double a : {0.0, 5.0}) {
      EXPECT_NEAR(Interp(mesh, a - h, v), Interp(mesh, a + h, v), 1e-8);
    }
  }
  for (double a : {-3.0, 2.0, 7.0}) {
    EXPECT_NEAR(Interp(mesh, a, 11.0 - h), Interp(mesh, a, 11.0 + h), 1e-8);
  }
}

}  // namespace
}  // namespace qpaero
