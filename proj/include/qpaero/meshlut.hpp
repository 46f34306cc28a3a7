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

// Piecewise-planar lookup of one coefficient over (alpha_V, V_a).
//
// Each rectangular grid cell is split along its (alpha_lo, V_lo) ->
// (alpha_hi, V_hi) diagonal. Cells are numbered row-major with airspeed
// outer; cell k owns triangles 2k (below the diagonal) and 2k+1 (above).
// Every triangle stores the unit-normal plane a*alpha + b*V + c*C + d = 0,
// oriented so the first non-zero of (a, b, c) is positive.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpaero/aero.hpp"

namespace qpaero {

enum class CoefficientKind {
  kLift,
  kPlaneDrag,
  kQuadDrag,            // linear form
  kQuadDragQuadratic,
  kFormDrag,
  kPitchStructural,     // C_M0 + C_Ma a
  kDifferentialMoment,  // M_dT, N*m
  kElevator,
  kRollAileron,
  kRollRudder,
  kYawAileron,
  kYawRudder,
  kSideForce0,
  kSideForceRudder,
};

// Short names: cl, cdp, cdq, cdq2, cdpf, cm, mdt, cmde, crm_da, crm_dr, cym_da,
// cym_dr, csf0, csf_dr.
std::string_view ToString(CoefficientKind kind);
std::optional<CoefficientKind> ParseCoefficientKind(std::string_view text);

// Raw coefficient of one bucket at alpha; no stall check.
double BucketCoefficient(const BucketModel& bucket, CoefficientKind kind,
                         double alpha_deg);

struct MeshVertex {
  double alpha_deg = 0.0;
  double airspeed = 0.0;
  double value = 0.0;
};

struct MeshPlane {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  double Solve(double alpha_deg, double airspeed) const {
    return -(a * alpha_deg + b * airspeed + d) / c;
  }
};

struct MeshTriangle {
  std::array<size_t, 3> vertices{};
  MeshPlane plane;
};

struct TriMesh {
  FlightMode mode = FlightMode::kHybrid;
  CoefficientKind kind = CoefficientKind::kLift;
  std::vector<double> alphas;
  std::vector<double> airspeeds;
  std::vector<MeshVertex> vertices;  // row-major, airspeed outer
  std::vector<MeshTriangle> triangles;
};

inline const std::vector<double> kMeshAlphas = {-5.0, 0.0, 5.0, 10.0};
inline const std::vector<double> kMeshAirspeeds = {5.0, 11.0, 15.0};

// Vertex values come from the bucket polynomials. Throws Error(kBuild) when a
// bucket is missing (named in the message) or the grid has fewer than two
// lines in either direction.
TriMesh BuildMesh(const AeroModel& model, FlightMode mode, CoefficientKind kind,
                  const std::vector<double>& alphas = kMeshAlphas,
                  const std::vector<double>& airspeeds = kMeshAirspeeds);

MeshPlane PlaneThrough(const MeshVertex& p0, const MeshVertex& p1,
                       const MeshVertex& p2);

// Lowest-indexed triangle containing the point. Throws Error(kOutOfEnvelope)
// outside the grid rectangle.
size_t Locate(const TriMesh& mesh, double alpha_deg, double airspeed);

double Interp(const TriMesh& mesh, double alpha_deg, double airspeed);

std::string MeshToJson(const TriMesh& mesh);

}  // namespace qpaero
