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

#include "qpaero/meshlut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "qpaero/error.hpp"

namespace qpaero {
namespace {

struct KindName {
  CoefficientKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {CoefficientKind::kLift, "cl"},
    {CoefficientKind::kPlaneDrag, "cdp"},
    {CoefficientKind::kQuadDrag, "cdq"},
    {CoefficientKind::kQuadDragQuadratic, "cdq2"},
    {CoefficientKind::kFormDrag, "cdpf"},
    {CoefficientKind::kPitchStructural, "cm"},
    {CoefficientKind::kDifferentialMoment, "mdt"},
    {CoefficientKind::kElevator, "cmde"},
    {CoefficientKind::kRollAileron, "crm_da"},
    {CoefficientKind::kRollRudder, "crm_dr"},
    {CoefficientKind::kYawAileron, "cym_da"},
    {CoefficientKind::kYawRudder, "cym_dr"},
    {CoefficientKind::kSideForce0, "csf0"},
    {CoefficientKind::kSideForceRudder, "csf_dr"},
};

// Barycentric weights of (x, y) in triangle (p0, p1, p2).
std::array<double, 3> Barycentric(const MeshVertex& p0, const MeshVertex& p1,
                                  const MeshVertex& p2, double x, double y) {
  const double det = (p1.airspeed - p2.airspeed) * (p0.alpha_deg - p2.alpha_deg) +
                     (p2.alpha_deg - p1.alpha_deg) * (p0.airspeed - p2.airspeed);
  const double w0 = ((p1.airspeed - p2.airspeed) * (x - p2.alpha_deg) +
                     (p2.alpha_deg - p1.alpha_deg) * (y - p2.airspeed)) / det;
  const double w1 = ((p2.airspeed - p0.airspeed) * (x - p2.alpha_deg) +
                     (p0.alpha_deg - p2.alpha_deg) * (y - p2.airspeed)) / det;
  return {w0, w1, 1.0 - w0 - w1};
}

}  // namespace

std::string_view ToString(CoefficientKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::optional<CoefficientKind> ParseCoefficientKind(std::string_view text) {
  for (const auto& k : kKindNames) {
    if (text == k.name) return k.kind;
  }
  return std::nullopt;
}

double BucketCoefficient(const BucketModel& b, CoefficientKind kind,
                         double alpha_deg) {
  switch (kind) {
    case CoefficientKind::kLift: return b.lift.Evaluate(alpha_deg);
    case CoefficientKind::kPlaneDrag: return b.plane_drag.Evaluate(alpha_deg);
    case CoefficientKind::kQuadDrag: return b.quad_drag_linear.Evaluate(alpha_deg);
    case CoefficientKind::kQuadDragQuadratic:
      return b.quad_drag_quadratic.Evaluate(alpha_deg);
    case CoefficientKind::kFormDrag: return b.form_drag.Evaluate(alpha_deg);
    case CoefficientKind::kPitchStructural: return b.moment.StructuralCm(alpha_deg);
    case CoefficientKind::kDifferentialMoment:
      return b.moment.differential_thrust.Evaluate(alpha_deg);
    case CoefficientKind::kElevator: return b.moment.cm_elevator;
    case CoefficientKind::kRollAileron: return b.lateral.crm_aileron;
    case CoefficientKind::kRollRudder: return b.lateral.crm_rudder;
    case CoefficientKind::kYawAileron: return b.lateral.cym_aileron;
    case CoefficientKind::kYawRudder: return b.lateral.cym_rudder;
    case CoefficientKind::kSideForce0: return b.lateral.csf0;
    case CoefficientKind::kSideForceRudder: return b.lateral.csf_rudder;
  }
  return 0.0;
}

MeshPlane PlaneThrough(const MeshVertex& p0, const MeshVertex& p1,
                       const MeshVertex& p2) {
  const double ux = p1.alpha_deg - p0.alpha_deg, uy = p1.airspeed - p0.airspeed,
               uz = p1.value - p0.value;
  const double vx = p2.alpha_deg - p0.alpha_deg, vy = p2.airspeed - p0.airspeed,
               vz = p2.value - p0.value;
  double a = uy * vz - uz * vy;
  double b = uz * vx - ux * vz;
  double c = ux * vy - uy * vx;
  const double norm = std::sqrt(a * a + b * b + c * c);
  if (c == 0.0 || norm == 0.0) {
    throw Error(ErrorCode::kBuild, "degenerate mesh triangle");
  }
  a /= norm;
  b /= norm;
  c /= norm;
  const double lead = a != 0.0 ? a : (b != 0.0 ? b : c);
  if (lead < 0.0) {
    a = -a;
    b = -b;
    c = -c;
  }
  MeshPlane p{a, b, c, 0.0};
  p.d = -(a * p0.alpha_deg + b * p0.airspeed + c * p0.value);
  return p;
}

TriMesh BuildMesh(const AeroModel& model, FlightMode mode, CoefficientKind kind,
                  const std::vector<double>& alphas,
                  const std::vector<double>& airspeeds) {
  if (alphas.size() < 2 || airspeeds.size() < 2) {
    throw Error(ErrorCode::kBuild, "mesh needs at least a 2x2 grid");
  }
  if (!std::is_sorted(alphas.begin(), alphas.end()) ||
      !std::is_sorted(airspeeds.begin(), airspeeds.end()) ||
      std::adjacent_find(alphas.begin(), alphas.end()) != alphas.end() ||
      std::adjacent_find(airspeeds.begin(), airspeeds.end()) != airspeeds.end()) {
    throw Error(ErrorCode::kBuild, "mesh grid lines must be strictly increasing");
  }
  TriMesh mesh;
  mesh.mode = mode;
  mesh.kind = kind;
  mesh.alphas = alphas;
  mesh.airspeeds = airspeeds;
  for (double v : airspeeds) {
    // Throws kBuild naming the missing bucket.
    const BucketModel& b = model.Bucket(mode, v);
    for (double a : alphas) {
      mesh.vertices.push_back({a, v, BucketCoefficient(b, kind, a)});
    }
  }
  const size_t na = alphas.size();
  for (size_t iv = 0; iv + 1 < airspeeds.size(); ++iv) {
    for (size_t ia = 0; ia + 1 < na; ++ia) {
      const size_t ll = iv * na + ia, lr = ll + 1;
      const size_t ul = ll + na, ur = ul + 1;
      for (const auto& tri : {std::array<size_t, 3>{ll, lr, ur},
                              std::array<size_t, 3>{ll, ul, ur}}) {
        MeshTriangle t;
        t.vertices = tri;
        t.plane = PlaneThrough(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                               mesh.vertices[tri[2]]);
        mesh.triangles.push_back(t);
      }
    }
  }
  return mesh;
}

size_t Locate(const TriMesh& mesh, double alpha_deg, double airspeed) {
  const double eps = 1e-12;
  if (!(alpha_deg >= mesh.alphas.front() - eps &&
        alpha_deg <= mesh.alphas.back() + eps &&
        airspeed >= mesh.airspeeds.front() - eps &&
        airspeed <= mesh.airspeeds.back() + eps)) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "(%.6g deg, %.6g m/s) outside mesh [%g, %g] deg x [%g, %g] m/s",
                  alpha_deg, airspeed, mesh.alphas.front(), mesh.alphas.back(),
                  mesh.airspeeds.front(), mesh.airspeeds.back());
    throw Error(ErrorCode::kOutOfEnvelope, buf);
  }
  for (size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const auto w = Barycentric(mesh.vertices[t.vertices[0]],
                               mesh.vertices[t.vertices[1]],
                               mesh.vertices[t.vertices[2]], alpha_deg, airspeed);
    if (w[0] >= -eps && w[1] >= -eps && w[2] >= -eps) return i;
  }
  throw Error(ErrorCode::kInternal, "mesh does not tile its grid");
}

double Interp(const TriMesh& mesh, double alpha_deg, double airspeed) {
  return mesh.triangles[Locate(mesh, alpha_deg, airspeed)].plane.Solve(alpha_deg,
                                                                       airspeed);
}

std::string MeshToJson(const TriMesh& mesh) {
  using nlohmann::json;
  json j;
  j["mode"] = std::string(ToString(mesh.mode));
  j["coefficient"] = std::string(ToString(mesh.kind));
  j["alphas_deg"] = mesh.alphas;
  j["airspeeds_mps"] = mesh.airspeeds;
  j["triangles"] = json::array();
  for (size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    json tri;
    tri["id"] = i;
    tri["vertices"] = json::array();
    for (size_t v : t.vertices) {
      const auto& p = mesh.vertices[v];
      tri["vertices"].push_back({p.alpha_deg, p.airspeed, p.value});
    }
    tri["plane"] = {t.plane.a, t.plane.b, t.plane.c, t.plane.d};
    j["triangles"].push_back(tri);
  }
  return j.dump(2) + "\n";
}

}  // namespace qpaero
