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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "model_compare.hpp"
#include "qpaero/aero.hpp"
#include "qpaero/core.hpp"
#include "qpaero/database.hpp"
#include "qpaero/error.hpp"
#include "qpaero/fitting.hpp"
#include "qpaero/meshlut.hpp"
#include "qpaero/propulsion.hpp"
#include "qpaero/trimsim.hpp"
#include "roundtrip.hpp"

namespace {

using namespace qpaero;

const CoefficientDatabase& Db() { return BuiltinDatabase(); }

int g_failed = 0;

void Report(int n, bool ok, const std::string& detail, double ms) {
  std::printf("criterion %d: %s  (%s; %.0f ms)\n", n, ok ? "PASS" : "FAIL",
              detail.c_str(), ms);
  if (!ok) ++g_failed;
}

std::string Fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

template <typename F>
void Criterion(int n, F body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(&detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  Report(n, ok, detail, ms);
}

FlightCondition Cond(FlightMode mode, double alpha, double v) {
  FlightCondition c;
  c.mode = mode;
  c.alpha_deg = alpha;
  c.airspeed = v;
  return c;
}

bool Reynolds1(std::string* d) {
  const double want[] = {50427, 110939, 151281};
  const double vs[] = {5, 11, 15};
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    const double re = Reynolds(vs[i], 0.1524, 1.5111e-5);
    ok = ok && std::fabs(re - want[i]) <= 1.0;
    *d += Fmt("Re(%g)=%.1f ", vs[i], re);
  }
  return ok;
}

bool MeshExample2(std::string* d) {
  const auto cl = BuildMesh(Db().aero, FlightMode::kHybrid, CoefficientKind::kLift);
  const auto cdp = BuildMesh(Db().aero, FlightMode::kHybrid, CoefficientKind::kPlaneDrag);
  const auto cdq = BuildMesh(Db().aero, FlightMode::kHybrid, CoefficientKind::kQuadDrag);
  const double got[3] = {Interp(cl, -4, 9), Interp(cdp, -4, 9), Interp(cdq, -4, 9)};
  const double want[3] = {-0.2838, 0.5893, 0.4534};
  const auto& p = cl.triangles[Locate(cl, -4, 9)].plane;
  const double pg[4] = {p.a, p.b, p.c, p.d};
  const double pw[4] = {0.0923, 0.0860, -0.9920, -0.6863};
  bool ok = true;
  for (int i = 0; i < 3; ++i) ok = ok && std::fabs(got[i] - want[i]) <= 0.002;
  for (int i = 0; i < 4; ++i) ok = ok && std::fabs(pg[i] - pw[i]) <= 0.002;
  *d = Fmt("CL=%.4f CDP=%.4f CDQ=%.4f plane=(%.4f, %.4f, %.4f, %.4f)", got[0], got[1],
           got[2], pg[0], pg[1], pg[2], pg[3]);
  return ok;
}

bool Thrust3(std::string* d) {
  const auto& m = Db().thrust_map;
  const double t = DynamicThrust(m, 90, 11, 1550);
  const double ratio = DynamicThrust(m, 0, 15, 2000) / DynamicThrust(m, 0, 0, 2000);
  *d = Fmt("T(90,11,1550)=%.3f N vs 5.69; T(0,15)/T(0,0)=%.1f%% vs 44%%", t, 100 * ratio);
  return std::fabs(t - 5.69) <= 0.15 && std::fabs(100 * ratio - 44.0) <= 6.0;
}

bool Pitch4(std::string* d) {
  const auto& db = Db();
  const double quad = PitchingMoment(db.aero, Cond(FlightMode::kQuad, 0, 11), db.atmosphere,
                                     db.vehicle);
  const double dmt =
      CoefficientsFor(db.aero, Cond(FlightMode::kQuad, 0, 11)).differential_moment;
  auto plane = Cond(FlightMode::kPlane, 0, 11);
  plane.elevator = -0.8;
  const double me = PitchingMoment(db.aero, plane, db.atmosphere, db.vehicle);
  *d = Fmt("quad M_y=%.3f N*m vs 1.56; plane M_y(de=-0.8)=%.3f, |.|>%.3f", quad, me, dmt);
  return std::fabs(quad - 1.56) <= 0.4 && std::fabs(me) > std::fabs(dmt);
}

bool Fit5(std::string* d) {
  const auto& db = Db();
  size_t checked = 0, bad = 0;
  for (QuadDragForm form : {QuadDragForm::kLinear, QuadDragForm::kQuadratic}) {
    AeroModel model = db.aero;
    model.set_quad_drag_form(form);
    const auto pts = SampleAeroPoints(model, db.vehicle, db.atmosphere, {-5, 0, 5, 10},
                                      {5, 11, 15});
    const auto fit = FitAeroSuite(pts);
    size_t n = 0;
    const auto mis = testing::CompareAero(fit.model, model, 1e-6, form, &n);
    checked += n;
    bad += mis.size();
    for (const auto& m : mis) *d += m.where + " ";
  }
  const auto tf = FitThrustTable(testing::SampleThrust(db.thrust_map));
  size_t n = 0;
  if (!tf.map) {
    bad += 1;
  } else {
    bad += testing::CompareThrust(tf, db.thrust_map, 1e-6, &n).size();
  }
  checked += n;
  *d = Fmt("%zu coefficients, %zu outside 1e-6 relative", checked, bad) + *d;
  return bad == 0 && checked > 0;
}

bool Reduce6(std::string* d) {
  const auto& db = Db();
  int conditions = 0, exact = 0;
  for (double v : {5.0, 11.0, 15.0}) {
    for (double a : {-5.0, 0.0, 5.0, 10.0}) {
      for (const auto& p : testing::ReduceCondition(db, a, v, 0.0, 1)) {
        const auto w = testing::ModelLoads(db, p);
        auto close = [](double g, double x) {
          return std::fabs(g - x) <= 1e-6 * std::max(1.0, std::fabs(x));
        };
        ++conditions;
        exact += close(p.lift, w.lift) && close(p.drag, w.drag) && close(p.my, w.pitch_moment);
      }
    }
  }
  const double sigma = 0.1;
  int total = 0, inside = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    for (double v : {5.0, 11.0, 15.0}) {
      for (double a : {-5.0, 0.0, 5.0, 10.0}) {
        for (const auto& p : testing::ReduceCondition(db, a, v, sigma, seed)) {
          const auto w = testing::ModelLoads(db, p);
          const double bound = 3.0 * sigma / std::sqrt(static_cast<double>(p.n_samples));
          ++total;
          inside += std::fabs(p.lift - w.lift) <= bound && std::fabs(p.drag - w.drag) <= bound;
        }
      }
    }
  }
  const double frac = static_cast<double>(inside) / total;
  *d = Fmt("noise-free %d/%d conditions within 1e-6; sigma=0.1: %d/%d (%.1f%%) within 3s/sqrt(n)",
           exact, conditions, inside, total, 100 * frac);
  return conditions == 36 && exact == 36 && frac >= 0.95;
}

bool Trim7(std::string* d) {
  const auto& db = Db();
  const AeroEvaluator aero(db.aero, db.atmosphere, db.vehicle);
  const auto hover = HoverTrim(db.vehicle, db.thrust_map);
  TrimOptions small;
  small.lift_balance = LiftBalance::kSmallAngle;
  const auto cruise = LevelTrim(FlightMode::kPlane, 11, aero, db.thrust_map, 0, small);
  const auto exact = LevelTrim(FlightMode::kPlane, 11, aero, db.thrust_map);
  const auto slow = LevelTrim(FlightMode::kPlane, 5, aero, db.thrust_map);
  bool stall = false;
  for (const auto& c : slow.active_constraints) stall = stall || c == "stall";
  const auto sched = Transition(0, 11, 12, aero, db.thrust_map);
  bool monotone = true;
  std::string tv;
  for (size_t i = 0; i < sched.steps.size(); ++i) {
    const auto& t = sched.steps[i].trim;
    tv += Fmt("%g:%.2f%s ", sched.steps[i].airspeed, t.thrust_vert, t.feasible ? "" : "*");
    if (i > 0 && t.thrust_vert > sched.steps[i - 1].trim.thrust_vert + 1e-9) monotone = false;
  }
  const bool ok_hover = hover.feasible && hover.force_residual() < 1e-6;
  const bool ok_alpha = std::fabs(cruise.condition.alpha_deg - 8.07) <= 0.1;
  const bool ok_slow = !slow.feasible && stall;
  *d = Fmt("hover residual %.2e N [%s]; plane 11 m/s alpha %.3f deg small-angle [%s], "
           "%.3f exact; plane 5 m/s %s [%s]; T_vert monotone [%s] ",
           hover.force_residual(), ok_hover ? "ok" : "bad", cruise.condition.alpha_deg,
           ok_alpha ? "ok" : "bad", exact.condition.alpha_deg,
           slow.feasible ? "feasible" : slow.reason.c_str(), ok_slow ? "ok" : "bad",
           monotone ? "ok" : "bad") +
       "T_vert by V (* infeasible): " + tv;
  return ok_hover && ok_alpha && ok_slow && monotone;
}

bool Invariants8(std::string* d) {
  const auto& db = Db();
  size_t checks = 0, fails = 0;
  auto expect = [&](bool c) {
    ++checks;
    fails += !c;
  };
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> f(-100, 100), ang(-90, 90);
  for (int i = 0; i < 2000; ++i) {
    ForcesMoments b;
    b.fx = f(rng), b.fy = f(rng), b.fz = f(rng);
    const double a = ang(rng);
    const WindForces w = BodyToWind(b, a);
    const double nb = std::sqrt(b.fx * b.fx + b.fy * b.fy + b.fz * b.fz);
    const double nw = std::sqrt(w.lift * w.lift + w.drag * w.drag + w.side_force * w.side_force);
    expect(std::fabs(nb - nw) <= 1e-10 * std::max(1.0, nb));
  }
  const size_t rotation = checks;

  const std::vector<CoefficientKind> kinds = {
      CoefficientKind::kLift,           CoefficientKind::kPlaneDrag,
      CoefficientKind::kQuadDrag,       CoefficientKind::kQuadDragQuadratic,
      CoefficientKind::kFormDrag,       CoefficientKind::kPitchStructural,
      CoefficientKind::kDifferentialMoment, CoefficientKind::kElevator,
      CoefficientKind::kRollAileron,    CoefficientKind::kRollRudder,
      CoefficientKind::kYawAileron,     CoefficientKind::kYawRudder,
      CoefficientKind::kSideForce0,     CoefficientKind::kSideForceRudder};
  for (FlightMode mode : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    for (CoefficientKind kind : kinds) {
      const auto mesh = BuildMesh(db.aero, mode, kind);
      std::map<std::pair<size_t, size_t>, std::vector<size_t>> edges;
      for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& t = mesh.triangles[ti];
        for (int e = 0; e < 3; ++e) {
          const size_t p = t.vertices[e], q = t.vertices[(e + 1) % 3];
          edges[{std::min(p, q), std::max(p, q)}].push_back(ti);
          const auto& v = mesh.vertices[p];
          expect(std::fabs(t.plane.Solve(v.alpha_deg, v.airspeed) - v.value) <=
                 1e-12 * std::max(1.0, std::fabs(v.value)));
        }
      }
      for (const auto& [e, tris] : edges) {
        if (tris.size() != 2) continue;
        const auto& p = mesh.vertices[e.first];
        const auto& q = mesh.vertices[e.second];
        for (double s : {0.25, 0.5, 0.75}) {
          const double a = p.alpha_deg + s * (q.alpha_deg - p.alpha_deg);
          const double v = p.airspeed + s * (q.airspeed - p.airspeed);
          const double z0 = mesh.triangles[tris[0]].plane.Solve(a, v);
          const double z1 = mesh.triangles[tris[1]].plane.Solve(a, v);
          expect(std::fabs(z0 - z1) <= 1e-12 * std::max(1.0, std::fabs(z0)));
        }
      }
    }
  }
  const size_t mesh_checks = checks - rotation;

  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = 1 + trial % 3;
    std::vector<double> xs, ys;
    for (int i = 0; i < 8 + trial % 20; ++i) {
      xs.push_back(-10 + 20 * (0.5 + 0.5 * u(rng)));
      ys.push_back(3 * u(rng) + xs.back() * u(rng));
    }
    const auto fit = PolyFit(xs, ys, degree);
    for (int k = 0; k <= degree; ++k) {
      double dot = 0, scale = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        const double xk = std::pow(xs[i], k);
        dot += (ys[i] - fit.Evaluate(xs[i])) * xk;
        scale += std::fabs(ys[i] * xk);
      }
      expect(std::fabs(dot / scale) <= 1e-9);
    }
  }
  const size_t ortho = checks - rotation - mesh_checks;

  for (double v : {11.0, 15.0}) {
    for (double a : {-5.0, 0.0, 5.0, 10.0}) {
      const auto p = LiftDragForces(db.aero, Cond(FlightMode::kPlane, a, v), db.atmosphere,
                                    db.vehicle);
      const auto h = LiftDragForces(db.aero, Cond(FlightMode::kHybrid, a, v), db.atmosphere,
                                    db.vehicle);
      expect(p.drag < h.drag);
    }
  }
  *d = Fmt("%zu/%zu checks hold (rotation %zu, mesh %zu, orthogonality %zu, drag order 8)",
           checks - fails, checks, rotation, mesh_checks, ortho);
  return fails == 0;
}

}  // namespace

int main() {
  Criterion(1, Reynolds1);
  Criterion(2, MeshExample2);
  Criterion(3, Thrust3);
  Criterion(4, Pitch4);
  Criterion(5, Fit5);
  Criterion(6, Reduce6);
  Criterion(7, Trim7);
  Criterion(8, Invariants8);
  std::printf("%d of 8 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
