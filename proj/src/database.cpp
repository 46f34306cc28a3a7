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

#include "qpaero/database.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qpaero/error.hpp"

namespace qpaero {
namespace {

using nlohmann::json;

constexpr FlightMode kModes[] = {FlightMode::kQuad, FlightMode::kHybrid,
                                 FlightMode::kPlane};

// ---------------------------------------------------------------------------
// Shipped tables.

struct ThrustRowLit {
  double alpha_p, v, c0, c1, c2, c3, r2, rmse;
};

constexpr ThrustRowLit kThrustRows[] = {
    {-5, 0, 54.73, -0.1232, 8.667e-05, -1.820e-08, 0.9988, 0.2881},
    {-5, 5, 50.44, -0.1111, 7.633e-05, -1.565e-08, 0.9981, 0.3142},
    {-5, 11, 48.47, -0.1030, 6.826e-05, -1.368e-08, 0.9970, 0.2968},
    {-5, 15, 47.68, -0.0973, 6.161e-05, -1.194e-08, 0.9948, 0.2808},
    {0, 0, 54.43, -0.123, 8.627e-05, -1.813e-08, 0.9987, 0.2869},
    {0, 5, 48.58, -0.1069, 7.335e-05, -1.499e-08, 0.9983, 0.2915},
    {0, 11, 44.04, -0.0937, 6.207e-05, -1.235e-08, 0.9968, 0.3052},
    {0, 15, 44.61, -0.0909, 5.725e-05, -1.097e-08, 0.9944, 0.3001},
    {5, 0, 54.11, -0.1220, 8.594e-05, -1.806e-08, 0.9990, 0.2530},
    {5, 5, 50.10, -0.1103, 7.575e-05, -1.551e-08, 0.9980, 0.3219},
    {5, 11, 47.41, -0.1005, 6.631e-05, -1.320e-08, 0.9971, 0.2899},
    {5, 15, 44.46, -0.0908, 5.736e-05, -1.103e-08, 0.9928, 0.3416},
    {10, 0, 55.58, -0.1253, 8.829e-05, -1.858e-08, 0.9990, 0.2595},
    {10, 5, 48.96, -0.1080, 7.431e-05, -1.523e-08, 0.9984, 0.2893},
    {10, 11, 46.45, -0.0989, 6.564e-05, -1.314e-08, 0.9970, 0.2945},
    {10, 15, 45.96, -0.0940, 5.960e-05, -1.152e-08, 0.9943, 0.3064},
    {80, 0, 55.49, -0.1257, 8.902e-05, -1.879e-08, 0.9993, 0.2296},
    {80, 5, 55.95, -0.1272, 9.031e-05, -1.901e-08, 0.9990, 0.2840},
    {80, 11, 57.55, -0.1322, 9.491e-05, -2.022e-08, 0.9994, 0.2249},
    {80, 15, 62.32, -0.1434, 1.032e-04, -2.210e-08, 0.9997, 0.1746},
    {85, 0, 56.91, -0.1278, 8.970e-05, -1.873e-08, 0.9980, 0.3924},
    {85, 5, 55.19, -0.1255, 8.905e-05, -1.87e-08, 0.9989, 0.3047},
    {85, 11, 55.47, -0.1289, 9.365e-05, -2.016e-08, 0.9998, 0.1427},
    {85, 15, 58.03, -0.1362, 9.986e-05, -2.167e-08, 1.0000, 0.0679},
    {90, 0, 46.57, -0.1056, 7.435e-05, -1.533e-08, 0.9999, 0.1011},
    {90, 5, 52.76, -0.1204, 8.565e-05, -1.797e-08, 0.9989, 0.3095},
    {90, 11, 61.10, -0.1420, 1.034e-04, -2.246e-08, 1.0000, 0.0253},
    {90, 15, 68.55, -0.1600, 1.170e-04, -2.557e-08, 1.0000, 0.0315},
    // c3 sign kept as tabulated; the loader flags it.
    {95, 0, 59.39, -0.1334, 9.364e-05, 1.960e-08, 0.9971, 0.4781},
    {95, 5, 53.20, -0.1218, 8.698e-05, -1.834e-08, 0.9989, 0.2969},
    {95, 11, 64.82, -0.1509, 1.101e-04, -2.403e-08, 1.0000, 0.0327},
    {95, 15, 72.45, -0.1695, 1.244e-04, -2.727e-08, 0.9999, 0.0895},
    {100, 0, 55.82, -0.1257, 8.836e-05, -1.846e-08, 0.9989, 0.2892},
    {100, 5, 51.63, -0.1189, 8.537e-05, -1.804e-08, 0.9988, 0.3248},
    {100, 11, 70.86, -0.1653, 1.210e-04, -2.659e-08, 0.9999, 0.0731},
    {100, 15, 85.51, -0.1964, 1.416e-04, -3.073e-08, 1.0000, 0.0751},
};

struct SpeedLit {
  double v, re, stall;
};
constexpr SpeedLit kSpeeds[] = {
    {5, 50427, 5.0}, {11, 110939, 10.0}, {15, 151281, 10.0}};

// mode, v, c0, ca, r2, rmse
struct LinLit {
  FlightMode mode;
  double v, c0, ca, r2, rmse;
};
constexpr LinLit kLift[] = {
    {FlightMode::kQuad, 5, 0.8652, 0.1426, 0.9999, 0.01098},
    {FlightMode::kQuad, 11, 0.3329, 0.0667, 1, 0.00046},
    {FlightMode::kQuad, 15, 0.4135, 0.078, 0.9923, 0.04853},
    {FlightMode::kHybrid, 5, -0.1153, 0.1216, 0.898, 0.2898},
    {FlightMode::kHybrid, 11, 0.2622, 0.09302, 1, 0.002291},
    {FlightMode::kHybrid, 15, 0.3826, 0.08929, 0.9981, 0.02689},
    {FlightMode::kPlane, 5, 0.1165, 0.1905, 0.9843, 0.1701},
    {FlightMode::kPlane, 11, 0.3118, 0.11, 0.9989, 0.02587},
    {FlightMode::kPlane, 15, 0.3796, 0.09621, 1, 0.001704},
};

struct QuadLit {
  FlightMode mode;
  double v, c0, ca, ca2, r2, rmse;
};
constexpr QuadLit kFormDrag[] = {
    {FlightMode::kPlane, 5, 0.8896, -0.01986, 0.002921, 0.9992, 0.004529},
    {FlightMode::kPlane, 11, 0.3022, -0.003535, 0.001632, 0.9678, 0.0176},
    {FlightMode::kPlane, 15, 0.2286, -0.001117, 0.001452, 0.9805, 0.01409},
};
constexpr QuadLit kPlaneDrag[] = {
    {FlightMode::kQuad, 5, 0.9499, -0.01146, 0.001848, 0.8076, 0.04669},
    {FlightMode::kQuad, 11, 0.312, -0.002021, 0.001472, 0.9332, 0.02536},
    {FlightMode::kQuad, 15, 0.2392, 0.001396, 0.001469, 0.9708, 0.0212},
    {FlightMode::kHybrid, 5, 0.9018, -0.02029, 0.002866, 0.9911, 0.01497},
    {FlightMode::kHybrid, 11, 0.3127, -0.002008, 0.001483, 0.9161, 0.02897},
    {FlightMode::kHybrid, 15, 0.24, 0.001428, 0.001429, 0.9643, 0.02301},
    {FlightMode::kPlane, 5, 0.9154, -0.01861, 0.002777, 0.9227, 0.04301},
    {FlightMode::kPlane, 11, 0.3154, -0.001331, 0.001534, 0.9221, 0.03036},
    {FlightMode::kPlane, 15, 0.2398, 0.0016, 0.001496, 0.9708, 0.02185},
};
constexpr QuadLit kQuadDragLinear[] = {
    {FlightMode::kQuad, 5, -0.04963, -0.002755, 0, 0.4285, 0.03557},
    {FlightMode::kQuad, 11, 0.1538, -0.002662, 0, 0.4671, 0.03179},
    {FlightMode::kQuad, 15, 0.2518, -0.0006953, 0, 0.11, 0.02212},
    {FlightMode::kHybrid, 5, 0.5354, -0.009128, 0, 0.8781, 0.03803},
    {FlightMode::kHybrid, 11, 0.3519, -0.01079, 0, 0.9758, 0.01901},
    {FlightMode::kHybrid, 15, 0.2891, -0.008903, 0, 0.9784, 0.01479},
};
constexpr QuadLit kQuadDragQuadratic[] = {
    {FlightMode::kQuad, 5, -0.03888, -0.0006044, -0.0004301, 0.6373, 0.02833},
    {FlightMode::kQuad, 11, 0.1421, -0.005008, 0.0004693, 0.7575, 0.0144},
    {FlightMode::kQuad, 15, 0.2408, -0.002896, 0.0004402, 0.9914, 0.002172},
    {FlightMode::kHybrid, 5, 0.5534, -0.005538, -0.000718, 0.9867, 0.01254},
    {FlightMode::kHybrid, 11, 0.3427, -0.01264, 0.0003697, 0.9987, 0.004444},
    {FlightMode::kHybrid, 15, 0.2965, -0.007426, -0.0002954, 0.9999, 0.0008046},
};
constexpr QuadLit kDifferential[] = {
    {FlightMode::kQuad, 5, 0.9124, 0.01333, -0.0001248, 0.9226, 0.04117},
    {FlightMode::kQuad, 11, 1.67, 0.07178, -0.002539, 0.9597, 0.1379},
    {FlightMode::kQuad, 15, 2.113, 0.076, -0.005691, 0.8681, 0.235},
    {FlightMode::kHybrid, 5, 0.9254, 0.01001, -0.0004523, 0.8718, 0.03434},
    {FlightMode::kHybrid, 11, 1.489, 0.05458, -0.001133, 0.9825, 0.07329},
    {FlightMode::kHybrid, 15, 1.904, 0.05568, -0.004967, 0.8777, 0.1586},
};

// v, cm0, cma, r2, rmse
constexpr LinLit kPitch[] = {
    {FlightMode::kPlane, 5, -0.632, -0.05345, 0.9965, 0.03558},
    {FlightMode::kPlane, 11, 0.0711, -0.04272, 0.9452, 0.115},
    {FlightMode::kPlane, 15, 0.1407, -0.0397, 0.9682, 0.08051},
};
// v, cm_de, -, r2, rmse
constexpr LinLit kElevator[] = {
    {FlightMode::kPlane, 5, 2.163, 0, 0.9921, 0.2432},
    {FlightMode::kPlane, 11, 0.8286, 0, 0.9899, 0.106},
    {FlightMode::kPlane, 15, 0.616, 0, 0.9908, 0.0749},
};

struct PairLit {
  double v, a, a_r2, a_rmse, r, r_r2, r_rmse;
};
constexpr PairLit kRoll[] = {
    {5, 0.9642, 0.9778, 0.0914, -0.3728, 0.9689, 0.0419},
    {11, 0.7336, 0.9721, 0.0781, -0.1217, 0.9585, 0.0158},
    {15, 0.6484, 0.9777, 0.0616, -0.1031, 0.9830, 0.0086},
};
constexpr PairLit kYaw[] = {
    {5, -0.1075, 0.9903, 0.0067, 1.145, 0.9950, 0.0514},
    {11, -0.08574, 0.9836, 0.0070, 0.3819, 0.9941, 0.0186},
    {15, -0.08898, 0.9864, 0.0066, 0.2752, 0.9936, 0.0139},
};
// v, csf0, csf_dr, r2, rmse
constexpr LinLit kSide[] = {
    {FlightMode::kPlane, 5, 0.0130, -0.3808, 0.9966, 0.0163},
    {FlightMode::kPlane, 11, 0.0446, -0.1283, 0.9946, 0.0069},
    {FlightMode::kPlane, 15, 0.0277, -0.0917, 0.9943, 0.0051},
};

template <typename T, size_t N>
const T* FindLit(const T (&rows)[N], FlightMode mode, double v) {
  for (const auto& r : rows) {
    if (r.mode == mode && r.v == v) return &r;
  }
  return nullptr;
}

template <size_t N>
const PairLit& FindPair(const PairLit (&rows)[N], double v) {
  for (const auto& r : rows) {
    if (r.v == v) return r;
  }
  throw Error(ErrorCode::kInternal, "missing shipped lateral row");
}

QuadraticFit ToQuadratic(const QuadLit& r) {
  return QuadraticFit{r.c0, r.ca, r.ca2, {r.r2, r.rmse}};
}

CoefficientDatabase MakeBuiltin() {
  CoefficientDatabase db;
  db.name = kBuiltinDatabaseName;
  db.provenance = kBuiltinProvenance;

  std::vector<ThrustMapRow> rows;
  for (const auto& r : kThrustRows) {
    rows.push_back({r.alpha_p, r.v, {r.c0, r.c1, r.c2, r.c3, r.r2, r.rmse}});
  }
  db.thrust_map = ThrustMap(std::move(rows));

  for (FlightMode mode : kModes) {
    for (const auto& s : kSpeeds) {
      BucketModel b;
      b.mode = mode;
      b.airspeed = s.v;
      b.reynolds = s.re;
      b.min_alpha_deg = -5.0;
      b.stall_alpha_deg = s.stall;
      const LinLit* lift = FindLit(kLift, mode, s.v);
      b.lift = {lift->c0, lift->ca, {lift->r2, lift->rmse}};
      b.form_drag = ToQuadratic(*FindLit(kFormDrag, FlightMode::kPlane, s.v));
      b.plane_drag = ToQuadratic(*FindLit(kPlaneDrag, mode, s.v));
      if (mode != FlightMode::kPlane) {
        b.quad_drag_linear = ToQuadratic(*FindLit(kQuadDragLinear, mode, s.v));
        b.quad_drag_quadratic =
            ToQuadratic(*FindLit(kQuadDragQuadratic, mode, s.v));
        b.moment.differential_thrust =
            ToQuadratic(*FindLit(kDifferential, mode, s.v));
      }
      const LinLit* cm = FindLit(kPitch, FlightMode::kPlane, s.v);
      b.moment.cm0 = cm->c0;
      b.moment.cm_alpha = cm->ca;
      b.moment.cm_stats = {cm->r2, cm->rmse};
      const LinLit* de = FindLit(kElevator, FlightMode::kPlane, s.v);
      b.moment.cm_elevator = de->c0;
      b.moment.elevator_stats = {de->r2, de->rmse};
      const PairLit& roll = FindPair(kRoll, s.v);
      const PairLit& yaw = FindPair(kYaw, s.v);
      b.lateral.crm_aileron = roll.a;
      b.lateral.crm_aileron_stats = {roll.a_r2, roll.a_rmse};
      b.lateral.crm_rudder = roll.r;
      b.lateral.crm_rudder_stats = {roll.r_r2, roll.r_rmse};
      b.lateral.cym_aileron = yaw.a;
      b.lateral.cym_aileron_stats = {yaw.a_r2, yaw.a_rmse};
      b.lateral.cym_rudder = yaw.r;
      b.lateral.cym_rudder_stats = {yaw.r_r2, yaw.r_rmse};
      const LinLit* sf = FindLit(kSide, FlightMode::kPlane, s.v);
      b.lateral.csf0 = sf->c0;
      b.lateral.csf_rudder = sf->ca;
      b.lateral.csf_stats = {sf->r2, sf->rmse};
      db.aero.Insert(std::move(b));
    }
  }
  db.notes = db.thrust_map.warnings();
  return db;
}

// ---------------------------------------------------------------------------
// JSON.

json StatsJson(const FitStats& s) {
  json j;
  j["r2"] = std::isnan(s.r_squared) ? json(nullptr) : json(s.r_squared);
  j["rmse"] = std::isnan(s.rmse) ? json(nullptr) : json(s.rmse);
  return j;
}

FitStats StatsFrom(const json& j, const char* r2 = "r2",
                   const char* rmse = "rmse") {
  FitStats s;
  if (j.contains(r2) && !j[r2].is_null()) s.r_squared = j[r2].get<double>();
  if (j.contains(rmse) && !j[rmse].is_null()) s.rmse = j[rmse].get<double>();
  return s;
}

json QuadJson(const QuadraticFit& f) {
  json j = StatsJson(f.stats);
  j["c0"] = f.c0;
  j["c_alpha"] = f.c_alpha;
  j["c_alpha2"] = f.c_alpha2;
  return j;
}

QuadraticFit QuadFrom(const json& j) {
  QuadraticFit f;
  f.c0 = j.at("c0").get<double>();
  f.c_alpha = j.at("c_alpha").get<double>();
  f.c_alpha2 = j.value("c_alpha2", 0.0);
  f.stats = StatsFrom(j);
  return f;
}

// Row bodies for the per-airspeed tables, keyed by table name.
std::map<std::string, json> SharedRows(const BucketModel& b) {
  std::map<std::string, json> out;
  out["stall"] = {{"min_alpha_deg", b.min_alpha_deg},
                  {"stall_alpha_deg", b.stall_alpha_deg}};
  out["form_drag"] = QuadJson(b.form_drag);
  json cm = StatsJson(b.moment.cm_stats);
  cm["cm0"] = b.moment.cm0;
  cm["cm_alpha"] = b.moment.cm_alpha;
  out["pitch_moment"] = cm;
  json de = StatsJson(b.moment.elevator_stats);
  de["cm_de"] = b.moment.cm_elevator;
  out["elevator"] = de;
  const LateralModel& l = b.lateral;
  auto pair = [](const char* a_name, double a, const FitStats& as,
                 const char* r_name, double r, const FitStats& rs) {
    json j;
    j[a_name] = a;
    j["r2_da"] = std::isnan(as.r_squared) ? json(nullptr) : json(as.r_squared);
    j["rmse_da"] = std::isnan(as.rmse) ? json(nullptr) : json(as.rmse);
    j[r_name] = r;
    j["r2_dr"] = std::isnan(rs.r_squared) ? json(nullptr) : json(rs.r_squared);
    j["rmse_dr"] = std::isnan(rs.rmse) ? json(nullptr) : json(rs.rmse);
    return j;
  };
  out["roll_moment"] = pair("crm_da", l.crm_aileron, l.crm_aileron_stats,
                            "crm_dr", l.crm_rudder, l.crm_rudder_stats);
  out["yaw_moment"] = pair("cym_da", l.cym_aileron, l.cym_aileron_stats,
                           "cym_dr", l.cym_rudder, l.cym_rudder_stats);
  json sf = StatsJson(l.csf_stats);
  sf["csf0"] = l.csf0;
  sf["csf_dr"] = l.csf_rudder;
  out["side_force"] = sf;
  return out;
}

void ApplySharedRow(const std::string& table, const json& j, BucketModel& b) {
  if (table == "stall") {
    b.min_alpha_deg = j.value("min_alpha_deg", -5.0);
    b.stall_alpha_deg = j.at("stall_alpha_deg").get<double>();
  } else if (table == "form_drag") {
    b.form_drag = QuadFrom(j);
  } else if (table == "pitch_moment") {
    b.moment.cm0 = j.at("cm0").get<double>();
    b.moment.cm_alpha = j.at("cm_alpha").get<double>();
    b.moment.cm_stats = StatsFrom(j);
  } else if (table == "elevator") {
    b.moment.cm_elevator = j.at("cm_de").get<double>();
    b.moment.elevator_stats = StatsFrom(j);
  } else if (table == "roll_moment") {
    b.lateral.crm_aileron = j.at("crm_da").get<double>();
    b.lateral.crm_aileron_stats = StatsFrom(j, "r2_da", "rmse_da");
    b.lateral.crm_rudder = j.at("crm_dr").get<double>();
    b.lateral.crm_rudder_stats = StatsFrom(j, "r2_dr", "rmse_dr");
  } else if (table == "yaw_moment") {
    b.lateral.cym_aileron = j.at("cym_da").get<double>();
    b.lateral.cym_aileron_stats = StatsFrom(j, "r2_da", "rmse_da");
    b.lateral.cym_rudder = j.at("cym_dr").get<double>();
    b.lateral.cym_rudder_stats = StatsFrom(j, "r2_dr", "rmse_dr");
  } else if (table == "side_force") {
    b.lateral.csf0 = j.at("csf0").get<double>();
    b.lateral.csf_rudder = j.at("csf_dr").get<double>();
    b.lateral.csf_stats = StatsFrom(j);
  }
}

const char* kSharedTables[] = {"stall",       "form_drag",   "pitch_moment",
                               "elevator",    "roll_moment", "yaw_moment",
                               "side_force"};

json AeroJson(const AeroModel& model) {
  json aero;
  aero["quad_drag_form"] =
      model.quad_drag_form() == QuadDragForm::kLinear ? "linear" : "quadratic";
  for (const char* t : kSharedTables) aero[t] = json::array();
  aero["lift"] = json::array();
  aero["plane_drag"] = json::array();
  aero["quad_drag"] = json::array();
  aero["differential_thrust"] = json::array();

  // Airspeeds in ascending order; for each, shared rows collapse when every
  // mode agrees.
  std::set<double> speeds;
  for (const BucketModel* b : model.Buckets()) speeds.insert(b->airspeed);
  for (double v : speeds) {
    std::vector<const BucketModel*> at_speed;
    for (FlightMode m : kModes) {
      if (model.Has(m, v)) at_speed.push_back(&model.Bucket(m, v));
    }
    std::vector<std::map<std::string, json>> rows;
    for (const BucketModel* b : at_speed) rows.push_back(SharedRows(*b));
    for (const char* t : kSharedTables) {
      bool same = true;
      for (const auto& r : rows) same = same && r.at(t) == rows.front().at(t);
      for (size_t i = 0; i < at_speed.size(); ++i) {
        if (same && i > 0) break;
        json row = rows[i].at(t);
        row["airspeed_mps"] = v;
        row["re"] = at_speed[i]->reynolds;
        if (!same) row["mode"] = std::string(ToString(at_speed[i]->mode));
        aero[t].push_back(row);
      }
    }
  }

  for (FlightMode m : kModes) {
    for (double v : model.BucketSpeeds(m)) {
      const BucketModel& b = model.Bucket(m, v);
      const std::string mode(ToString(m));
      json lift = StatsJson(b.lift.stats);
      lift["mode"] = mode;
      lift["airspeed_mps"] = v;
      lift["re"] = b.reynolds;
      lift["cl0"] = b.lift.cl0;
      lift["cl_alpha"] = b.lift.cl_alpha;
      aero["lift"].push_back(lift);

      json pd = QuadJson(b.plane_drag);
      pd["mode"] = mode;
      pd["airspeed_mps"] = v;
      pd["re"] = b.reynolds;
      aero["plane_drag"].push_back(pd);

      if (m == FlightMode::kPlane) continue;
      for (int form = 0; form < 2; ++form) {
        json qd = QuadJson(form == 0 ? b.quad_drag_linear : b.quad_drag_quadratic);
        qd["mode"] = mode;
        qd["airspeed_mps"] = v;
        qd["re"] = b.reynolds;
        qd["fit"] = form == 0 ? "linear" : "quadratic";
        if (form == 0) qd.erase("c_alpha2");
        aero["quad_drag"].push_back(qd);
      }
      json dt = StatsJson(b.moment.differential_thrust.stats);
      dt["mode"] = mode;
      dt["airspeed_mps"] = v;
      dt["re"] = b.reynolds;
      dt["m0"] = b.moment.differential_thrust.c0;
      dt["m_alpha"] = b.moment.differential_thrust.c_alpha;
      dt["m_alpha2"] = b.moment.differential_thrust.c_alpha2;
      aero["differential_thrust"].push_back(dt);
    }
  }
  return aero;
}

json ThrustJson(const ThrustMap& map) {
  json rows = json::array();
  for (const auto& r : map.rows()) {
    rows.push_back({{"alpha_p_deg", r.alpha_p_deg},
                    {"airspeed_mps", r.airspeed},
                    {"c0", r.curve.c0},
                    {"c1", r.curve.c1},
                    {"c2", r.curve.c2},
                    {"c3", r.curve.c3},
                    {"r2", r.curve.r_squared},
                    {"rmse", r.curve.rmse}});
  }
  return rows;
}

json DatabaseJson(const CoefficientDatabase& db) {
  json j;
  j["schema_version"] = db.schema_version;
  j["name"] = db.name;
  j["provenance"] = {{"source", db.provenance}, {"notes", db.notes}};
  const VehicleGeometry& g = db.vehicle;
  j["vehicle"] = {{"wing_span_m", g.wing_span},
                  {"wing_chord_m", g.wing_chord},
                  {"incidence_deg", g.incidence_deg},
                  {"quad_arm_m", g.quad_arm},
                  {"mass_kg", g.mass},
                  {"oswald_e", g.oswald_e},
                  {"design_stall_speed_mps", g.design_stall_speed},
                  {"design_stall_alpha_deg", g.design_stall_alpha_deg}};
  j["atmosphere"] = {{"density_kgm3", db.atmosphere.density},
                     {"kinematic_viscosity_m2s",
                      db.atmosphere.kinematic_viscosity}};
  j["thrust_map"] = ThrustJson(db.thrust_map);
  j["aero"] = AeroJson(db.aero);
  return j;
}

FlightMode ModeFrom(const json& j) {
  const auto m = ParseFlightMode(j.at("mode").get<std::string>());
  if (!m) throw Error(ErrorCode::kFormat, "unknown mode " + j.at("mode").dump());
  return *m;
}

AeroModel AeroFrom(const json& aero) {
  // Bucket skeletons come from the lift table: one row per (mode, airspeed).
  std::map<std::pair<int, double>, BucketModel> buckets;
  for (const auto& r : aero.at("lift")) {
    BucketModel b;
    b.mode = ModeFrom(r);
    b.airspeed = r.at("airspeed_mps").get<double>();
    b.reynolds = r.value("re", 0.0);
    b.lift = {r.at("cl0").get<double>(), r.at("cl_alpha").get<double>(),
              StatsFrom(r)};
    const auto key = std::make_pair(static_cast<int>(b.mode), b.airspeed);
    if (buckets.count(key)) {
      throw Error(ErrorCode::kFormat, "duplicate lift row " + r.dump());
    }
    buckets[key] = b;
  }
  auto bucket_of = [&](FlightMode m, double v) -> BucketModel& {
    auto it = buckets.find({static_cast<int>(m), v});
    if (it == buckets.end()) {
      throw Error(ErrorCode::kFormat,
                  "row refers to a bucket without a lift row");
    }
    return it->second;
  };

  for (const auto& r : aero.at("plane_drag")) {
    bucket_of(ModeFrom(r), r.at("airspeed_mps").get<double>()).plane_drag =
        QuadFrom(r);
  }
  for (const auto& r : aero.value("quad_drag", json::array())) {
    BucketModel& b = bucket_of(ModeFrom(r), r.at("airspeed_mps").get<double>());
    const std::string fit = r.at("fit").get<std::string>();
    if (fit == "linear") {
      b.quad_drag_linear = QuadFrom(r);
      b.quad_drag_linear.c_alpha2 = 0.0;
    } else if (fit == "quadratic") {
      b.quad_drag_quadratic = QuadFrom(r);
    } else {
      throw Error(ErrorCode::kFormat, "unknown quad_drag fit " + fit);
    }
  }
  for (const auto& r : aero.value("differential_thrust", json::array())) {
    BucketModel& b = bucket_of(ModeFrom(r), r.at("airspeed_mps").get<double>());
    b.moment.differential_thrust = {r.at("m0").get<double>(),
                                    r.at("m_alpha").get<double>(),
                                    r.value("m_alpha2", 0.0), StatsFrom(r)};
  }
  for (const char* t : kSharedTables) {
    if (!aero.contains(t)) continue;
    // Shared rows first, mode-specific overrides second.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& r : aero.at(t)) {
        const bool has_mode = r.contains("mode");
        if (has_mode != (pass == 1)) continue;
        const double v = r.at("airspeed_mps").get<double>();
        for (auto& [key, b] : buckets) {
          if (b.airspeed != v) continue;
          if (has_mode && b.mode != ModeFrom(r)) continue;
          ApplySharedRow(t, r, b);
        }
      }
    }
  }

  AeroModel model;
  const std::string form = aero.value("quad_drag_form", "linear");
  if (form == "linear") {
    model.set_quad_drag_form(QuadDragForm::kLinear);
  } else if (form == "quadratic") {
    model.set_quad_drag_form(QuadDragForm::kQuadratic);
  } else {
    throw Error(ErrorCode::kFormat, "unknown quad_drag_form " + form);
  }
  for (auto& [key, b] : buckets) model.Insert(std::move(b));
  return model;
}

uint64_t Fnv1a(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

const CoefficientDatabase& BuiltinDatabase() {
  static const CoefficientDatabase db = MakeBuiltin();
  return db;
}

std::string DatabaseToJson(const CoefficientDatabase& db) {
  return DatabaseJson(db).dump(2) + "\n";
}

CoefficientDatabase DatabaseFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("database JSON: ") + e.what());
  }
  try {
    CoefficientDatabase db;
    if (!j.contains("schema_version")) {
      throw Error(ErrorCode::kFormat, "database lacks schema_version");
    }
    db.schema_version = j.at("schema_version").get<int>();
    if (db.schema_version != kDatabaseSchemaVersion) {
      throw Error(ErrorCode::kFormat, "unsupported schema_version " +
                                          std::to_string(db.schema_version));
    }
    db.name = j.value("name", "");
    if (j.contains("provenance")) {
      db.provenance = j["provenance"].value("source", "");
      db.notes = j["provenance"].value("notes", std::vector<std::string>{});
    }
    if (j.contains("vehicle")) {
      const json& v = j["vehicle"];
      VehicleGeometry& g = db.vehicle;
      g.wing_span = v.value("wing_span_m", g.wing_span);
      g.wing_chord = v.value("wing_chord_m", g.wing_chord);
      g.incidence_deg = v.value("incidence_deg", g.incidence_deg);
      g.quad_arm = v.value("quad_arm_m", g.quad_arm);
      g.mass = v.value("mass_kg", g.mass);
      g.oswald_e = v.value("oswald_e", g.oswald_e);
      g.design_stall_speed = v.value("design_stall_speed_mps", g.design_stall_speed);
      g.design_stall_alpha_deg =
          v.value("design_stall_alpha_deg", g.design_stall_alpha_deg);
      Validate(g);
    }
    if (j.contains("atmosphere")) {
      db.atmosphere.density =
          j["atmosphere"].value("density_kgm3", db.atmosphere.density);
      db.atmosphere.kinematic_viscosity = j["atmosphere"].value(
          "kinematic_viscosity_m2s", db.atmosphere.kinematic_viscosity);
      Validate(db.atmosphere);
    }
    std::vector<ThrustMapRow> rows;
    for (const auto& r : j.at("thrust_map")) {
      ThrustMapRow row;
      row.alpha_p_deg = r.at("alpha_p_deg").get<double>();
      row.airspeed = r.at("airspeed_mps").get<double>();
      row.curve = {r.at("c0").get<double>(), r.at("c1").get<double>(),
                   r.at("c2").get<double>(), r.at("c3").get<double>(),
                   r.value("r2", 0.0),       r.value("rmse", 0.0)};
      rows.push_back(row);
    }
    db.thrust_map = ThrustMap(std::move(rows));
    db.aero = AeroFrom(j.at("aero"));
    return db;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("database schema: ") + e.what());
  }
}

CoefficientDatabase LoadDatabase(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open database " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return DatabaseFromJson(ss.str());
}

void SaveDatabase(const CoefficientDatabase& db, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write database " + path);
  out << DatabaseToJson(db);
}

CoefficientDatabase DefaultDatabase() {
  const char* path = std::getenv(kDatabaseEnvVar);
  if (path && *path) return LoadDatabase(path);
  return BuiltinDatabase();
}

std::string DatabaseChecksum(const CoefficientDatabase& db) {
  const std::string canonical =
      ThrustJson(db.thrust_map).dump() + AeroJson(db.aero).dump();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a(canonical)));
  return buf;
}

}  // namespace qpaero
