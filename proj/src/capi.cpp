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

#include "qpaero/qpaero.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qpaero/aero.hpp"
#include "qpaero/database.hpp"
#include "qpaero/datared.hpp"
#include "qpaero/error.hpp"
#include "qpaero/fitting.hpp"
#include "qpaero/meshlut.hpp"
#include "qpaero/trimsim.hpp"

using nlohmann::json;
using namespace qpaero;

struct qpa_database {
  CoefficientDatabase db;
  std::unique_ptr<AeroEvaluator> evaluator;  // refers to db.aero
};

struct qpa_mesh {
  TriMesh mesh;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_json = "null";

void SetError(ErrorCode code, const std::string& message, const json& extra = {}) {
  g_error = message;
  json j = {{"error",
             {{"code", std::string(ErrorCodeName(code))},
              {"status", static_cast<int>(code)},
              {"message", message}}}};
  if (!extra.is_null()) j["error"]["detail"] = extra;
  g_error_json = j.dump();
}

qpa_status Guard(const std::function<void()>& body) {
  try {
    body();
    g_error.clear();
    g_error_json = "null";
    return QPA_OK;
  } catch (const InfeasibleError& e) {
    SetError(e.code(), e.what(),
             {{"achievable_lo", e.achievable_lo()}, {"achievable_hi", e.achievable_hi()}});
    return static_cast<qpa_status>(e.code());
  } catch (const Error& e) {
    SetError(e.code(), e.what());
    return static_cast<qpa_status>(e.code());
  } catch (const json::exception& e) {
    SetError(ErrorCode::kInvalidArgument, std::string("request: ") + e.what());
    return QPA_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    SetError(ErrorCode::kInternal, "out of memory");
    return QPA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    SetError(ErrorCode::kInternal, e.what());
    return QPA_ERR_INTERNAL;
  }
}

void Require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qpa_database* Wrap(CoefficientDatabase db) {
  auto h = std::make_unique<qpa_database>();
  h->db = std::move(db);
  h->evaluator = std::make_unique<AeroEvaluator>(h->db.aero, h->db.atmosphere,
                                                 h->db.vehicle);
  return h.release();
}

FlightMode ToMode(qpa_mode m) {
  switch (m) {
    case QPA_MODE_QUAD: return FlightMode::kQuad;
    case QPA_MODE_HYBRID: return FlightMode::kHybrid;
    case QPA_MODE_PLANE: return FlightMode::kPlane;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown mode");
}

FlightCondition ToCondition(const qpa_condition& c) {
  FlightCondition f;
  f.mode = ToMode(c.mode);
  f.alpha_deg = c.alpha_deg;
  f.airspeed = c.airspeed;
  f.esc_fwd = c.esc_fwd;
  f.esc_quad = c.esc_quad;
  f.aileron = c.aileron;
  f.elevator = c.elevator;
  f.rudder = c.rudder;
  f.pitch_thrust_split = c.pitch_thrust_split;
  return f;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- request helpers ------------------------------------------------------

FlightMode ModeField(const json& r, const char* key, FlightMode fallback) {
  if (!r.contains(key)) return fallback;
  const auto m = ParseFlightMode(r.at(key).get<std::string>());
  if (!m) {
    throw Error(ErrorCode::kInvalidArgument,
                "mode must be quad, hybrid or plane, got '" +
                    r.at(key).get<std::string>() + "'");
  }
  return *m;
}

template <typename E>
E Choice(const json& r, const char* key, E fallback,
         std::initializer_list<std::pair<const char*, E>> options) {
  if (!r.contains(key)) return fallback;
  const auto text = r.at(key).get<std::string>();
  std::string valid;
  for (const auto& [name, value] : options) {
    if (text == name) return value;
    valid += (valid.empty() ? "" : ", ") + std::string(name);
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(key) + " must be one of " + valid + ", got '" + text + "'");
}

RearThrustMode RearMode(const json& r) {
  return Choice(r, "rear_mode", RearThrustMode::kAsPrinted,
                {{"as_printed", RearThrustMode::kAsPrinted},
                 {"split_moment", RearThrustMode::kSplitMoment}});
}

TrimOptions TrimOpts(const json& r) {
  TrimOptions o;
  o.rear_mode = RearMode(r);
  o.lift_balance = Choice(r, "lift_balance", LiftBalance::kExact,
                          {{"exact", LiftBalance::kExact},
                           {"small_angle", LiftBalance::kSmallAngle}});
  o.pitch_priority = Choice(r, "pitch_priority", PitchPriority::kElevatorFirst,
                            {{"elevator", PitchPriority::kElevatorFirst},
                             {"thrust_split", PitchPriority::kThrustSplitFirst}});
  return o;
}

bool WantCsv(const json& r) {
  const std::string f = r.value("format", "json");
  if (f != "json" && f != "csv") {
    throw Error(ErrorCode::kInvalidArgument, "format must be json or csv");
  }
  return f == "csv";
}

std::string Num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void FlattenInto(const json& j, const std::string& prefix, std::string* out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      FlattenInto(v, prefix.empty() ? k : prefix + "." + k, out);
    }
    return;
  }
  std::string value;
  if (j.is_number()) {
    value = Num(j.get<double>());
  } else if (j.is_string()) {
    value = j.get<std::string>();
  } else if (j.is_boolean()) {
    value = j.get<bool>() ? "1" : "0";
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!value.empty()) value += ";";
      value += e.is_string() ? e.get<std::string>() : e.dump();
    }
  }
  *out += prefix + "," + value + "\n";
}

std::string FlatCsv(const json& j) {
  std::string out = "key,value\n";
  FlattenInto(j, "", &out);
  return out;
}

std::vector<double> Grid(const json& r, const char* key,
                         const std::vector<double>& fallback) {
  if (!r.contains(key)) return fallback;
  return r.at(key).get<std::vector<double>>();
}

TestSchedule ScheduleField(const json& r) {
  if (!r.contains("schedule") || r.at("schedule").is_null()) {
    return TestSchedule::Default();
  }
  const json& s = r.at("schedule");
  if (s.is_string()) return ScheduleFromJson(ReadFile(s.get<std::string>()));
  return ScheduleFromJson(s.dump());
}

// ---- commands -------------------------------------------------------------

json CoefficientsJson(const AeroCoefficients& c) {
  return {{"cl", c.cl},
          {"cd_plane", c.cd_plane},
          {"cd_quad", c.cd_quad},
          {"cm_structural", c.cm_structural},
          {"cm_elevator", c.cm_elevator},
          {"differential_moment_Nm", c.differential_moment},
          {"crm_da", c.crm_aileron},
          {"crm_dr", c.crm_rudder},
          {"cym_da", c.cym_aileron},
          {"cym_dr", c.cym_rudder},
          {"csf0", c.csf0},
          {"csf_dr", c.csf_rudder}};
}

std::string CmdEval(const qpa_database& h, const json& r, int* flagged) {
  FlightCondition c;
  c.mode = ModeField(r, "mode", FlightMode::kPlane);
  c.alpha_deg = r.value("alpha_deg", 0.0);
  c.airspeed = r.value("airspeed_mps", 0.0);
  c.esc_fwd = r.value("esc_fwd_us", kEscIdle);
  c.esc_quad = r.value("esc_quad_us", kEscIdle);
  c.aileron = r.value("aileron", 0.0);
  c.elevator = r.value("elevator", 0.0);
  c.rudder = r.value("rudder", 0.0);
  c.pitch_thrust_split = r.value("pitch_thrust_split_N", 0.0);
  Validate(c);
  const bool interp = r.value("interp", false);
  const DomainPolicy policy =
      r.value("permissive", false) ? DomainPolicy::kPermissive : DomainPolicy::kEnforce;
  const auto& db = h.db;
  AeroCoefficients coeff;
  AeroForces aero;
  std::string source;
  if (interp) {
    coeff = h.evaluator->Coefficients(c.mode, c.alpha_deg, c.airspeed, policy);
    aero = h.evaluator->Forces(c, policy);
    source = std::string(ToString(h.evaluator->SourceAt(c.mode, c.airspeed)));
  } else {
    coeff = CoefficientsFor(db.aero, c, policy);
    aero = AssembleAeroForces(coeff, c, db.atmosphere, db.vehicle);
    source = c.airspeed == 0.0 ? "none" : "bucket";
  }
  PropulsionForces prop;
  const ForcesMoments w =
      AssembleWrench(aero, db.thrust_map, c, db.vehicle, RearMode(r), &prop);
  json out = {
      {"condition",
       {{"mode", std::string(ToString(c.mode))},
        {"alpha_deg", c.alpha_deg},
        {"airspeed_mps", c.airspeed},
        {"esc_fwd_us", c.esc_fwd},
        {"esc_quad_us", c.esc_quad},
        {"aileron", c.aileron},
        {"elevator", c.elevator},
        {"rudder", c.rudder},
        {"pitch_thrust_split_N", c.pitch_thrust_split}}},
      {"reynolds", Reynolds(c.airspeed, db.vehicle.wing_chord,
                            db.atmosphere.kinematic_viscosity)},
      {"dynamic_pressure_Pa", db.atmosphere.dynamic_pressure(c.airspeed)},
      {"coefficient_source", source},
      {"coefficients", CoefficientsJson(coeff)},
      {"aero",
       {{"lift_N", aero.lift},
        {"drag_N", aero.drag},
        {"side_force_N", aero.side_force},
        {"roll_moment_Nm", aero.roll_moment},
        {"pitch_moment_Nm", aero.pitch_moment},
        {"yaw_moment_Nm", aero.yaw_moment}}},
      {"propulsion",
       {{"thrust_fwd_N", prop.forward},
        {"thrust_vert_module_N", prop.module_vertical},
        {"thrust_vert_front_each_N", prop.vertical.front_each},
        {"thrust_vert_rear_each_N", prop.vertical.rear_each},
        {"thrust_vert_total_N", prop.vertical.total}}},
      {"wrench_body",
       {{"fx_N", w.fx}, {"fy_N", w.fy}, {"fz_N", w.fz},
        {"mx_Nm", w.mx}, {"my_Nm", w.my}, {"mz_Nm", w.mz}}}};
  if (flagged) *flagged = 0;
  return WantCsv(r) ? FlatCsv(out) : out.dump(2) + "\n";
}

std::string CmdTrim(const qpa_database& h, const json& r, int* flagged) {
  const std::string kind = r.value("kind", "level");
  TrimSolution t;
  if (kind == "hover") {
    t = HoverTrim(h.db.vehicle, h.db.thrust_map, RearMode(r));
  } else if (kind == "level") {
    t = LevelTrim(ModeField(r, "mode", FlightMode::kPlane), r.value("airspeed_mps", 0.0),
                  *h.evaluator, h.db.thrust_map, r.value("alpha_deg", 0.0), TrimOpts(r));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "trim kind must be hover or level");
  }
  if (flagged) *flagged = t.feasible ? 0 : 1;
  return WantCsv(r) ? FlatCsv(json::parse(TrimToJson(t))) : TrimToJson(t);
}

std::string CmdTransition(const qpa_database& h, const json& r, int* flagged) {
  TransitionOptions o;
  o.trim = TrimOpts(r);
  o.alpha_deg = r.value("alpha_deg", 0.0);
  o.alpha_policy = Choice(r, "alpha_policy", AlphaPolicy::kHold,
                          {{"hold", AlphaPolicy::kHold},
                           {"min_vertical_thrust", AlphaPolicy::kMinVerticalThrust}});
  const auto s = Transition(r.value("v_from", 0.0), r.value("v_to", 11.0),
                            r.value("steps", 12), *h.evaluator, h.db.thrust_map, o);
  if (flagged) {
    *flagged = 0;
    for (const auto& st : s.steps) *flagged |= st.trim.feasible ? 0 : 1;
  }
  return WantCsv(r) ? TransitionToCsv(s) : TransitionToJson(s);
}

std::string CmdEnvelope(const qpa_database& h, const json& r, int* flagged) {
  const auto m = Envelope(ModeField(r, "mode", FlightMode::kHybrid), *h.evaluator,
                          h.db.thrust_map, Grid(r, "alphas_deg", kMeshAlphas),
                          Grid(r, "airspeeds_mps", {0.0, 5.0, 11.0, 15.0}),
                          TrimOpts(r));
  if (flagged) {
    *flagged = 0;
    for (const auto& p : m.points) *flagged |= p.feasible ? 0 : 1;
  }
  return WantCsv(r) ? EnvelopeToCsv(m) : EnvelopeToJson(m);
}

std::string CmdMesh(const qpa_database& h, const json& r, int* flagged) {
  const std::string name = r.value("coefficient", "cl");
  const auto kind = ParseCoefficientKind(name);
  if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown coefficient '" + name + "'");
  const TriMesh m = BuildMesh(h.db.aero, ModeField(r, "mode", FlightMode::kHybrid), *kind,
                              Grid(r, "alphas_deg", kMeshAlphas),
                              Grid(r, "airspeeds_mps", kMeshAirspeeds));
  if (flagged) *flagged = 0;
  if (!WantCsv(r)) return MeshToJson(m);
  std::string out =
      "triangle,alpha0_deg,v0_mps,c0,alpha1_deg,v1_mps,c1,alpha2_deg,v2_mps,c2,a,b,c,d\n";
  for (size_t i = 0; i < m.triangles.size(); ++i) {
    const auto& t = m.triangles[i];
    out += std::to_string(i);
    for (size_t v : t.vertices) {
      const auto& p = m.vertices[v];
      out += "," + Num(p.alpha_deg) + "," + Num(p.airspeed) + "," + Num(p.value);
    }
    out += "," + Num(t.plane.a) + "," + Num(t.plane.b) + "," + Num(t.plane.c) + "," +
           Num(t.plane.d) + "\n";
  }
  return out;
}

std::string CmdReduce(const qpa_database& h, const json& r, int* flagged) {
  const TestSchedule schedule = ScheduleField(r);
  ReduceOptions o;
  o.rear_mode = RearMode(r);
  o.reference = &h.db.aero;
  o.plane_drag = Choice(r, "plane_drag", PlaneDragReference::kFormPlusInduced,
                        {{"form_induced", PlaneDragReference::kFormPlusInduced},
                         {"reference", PlaneDragReference::kReferenceModel},
                         {"none", PlaneDragReference::kNone}});
  std::vector<ReducedPoint> points;
  json warnings = json::array(), rejected = json::array(), provenance = json::array();
  for (const auto& run : r.at("runs")) {
    const std::string name = run.value("log", std::string("<inline>"));
    ParsedLog log = run.contains("log_text")
                        ? ParseLogText(run.at("log_text").get<std::string>())
                        : ParseLog(run.at("log").get<std::string>());
    for (const auto& w : log.warnings) warnings.push_back(name + ": " + w);
    for (const auto& e : log.rejected) {
      rejected.push_back({{"log", name}, {"line", e.line}, {"message", e.message}});
    }
    std::vector<std::string> prov;
    if (run.contains("offsets")) {
      for (const auto& [ch, off] : run.at("offsets").items()) {
        log.records = ApplyOffset(std::move(log.records), ch, off.get<double>(), &prov);
      }
    }
    for (const auto& p : prov) provenance.push_back(name + ": " + p);
    const Segmentation seg = Segment(log.records, schedule);
    for (const auto& w : seg.warnings) warnings.push_back(name + ": " + w);
    for (const auto& win : seg.windows) {
      points.push_back(Reduce(win, run.at("alpha_deg").get<double>(),
                              run.at("airspeed_mps").get<double>(), h.db.thrust_map,
                              h.db.vehicle, h.db.atmosphere, o));
    }
  }
  if (flagged) *flagged = rejected.empty() ? 0 : 1;
  if (WantCsv(r)) return ReducedPointsToCsv(points);
  return json{{"points", json::parse(ReducedPointsToJson(points))},
              {"warnings", warnings},
              {"rejected", rejected},
              {"provenance", provenance}}
             .dump(2) +
         "\n";
}

std::vector<ThrustSamplePoint> ThrustSamples(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  std::vector<ThrustSamplePoint> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    ThrustSamplePoint p;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p.alpha_p_deg, &p.airspeed,
                    &p.esc_us, &p.thrust) != 4) {
      throw Error(ErrorCode::kFormat, "thrust sample row '" + line + "'");
    }
    out.push_back(p);
  }
  return out;
}

std::vector<ReducedPoint> PointsField(const json& r) {
  if (r.contains("points_text")) {
    const auto text = r.at("points_text").get<std::string>();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
      return ReducedPointsFromJson(text);
    }
    return ReducedPointsFromCsv(text);
  }
  const auto path = r.at("points").get<std::string>();
  const auto text = ReadFile(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return ReducedPointsFromCsv(text);
  }
  return ReducedPointsFromJson(text);
}

std::string CmdFit(const qpa_database& h, const json& r, int* flagged) {
  AeroFitOptions o;
  o.geometry = h.db.vehicle;
  o.atmosphere = h.db.atmosphere;
  o.min_alpha_deg = r.value("min_alpha_deg", o.min_alpha_deg);
  o.stall_alpha_deg = r.value("stall_alpha_deg", o.stall_alpha_deg);
  o.stall_alpha_low_speed_deg =
      r.value("stall_alpha_low_speed_deg", o.stall_alpha_low_speed_deg);
  const AeroSuiteFit fit = FitAeroSuite(PointsField(r), o);

  CoefficientDatabase db;
  db.name = r.value("name", std::string("refit"));
  db.provenance = r.value("provenance", std::string("fit-report"));
  db.vehicle = h.db.vehicle;
  db.atmosphere = h.db.atmosphere;
  db.thrust_map = h.db.thrust_map;
  db.aero = fit.model;
  db.aero.set_quad_drag_form(h.db.aero.quad_drag_form());
  db.notes = fit.report.warnings;
  json report = json::array();
  int bad = 0;
  for (const auto& b : fit.report.buckets) {
    bad |= b.fitted ? 0 : 1;
    report.push_back({{"mode", std::string(ToString(b.mode))},
                      {"airspeed_mps", b.airspeed},
                      {"fitted", b.fitted},
                      {"n_points", b.n_points},
                      {"n_excluded_stall", b.n_excluded_stall},
                      {"messages", b.messages}});
  }
  json thrust_errors = json::array();
  if (r.contains("thrust_samples")) {
    const ThrustTableFit tf =
        FitThrustTable(ThrustSamples(ReadFile(r.at("thrust_samples").get<std::string>())));
    for (const auto& e : tf.errors) {
      thrust_errors.push_back({{"alpha_p_deg", e.alpha_p_deg},
                               {"airspeed_mps", e.airspeed},
                               {"message", e.message}});
    }
    if (tf.map) {
      db.thrust_map = *tf.map;
    } else {
      bad = 1;
      db.notes.push_back("thrust samples did not form a complete grid; map kept");
    }
    if (!tf.errors.empty()) bad = 1;
  }
  if (flagged) *flagged = bad;
  if (WantCsv(r)) {
    std::string out = "mode,airspeed_mps,fitted,n_points,n_excluded_stall,messages\n";
    for (const auto& b : fit.report.buckets) {
      std::string msgs;
      for (const auto& m : b.messages) msgs += (msgs.empty() ? "" : ";") + m;
      out += std::string(ToString(b.mode)) + "," + Num(b.airspeed) + "," +
             (b.fitted ? "1" : "0") + "," + std::to_string(b.n_points) + "," +
             std::to_string(b.n_excluded_stall) + "," + msgs + "\n";
    }
    return out;
  }
  return json{{"database", json::parse(DatabaseToJson(db))},
              {"report", {{"buckets", report},
                          {"warnings", fit.report.warnings},
                          {"thrust_cell_errors", thrust_errors}}}}
             .dump(2) +
         "\n";
}

std::string CmdSynth(const qpa_database& h, const json& r, int* flagged) {
  SynthOptions o;
  o.noise_sigma = r.value("noise_sigma", 0.0);
  o.seed = r.value("seed", uint64_t{1});
  o.sample_rate_hz = r.value("sample_rate_hz", 1000.0);
  o.temperature_c = r.value("temperature_c", 20.0);
  o.rear_mode = RearMode(r);
  const auto log = SynthesizeLog(h.db.aero, h.db.thrust_map, h.db.vehicle,
                                 h.db.atmosphere, ScheduleField(r),
                                 r.value("alpha_deg", 0.0), r.value("airspeed_mps", 11.0), o);
  if (flagged) *flagged = 0;
  return LogToCsv(log);
}

}  // namespace

extern "C" {

const char* qpa_version(void) { return "1.0.0"; }

const char* qpa_status_name(qpa_status status) {
  static thread_local std::string name;
  name = std::string(ErrorCodeName(static_cast<ErrorCode>(status)));
  return name.c_str();
}

const char* qpa_last_error(void) { return g_error.c_str(); }
const char* qpa_last_error_json(void) { return g_error_json.c_str(); }
void qpa_string_free(char* s) { std::free(s); }

qpa_condition qpa_condition_default(void) {
  qpa_condition c{};
  c.mode = QPA_MODE_PLANE;
  c.esc_fwd = kEscIdle;
  c.esc_quad = kEscIdle;
  return c;
}

qpa_status qpa_database_builtin(qpa_database** out) {
  return Guard([&] {
    Require(out, "out");
    *out = Wrap(BuiltinDatabase());
  });
}

qpa_status qpa_database_default(qpa_database** out) {
  return Guard([&] {
    Require(out, "out");
    *out = Wrap(DefaultDatabase());
  });
}

qpa_status qpa_database_load(const char* path, qpa_database** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = Wrap(LoadDatabase(path));
  });
}

qpa_status qpa_database_from_json(const char* text, qpa_database** out) {
  return Guard([&] {
    Require(text, "text");
    Require(out, "out");
    *out = Wrap(DatabaseFromJson(text));
  });
}

void qpa_database_free(qpa_database* db) { delete db; }

qpa_status qpa_database_to_json(const qpa_database* db, char** out) {
  return Guard([&] {
    Require(db, "db");
    Require(out, "out");
    *out = Dup(DatabaseToJson(db->db));
  });
}

qpa_status qpa_database_checksum(const qpa_database* db, char** out) {
  return Guard([&] {
    Require(db, "db");
    Require(out, "out");
    *out = Dup(DatabaseChecksum(db->db));
  });
}

qpa_status qpa_reynolds(double v, double chord, double nu, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = Reynolds(v, chord, nu);
  });
}

qpa_status qpa_dynamic_thrust(const qpa_database* db, double alpha_p, double v,
                              double esc, double* out) {
  return Guard([&] {
    Require(db, "db");
    Require(out, "out");
    *out = DynamicThrust(db->db.thrust_map, alpha_p, v, esc);
  });
}

qpa_status qpa_invert_thrust(const qpa_database* db, double alpha_p, double v,
                             double thrust, double* esc) {
  return Guard([&] {
    Require(db, "db");
    Require(esc, "esc_us");
    *esc = InvertThrust(db->db.thrust_map, alpha_p, v, thrust);
  });
}

qpa_status qpa_total_wrench(const qpa_database* db, const qpa_condition* c,
                            qpa_wrench* out) {
  return Guard([&] {
    Require(db, "db");
    Require(c, "condition");
    Require(out, "out");
    const ForcesMoments w = TotalWrench(db->db.aero, db->db.thrust_map, ToCondition(*c),
                                        db->db.atmosphere, db->db.vehicle);
    *out = {w.fx, w.fy, w.fz, w.mx, w.my, w.mz};
  });
}

qpa_status qpa_mesh_build(const qpa_database* db, qpa_mode mode,
                          const char* coefficient, qpa_mesh** out) {
  return Guard([&] {
    Require(db, "db");
    Require(coefficient, "coefficient");
    Require(out, "out");
    const auto kind = ParseCoefficientKind(coefficient);
    if (!kind) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("unknown coefficient '") + coefficient + "'");
    }
    auto m = std::make_unique<qpa_mesh>();
    m->mesh = BuildMesh(db->db.aero, ToMode(mode), *kind);
    *out = m.release();
  });
}

void qpa_mesh_free(qpa_mesh* mesh) { delete mesh; }

qpa_status qpa_mesh_interp(const qpa_mesh* mesh, double alpha, double v, double* out) {
  return Guard([&] {
    Require(mesh, "mesh");
    Require(out, "out");
    *out = Interp(mesh->mesh, alpha, v);
  });
}

qpa_status qpa_mesh_locate(const qpa_mesh* mesh, double alpha, double v,
                           size_t* triangle, double plane[4]) {
  return Guard([&] {
    Require(mesh, "mesh");
    const size_t i = Locate(mesh->mesh, alpha, v);
    if (triangle) *triangle = i;
    if (plane) {
      const auto& p = mesh->mesh.triangles[i].plane;
      plane[0] = p.a;
      plane[1] = p.b;
      plane[2] = p.c;
      plane[3] = p.d;
    }
  });
}

qpa_status qpa_mesh_to_json(const qpa_mesh* mesh, char** out) {
  return Guard([&] {
    Require(mesh, "mesh");
    Require(out, "out");
    *out = Dup(MeshToJson(mesh->mesh));
  });
}

qpa_status qpa_command(const qpa_database* db, const char* command,
                       const char* request, char** out, int* flagged) {
  return Guard([&] {
    Require(db, "db");
    Require(command, "command");
    Require(out, "out");
    const json r = request && *request ? json::parse(request) : json::object();
    if (!r.is_object()) {
      throw Error(ErrorCode::kInvalidArgument, "request must be a JSON object");
    }
    const std::string cmd = command;
    std::string text;
    if (cmd == "eval") {
      text = CmdEval(*db, r, flagged);
    } else if (cmd == "trim") {
      text = CmdTrim(*db, r, flagged);
    } else if (cmd == "transition") {
      text = CmdTransition(*db, r, flagged);
    } else if (cmd == "envelope") {
      text = CmdEnvelope(*db, r, flagged);
    } else if (cmd == "mesh") {
      text = CmdMesh(*db, r, flagged);
    } else if (cmd == "reduce") {
      text = CmdReduce(*db, r, flagged);
    } else if (cmd == "fit") {
      text = CmdFit(*db, r, flagged);
    } else if (cmd == "synth") {
      text = CmdSynth(*db, r, flagged);
    } else if (cmd == "db_export") {
      text = DatabaseToJson(db->db);
      if (flagged) *flagged = 0;
    } else if (cmd == "db_checksum") {
      text = WantCsv(r) ? "checksum\n" + DatabaseChecksum(db->db) + "\n"
                        : json{{"checksum", DatabaseChecksum(db->db)},
                               {"name", db->db.name},
                               {"provenance", db->db.provenance}}
                                  .dump(2) + "\n";
      if (flagged) *flagged = 0;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown command '" + cmd + "'");
    }
    *out = Dup(text);
  });
}

}  // extern "C"
