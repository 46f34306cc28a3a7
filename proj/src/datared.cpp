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

#include "qpaero/datared.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qpaero/error.hpp"

namespace qpaero {
namespace {

using nlohmann::json;

// 3 deg F of drift, in kelvin.
constexpr double kTemperatureDriftLimit = 3.0 * 5.0 / 9.0;

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool ParseDouble(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

double MedianStep(const std::vector<LogRecord>& records) {
  if (records.size() < 2) return 0.0;
  std::vector<double> t;
  t.reserve(records.size());
  for (const auto& r : records) t.push_back(r.t);
  std::sort(t.begin(), t.end());
  std::vector<double> dt;
  dt.reserve(t.size() - 1);
  for (size_t i = 1; i < t.size(); ++i) dt.push_back(t[i] - t[i - 1]);
  std::nth_element(dt.begin(), dt.begin() + dt.size() / 2, dt.end());
  return dt[dt.size() / 2];
}

double RoundTo(double x, double quantum) { return std::round(x / quantum) * quantum; }

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

std::string DeflectionLabel(const char* surface, double pct) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%+g", surface, pct);
  return buf;
}

}  // namespace

const std::vector<std::string>& LogColumns() {
  static const std::vector<std::string> cols = {
      "Fx_N",  "Fy_N", "Fz_N", "Mx_Nm", "My_Nm",  "Mz_Nm", "nu_quad_us",
      "nu_fwd_us", "da",  "de",   "dr",    "Va_mps", "temp_C"};
  return cols;
}

ParsedLog ParseLogText(const std::string& text) {
  ParsedLog out;
  std::stringstream in(text);
  std::string line;
  size_t line_no = 0;

  // Header: first non-blank line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitCsv(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::kFormat, "log has no header");
  int t_col = -1;
  std::array<int, kChannelCount> col{};
  col.fill(-1);
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "t_s") t_col = static_cast<int>(i);
    for (size_t c = 0; c < LogColumns().size(); ++c) {
      if (header[i] == LogColumns()[c]) col[c] = static_cast<int>(i);
    }
  }
  if (t_col < 0 || std::count(col.begin(), col.end(), -1) > 0) {
    throw Error(ErrorCode::kFormat,
                "log header missing or incomplete (expected t_s,Fx_N,...,temp_C)");
  }

  double last_t = -INFINITY;
  size_t last_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != header.size()) {
      out.rejected.push_back(
          {line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size())});
      continue;
    }
    LogRecord r;
    bool ok = ParseDouble(fields[t_col], &r.t) && std::isfinite(r.t);
    std::string bad = ok ? "" : "t_s";
    for (int c = 0; ok && c < kChannelCount; ++c) {
      double v;
      if (!ParseDouble(fields[col[c]], &v) || !std::isfinite(v)) {
        ok = false;
        bad = LogColumns()[c];
      } else {
        r.values[c] = v;
      }
    }
    if (!ok) {
      out.rejected.push_back({line_no, "non-numeric or non-finite " + bad});
      continue;
    }
    if (!(r.t > last_t)) {
      throw Error(ErrorCode::kSequencing,
                  "time does not increase at line " + std::to_string(line_no) +
                      " (previous sample on line " + std::to_string(last_line) +
                      ")");
    }
    last_t = r.t;
    last_line = line_no;
    out.records.push_back(r);
  }

  if (out.records.size() >= 2) {
    const double dt = MedianStep(out.records);
    const double rate = 1.0 / dt;
    if (std::fabs(rate - 1000.0) > 100.0) {
      out.warnings.push_back(Fmt("sample rate %.6g Hz outside 1000 Hz +-10 %%", rate));
    }
    double tmin = INFINITY, tmax = -INFINITY;
    for (const auto& r : out.records) {
      tmin = std::min(tmin, r[kTemperature]);
      tmax = std::max(tmax, r[kTemperature]);
    }
    if (tmax - tmin > kTemperatureDriftLimit) {
      out.warnings.push_back(
          Fmt("temperature drifted %.3g C (> 3 F); recalibration advised",
              tmax - tmin));
    }
  }
  return out;
}

ParsedLog ParseLog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open log " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseLogText(ss.str());
}

std::string LogToCsv(const std::vector<LogRecord>& records) {
  std::string out = "t_s";
  for (const auto& c : LogColumns()) out += "," + c;
  out += "\n";
  char buf[32];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.t);
    out += buf;
    for (double v : r.values) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::vector<LogRecord> ApplyOffset(std::vector<LogRecord> records,
                                   std::string_view channel, double offset,
                                   std::vector<std::string>* provenance) {
  static const char* kLoad[] = {"Fx", "Fy", "Fz", "Mx", "My", "Mz"};
  int c = -1;
  for (int i = 0; i < 6; ++i) {
    const std::string full = LogColumns()[i];
    if (channel == kLoad[i] || channel == full) c = i;
  }
  if (c < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "offset channel must be one of Fx, Fy, Fz, Mx, My, Mz, got '" +
                    std::string(channel) + "'");
  }
  for (auto& r : records) r.values[c] += offset;
  if (provenance) {
    provenance->push_back(std::string("offset ") + kLoad[c] +
                          Fmt(" %+.6g", offset));
  }
  return records;
}

TestSchedule TestSchedule::Default() {
  TestSchedule s;
  s.steps = {
      {30, 55, 0, 0, 0, 0},    {50, 55, 50, 0, 0, 0},   {70, 55, 75, 0, 0, 0},
      {90, 55, 100, 0, 0, 0},  {130, 0, 75, 0, 0, 0},   {140, 0, 75, -80, 0, 0},
      {150, 0, 75, -40, 0, 0}, {160, 0, 75, 40, 0, 0},  {170, 0, 75, 80, 0, 0},
      {180, 0, 75, 0, -80, 0}, {190, 0, 75, 0, -40, 0}, {200, 0, 75, 0, 40, 0},
      {210, 0, 75, 0, 80, 0},  {220, 0, 75, 0, 0, -80}, {230, 0, 75, 0, 0, -40},
      {240, 0, 75, 0, 0, 40},  {250, 0, 75, 0, 0, 80},
  };
  return s;
}

double TestSchedule::StartTime(size_t step) const {
  return step == 0 ? 0.0 : steps.at(step - 1).end_time;
}

size_t TestSchedule::StepAt(double t) const {
  for (size_t i = 0; i < steps.size(); ++i) {
    if (t < steps[i].end_time) return i;
  }
  return steps.size();
}

FlightMode TestSchedule::ModeOf(size_t step) const {
  const auto& s = steps.at(step);
  if (s.quad_pct > 0.0) return s.fwd_pct > 0.0 ? FlightMode::kHybrid : FlightMode::kQuad;
  return FlightMode::kPlane;
}

void Validate(const TestSchedule& schedule) {
  double prev = 0.0;
  for (const auto& s : schedule.steps) {
    if (!(s.end_time > prev)) {
      throw Error(ErrorCode::kFormat, "schedule end times must strictly increase");
    }
    for (double pct : {s.quad_pct, s.fwd_pct}) {
      if (pct < 0.0 || pct > 100.0) {
        throw Error(ErrorCode::kFormat, "throttle outside 0..100 %");
      }
    }
    for (double pct : {s.aileron_pct, s.elevator_pct, s.rudder_pct}) {
      if (pct < -100.0 || pct > 100.0) {
        throw Error(ErrorCode::kFormat, "deflection outside -100..100 %");
      }
    }
    prev = s.end_time;
  }
}

TestSchedule ScheduleFromJson(const std::string& text) {
  TestSchedule s;
  try {
    const json j = json::parse(text);
    const json& steps = j.is_array() ? j : j.at("steps");
    for (const auto& r : steps) {
      ScheduleStep st;
      st.end_time = r.at("end_time_s").get<double>();
      st.quad_pct = r.value("quad_pct", 0.0);
      st.fwd_pct = r.value("fwd_pct", 0.0);
      st.aileron_pct = r.value("aileron_pct", 0.0);
      st.elevator_pct = r.value("elevator_pct", 0.0);
      st.rudder_pct = r.value("rudder_pct", 0.0);
      s.steps.push_back(st);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("schedule JSON: ") + e.what());
  }
  Validate(s);
  return s;
}

std::string ScheduleToJson(const TestSchedule& schedule) {
  json steps = json::array();
  for (const auto& s : schedule.steps) {
    steps.push_back({{"end_time_s", s.end_time},
                     {"quad_pct", s.quad_pct},
                     {"fwd_pct", s.fwd_pct},
                     {"aileron_pct", s.aileron_pct},
                     {"elevator_pct", s.elevator_pct},
                     {"rudder_pct", s.rudder_pct}});
  }
  return json{{"steps", steps}}.dump(2) + "\n";
}

std::vector<WindowSpec> DefaultWindows(const TestSchedule& schedule) {
  std::vector<WindowSpec> out;
  const auto& st = schedule.steps;
  auto last = [&](size_t i, double span, const std::string& label, FlightMode m) {
    const double end = st[i].end_time;
    const double start = std::max(schedule.StartTime(i), end - span);
    out.push_back({label, m, i, start, end});
  };
  auto deflected = [](const ScheduleStep& s) {
    return s.aileron_pct != 0.0 || s.elevator_pct != 0.0 || s.rudder_pct != 0.0;
  };
  for (size_t i = 0; i < st.size(); ++i) {
    if (st[i].quad_pct > 0.0 && st[i].fwd_pct == 0.0 && !deflected(st[i])) {
      last(i, 10.0, "quad", FlightMode::kQuad);
      break;
    }
  }
  size_t best = st.size();
  for (size_t i = 0; i < st.size(); ++i) {
    if (st[i].quad_pct > 0.0 && st[i].fwd_pct > 0.0 && !deflected(st[i]) &&
        (best == st.size() || st[i].fwd_pct > st[best].fwd_pct)) {
      best = i;
    }
  }
  if (best < st.size()) last(best, 10.0, "hybrid", FlightMode::kHybrid);
  for (size_t i = 0; i < st.size(); ++i) {
    if (st[i].quad_pct == 0.0 && !deflected(st[i])) {
      last(i, 20.0, "plane", FlightMode::kPlane);
      break;
    }
  }
  for (size_t i = 0; i < st.size(); ++i) {
    if (!deflected(st[i])) continue;
    std::string label;
    if (st[i].aileron_pct != 0.0) label = DeflectionLabel("aileron", st[i].aileron_pct);
    if (st[i].elevator_pct != 0.0) label += DeflectionLabel("elevator", st[i].elevator_pct);
    if (st[i].rudder_pct != 0.0) label += DeflectionLabel("rudder", st[i].rudder_pct);
    last(i, 5.0, label, schedule.ModeOf(i));
  }
  return out;
}

Segmentation Segment(const std::vector<LogRecord>& records,
                     const TestSchedule& schedule) {
  return Segment(records, DefaultWindows(schedule));
}

Segmentation Segment(const std::vector<LogRecord>& records,
                     const std::vector<WindowSpec>& windows) {
  Segmentation out;
  if (records.empty()) return out;
  const double dt = MedianStep(records);
  const double tol = 1.5 * dt;
  double first = INFINITY, last = -INFINITY;
  for (const auto& r : records) {
    first = std::min(first, r.t);
    last = std::max(last, r.t);
  }
  for (const auto& spec : windows) {
    if (last < spec.t_end - tol || first > spec.t_start + tol) {
      out.warnings.push_back("window '" + spec.label +
                             Fmt("' [%g, %g) s not covered by the log; omitted",
                                 spec.t_start, spec.t_end));
      continue;
    }
    std::vector<const LogRecord*> in;
    for (const auto& r : records) {
      if (r.t >= spec.t_start && r.t < spec.t_end) in.push_back(&r);
    }
    if (in.empty()) {
      out.warnings.push_back("window '" + spec.label + "' has no samples; omitted");
      continue;
    }
    // Fixed accumulation order makes the statistics independent of input order.
    std::stable_sort(in.begin(), in.end(), [](const LogRecord* a, const LogRecord* b) {
      return a->t < b->t;
    });
    SegmentWindow w;
    w.spec = spec;
    w.n = in.size();
    for (int c = 0; c < kChannelCount; ++c) {
      double sum = 0.0;
      for (const auto* r : in) sum += r->values[c];
      const double mean = sum / static_cast<double>(w.n);
      double ss = 0.0;
      for (const auto* r : in) ss += (r->values[c] - mean) * (r->values[c] - mean);
      w.stats[c].mean = mean;
      w.stats[c].sd = w.n > 1 ? std::sqrt(ss / static_cast<double>(w.n - 1)) : 0.0;
    }
    out.windows.push_back(w);
  }
  return out;
}

ReducedPoint Reduce(const SegmentWindow& window, double alpha_deg,
                    double airspeed, const ThrustMap& thrust,
                    const VehicleGeometry& g, const Atmosphere& atm,
                    const ReduceOptions& options) {
  if (airspeed < 0.0) throw Error(ErrorCode::kDomain, "airspeed must be >= 0");
  ReducedPoint p;
  p.label = window.spec.label;
  p.mode = window.spec.mode;
  p.alpha_deg = alpha_deg;
  p.airspeed = airspeed;
  // Commands are discrete; quantize the means so equal settings compare equal.
  p.aileron = RoundTo(window[kAileron].mean, 1e-6);
  p.elevator = RoundTo(window[kElevator].mean, 1e-6);
  p.rudder = RoundTo(window[kRudder].mean, 1e-6);
  p.esc_fwd = RoundTo(window[kNuFwd].mean, 1e-6);
  p.esc_quad = RoundTo(window[kNuQuad].mean, 1e-6);
  p.n_samples = window.n;

  const double fx = window[kFx].mean, fz = window[kFz].mean;
  p.mx = window[kMx].mean;
  p.my = window[kMy].mean;
  p.mz = window[kMz].mean;
  p.side_force = window[kFy].mean;

  if (p.mode != FlightMode::kQuad) {
    p.thrust_fwd = DynamicThrust(thrust, PropAlpha(alpha_deg, PropulsionModule::kForward),
                                 airspeed, p.esc_fwd);
  }
  if (p.mode != FlightMode::kPlane) {
    const double td = DynamicThrust(
        thrust, PropAlpha(alpha_deg, PropulsionModule::kVertical), airspeed, p.esc_quad);
    p.thrust_vert = VerticalThrustTotal(td, p.my, g.quad_arm, options.rear_mode).total;
  }
  const double a = DegToRad(alpha_deg);
  const double ca = std::cos(a), sa = std::sin(a);
  p.lift = -(fz + p.thrust_vert) * ca + (fx - p.thrust_fwd) * sa;
  p.drag = -(fz + p.thrust_vert) * sa - (fx - p.thrust_fwd) * ca;
  // Channel spreads propagated as independent.
  const double sx = window[kFx].sd, sz = window[kFz].sd;
  p.sd_lift = std::hypot(sz * ca, sx * sa);
  p.sd_drag = std::hypot(sz * sa, sx * ca);
  p.sd_side_force = window[kFy].sd;
  p.sd_mx = window[kMx].sd;
  p.sd_my = window[kMy].sd;
  p.sd_mz = window[kMz].sd;

  if (airspeed <= 0.0) return p;
  const double qs = atm.dynamic_pressure(airspeed) * g.planform_area();
  const double qcs = qs * g.wing_chord;
  p.coefficients_defined = true;
  p.cl = p.lift / qs;
  p.cd_total = p.drag / qs;
  p.cm = p.my / qcs;
  p.crm = p.mx / qcs;
  p.cym = p.mz / qcs;
  p.csf = p.side_force / qs;
  if (p.mode == FlightMode::kPlane) {
    p.cd_plane = p.cd_total;
    p.cd_quad = 0.0;
    p.cd_form = p.cd_total - InducedDrag(p.cl, g);
    return p;
  }
  const AeroModel* ref = options.reference;
  std::optional<double> bucket;
  if (ref) bucket = ref->SelectBucket(p.mode, airspeed);
  if (options.plane_drag == PlaneDragReference::kNone || !bucket) return p;
  const BucketModel& b = ref->Bucket(p.mode, *bucket);
  if (options.plane_drag == PlaneDragReference::kReferenceModel) {
    p.cd_plane = b.plane_drag.Evaluate(alpha_deg);
  } else {
    p.cd_plane = b.form_drag.Evaluate(alpha_deg) + InducedDrag(p.cl, g);
  }
  p.cd_quad = (p.drag - qs * p.cd_plane) / airspeed;
  return p;
}

namespace {

struct PointField {
  const char* name;
  double ReducedPoint::*field;
};

constexpr PointField kPointFields[] = {
    {"alpha_deg", &ReducedPoint::alpha_deg}, {"airspeed_mps", &ReducedPoint::airspeed},
    {"da", &ReducedPoint::aileron},          {"de", &ReducedPoint::elevator},
    {"dr", &ReducedPoint::rudder},           {"nu_fwd_us", &ReducedPoint::esc_fwd},
    {"nu_quad_us", &ReducedPoint::esc_quad}, {"T_fwd_N", &ReducedPoint::thrust_fwd},
    {"T_vert_N", &ReducedPoint::thrust_vert}, {"L_N", &ReducedPoint::lift},
    {"D_N", &ReducedPoint::drag},            {"SF_N", &ReducedPoint::side_force},
    {"Mx_Nm", &ReducedPoint::mx},            {"My_Nm", &ReducedPoint::my},
    {"Mz_Nm", &ReducedPoint::mz},            {"sd_L_N", &ReducedPoint::sd_lift},
    {"sd_D_N", &ReducedPoint::sd_drag},      {"sd_SF_N", &ReducedPoint::sd_side_force},
    {"sd_Mx_Nm", &ReducedPoint::sd_mx},      {"sd_My_Nm", &ReducedPoint::sd_my},
    {"sd_Mz_Nm", &ReducedPoint::sd_mz},      {"CL", &ReducedPoint::cl},
    {"CD", &ReducedPoint::cd_total},         {"CDP", &ReducedPoint::cd_plane},
    {"CDPf", &ReducedPoint::cd_form},        {"CDQ", &ReducedPoint::cd_quad},
    {"CM", &ReducedPoint::cm},               {"Crm", &ReducedPoint::crm},
    {"Cym", &ReducedPoint::cym},             {"CSF", &ReducedPoint::csf},
};

}  // namespace

std::string ReducedPointsToCsv(const std::vector<ReducedPoint>& points) {
  std::string out = "label,mode,n";
  for (const auto& f : kPointFields) out += std::string(",") + f.name;
  out += "\n";
  char buf[40];
  for (const auto& p : points) {
    out += p.label + "," + std::string(ToString(p.mode)) + "," +
           std::to_string(p.n_samples);
    for (const auto& f : kPointFields) {
      const double v = p.*f.field;
      if (std::isnan(v)) {
        out += ",";
      } else {
        std::snprintf(buf, sizeof(buf), ",%.6g", v);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

std::string ReducedPointsToJson(const std::vector<ReducedPoint>& points) {
  json arr = json::array();
  for (const auto& p : points) {
    json j;
    j["label"] = p.label;
    j["mode"] = std::string(ToString(p.mode));
    j["n"] = p.n_samples;
    j["coefficients_defined"] = p.coefficients_defined;
    for (const auto& f : kPointFields) {
      const double v = p.*f.field;
      j[f.name] = std::isnan(v) ? json(nullptr) : json(v);
    }
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

namespace {

FlightMode ModeOrThrow(const std::string& text) {
  const auto m = ParseFlightMode(text);
  if (!m) throw Error(ErrorCode::kFormat, "unknown flight mode '" + text + "'");
  return *m;
}

void FinishPoint(ReducedPoint* p) {
  p->coefficients_defined = std::isfinite(p->cl) && p->airspeed > 0.0;
}

}  // namespace

std::vector<ReducedPoint> ReducedPointsFromCsv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<ReducedPoint> out;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitCsv(line);
    if (header.empty()) {
      header = f;
      if (std::find(header.begin(), header.end(), "mode") == header.end()) {
        throw Error(ErrorCode::kFormat, "point table needs a 'mode' column");
      }
      continue;
    }
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kFormat,
                  "point table line " + std::to_string(line_no) + ": wrong field count");
    }
    ReducedPoint p;
    for (size_t i = 0; i < f.size(); ++i) {
      if (header[i] == "label") {
        p.label = f[i];
      } else if (header[i] == "mode") {
        p.mode = ModeOrThrow(f[i]);
      } else if (header[i] == "n") {
        p.n_samples = static_cast<size_t>(std::strtoull(f[i].c_str(), nullptr, 10));
      } else {
        for (const auto& pf : kPointFields) {
          if (header[i] != pf.name) continue;
          double v = std::numeric_limits<double>::quiet_NaN();
          if (!f[i].empty() && !ParseDouble(f[i], &v)) {
            throw Error(ErrorCode::kFormat, "point table line " +
                                                std::to_string(line_no) + ": bad " +
                                                header[i]);
          }
          p.*pf.field = v;
        }
      }
    }
    FinishPoint(&p);
    out.push_back(p);
  }
  return out;
}

std::vector<ReducedPoint> ReducedPointsFromJson(const std::string& text) {
  std::vector<ReducedPoint> out;
  try {
    const json j = json::parse(text);
    const json& arr = j.is_array() ? j : j.at("points");
    for (const auto& r : arr) {
      ReducedPoint p;
      p.label = r.value("label", "");
      p.mode = ModeOrThrow(r.at("mode").get<std::string>());
      p.n_samples = r.value("n", size_t{0});
      for (const auto& pf : kPointFields) {
        const auto it = r.find(pf.name);
        if (it != r.end() && it->is_number()) p.*pf.field = it->get<double>();
        if (it != r.end() && it->is_null()) {
          p.*pf.field = std::numeric_limits<double>::quiet_NaN();
        }
      }
      FinishPoint(&p);
      out.push_back(p);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("point JSON: ") + e.what());
  }
  return out;
}

std::vector<LogRecord> SynthesizeLog(const AeroModel& model,
                                     const ThrustMap& thrust,
                                     const VehicleGeometry& geometry,
                                     const Atmosphere& atmosphere,
                                     const TestSchedule& schedule,
                                     double alpha_deg, double airspeed,
                                     const SynthOptions& options) {
  Validate(schedule);
  if (!(options.sample_rate_hz > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  // One wrench per step; the schedule is piecewise constant.
  std::vector<ForcesMoments> wrench;
  std::vector<FlightCondition> conds;
  for (size_t i = 0; i < schedule.steps.size(); ++i) {
    const auto& s = schedule.steps[i];
    FlightCondition c;
    c.mode = schedule.ModeOf(i);
    c.alpha_deg = alpha_deg;
    c.airspeed = airspeed;
    c.esc_quad = ThrottleToEsc(s.quad_pct);
    c.esc_fwd = ThrottleToEsc(s.fwd_pct);
    c.aileron = s.aileron_pct / 100.0;
    c.elevator = s.elevator_pct / 100.0;
    c.rudder = s.rudder_pct / 100.0;
    WrenchOptions wo;
    wo.rear_mode = options.rear_mode;
    wo.domain = DomainPolicy::kPermissive;
    wrench.push_back(TotalWrench(model, thrust, c, atmosphere, geometry, wo));
    conds.push_back(c);
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_sigma);
  const bool noisy = options.noise_sigma > 0.0;

  std::vector<LogRecord> out;
  const double end = schedule.steps.empty() ? 0.0 : schedule.steps.back().end_time;
  const size_t n = static_cast<size_t>(std::llround(end * options.sample_rate_hz));
  out.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    LogRecord r;
    r.t = static_cast<double>(k) / options.sample_rate_hz;
    const size_t i = std::min(schedule.StepAt(r.t), schedule.steps.size() - 1);
    const ForcesMoments& w = wrench[i];
    const FlightCondition& c = conds[i];
    r[kFx] = w.fx;
    r[kFy] = w.fy;
    r[kFz] = w.fz;
    if (noisy) {
      r[kFx] += noise(rng);
      r[kFy] += noise(rng);
      r[kFz] += noise(rng);
    }
    r[kMx] = w.mx;
    r[kMy] = w.my;
    r[kMz] = w.mz;
    r[kNuQuad] = c.esc_quad;
    r[kNuFwd] = c.esc_fwd;
    r[kAileron] = c.aileron;
    r[kElevator] = c.elevator;
    r[kRudder] = c.rudder;
    r[kAirspeed] = airspeed;
    r[kTemperature] = options.temperature_c;
    out.push_back(r);
  }
  return out;
}

std::vector<ReducedPoint> SampleAeroPoints(const AeroModel& model,
                                           const VehicleGeometry& g,
                                           const Atmosphere& atm,
                                           const std::vector<double>& alphas,
                                           const std::vector<double>& airspeeds) {
  std::vector<ReducedPoint> out;
  const bool linear = model.quad_drag_form() == QuadDragForm::kLinear;
  const FlightMode modes[] = {FlightMode::kQuad, FlightMode::kHybrid,
                              FlightMode::kPlane};
  auto make = [&](const BucketModel& b, double alpha, double da, double de,
                  double dr, const std::string& label) {
    ReducedPoint p;
    p.label = label;
    p.mode = b.mode;
    p.alpha_deg = alpha;
    p.airspeed = b.airspeed;
    p.aileron = da;
    p.elevator = de;
    p.rudder = dr;
    p.coefficients_defined = true;
    const double qs = atm.dynamic_pressure(b.airspeed) * g.planform_area();
    const double qcs = qs * g.wing_chord;
    p.cl = b.lift.Evaluate(alpha);
    p.cd_plane = b.plane_drag.Evaluate(alpha);
    if (b.mode == FlightMode::kPlane) {
      p.cd_quad = 0.0;
      p.cd_form = b.form_drag.Evaluate(alpha);
    } else {
      p.cd_quad = linear ? b.quad_drag_linear.Evaluate(alpha)
                         : b.quad_drag_quadratic.Evaluate(alpha);
    }
    p.cm = b.moment.StructuralCm(alpha) + b.moment.cm_elevator * de;
    if (b.mode != FlightMode::kPlane) {
      p.cm += b.moment.differential_thrust.Evaluate(alpha) / qcs;
    }
    p.crm = b.lateral.crm_aileron * da + b.lateral.crm_rudder * dr;
    p.cym = b.lateral.cym_aileron * da + b.lateral.cym_rudder * dr;
    p.csf = b.lateral.csf0 + b.lateral.csf_rudder * dr;
    p.cd_total = p.cd_plane + p.cd_quad * b.airspeed / qs;
    p.lift = qs * p.cl;
    p.drag = qs * p.cd_total;
    p.side_force = qs * p.csf;
    p.mx = qcs * p.crm;
    p.my = qcs * p.cm;
    p.mz = qcs * p.cym;
    return p;
  };
  for (FlightMode m : modes) {
    for (double v : airspeeds) {
      if (!model.Has(m, v)) continue;
      const BucketModel& b = model.Bucket(m, v);
      for (double a : alphas) {
        out.push_back(make(b, a, 0, 0, 0, std::string(ToString(m))));
        if (m != FlightMode::kPlane) continue;
        for (double d : {-0.8, -0.4, 0.4, 0.8}) {
          out.push_back(make(b, a, d, 0, 0, DeflectionLabel("aileron", d * 100)));
          out.push_back(make(b, a, 0, d, 0, DeflectionLabel("elevator", d * 100)));
          out.push_back(make(b, a, 0, 0, d, DeflectionLabel("rudder", d * 100)));
        }
      }
    }
  }
  return out;
}

}  // namespace qpaero
