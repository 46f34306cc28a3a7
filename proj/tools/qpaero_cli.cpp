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

// qpaero: batch front end over the C API.
//
// Exit codes: 0 ok, 1 error (JSON reason on stderr), 2 flagged result under
// --strict, 64 usage.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpaero/qpaero.h"

using nlohmann::json;

namespace {

struct Global {
  std::string db_path;
  std::string format = "json";
  std::string config;
  std::string out;
  bool strict = false;
};

struct Failure {
  int exit_code;
};

[[noreturn]] void FailFromLibrary() {
  std::fprintf(stderr, "%s\n", qpa_last_error_json());
  throw Failure{1};
}

[[noreturn]] void FailUsage(const std::string& message) {
  json j = {{"error", {{"code", "invalid_argument"}, {"status", 12}, {"message", message}}}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  throw Failure{1};
}

double Round6(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

void RoundJson(json& j) {
  if (j.is_number_float()) {
    j = Round6(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& e : j) RoundJson(e);
  }
}

class Session {
 public:
  explicit Session(const Global& g) : g_(g) {
    const qpa_status st = g.db_path.empty() ? qpa_database_default(&db_)
                                            : qpa_database_load(g.db_path.c_str(), &db_);
    if (st != QPA_OK) FailFromLibrary();
  }
  ~Session() { qpa_database_free(db_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const qpa_database* db() const { return db_; }

  // Runs a command; request members from --config fill in anything the
  // flags left unset.
  std::string Run(const std::string& command, json request, bool* flagged) {
    if (!g_.config.empty()) {
      std::ifstream in(g_.config);
      if (!in) FailUsage("cannot open config " + g_.config);
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        FailUsage(std::string("config: ") + e.what());
      }
      const json section = cfg.contains(command) ? cfg.at(command) : cfg;
      for (const auto& [k, v] : section.items()) {
        if (!request.contains(k)) request[k] = v;
      }
    }
    if (!request.contains("format") && g_.format != "svg") request["format"] = g_.format;
    char* out = nullptr;
    int flag = 0;
    if (qpa_command(db_, command.c_str(), request.dump().c_str(), &out, &flag) != QPA_OK) {
      FailFromLibrary();
    }
    std::string text(out);
    qpa_string_free(out);
    if (flagged) *flagged = flag != 0;
    return text;
  }

 private:
  const Global& g_;
  qpa_database* db_ = nullptr;
};

void Emit(const Global& g, const std::string& text, bool is_json) {
  std::string body = text;
  if (is_json) {
    json j = json::parse(text);
    RoundJson(j);
    body = j.dump(2) + "\n";
  }
  if (g.out.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) FailUsage("cannot write " + g.out);
  f << body;
}

int Finish(const Global& g, const std::string& command, const std::string& text,
           bool flagged, bool json_payload = true) {
  Emit(g, text, json_payload && g.format == "json");
  if (g.strict && flagged) {
    json j = {{"error",
               {{"code", "infeasible"},
                {"status", 6},
                {"message", command + ": result contains flagged (infeasible or "
                                      "rejected) entries"}}}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 2;
  }
  return 0;
}

// ---- plotting -------------------------------------------------------------

struct Series {
  std::string name;
  std::vector<double> x, y, err;
};

std::string F(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Svg(const std::vector<Series>& series, const std::string& title,
                const std::string& xlabel, const std::string& ylabel) {
  const double w = 640, h = 420, l = 70, r = 150, t = 40, b = 55;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double e = s.err.empty() ? 0.0 : s.err[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - e);
      ymax = std::max(ymax, s.y[i] + e);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return l + (x - xmin) / (xmax - xmin) * (w - l - r); };
  auto py = [&](double y) { return h - b - (y - ymin) / (ymax - ymin) * (h - t - b); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << title << "</text>\n";
  o << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << w - l - r << "\" height=\""
    << h - t - b << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5, yv = ymin + (ymax - ymin) * i / 5;
    o << "<text x=\"" << F(px(xv)) << "\" y=\"" << h - b + 16
      << "\" text-anchor=\"middle\">" << F(Round6(xv)) << "</text>\n";
    o << "<text x=\"" << l - 6 << "\" y=\"" << F(py(yv) + 4) << "\" text-anchor=\"end\">"
      << F(Round6(yv)) << "</text>\n";
  }
  o << "<text x=\"" << (l + w - r) / 2 << "\" y=\"" << h - 12
    << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  o << "<text transform=\"translate(16," << (t + h - b) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = kColors[k % 7];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      o << (i ? " " : "") << F(px(s.x[i])) << "," << F(py(s.y[i]));
    }
    o << "\"/>\n";
    for (size_t i = 0; i < s.err.size(); ++i) {
      o << "<line x1=\"" << F(px(s.x[i])) << "\" x2=\"" << F(px(s.x[i])) << "\" y1=\""
        << F(py(s.y[i] - s.err[i])) << "\" y2=\"" << F(py(s.y[i] + s.err[i]))
        << "\" stroke=\"" << c << "\"/>\n";
    }
    o << "<text x=\"" << w - r + 10 << "\" y=\"" << t + 16 * (k + 1) << "\" fill=\"" << c
      << "\">" << s.name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string SeriesCsv(const std::vector<Series>& series, const std::string& xname,
                      const std::string& yname) {
  std::string out = "series," + xname + "," + yname + ",err\n";
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      out += s.name + "," + F(s.x[i]) + "," + F(s.y[i]) + "," +
             (s.err.empty() ? "" : F(s.err[i])) + "\n";
    }
  }
  return out;
}

std::string SeriesJson(const std::vector<Series>& series) {
  json arr = json::array();
  for (const auto& s : series) {
    arr.push_back({{"name", s.name}, {"x", s.x}, {"y", s.y}, {"err", s.err}});
  }
  return json{{"series", arr}}.dump(2) + "\n";
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') FailUsage("bad number '" + item + "' in list");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QuadPlane eVTOL aerodynamic and propulsion modelling tool"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--db", g.db_path, "Coefficient database (default: $QPAERO_DB or built-in)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--config", g.config, "JSON file with default request members");
  app.add_option("-o,--out", g.out, "Write output to a file instead of stdout");
  app.add_flag("--strict", g.strict, "Exit 2 when a result is flagged infeasible");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate coefficients, forces and wrench");
  std::string mode = "plane";
  double alpha = 0, v = 0, nu_fwd = 1000, nu_quad = 1000, da = 0, de = 0, dr = 0, split = 0;
  bool interp = false, permissive = false;
  std::string rear_mode = "as_printed";
  eval->add_option("--mode", mode)->check(CLI::IsMember({"quad", "hybrid", "plane"}));
  eval->add_option("--alpha", alpha, "Vehicle angle of attack, deg");
  eval->add_option("--v", v, "Airspeed, m/s");
  eval->add_option("--nu-fwd", nu_fwd, "Forward ESC pulse, us");
  eval->add_option("--nu-quad", nu_quad, "Vertical ESC pulse, us");
  eval->add_option("--da", da, "Aileron, -1..1");
  eval->add_option("--de", de, "Elevator, -1..1");
  eval->add_option("--dr", dr, "Rudder, -1..1");
  eval->add_option("--split", split, "Pitch thrust split per motor, N");
  eval->add_flag("--interp", interp, "Interpolate between airspeed buckets");
  eval->add_flag("--permissive", permissive, "Evaluate past the stall bound");
  eval->add_option("--rear-mode", rear_mode)
      ->check(CLI::IsMember({"as_printed", "split_moment"}));

  // trim
  auto* trim = app.add_subcommand("trim", "Hover or level-flight trim");
  std::string trim_kind = "level", lift_balance = "exact", pitch_priority = "elevator";
  trim->add_option("--kind", trim_kind)->check(CLI::IsMember({"hover", "level"}));
  trim->add_option("--mode", mode)->check(CLI::IsMember({"quad", "hybrid", "plane"}));
  trim->add_option("--v", v, "Airspeed, m/s");
  trim->add_option("--alpha", alpha, "Held alpha for hybrid trim, deg");
  trim->add_option("--lift-balance", lift_balance)
      ->check(CLI::IsMember({"exact", "small_angle"}));
  trim->add_option("--pitch-priority", pitch_priority)
      ->check(CLI::IsMember({"elevator", "thrust_split"}));
  trim->add_option("--rear-mode", rear_mode)
      ->check(CLI::IsMember({"as_printed", "split_moment"}));

  // transition
  auto* trans = app.add_subcommand("transition", "Quasi-static transition schedule");
  double v_from = 0, v_to = 11;
  int steps = 12;
  std::string alpha_policy = "hold";
  trans->add_option("--from", v_from, "Start airspeed, m/s");
  trans->add_option("--to", v_to, "End airspeed, m/s");
  trans->add_option("--steps", steps, "Number of airspeed steps");
  trans->add_option("--alpha-policy", alpha_policy)
      ->check(CLI::IsMember({"hold", "min_vertical_thrust"}));
  trans->add_option("--alpha", alpha, "Held alpha, deg");
  trans->add_option("--lift-balance", lift_balance)
      ->check(CLI::IsMember({"exact", "small_angle"}));

  // envelope
  auto* env = app.add_subcommand("envelope", "Feasibility map over an alpha x V grid");
  std::string alphas_text = "-5,0,5,10", speeds_text = "0,5,11,15";
  env->add_option("--mode", mode)->check(CLI::IsMember({"quad", "hybrid", "plane"}));
  env->add_option("--alphas", alphas_text, "Comma-separated alphas, deg");
  env->add_option("--speeds", speeds_text, "Comma-separated airspeeds, m/s");

  // mesh
  auto* mesh = app.add_subcommand("mesh", "Export an interpolation mesh with its planes");
  std::string coefficient = "cl";
  mesh->add_option("--mode", mode)->check(CLI::IsMember({"quad", "hybrid", "plane"}));
  mesh->add_option("--coefficient", coefficient, "cl, cdp, cdq, cdq2, cdpf, cm, mdt, ...");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Reduce wind-tunnel logs to aero points");
  std::vector<std::string> logs;
  std::string schedule, runs_file, plane_drag = "form_induced";
  std::vector<std::string> offsets;
  reduce->add_option("logs", logs, "Log CSV files (one run each)");
  reduce->add_option("--runs", runs_file,
                     "JSON list of {log, alpha_deg, airspeed_mps, offsets}");
  reduce->add_option("--alpha", alpha, "Run alpha for the positional logs, deg");
  reduce->add_option("--v", v, "Run airspeed for the positional logs, m/s");
  reduce->add_option("--schedule", schedule, "Test schedule JSON");
  reduce->add_option("--offset", offsets, "Channel offset, e.g. Fz=-0.12");
  reduce->add_option("--plane-drag", plane_drag)
      ->check(CLI::IsMember({"form_induced", "reference", "none"}));
  reduce->add_option("--rear-mode", rear_mode)
      ->check(CLI::IsMember({"as_printed", "split_moment"}));

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a coefficient database from reduced points");
  std::string points, thrust_samples, name = "refit", provenance = "fit-report";
  fit->add_option("points", points, "Reduced points (JSON or CSV)")->required();
  fit->add_option("--thrust-samples", thrust_samples,
                  "CSV alpha_p_deg,airspeed_mps,esc_us,thrust_N");
  fit->add_option("--name", name);
  fit->add_option("--provenance", provenance);

  // synth
  auto* synth = app.add_subcommand("synth", "Forward-simulate a test log");
  double noise = 0, rate = 1000;
  uint64_t seed = 1;
  synth->add_option("--alpha", alpha);
  synth->add_option("--v", v);
  synth->add_option("--noise", noise, "Force-channel noise sigma, N");
  synth->add_option("--seed", seed);
  synth->add_option("--rate", rate, "Sample rate, Hz");
  synth->add_option("--schedule", schedule, "Test schedule JSON");

  // plot
  auto* plot = app.add_subcommand("plot", "Plot data as SVG (or the series as CSV/JSON)");
  std::string plot_kind, input, xcol = "alpha_deg", ycol = "L_N", ecol;
  plot->add_option("kind", plot_kind, "lift, drag, thrust or table")
      ->required()
      ->check(CLI::IsMember({"lift", "drag", "thrust", "table"}));
  plot->add_option("--mode", mode)->check(CLI::IsMember({"quad", "hybrid", "plane"}));
  plot->add_option("--speeds", speeds_text, "Airspeeds, m/s");
  plot->add_option("--alpha-p", alpha, "Propeller alpha for thrust plots, deg");
  plot->add_option("--input", input, "Reduced-point JSON for 'table'");
  plot->add_option("--x", xcol);
  plot->add_option("--y", ycol);
  plot->add_option("--err", ecol, "Column with error-bar half widths");

  // db
  auto* dbcmd = app.add_subcommand("db", "Database utilities");
  std::string db_action;
  dbcmd->add_option("action", db_action, "export or checksum")
      ->required()
      ->check(CLI::IsMember({"export", "checksum"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 64;
  }

  try {
    if (plot->parsed() && !app.count("--format")) g.format = "svg";
    Session s(g);
    bool flagged = false;
    if (g.format == "svg" && !plot->parsed()) FailUsage("svg output is only for plot");

    if (eval->parsed()) {
      json r = {{"mode", mode}, {"alpha_deg", alpha}, {"airspeed_mps", v},
                {"esc_fwd_us", nu_fwd}, {"esc_quad_us", nu_quad}, {"aileron", da},
                {"elevator", de}, {"rudder", dr}, {"pitch_thrust_split_N", split},
                {"interp", interp}, {"permissive", permissive}, {"rear_mode", rear_mode}};
      const auto text = s.Run("eval", r, &flagged);
      return Finish(g, "eval", text, flagged);
    }
    if (trim->parsed()) {
      json r = {{"kind", trim_kind}, {"mode", mode}, {"airspeed_mps", v},
                {"alpha_deg", alpha}, {"lift_balance", lift_balance},
                {"pitch_priority", pitch_priority}, {"rear_mode", rear_mode}};
      const auto text = s.Run("trim", r, &flagged);
      return Finish(g, "trim", text, flagged);
    }
    if (trans->parsed()) {
      json r = {{"v_from", v_from}, {"v_to", v_to}, {"steps", steps},
                {"alpha_policy", alpha_policy}, {"alpha_deg", alpha},
                {"lift_balance", lift_balance}};
      const auto text = s.Run("transition", r, &flagged);
      return Finish(g, "transition", text, flagged);
    }
    if (env->parsed()) {
      json r = {{"mode", mode}, {"alphas_deg", ParseList(alphas_text)},
                {"airspeeds_mps", ParseList(speeds_text)}};
      if (!env->count("--mode")) r["mode"] = "hybrid";
      const auto text = s.Run("envelope", r, &flagged);
      return Finish(g, "envelope", text, flagged);
    }
    if (mesh->parsed()) {
      json r = {{"mode", mesh->count("--mode") ? mode : "hybrid"},
                {"coefficient", coefficient}};
      const auto text = s.Run("mesh", r, &flagged);
      return Finish(g, "mesh", text, flagged);
    }
    if (reduce->parsed()) {
      json r = {{"plane_drag", plane_drag}, {"rear_mode", rear_mode}};
      if (!schedule.empty()) r["schedule"] = schedule;
      json runs = json::array();
      if (!runs_file.empty()) {
        std::ifstream in(runs_file);
        if (!in) FailUsage("cannot open " + runs_file);
        try {
          runs = json::parse(in);
        } catch (const json::exception& e) {
          FailUsage(std::string("runs file: ") + e.what());
        }
      }
      json off = json::object();
      for (const auto& o : offsets) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) FailUsage("offset must look like Fz=-0.12");
        off[o.substr(0, eq)] = ParseList(o.substr(eq + 1)).at(0);
      }
      for (const auto& path : logs) {
        json run = {{"log", path}, {"alpha_deg", alpha}, {"airspeed_mps", v}};
        if (!off.empty()) run["offsets"] = off;
        runs.push_back(run);
      }
      if (runs.empty()) FailUsage("reduce needs log files or --runs");
      r["runs"] = runs;
      const auto text = s.Run("reduce", r, &flagged);
      return Finish(g, "reduce", text, flagged);
    }
    if (fit->parsed()) {
      json r = {{"points", points}, {"name", name}, {"provenance", provenance}};
      if (!thrust_samples.empty()) r["thrust_samples"] = thrust_samples;
      const auto text = s.Run("fit", r, &flagged);
      return Finish(g, "fit", text, flagged);
    }
    if (synth->parsed()) {
      json r = {{"alpha_deg", alpha}, {"airspeed_mps", v}, {"noise_sigma", noise},
                {"seed", seed}, {"sample_rate_hz", rate}};
      if (!schedule.empty()) r["schedule"] = schedule;
      const auto text = s.Run("synth", r, &flagged);
      return Finish(g, "synth", text, flagged, false);
    }
    if (dbcmd->parsed()) {
      const auto text = s.Run(db_action == "export" ? "db_export" : "db_checksum",
                              json::object(), &flagged);
      // The export stays at full precision so it reloads bit for bit.
      return Finish(g, "db", text, flagged, db_action != "export");
    }
    if (plot->parsed()) {
      std::vector<Series> series;
      std::string title, xlabel, ylabel;
      if (plot_kind == "thrust") {
        for (double speed : ParseList(speeds_text)) {
          Series ser;
          ser.name = F(speed) + " m/s";
          for (double nu = 1000; nu <= 2000; nu += 25) {
            double t = 0;
            if (qpa_dynamic_thrust(s.db(), alpha, speed, nu, &t) != QPA_OK) {
              FailFromLibrary();
            }
            ser.x.push_back(nu);
            ser.y.push_back(t);
          }
          series.push_back(ser);
        }
        title = "Dynamic thrust, alpha_p = " + F(alpha) + " deg";
        xlabel = "ESC pulse (us)";
        ylabel = "Thrust (N)";
      } else if (plot_kind == "lift" || plot_kind == "drag") {
        for (double speed : ParseList(speeds_text)) {
          Series ser;
          ser.name = F(speed) + " m/s";
          for (double a = -5.0; a <= 10.0 + 1e-9; a += 0.5) {
            json r = {{"mode", mode}, {"alpha_deg", a}, {"airspeed_mps", speed},
                      {"interp", true}, {"format", "json"}};
            char* out = nullptr;
            if (qpa_command(s.db(), "eval", r.dump().c_str(), &out, nullptr) != QPA_OK) {
              continue;  // past stall for this speed
            }
            const json j = json::parse(out);
            qpa_string_free(out);
            ser.x.push_back(a);
            ser.y.push_back(j["aero"][plot_kind == "lift" ? "lift_N" : "drag_N"]);
          }
          series.push_back(ser);
        }
        title = std::string(plot_kind == "lift" ? "Lift" : "Drag") + ", " + mode + " mode";
        xlabel = "alpha (deg)";
        ylabel = plot_kind == "lift" ? "L (N)" : "D (N)";
      } else {
        if (input.empty()) FailUsage("plot table needs --input");
        std::ifstream in(input);
        if (!in) FailUsage("cannot open " + input);
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          FailUsage(std::string("input: ") + e.what());
        }
        const json& pts = j.is_array() ? j : j.at("points");
        std::map<std::string, Series> by_mode;
        for (const auto& p : pts) {
          if (!p.contains(xcol) || !p.contains(ycol) || p[xcol].is_null() ||
              p[ycol].is_null()) {
            continue;
          }
          const std::string key =
              p.value("mode", std::string("points")) + " " +
              F(p.value("airspeed_mps", 0.0)) + " m/s";
          Series& ser = by_mode[key];
          ser.name = key;
          ser.x.push_back(p[xcol].get<double>());
          ser.y.push_back(p[ycol].get<double>());
          if (!ecol.empty()) {
            ser.err.push_back(p.contains(ecol) && p[ecol].is_number() ? p[ecol].get<double>()
                                                                      : 0.0);
          }
        }
        for (auto& [k, ser] : by_mode) series.push_back(ser);
        title = ycol + " vs " + xcol;
        xlabel = xcol;
        ylabel = ycol;
      }
      std::string text;
      if (g.format == "csv") {
        text = SeriesCsv(series, xlabel, ylabel);
      } else if (g.format == "json") {
        text = SeriesJson(series);
      } else {
        text = Svg(series, title, xlabel, ylabel);
      }
      Emit(g, text, g.format == "json");
      return 0;
    }
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return 64;
}
