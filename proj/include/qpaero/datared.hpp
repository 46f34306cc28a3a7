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

// Wind-tunnel log reduction.
//
//   parse -> (offsets) -> segment by test schedule -> reduce each window
//
// Reduction removes modelled propulsion from the load-cell wrench:
//   L = -(Fz + T_vert) cos a + (Fx - T_fwd) sin a
//   D = -(Fz + T_vert) sin a - (Fx - T_fwd) cos a
// with T_vert from the rear-deficit correction using the window mean M_y.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpaero/aero.hpp"
#include "qpaero/core.hpp"
#include "qpaero/propulsion.hpp"
#include "qpaero/reduced_point.hpp"

namespace qpaero {

enum Channel : int {
  kFx, kFy, kFz, kMx, kMy, kMz,
  kNuQuad, kNuFwd, kAileron, kElevator, kRudder, kAirspeed, kTemperature,
  kChannelCount
};

struct LogRecord {
  double t = 0.0;
  std::array<double, kChannelCount> values{};

  double operator[](Channel c) const { return values[c]; }
  double& operator[](Channel c) { return values[c]; }
};

// CSV header: t_s,Fx_N,Fy_N,Fz_N,Mx_Nm,My_Nm,Mz_Nm,nu_quad_us,nu_fwd_us,
// da,de,dr,Va_mps,temp_C (columns may appear in any order).
const std::vector<std::string>& LogColumns();

struct RowError {
  size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct ParsedLog {
  std::vector<LogRecord> records;
  std::vector<RowError> rejected;
  std::vector<std::string> warnings;
};

// Malformed rows are collected, not fatal. Throws Error(kFormat) without a
// valid header and Error(kSequencing) when time does not strictly increase.
ParsedLog ParseLogText(const std::string& text);
ParsedLog ParseLog(const std::string& path);
std::string LogToCsv(const std::vector<LogRecord>& records);

// Adds `offset` to one load channel (Fx..Mz). Throws
// Error(kInvalidArgument) on any other channel name. The correction is
// appended to `provenance` when given.
std::vector<LogRecord> ApplyOffset(std::vector<LogRecord> records,
                                   std::string_view channel, double offset,
                                   std::vector<std::string>* provenance = nullptr);

struct ScheduleStep {
  double end_time = 0.0;   // s, cumulative
  double quad_pct = 0.0;   // throttle, %
  double fwd_pct = 0.0;
  double aileron_pct = 0.0;
  double elevator_pct = 0.0;
  double rudder_pct = 0.0;
};

struct TestSchedule {
  std::vector<ScheduleStep> steps;

  static TestSchedule Default();
  double StartTime(size_t step) const;
  // Index of the step active at t, or steps.size() past the end.
  size_t StepAt(double t) const;
  FlightMode ModeOf(size_t step) const;
};

// Throws Error(kFormat) unless end times strictly increase.
void Validate(const TestSchedule& schedule);
TestSchedule ScheduleFromJson(const std::string& text);
std::string ScheduleToJson(const TestSchedule& schedule);

struct WindowSpec {
  std::string label;
  FlightMode mode = FlightMode::kPlane;
  size_t step = 0;
  double t_start = 0.0;
  double t_end = 0.0;  // exclusive
};

// Quad: last 10 s of the first quad-only step. Hybrid: last 10 s of the
// highest forward-throttle step with the quad motors on. Plane: last 20 s of
// the first motors-off, undeflected step. Each deflection step: its final 5 s.
std::vector<WindowSpec> DefaultWindows(const TestSchedule& schedule);

struct ChannelStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

struct SegmentWindow {
  WindowSpec spec;
  size_t n = 0;
  std::array<ChannelStats, kChannelCount> stats{};

  const ChannelStats& operator[](Channel c) const { return stats[c]; }
};

struct Segmentation {
  std::vector<SegmentWindow> windows;
  std::vector<std::string> warnings;
};

Segmentation Segment(const std::vector<LogRecord>& records,
                     const TestSchedule& schedule);
Segmentation Segment(const std::vector<LogRecord>& records,
                     const std::vector<WindowSpec>& windows);

// Where the plane-drag share of a quad/hybrid drag sample comes from.
enum class PlaneDragReference {
  kNone,             // leave C_DP and C_DQ undefined for quad and hybrid
  kFormPlusInduced,  // C_DPf(reference) + C_L^2 / (pi e AR)
  kReferenceModel,   // reference model's C_DP polynomial
};

struct ReduceOptions {
  RearThrustMode rear_mode = RearThrustMode::kAsPrinted;
  PlaneDragReference plane_drag = PlaneDragReference::kFormPlusInduced;
  const AeroModel* reference = nullptr;
};

ReducedPoint Reduce(const SegmentWindow& window, double alpha_deg,
                    double airspeed, const ThrustMap& thrust,
                    const VehicleGeometry& geometry,
                    const Atmosphere& atmosphere,
                    const ReduceOptions& options = {});

std::string ReducedPointsToCsv(const std::vector<ReducedPoint>& points);
std::string ReducedPointsToJson(const std::vector<ReducedPoint>& points);
// Inverses of the two writers (blank or null fields read back as NaN).
// Throw Error(kFormat) on unknown modes or malformed input.
std::vector<ReducedPoint> ReducedPointsFromCsv(const std::string& text);
std::vector<ReducedPoint> ReducedPointsFromJson(const std::string& text);

struct SynthOptions {
  double sample_rate_hz = 1000.0;
  double noise_sigma = 0.0;  // N, Gaussian, force channels only
  uint64_t seed = 1;
  RearThrustMode rear_mode = RearThrustMode::kAsPrinted;
  double temperature_c = 20.0;
};

// Forward-simulates a run of the schedule at one (alpha, V). Aero uses the
// bucket polynomials without the stall check.
std::vector<LogRecord> SynthesizeLog(const AeroModel& model,
                                     const ThrustMap& thrust,
                                     const VehicleGeometry& geometry,
                                     const Atmosphere& atmosphere,
                                     const TestSchedule& schedule,
                                     double alpha_deg, double airspeed,
                                     const SynthOptions& options = {});

// Coefficient samples straight from a model at the given grid, one point per
// (mode, alpha, airspeed) plus plane-mode deflection points at +-40 % and
// +-80 % on each surface. Every sampled field is the model's own table value.
std::vector<ReducedPoint> SampleAeroPoints(
    const AeroModel& model, const VehicleGeometry& geometry,
    const Atmosphere& atmosphere, const std::vector<double>& alphas,
    const std::vector<double>& airspeeds);

}  // namespace qpaero
