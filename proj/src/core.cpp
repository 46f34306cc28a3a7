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

#include "qpaero/core.hpp"

#include <cmath>

#include "qpaero/error.hpp"

namespace qpaero {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kContract: return "contract";
    case ErrorCode::kUnsupportedRegion: return "unsupported_region";
    case ErrorCode::kStall: return "stall";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kSequencing: return "sequencing";
    case ErrorCode::kOutOfEnvelope: return "out_of_envelope";
    case ErrorCode::kBuild: return "build";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

std::string_view ToString(FlightMode mode) {
  switch (mode) {
    case FlightMode::kQuad: return "quad";
    case FlightMode::kHybrid: return "hybrid";
    case FlightMode::kPlane: return "plane";
  }
  return "unknown";
}

std::optional<FlightMode> ParseFlightMode(std::string_view text) {
  if (text == "quad" || text == "Quad") return FlightMode::kQuad;
  if (text == "hybrid" || text == "Hybrid") return FlightMode::kHybrid;
  if (text == "plane" || text == "Plane") return FlightMode::kPlane;
  return std::nullopt;
}

void Validate(const Atmosphere& atmosphere) {
  if (!(atmosphere.density > 0.0) || !(atmosphere.kinematic_viscosity > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "atmosphere density and kinematic viscosity must be positive");
  }
}

void Validate(const VehicleGeometry& g) {
  if (!(g.wing_span > 0.0) || !(g.wing_chord > 0.0) || !(g.quad_arm > 0.0) ||
      !(g.mass >= 0.0) || !(g.oswald_e > 0.0)) {
    throw Error(ErrorCode::kDomain, "vehicle geometry has non-positive entries");
  }
}

void Validate(const FlightCondition& c) {
  if (!(c.airspeed >= 0.0)) {
    throw Error(ErrorCode::kDomain, "airspeed must be >= 0");
  }
  auto esc_ok = [](double nu) { return nu >= kEscIdle && nu <= kEscFull; };
  if (!esc_ok(c.esc_fwd) || !esc_ok(c.esc_quad)) {
    throw Error(ErrorCode::kDomain, "ESC signal outside [1000, 2000] us");
  }
  auto defl_ok = [](double d) { return d >= -1.0 && d <= 1.0; };
  if (!defl_ok(c.aileron) || !defl_ok(c.elevator) || !defl_ok(c.rudder)) {
    throw Error(ErrorCode::kDomain, "control deflection outside [-1, 1]");
  }
  if (c.mode == FlightMode::kPlane && c.esc_quad != kEscIdle) {
    throw Error(ErrorCode::kContract, "plane mode requires vertical motors off");
  }
  if (c.mode == FlightMode::kQuad && c.esc_fwd != kEscIdle) {
    throw Error(ErrorCode::kContract, "quad mode requires forward motor off");
  }
}

double Reynolds(double airspeed, double chord, double kinematic_viscosity) {
  if (airspeed < 0.0 || chord < 0.0 || kinematic_viscosity < 0.0) {
    throw Error(ErrorCode::kDomain, "reynolds: inputs must be non-negative");
  }
  if (kinematic_viscosity == 0.0) {
    throw Error(ErrorCode::kDomain, "reynolds: kinematic viscosity is zero");
  }
  return airspeed * chord / kinematic_viscosity;
}

double WingAlpha(double alpha_vehicle_deg, double incidence_deg) {
  return alpha_vehicle_deg + incidence_deg;
}

double PropAlpha(double alpha_vehicle_deg, PropulsionModule module) {
  return module == PropulsionModule::kForward ? alpha_vehicle_deg
                                              : alpha_vehicle_deg + 90.0;
}

WindForces BodyToWind(const ForcesMoments& f, double alpha_deg) {
  if (f.frame != Frame::kBody) {
    throw Error(ErrorCode::kContract, "body_to_wind expects body-frame forces");
  }
  const double a = DegToRad(alpha_deg);
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  return WindForces{-f.fz * ca + f.fx * sa, -f.fz * sa - f.fx * ca, f.fy};
}

ForcesMoments WindToBody(const WindForces& w, double alpha_deg) {
  const double a = DegToRad(alpha_deg);
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  ForcesMoments f;
  f.frame = Frame::kBody;
  f.fx = w.lift * sa - w.drag * ca;
  f.fy = w.side_force;
  f.fz = -w.lift * ca - w.drag * sa;
  return f;
}

}  // namespace qpaero
