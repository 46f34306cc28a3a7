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

// Shared vehicle constants, angle conventions and frame rotations.
//
// Angles handed to fitted polynomials are always degrees; rotations convert
// internally. Body frame is FRD, moments follow the right-hand rule.

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace qpaero {

inline constexpr double kGravity = 9.81;          // m/s^2
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEscIdle = 1000.0;        // us, 0 % throttle
inline constexpr double kEscFull = 2000.0;        // us, 100 % throttle

inline constexpr double DegToRad(double deg) { return deg * kPi / 180.0; }
inline constexpr double RadToDeg(double rad) { return rad * 180.0 / kPi; }

// Throttle percentage (0..100) to ESC pulse width.
inline constexpr double ThrottleToEsc(double percent) {
  return kEscIdle + (kEscFull - kEscIdle) * percent / 100.0;
}

enum class FlightMode { kQuad, kHybrid, kPlane };

std::string_view ToString(FlightMode mode);
std::optional<FlightMode> ParseFlightMode(std::string_view text);

enum class PropulsionModule { kForward, kVertical };

struct VehicleGeometry {
  double wing_span = 1.2192;      // m
  double wing_chord = 0.1524;     // m
  double incidence_deg = 5.0;
  double quad_arm = 0.4826;       // m, l_Q
  double mass = 1.684;            // kg
  double oswald_e = 0.95;
  // Design values carried as metadata only; fits use the measured stall.
  double design_stall_speed = 10.09;     // m/s
  double design_stall_alpha_deg = 15.07;

  double planform_area() const { return wing_span * wing_chord; }
  double aspect_ratio() const { return wing_span / wing_chord; }
  double weight() const { return mass * kGravity; }
};

struct Atmosphere {
  double density = 1.225;                 // kg/m^3
  double kinematic_viscosity = 1.5111e-5; // m^2/s

  double dynamic_pressure(double airspeed) const {
    return 0.5 * density * airspeed * airspeed;
  }
};

// Throws Error(kDomain) on non-positive density or viscosity.
void Validate(const Atmosphere& atmosphere);
// Throws Error(kDomain) on non-positive lengths or mass.
void Validate(const VehicleGeometry& geometry);

struct FlightCondition {
  FlightMode mode = FlightMode::kPlane;
  double alpha_deg = 0.0;     // vehicle angle of attack
  double airspeed = 0.0;      // m/s
  double flight_path_deg = 0.0;
  double esc_fwd = kEscIdle;  // us
  double esc_quad = kEscIdle; // us, applies to all four vertical motors
  double aileron = 0.0;       // normalized deflection, -1..1
  double elevator = 0.0;
  double rudder = 0.0;
  // Commanded per-motor thrust split (N): front motors gain it, rear lose it.
  // Pure pitching couple, no net vertical force.
  double pitch_thrust_split = 0.0;
};

// Throws Error(kDomain) for negative airspeed, ESC outside [1000, 2000],
// deflections outside [-1, 1]; Error(kContract) when the mode disagrees with
// the ESC settings (Plane needs esc_quad idle, Quad needs esc_fwd idle).
void Validate(const FlightCondition& condition);

enum class Frame { kBody, kWind };

struct ForcesMoments {
  Frame frame = Frame::kBody;
  double fx = 0.0, fy = 0.0, fz = 0.0;  // N
  double mx = 0.0, my = 0.0, mz = 0.0;  // N*m
};

struct WindForces {
  double lift = 0.0;
  double drag = 0.0;
  double side_force = 0.0;
};

// Re = V * c / nu. Throws Error(kDomain) on negative inputs or nu == 0.
double Reynolds(double airspeed, double chord, double kinematic_viscosity);

double WingAlpha(double alpha_vehicle_deg, double incidence_deg);

// Forward modules see alpha_p = alpha_V, vertical ones alpha_V + 90.
double PropAlpha(double alpha_vehicle_deg, PropulsionModule module);

// Zero-sideslip rotation of body-frame forces into lift, drag and side force.
// Throws Error(kContract) unless forces.frame == Frame::kBody.
WindForces BodyToWind(const ForcesMoments& forces, double alpha_deg);

// Inverse of BodyToWind; moments are left at zero.
ForcesMoments WindToBody(const WindForces& wind, double alpha_deg);

}  // namespace qpaero
