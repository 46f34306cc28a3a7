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

#pragma once

#include <limits>
#include <string>

#include "qpaero/core.hpp"

namespace qpaero {

// One reduced test condition: window-mean aerodynamic loads plus the
// coefficient samples derived from them. Coefficients are NaN when
// undefined (V == 0, or no plane-drag reference for the quad split).
struct ReducedPoint {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  std::string label;  // window label, e.g. "quad", "elevator-80"
  FlightMode mode = FlightMode::kPlane;
  double alpha_deg = 0.0;
  double airspeed = 0.0;
  double aileron = 0.0, elevator = 0.0, rudder = 0.0;
  double esc_fwd = kEscIdle, esc_quad = kEscIdle;
  size_t n_samples = 0;

  // Thrust terms removed during reduction.
  double thrust_fwd = 0.0;
  double thrust_vert = 0.0;

  double lift = 0.0, drag = 0.0, side_force = 0.0;  // N
  double mx = 0.0, my = 0.0, mz = 0.0;              // N*m
  double sd_lift = 0.0, sd_drag = 0.0, sd_side_force = 0.0;
  double sd_mx = 0.0, sd_my = 0.0, sd_mz = 0.0;

  bool coefficients_defined = false;
  double cl = kNaN;
  double cd_total = kNaN;   // D / (q S)
  double cd_plane = kNaN;
  double cd_form = kNaN;    // plane mode only
  double cd_quad = kNaN;    // N*s/m, quad and hybrid only
  double cm = kNaN;         // M_y / (q c S), all contributions
  double crm = kNaN;        // M_x / (q c S)
  double cym = kNaN;        // M_z / (q c S)
  double csf = kNaN;        // SF / (q S)
};

}  // namespace qpaero
