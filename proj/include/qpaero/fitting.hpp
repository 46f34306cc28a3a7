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

// Polynomial least squares and the pipelines that rebuild the thrust map
// and the aero suite from samples.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpaero/aero.hpp"
#include "qpaero/propulsion.hpp"
#include "qpaero/reduced_point.hpp"

namespace qpaero {

struct FitResult {
  std::vector<double> coefficients;  // ascending degree
  double r_squared = 0.0;
  double rmse = 0.0;
  size_t n_points = 0;
  int degree = 0;

  double Evaluate(double x) const;
};

enum class Intercept { kFree, kZero };

// Orthogonal-decomposition least squares on a centred and scaled abscissa;
// coefficients are expanded back to raw x. R^2 = 1 - SS_res/SS_tot (1 when
// both are zero, 0 when only SS_tot is), RMSE = sqrt(SS_res / n).
// Throws Error(kInvalidArgument) on size mismatch or degree outside 1..3,
// Error(kSingular) when the design matrix is rank deficient.
FitResult PolyFit(const std::vector<double>& xs, const std::vector<double>& ys,
                  int degree, Intercept intercept = Intercept::kFree);

struct ThrustSamplePoint {
  double alpha_p_deg = 0.0;
  double airspeed = 0.0;
  double esc_us = 0.0;
  double thrust = 0.0;
};

struct CellError {
  double alpha_p_deg = 0.0;
  double airspeed = 0.0;
  std::string message;
};

struct ThrustTableFit {
  std::vector<ThrustMapRow> rows;  // cells that fitted
  std::vector<CellError> errors;   // cells that did not
  std::optional<ThrustMap> map;    // set when the fitted cells form a grid
};

// One cubic per (alpha_p, airspeed) cell; a cell needs four distinct nu.
ThrustTableFit FitThrustTable(const std::vector<ThrustSamplePoint>& samples);

struct BucketReport {
  FlightMode mode = FlightMode::kPlane;
  double airspeed = 0.0;
  bool fitted = false;
  size_t n_points = 0;
  size_t n_excluded_stall = 0;
  std::vector<std::string> messages;
};

struct AeroFitOptions {
  // Stall bound applied per airspeed bucket before fitting.
  double min_alpha_deg = -5.0;
  double stall_alpha_low_speed_deg = 5.0;   // buckets below 8 m/s
  double stall_alpha_deg = 10.0;
  double bucket_tolerance = 1.0;            // m/s, grouping of airspeeds
  VehicleGeometry geometry;
  Atmosphere atmosphere;
};

struct AeroFitReport {
  std::vector<BucketReport> buckets;
  std::vector<std::string> warnings;
};

struct AeroSuiteFit {
  AeroModel model;
  AeroFitReport report;
};

// Rebuilds every table of the aero suite from reduced points.
//
// Undeflected points fit lift, plane drag and quad drag per (mode, bucket).
// Plane-mode points supply form drag and C_M0/C_Ma; quad and hybrid points
// supply M_dT after the plane structural moment is removed. Deflected points
// (plane mode) give the control derivatives: the structural moment is
// subtracted, samples are averaged over alpha per deflection level, then a
// zero-intercept line is fitted (side force keeps its intercept). Per-airspeed
// quantities are shared across modes at that airspeed.
AeroSuiteFit FitAeroSuite(const std::vector<ReducedPoint>& points,
                          const AeroFitOptions& options = {});

}  // namespace qpaero
