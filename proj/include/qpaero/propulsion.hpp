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

// Propulsion-module thrust models.
//
// A module's thrust is a cubic in ESC pulse width, fitted per propeller
// angle of attack (alpha_p) and airspeed. The ThrustMap holds one cubic per
// grid cell and interpolates *evaluated thrust* bilinearly between cells.
// Two alpha_p bands exist (forward module near 0 deg, vertical modules near
// 90 deg); the gap between them is never extrapolated across.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qpaero {

struct CubicThrustCurve {
  double c0 = 0.0;  // N
  double c1 = 0.0;  // N/us
  double c2 = 0.0;  // N/us^2
  double c3 = 0.0;  // N/us^3
  double r_squared = 0.0;
  double rmse = 0.0;

  double Evaluate(double esc_us) const {
    return c0 + esc_us * (c1 + esc_us * (c2 + esc_us * c3));
  }
};

// Static thrust against motor speed. c2 > 0 for a physical curve.
struct QuadraticRpmCurve {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double Evaluate(double rpm) const { return c0 + rpm * (c1 + rpm * c2); }
  bool IsConvex() const { return c2 > 0.0; }
};

// T = c0 + c1 nu + c2 nu^2 + c3 nu^3 with nu in [1000, 2000] us.
double StaticThrustEsc(const CubicThrustCurve& curve, double esc_us);

struct ThrustMapRow {
  double alpha_p_deg = 0.0;
  double airspeed = 0.0;
  CubicThrustCurve curve;
};

struct ThrustSample {
  double thrust = 0.0;  // N
  bool alpha_clamped = false;
  bool airspeed_clamped = false;
};

class ThrustMap {
 public:
  // Alpha_p values at or below this split belong to the forward band.
  static constexpr double kBandSplitDeg = 45.0;

  ThrustMap() = default;
  // Throws Error(kBuild) unless the rows form a complete rectangular grid
  // with every (alpha_p, airspeed) pair present exactly once.
  explicit ThrustMap(std::vector<ThrustMapRow> rows);

  const std::vector<ThrustMapRow>& rows() const { return rows_; }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& airspeeds() const { return airspeeds_; }
  // Loader diagnostics: sign anomalies, non-monotone segments, idle residuals.
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool empty() const { return rows_.empty(); }

  // nullptr when the cell is absent.
  const CubicThrustCurve* Find(double alpha_p_deg, double airspeed) const;

  // Bilinear interpolation of evaluated thrust. Throws Error(kDomain) for
  // nu outside [1000, 2000] or negative airspeed, Error(kUnsupportedRegion)
  // for alpha_p inside the untested gap between the two bands. Out-of-band
  // alpha_p and airspeed above the grid clamp to the nearest edge.
  ThrustSample Evaluate(double alpha_p_deg, double airspeed,
                        double esc_us) const;

  // Highest thrust reachable at this condition on the monotone segment.
  double MaxThrust(double alpha_p_deg, double airspeed) const;

 private:
  const CubicThrustCurve& At(size_t ia, size_t iv) const;

  std::vector<ThrustMapRow> rows_;
  std::vector<double> alphas_;
  std::vector<double> airspeeds_;
  std::vector<size_t> index_;  // alphas x airspeeds -> rows_ index
  std::vector<std::string> warnings_;
};

double DynamicThrust(const ThrustMap& map, double alpha_p_deg, double airspeed,
                     double esc_us);

// How the rear vertical-motor deficit is inferred from a pitching moment.
enum class RearThrustMode {
  kAsPrinted,     // each rear motor loses M_y / l_Q
  kSplitMoment,   // each rear motor loses M_y / (2 l_Q)
};

struct VerticalThrust {
  double total = 0.0;
  double front_each = 0.0;
  double rear_each = 0.0;
};

// Front motors produce the isolated-module thrust; the rear pair is reduced
// by the observed pitching moment. Throws Error(kDomain) if l_Q <= 0.
VerticalThrust VerticalThrustTotal(double module_thrust, double pitching_moment,
                                   double quad_arm,
                                   RearThrustMode mode = RearThrustMode::kAsPrinted);

// The monotone segment used for inversion: [1250 us, first local maximum].
struct EscInterval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kMonotoneSegmentStart = 1250.0;

// Upper end of the monotone segment of a thrust-vs-ESC function.
double MonotoneSegmentEnd(const std::function<double(double)>& thrust);

// Bisection for thrust(nu) == target. Targets between thrust(1000) and
// thrust(1250) are bracketed on the dead-zone segment. Throws InfeasibleError
// carrying the achievable thrust interval otherwise.
double InvertThrust(const std::function<double(double)>& thrust, double target);
double InvertThrust(const CubicThrustCurve& curve, double target);
double InvertThrust(const ThrustMap& map, double alpha_p_deg, double airspeed,
                    double target);

}  // namespace qpaero
