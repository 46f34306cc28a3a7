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

// Coefficient-based aerodynamic model of the full vehicle.
//
// Every coefficient is a low-order polynomial in vehicle angle of attack
// (degrees), tabulated per flight mode and per airspeed bucket (5, 11 and
// 15 m/s). Forces follow
//
//   L = q S C_L
//   D = C_DQ V + q S C_DP          (C_DQ == 0 in plane mode)
//   M_y = q c S (C_M0 + C_Ma a + C_Mde de) + M_dT(a)   (M_dT only with
//                                                       vertical motors on)
//   M_x = q c S (C_rm_da da + C_rm_dr dr)
//   M_z = q c S (C_ym_da da + C_ym_dr dr)
//   SF  = q S (C_SF0 + C_SF_dr dr)
//
// with q = rho V^2 / 2. The fits only hold below wing stall; evaluation past
// the stored stall angle is an error unless the caller asks for the raw
// polynomial (DomainPolicy::kPermissive), as the mesh builder and the log
// synthesizer do.

#pragma once

#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qpaero/core.hpp"
#include "qpaero/propulsion.hpp"

namespace qpaero {

struct FitStats {
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::quiet_NaN();
};

struct LiftFit {
  double cl0 = 0.0;
  double cl_alpha = 0.0;  // per deg
  FitStats stats;

  double Evaluate(double alpha_deg) const { return cl0 + cl_alpha * alpha_deg; }
};

// c0 + c_alpha a + c_alpha2 a^2. Used for plane drag, form drag, quad drag.
struct QuadraticFit {
  double c0 = 0.0;
  double c_alpha = 0.0;
  double c_alpha2 = 0.0;
  FitStats stats;

  double Evaluate(double alpha_deg) const {
    return c0 + alpha_deg * (c_alpha + alpha_deg * c_alpha2);
  }
};

using QuadraticDragFit = QuadraticFit;
// Lumped rotor drag, N*s/m. The linear form keeps c_alpha2 == 0.
using QuadDragFit = QuadraticFit;

enum class QuadDragForm { kLinear, kQuadratic };

struct MomentModel {
  double cm0 = 0.0;
  double cm_alpha = 0.0;      // per deg
  FitStats cm_stats;
  double cm_elevator = 0.0;   // per unit normalized deflection
  FitStats elevator_stats;
  QuadraticFit differential_thrust;  // N*m, zero in plane mode

  double StructuralCm(double alpha_deg) const {
    return cm0 + cm_alpha * alpha_deg;
  }
};

struct LateralModel {
  double crm_aileron = 0.0;
  double crm_rudder = 0.0;
  FitStats crm_aileron_stats, crm_rudder_stats;
  double cym_aileron = 0.0;
  double cym_rudder = 0.0;
  FitStats cym_aileron_stats, cym_rudder_stats;
  double csf0 = 0.0;
  double csf_rudder = 0.0;
  FitStats csf_stats;
};

// Every fit for one (mode, airspeed bucket).
struct BucketModel {
  FlightMode mode = FlightMode::kPlane;
  double airspeed = 0.0;        // bucket centre, m/s
  double reynolds = 0.0;
  double min_alpha_deg = -5.0;  // fitted range
  double stall_alpha_deg = 10.0;
  LiftFit lift;
  QuadraticDragFit form_drag;   // shared across modes for the bucket
  QuadraticDragFit plane_drag;
  QuadDragFit quad_drag_linear;
  QuadDragFit quad_drag_quadratic;
  MomentModel moment;
  LateralModel lateral;
};

enum class DomainPolicy { kEnforce, kPermissive };

class AeroModel {
 public:
  // Bucket matching tolerance for continuous airspeeds.
  static constexpr double kBucketTolerance = 1.0;

  void Insert(BucketModel bucket);

  bool Has(FlightMode mode, double airspeed) const;
  // Throws Error(kBuild) when the bucket is absent.
  const BucketModel& Bucket(FlightMode mode, double airspeed) const;
  std::vector<const BucketModel*> Buckets() const;
  std::vector<double> BucketSpeeds(FlightMode mode) const;
  bool empty() const { return buckets_.empty(); }

  // Nearest bucket centre within kBucketTolerance, if any.
  std::optional<double> SelectBucket(FlightMode mode, double airspeed) const;

  QuadDragForm quad_drag_form() const { return quad_drag_form_; }
  void set_quad_drag_form(QuadDragForm form) { quad_drag_form_ = form; }

 private:
  std::map<std::pair<int, double>, BucketModel> buckets_;
  QuadDragForm quad_drag_form_ = QuadDragForm::kLinear;
};

// Coefficients at one (mode, alpha) inside one bucket. Moment terms are kept
// split so that deflections can be applied afterwards.
struct AeroCoefficients {
  double cl = 0.0;
  double cd_plane = 0.0;
  double cd_quad = 0.0;             // N*s/m
  double cm_structural = 0.0;       // C_M0 + C_Ma a
  double cm_elevator = 0.0;         // per unit deflection
  double differential_moment = 0.0; // N*m
  double crm_aileron = 0.0, crm_rudder = 0.0;
  double cym_aileron = 0.0, cym_rudder = 0.0;
  double csf0 = 0.0, csf_rudder = 0.0;
};

// Throws Error(kStall) above the stall angle and Error(kDomain) below the
// fitted range, unless the policy is permissive.
void CheckAlphaDomain(const BucketModel& bucket, double alpha_deg);

AeroCoefficients CoefficientsAt(const AeroModel& model, FlightMode mode,
                                double bucket_speed, double alpha_deg,
                                DomainPolicy policy = DomainPolicy::kEnforce);

double CLift(const AeroModel& model, FlightMode mode, double bucket_speed,
             double alpha_deg, DomainPolicy policy = DomainPolicy::kEnforce);
double CDragPlane(const AeroModel& model, FlightMode mode, double bucket_speed,
                  double alpha_deg,
                  DomainPolicy policy = DomainPolicy::kEnforce);
double CDragQuad(const AeroModel& model, FlightMode mode, double bucket_speed,
                 double alpha_deg,
                 DomainPolicy policy = DomainPolicy::kEnforce);

// Plane-mode form drag from a measured drag force:
//   C_DPf = 2 D / (rho S V^2) - C_L^2 / (pi e AR).
// Throws Error(kSingular) for V == 0.
double CDragFormFromMeasurement(double drag, double cl, double airspeed,
                                const VehicleGeometry& geometry,
                                const Atmosphere& atmosphere);

double InducedDrag(double cl, const VehicleGeometry& geometry);

struct AeroForces {
  double lift = 0.0;
  double drag = 0.0;
  double side_force = 0.0;
  double roll_moment = 0.0;
  double pitch_moment = 0.0;
  double yaw_moment = 0.0;
};

AeroForces AssembleAeroForces(const AeroCoefficients& coefficients,
                              const FlightCondition& condition,
                              const Atmosphere& atmosphere,
                              const VehicleGeometry& geometry);

// Coefficients for a FlightCondition: zero aero at V == 0, otherwise the
// nearest bucket within 1 m/s. Throws Error(kOutOfEnvelope) when no bucket is
// close enough (interpolate with meshlut instead).
AeroCoefficients CoefficientsFor(const AeroModel& model,
                                 const FlightCondition& condition,
                                 DomainPolicy policy = DomainPolicy::kEnforce);

struct LiftDrag {
  double lift = 0.0;
  double drag = 0.0;
};

LiftDrag LiftDragForces(const AeroModel& model, const FlightCondition& condition,
                        const Atmosphere& atmosphere,
                        const VehicleGeometry& geometry);

double PitchingMoment(const AeroModel& model, const FlightCondition& condition,
                      const Atmosphere& atmosphere,
                      const VehicleGeometry& geometry);

struct LateralWrench {
  double side_force = 0.0;
  double roll_moment = 0.0;
  double yaw_moment = 0.0;
};

LateralWrench LateralForces(const AeroModel& model,
                            const FlightCondition& condition,
                            const Atmosphere& atmosphere,
                            const VehicleGeometry& geometry);

struct PropulsionForces {
  double forward = 0.0;          // along +x body
  double module_vertical = 0.0;  // single isolated vertical module
  VerticalThrust vertical;       // after the rear-deficit correction
};

struct WrenchOptions {
  RearThrustMode rear_mode = RearThrustMode::kAsPrinted;
  DomainPolicy domain = DomainPolicy::kEnforce;
};

// Body-frame (FRD) external wrench excluding weight, as a load cell sees it.
// The forward module runs at alpha_p = alpha_V (off in quad mode), the
// vertical modules at alpha_V + 90 (off in plane mode). Vertical thrust is
// reduced for the rear pair from the net pitching moment.
ForcesMoments AssembleWrench(const AeroForces& aero, const ThrustMap& thrust,
                             const FlightCondition& condition,
                             const VehicleGeometry& geometry,
                             RearThrustMode rear_mode,
                             PropulsionForces* propulsion_out = nullptr);

ForcesMoments TotalWrench(const AeroModel& model, const ThrustMap& thrust,
                          const FlightCondition& condition,
                          const Atmosphere& atmosphere,
                          const VehicleGeometry& geometry,
                          const WrenchOptions& options = {},
                          PropulsionForces* propulsion_out = nullptr);

}  // namespace qpaero
