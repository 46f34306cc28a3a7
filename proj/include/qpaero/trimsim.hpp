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

// Steady trim, quasi-static transition schedules and feasibility maps.
//
// Balance in body axes with theta = alpha (level tunnel attitude), weight
// added to the load-cell wrench:
//   x:  Fx - W sin(theta) = 0
//   z:  Fz + W cos(theta) = 0
//   My = 0
// All 1-D solves are bisections on bracketed, monotone intervals.

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qpaero/aero.hpp"
#include "qpaero/core.hpp"
#include "qpaero/meshlut.hpp"
#include "qpaero/propulsion.hpp"

namespace qpaero {

inline constexpr double kForceResidualLimit = 0.05;   // N
inline constexpr double kMomentResidualLimit = 0.01;  // N*m

enum class CoefficientSource {
  kNone,    // V == 0, no aerodynamic load
  kFade,    // below the lowest bucket: bucket forces scaled by V / V_lo
  kBucket,  // exactly on a bucket speed
  kMesh,    // between buckets, planar interpolation
};

std::string_view ToString(CoefficientSource source);

// Aerodynamics at any airspeed in [0, highest bucket]. Meshes for every
// coefficient are built once at construction; evaluation is const and
// thread-safe.
class AeroEvaluator {
 public:
  AeroEvaluator(const AeroModel& model, const Atmosphere& atmosphere,
                const VehicleGeometry& geometry);

  const AeroModel& model() const { return *model_; }
  const Atmosphere& atmosphere() const { return atmosphere_; }
  const VehicleGeometry& geometry() const { return geometry_; }

  // Fitted alpha range at V: between buckets the tighter stall bound of the
  // two neighbours applies. Throws Error(kOutOfEnvelope) past the top bucket.
  double StallAlpha(FlightMode mode, double airspeed) const;
  double MinAlpha(FlightMode mode, double airspeed) const;

  CoefficientSource SourceAt(FlightMode mode, double airspeed) const;

  // Throws kStall / kDomain outside the alpha range (unless permissive) and
  // kOutOfEnvelope outside the airspeed range.
  AeroForces Forces(const FlightCondition& condition,
                    DomainPolicy policy = DomainPolicy::kEnforce) const;

  // Coefficients behind Forces(). In the fade region these are the lowest
  // bucket's; the fade applies to forces only.
  AeroCoefficients Coefficients(FlightMode mode, double alpha_deg,
                                double airspeed,
                                DomainPolicy policy = DomainPolicy::kEnforce) const;

 private:
  AeroCoefficients MeshCoefficients(FlightMode mode, double alpha_deg,
                                    double airspeed) const;
  std::pair<double, double> Neighbours(FlightMode mode, double airspeed) const;

  const AeroModel* model_;
  Atmosphere atmosphere_;
  VehicleGeometry geometry_;
  std::map<std::pair<int, int>, TriMesh> meshes_;  // (mode, kind)
};

// Plane-mode vertical balance. kExact keeps the D sin(a) and thrust terms;
// kSmallAngle solves L = W with T_fwd = D and reports the residual it leaves.
enum class LiftBalance { kExact, kSmallAngle };

enum class PitchPriority { kElevatorFirst, kThrustSplitFirst };

enum class AlphaPolicy {
  kHold,               // fixed alpha (default 0)
  kMinVerticalThrust,  // alpha in the fitted range minimizing T_vert
};

struct TrimOptions {
  LiftBalance lift_balance = LiftBalance::kExact;
  PitchPriority pitch_priority = PitchPriority::kElevatorFirst;
  RearThrustMode rear_mode = RearThrustMode::kAsPrinted;
};

struct TrimSolution {
  FlightCondition condition;  // solved actuators
  bool feasible = false;
  std::vector<std::string> active_constraints;  // stall, thrust, pitch_authority, no_lift
  std::string reason;
  double lift = 0.0, drag = 0.0;  // N
  double thrust_fwd = 0.0;        // N
  double thrust_vert = 0.0;       // N, all four vertical motors
  double thrust_vert_each = 0.0;  // N, per vertical module
  // Weight-inclusive body-axis residuals after substituting the solution.
  double residual_x = 0.0, residual_z = 0.0, residual_my = 0.0;
  CoefficientSource source = CoefficientSource::kNone;

  double force_residual() const;
  bool blended() const { return source == CoefficientSource::kFade; }
};

// Weight-inclusive residuals of a condition. The trim solver uses this same
// path to grade its own output.
void Residuals(const AeroEvaluator& aero, const ThrustMap& thrust,
               const FlightCondition& condition, RearThrustMode rear_mode,
               TrimSolution* out);

// Four equal vertical motors carrying W at V = 0.
TrimSolution HoverTrim(const VehicleGeometry& geometry, const ThrustMap& thrust,
                       RearThrustMode rear_mode = RearThrustMode::kAsPrinted);

// Plane: alpha, T_fwd, elevator. Hybrid: vertical and forward thrust at the
// given alpha, then pitch. Quad: alpha that needs no forward thrust.
TrimSolution LevelTrim(FlightMode mode, double airspeed,
                       const AeroEvaluator& aero, const ThrustMap& thrust,
                       double alpha_deg = 0.0, const TrimOptions& options = {});

// Plane-mode vertical imbalance L cos a + D sin a - W cos a at alpha (N).
double PlaneLiftSurplus(const AeroEvaluator& aero, double alpha_deg,
                        double airspeed);

struct TransitionOptions {
  AlphaPolicy alpha_policy = AlphaPolicy::kHold;
  double alpha_deg = 0.0;  // for kHold
  TrimOptions trim;
};

struct TransitionStep {
  double airspeed = 0.0;
  TrimSolution trim;
};

struct TransitionSchedule {
  bool accelerating = true;  // quad -> plane
  std::vector<TransitionStep> steps;
};

// `steps` evenly spaced airspeeds from v_from to v_to inclusive; a single
// step when they coincide. Each step is the plane trim when that one is
// feasible, otherwise hybrid at the alpha policy; hover at V = 0. Throws
// Error(kDomain) for speeds outside [0, highest bucket].
TransitionSchedule Transition(double v_from, double v_to, int steps,
                              const AeroEvaluator& aero, const ThrustMap& thrust,
                              const TransitionOptions& options = {});

struct EnvelopePoint {
  double alpha_deg = 0.0;
  double airspeed = 0.0;
  bool feasible = false;
  std::string binding;  // constraint with the least margin
  double margin = 0.0;  // in that constraint's unit; negative when violated
  double thrust_fwd_required = 0.0;
  double thrust_fwd_max = 0.0;
  double thrust_vert_required = 0.0;
  double thrust_vert_max = 0.0;
  double elevator_required = 0.0;
};

struct EnvelopeMap {
  FlightMode mode = FlightMode::kPlane;
  std::vector<double> alphas;
  std::vector<double> airspeeds;
  std::vector<EnvelopePoint> points;  // airspeed outer
};

// Plane: feasible where the wing carries W at alpha, the forward motor can
// cancel the x imbalance and the elevator can zero M_y. Quad: V = 0 is the
// hover check, otherwise the x balance must close without forward thrust.
// Hybrid: the hybrid trim at that alpha. Parallel over grid points.
EnvelopeMap Envelope(FlightMode mode, const AeroEvaluator& aero,
                     const ThrustMap& thrust, const std::vector<double>& alphas,
                     const std::vector<double>& airspeeds,
                     const TrimOptions& options = {});

std::string TrimToJson(const TrimSolution& trim);
std::string TransitionToJson(const TransitionSchedule& schedule);
std::string TransitionToCsv(const TransitionSchedule& schedule);
std::string EnvelopeToJson(const EnvelopeMap& map);
std::string EnvelopeToCsv(const EnvelopeMap& map);

}  // namespace qpaero
