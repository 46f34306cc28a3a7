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

#include "qpaero/aero.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "qpaero/error.hpp"

namespace qpaero {
namespace {

std::string BucketName(FlightMode mode, double airspeed) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%s, %g m/s)",
                std::string(ToString(mode)).c_str(), airspeed);
  return buf;
}

bool HasVerticalMotors(FlightMode mode) { return mode != FlightMode::kPlane; }

}  // namespace

void AeroModel::Insert(BucketModel bucket) {
  const auto key = std::make_pair(static_cast<int>(bucket.mode), bucket.airspeed);
  buckets_[key] = std::move(bucket);
}

bool AeroModel::Has(FlightMode mode, double airspeed) const {
  return buckets_.count({static_cast<int>(mode), airspeed}) > 0;
}

const BucketModel& AeroModel::Bucket(FlightMode mode, double airspeed) const {
  auto it = buckets_.find({static_cast<int>(mode), airspeed});
  if (it == buckets_.end()) {
    throw Error(ErrorCode::kBuild,
                "aero model has no bucket " + BucketName(mode, airspeed));
  }
  return it->second;
}

std::vector<const BucketModel*> AeroModel::Buckets() const {
  std::vector<const BucketModel*> out;
  out.reserve(buckets_.size());
  for (const auto& [key, b] : buckets_) out.push_back(&b);
  return out;
}

std::vector<double> AeroModel::BucketSpeeds(FlightMode mode) const {
  std::vector<double> out;
  for (const auto& [key, b] : buckets_) {
    if (b.mode == mode) out.push_back(b.airspeed);
  }
  return out;
}

std::optional<double> AeroModel::SelectBucket(FlightMode mode,
                                              double airspeed) const {
  std::optional<double> best;
  double best_gap = kBucketTolerance;
  for (double v : BucketSpeeds(mode)) {
    const double gap = std::fabs(v - airspeed);
    if (gap <= best_gap) {
      best_gap = gap;
      best = v;
    }
  }
  return best;
}

void CheckAlphaDomain(const BucketModel& bucket, double alpha_deg) {
  if (alpha_deg > bucket.stall_alpha_deg) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "alpha %.6g deg beyond stall boundary %.6g deg for %s",
                  alpha_deg, bucket.stall_alpha_deg,
                  BucketName(bucket.mode, bucket.airspeed).c_str());
    throw Error(ErrorCode::kStall, buf);
  }
  if (alpha_deg < bucket.min_alpha_deg || !std::isfinite(alpha_deg)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "alpha %.6g deg below fitted range %.6g deg for %s",
                  alpha_deg, bucket.min_alpha_deg,
                  BucketName(bucket.mode, bucket.airspeed).c_str());
    throw Error(ErrorCode::kDomain, buf);
  }
}

AeroCoefficients CoefficientsAt(const AeroModel& model, FlightMode mode,
                                double bucket_speed, double alpha_deg,
                                DomainPolicy policy) {
  const BucketModel& b = model.Bucket(mode, bucket_speed);
  if (policy == DomainPolicy::kEnforce) CheckAlphaDomain(b, alpha_deg);
  AeroCoefficients c;
  c.cl = b.lift.Evaluate(alpha_deg);
  c.cd_plane = b.plane_drag.Evaluate(alpha_deg);
  if (HasVerticalMotors(mode)) {
    c.cd_quad = model.quad_drag_form() == QuadDragForm::kLinear
                    ? b.quad_drag_linear.Evaluate(alpha_deg)
                    : b.quad_drag_quadratic.Evaluate(alpha_deg);
    c.differential_moment = b.moment.differential_thrust.Evaluate(alpha_deg);
  }
  c.cm_structural = b.moment.StructuralCm(alpha_deg);
  c.cm_elevator = b.moment.cm_elevator;
  c.crm_aileron = b.lateral.crm_aileron;
  c.crm_rudder = b.lateral.crm_rudder;
  c.cym_aileron = b.lateral.cym_aileron;
  c.cym_rudder = b.lateral.cym_rudder;
  c.csf0 = b.lateral.csf0;
  c.csf_rudder = b.lateral.csf_rudder;
  return c;
}

double CLift(const AeroModel& model, FlightMode mode, double bucket_speed,
             double alpha_deg, DomainPolicy policy) {
  return CoefficientsAt(model, mode, bucket_speed, alpha_deg, policy).cl;
}

double CDragPlane(const AeroModel& model, FlightMode mode, double bucket_speed,
                  double alpha_deg, DomainPolicy policy) {
  return CoefficientsAt(model, mode, bucket_speed, alpha_deg, policy).cd_plane;
}

double CDragQuad(const AeroModel& model, FlightMode mode, double bucket_speed,
                 double alpha_deg, DomainPolicy policy) {
  return CoefficientsAt(model, mode, bucket_speed, alpha_deg, policy).cd_quad;
}

double InducedDrag(double cl, const VehicleGeometry& geometry) {
  return cl * cl / (kPi * geometry.oswald_e * geometry.aspect_ratio());
}

double CDragFormFromMeasurement(double drag, double cl, double airspeed,
                                const VehicleGeometry& geometry,
                                const Atmosphere& atmosphere) {
  if (!(airspeed > 0.0)) {
    throw Error(ErrorCode::kSingular, "form drag undefined at zero airspeed");
  }
  const double q = atmosphere.dynamic_pressure(airspeed);
  return drag / (q * geometry.planform_area()) - InducedDrag(cl, geometry);
}

AeroForces AssembleAeroForces(const AeroCoefficients& c,
                              const FlightCondition& cond,
                              const Atmosphere& atm,
                              const VehicleGeometry& geom) {
  const double v = cond.airspeed;
  const double qs = atm.dynamic_pressure(v) * geom.planform_area();
  const double qcs = qs * geom.wing_chord;
  AeroForces f;
  f.lift = qs * c.cl;
  f.drag = c.cd_quad * v + qs * c.cd_plane;
  f.side_force = qs * (c.csf0 + c.csf_rudder * cond.rudder);
  f.roll_moment = qcs * (c.crm_aileron * cond.aileron + c.crm_rudder * cond.rudder);
  f.yaw_moment = qcs * (c.cym_aileron * cond.aileron + c.cym_rudder * cond.rudder);
  f.pitch_moment = qcs * (c.cm_structural + c.cm_elevator * cond.elevator) +
                   c.differential_moment;
  return f;
}

AeroCoefficients CoefficientsFor(const AeroModel& model,
                                 const FlightCondition& cond,
                                 DomainPolicy policy) {
  if (cond.airspeed < 0.0) {
    throw Error(ErrorCode::kDomain, "airspeed must be >= 0");
  }
  if (cond.airspeed == 0.0) return AeroCoefficients{};
  const auto bucket = model.SelectBucket(cond.mode, cond.airspeed);
  if (!bucket) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "no %s bucket within 1 m/s of %.6g m/s; use mesh interpolation",
                  std::string(ToString(cond.mode)).c_str(), cond.airspeed);
    throw Error(ErrorCode::kOutOfEnvelope, buf);
  }
  return CoefficientsAt(model, cond.mode, *bucket, cond.alpha_deg, policy);
}

LiftDrag LiftDragForces(const AeroModel& model, const FlightCondition& cond,
                        const Atmosphere& atm, const VehicleGeometry& geom) {
  const auto f = AssembleAeroForces(CoefficientsFor(model, cond), cond, atm, geom);
  return {f.lift, f.drag};
}

double PitchingMoment(const AeroModel& model, const FlightCondition& cond,
                      const Atmosphere& atm, const VehicleGeometry& geom) {
  return AssembleAeroForces(CoefficientsFor(model, cond), cond, atm, geom)
      .pitch_moment;
}

LateralWrench LateralForces(const AeroModel& model, const FlightCondition& cond,
                            const Atmosphere& atm, const VehicleGeometry& geom) {
  const auto f = AssembleAeroForces(CoefficientsFor(model, cond), cond, atm, geom);
  return {f.side_force, f.roll_moment, f.yaw_moment};
}

ForcesMoments AssembleWrench(const AeroForces& aero, const ThrustMap& thrust,
                             const FlightCondition& cond,
                             const VehicleGeometry& geom,
                             RearThrustMode rear_mode,
                             PropulsionForces* propulsion_out) {
  PropulsionForces prop;
  if (cond.mode != FlightMode::kQuad) {
    prop.forward = DynamicThrust(thrust, PropAlpha(cond.alpha_deg, PropulsionModule::kForward),
                                 cond.airspeed, cond.esc_fwd);
  }
  const double split_moment = 4.0 * geom.quad_arm * cond.pitch_thrust_split;
  const double my = aero.pitch_moment + split_moment;
  if (cond.mode != FlightMode::kPlane) {
    prop.module_vertical =
        DynamicThrust(thrust, PropAlpha(cond.alpha_deg, PropulsionModule::kVertical),
                      cond.airspeed, cond.esc_quad);
    prop.vertical = VerticalThrustTotal(prop.module_vertical, my, geom.quad_arm,
                                        rear_mode);
  }

  ForcesMoments w = WindToBody({aero.lift, aero.drag, aero.side_force},
                               cond.alpha_deg);
  w.fx += prop.forward;
  w.fz -= prop.vertical.total;
  w.mx = aero.roll_moment;
  w.my = my;
  w.mz = aero.yaw_moment;
  if (propulsion_out) *propulsion_out = prop;
  return w;
}

ForcesMoments TotalWrench(const AeroModel& model, const ThrustMap& thrust,
                          const FlightCondition& cond, const Atmosphere& atm,
                          const VehicleGeometry& geom,
                          const WrenchOptions& options,
                          PropulsionForces* propulsion_out) {
  Validate(cond);
  const auto coefficients = CoefficientsFor(model, cond, options.domain);
  const auto aero = AssembleAeroForces(coefficients, cond, atm, geom);
  return AssembleWrench(aero, thrust, cond, geom, options.rear_mode,
                        propulsion_out);
}

}  // namespace qpaero
