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

#include "qpaero/trimsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "json.hpp"
#include "qpaero/error.hpp"

namespace qpaero {
namespace {

using nlohmann::json;

constexpr double kSpeedMatch = 1e-9;

constexpr CoefficientKind kAllKinds[] = {
    CoefficientKind::kLift,          CoefficientKind::kPlaneDrag,
    CoefficientKind::kQuadDrag,      CoefficientKind::kQuadDragQuadratic,
    CoefficientKind::kFormDrag,      CoefficientKind::kPitchStructural,
    CoefficientKind::kDifferentialMoment, CoefficientKind::kElevator,
    CoefficientKind::kRollAileron,   CoefficientKind::kRollRudder,
    CoefficientKind::kYawAileron,    CoefficientKind::kYawRudder,
    CoefficientKind::kSideForce0,    CoefficientKind::kSideForceRudder,
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[240];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// f(lo) and f(hi) have opposite signs (or one is zero).
double Bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void AddConstraint(TrimSolution* s, const std::string& name, const std::string& why) {
  if (std::find(s->active_constraints.begin(), s->active_constraints.end(), name) ==
      s->active_constraints.end()) {
    s->active_constraints.push_back(name);
  }
  if (!s->reason.empty()) s->reason += "; ";
  s->reason += why;
}

void ResidualsFrom(const AeroForces& a, const ThrustMap& thrust,
                   const FlightCondition& cond, const VehicleGeometry& g,
                   RearThrustMode rear_mode, TrimSolution* out) {
  PropulsionForces prop;
  const ForcesMoments w = AssembleWrench(a, thrust, cond, g, rear_mode, &prop);
  const double th = DegToRad(cond.alpha_deg);
  out->lift = a.lift;
  out->drag = a.drag;
  out->thrust_fwd = prop.forward;
  out->thrust_vert = prop.vertical.total;
  out->thrust_vert_each = prop.module_vertical;
  out->residual_x = w.fx - g.weight() * std::sin(th);
  out->residual_z = w.fz + g.weight() * std::cos(th);
  out->residual_my = w.my;
}

void Finalize(TrimSolution* s) {
  const bool balanced = s->force_residual() < kForceResidualLimit &&
                        std::fabs(s->residual_my) < kMomentResidualLimit;
  if (s->active_constraints.empty() && !balanced) {
    AddConstraint(s, "residual",
                  Fmt("balance not closed: |F| = %.4g N, |My| = %.4g N*m",
                      s->force_residual(), std::fabs(s->residual_my)));
  }
  s->feasible = s->active_constraints.empty() && balanced;
}

// ESC for a target thrust on one module, clamped to what is reachable.
double SolveEsc(const ThrustMap& thrust, double alpha_p, double airspeed,
                double target, const char* which, TrimSolution* s) {
  try {
    return InvertThrust(thrust, alpha_p, airspeed, target);
  } catch (const InfeasibleError& e) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%s thrust %.4g N outside reachable [%.4g, %.4g] N",
                  which, target, e.achievable_lo(), e.achievable_hi());
    AddConstraint(s, "thrust", buf);
    if (target < e.achievable_lo()) return kEscIdle;
    auto f = [&](double nu) { return thrust.Evaluate(alpha_p, airspeed, nu).thrust; };
    return MonotoneSegmentEnd(f);
  }
}

AeroForces AeroAt(const AeroEvaluator& aero, FlightMode mode, double alpha,
                  double airspeed, double elevator,
                  DomainPolicy policy = DomainPolicy::kPermissive) {
  FlightCondition c;
  c.mode = mode;
  c.alpha_deg = alpha;
  c.airspeed = airspeed;
  c.elevator = elevator;
  if (mode != FlightMode::kPlane) c.esc_quad = kEscIdle;
  return aero.Forces(c, policy);
}

// Elevator needed for M_y = 0 given the moment at de = 0 and de = 1.
struct PitchSolve {
  double elevator = 0.0;
  double split = 0.0;  // N per vertical motor
};

PitchSolve SolvePitch(double m0, double m1, bool have_split, double module_thrust,
                      double module_min, double module_max, double arm,
                      PitchPriority priority, TrimSolution* s) {
  PitchSolve out;
  const double slope = m1 - m0;
  auto split_room = [&]() {
    return std::max(0.0, std::min(module_max - module_thrust,
                                  module_thrust - module_min));
  };
  auto elevator_for = [&](double m) {
    if (slope == 0.0) return m == 0.0 ? 0.0 : std::copysign(2.0, -m);
    return -m / slope;
  };
  if (!have_split || priority == PitchPriority::kElevatorFirst) {
    out.elevator = elevator_for(m0);
    if (std::fabs(out.elevator) <= 1.0) return out;
    out.elevator = std::clamp(out.elevator, -1.0, 1.0);
    const double rem = m0 + slope * out.elevator;
    if (!have_split) {
      AddConstraint(s, "pitch_authority",
                    Fmt("elevator saturated, %.4g N*m unbalanced", rem));
      return out;
    }
    out.split = -rem / (4.0 * arm);
    if (std::fabs(out.split) > split_room()) {
      out.split = std::copysign(split_room(), out.split);
      AddConstraint(s, "pitch_authority",
                    Fmt("elevator and thrust split saturated, %.4g N*m unbalanced",
                        rem + 4.0 * arm * out.split));
    }
    return out;
  }
  out.split = -m0 / (4.0 * arm);
  if (std::fabs(out.split) <= split_room()) return out;
  out.split = std::copysign(split_room(), out.split);
  const double rem = m0 + 4.0 * arm * out.split;
  out.elevator = elevator_for(rem);
  if (std::fabs(out.elevator) > 1.0) {
    out.elevator = std::clamp(out.elevator, -1.0, 1.0);
    AddConstraint(s, "pitch_authority",
                  Fmt("thrust split and elevator saturated, %.4g N*m unbalanced",
                      rem + slope * out.elevator));
  }
  return out;
}

bool AlphaInRange(const AeroEvaluator& aero, FlightMode mode, double alpha,
                  double airspeed, TrimSolution* s) {
  const double hi = aero.StallAlpha(mode, airspeed);
  const double lo = aero.MinAlpha(mode, airspeed);
  if (alpha > hi + 1e-12) {
    AddConstraint(s, "stall", Fmt("alpha %.4g deg above stall bound %.4g deg", alpha, hi));
    return false;
  }
  if (alpha < lo - 1e-12) {
    AddConstraint(s, "alpha_range",
                  Fmt("alpha %.4g deg below fitted range %.4g deg", alpha, lo));
    return false;
  }
  return true;
}

TrimSolution PlaneTrim(double v, const AeroEvaluator& aero, const ThrustMap& thrust,
                       const TrimOptions& opt) {
  TrimSolution s;
  const VehicleGeometry& g = aero.geometry();
  const double w = g.weight();
  FlightCondition& c = s.condition;
  c.mode = FlightMode::kPlane;
  c.airspeed = v;
  s.source = aero.SourceAt(FlightMode::kPlane, v);
  if (v <= 0.0) {
    AddConstraint(&s, "no_lift", "no lift at zero airspeed");
    ResidualsFrom({}, thrust, c, g, opt.rear_mode, &s);
    Finalize(&s);
    return s;
  }
  const double lo = aero.MinAlpha(FlightMode::kPlane, v);
  const double hi = aero.StallAlpha(FlightMode::kPlane, v);
  std::function<double(double)> surplus;
  if (opt.lift_balance == LiftBalance::kExact) {
    surplus = [&](double a) { return PlaneLiftSurplus(aero, a, v); };
  } else {
    surplus = [&](double a) {
      return AeroAt(aero, FlightMode::kPlane, a, v, 0.0).lift - w;
    };
  }
  const double s_hi = surplus(hi), s_lo = surplus(lo);
  if (s_hi < 0.0) {
    c.alpha_deg = hi;
    AddConstraint(&s, "stall",
                  Fmt("wing %.4g N short of weight at the %.4g deg stall bound",
                      -s_hi, hi));
  } else if (s_lo > 0.0) {
    c.alpha_deg = lo;
    AddConstraint(&s, "alpha_range",
                  Fmt("lift exceeds weight by %.4g N at %.4g deg", s_lo, lo));
  } else {
    c.alpha_deg = Bisect(surplus, lo, hi);
  }
  const double a = c.alpha_deg;
  const double ca = std::cos(DegToRad(a)), sa = std::sin(DegToRad(a));
  const AeroForces f0 = AeroAt(aero, FlightMode::kPlane, a, v, 0.0);
  const double t_fwd = opt.lift_balance == LiftBalance::kExact
                           ? f0.drag * ca + w * sa - f0.lift * sa
                           : f0.drag;
  c.esc_fwd = SolveEsc(thrust, PropAlpha(a, PropulsionModule::kForward), v, t_fwd,
                       "forward", &s);
  const AeroForces f1 = AeroAt(aero, FlightMode::kPlane, a, v, 1.0);
  c.elevator = SolvePitch(f0.pitch_moment, f1.pitch_moment, false, 0, 0, 0,
                          g.quad_arm, opt.pitch_priority, &s)
                   .elevator;
  Residuals(aero, thrust, c, opt.rear_mode, &s);
  Finalize(&s);
  return s;
}

// Hybrid (forward motor on) or quad at a fixed alpha.
TrimSolution VerticalTrimAt(FlightMode mode, double v, double alpha,
                            const AeroEvaluator& aero, const ThrustMap& thrust,
                            const TrimOptions& opt) {
  TrimSolution s;
  const VehicleGeometry& g = aero.geometry();
  const double w = g.weight();
  FlightCondition& c = s.condition;
  c.mode = mode;
  c.airspeed = v;
  c.alpha_deg = alpha;
  s.source = v > 0.0 ? aero.SourceAt(mode, v) : CoefficientSource::kNone;
  if (v > 0.0 && !AlphaInRange(aero, mode, alpha, v, &s)) {
    Residuals(aero, thrust, c, opt.rear_mode, &s);
    Finalize(&s);
    return s;
  }
  const double ca = std::cos(DegToRad(alpha)), sa = std::sin(DegToRad(alpha));
  const AeroForces f0 = AeroAt(aero, mode, alpha, v, 0.0);
  const double t_fwd = f0.drag * ca + w * sa - f0.lift * sa;
  const double t_vert = w * ca - f0.lift * ca - f0.drag * sa;
  const double t_each = t_vert / 4.0;
  if (mode == FlightMode::kHybrid) {
    c.esc_fwd = SolveEsc(thrust, PropAlpha(alpha, PropulsionModule::kForward), v,
                         t_fwd, "forward", &s);
  } else if (std::fabs(t_fwd) >= kForceResidualLimit) {
    AddConstraint(&s, "thrust",
                  Fmt("x balance needs %.4g N of forward thrust with the forward "
                      "motor off",
                      t_fwd));
  }
  const double ap = PropAlpha(alpha, PropulsionModule::kVertical);
  if (t_each <= 0.0) {
    c.esc_quad = kEscIdle;
    if (t_each < DynamicThrust(thrust, ap, v, kEscIdle) - 1e-12) {
      AddConstraint(&s, "thrust",
                    Fmt("wing carries %.4g N above weight; vertical motors "
                        "cannot pull down",
                        -t_vert));
    }
  } else {
    c.esc_quad = SolveEsc(thrust, ap, v, t_each, "vertical", &s);
  }
  const double m_min = DynamicThrust(thrust, ap, v, kEscIdle);
  const double m_max = thrust.MaxThrust(ap, v);
  const AeroForces f1 = AeroAt(aero, mode, alpha, v, 1.0);
  const PitchSolve p = SolvePitch(f0.pitch_moment, f1.pitch_moment, true, t_each,
                                  m_min, m_max, g.quad_arm, opt.pitch_priority, &s);
  c.elevator = p.elevator;
  c.pitch_thrust_split = p.split;
  Residuals(aero, thrust, c, opt.rear_mode, &s);
  Finalize(&s);
  return s;
}

TrimSolution QuadTrim(double v, const AeroEvaluator& aero, const ThrustMap& thrust,
                      const TrimOptions& opt) {
  const VehicleGeometry& g = aero.geometry();
  const double w = g.weight();
  const FlightMode m = FlightMode::kQuad;
  auto need_fwd = [&](double a) {
    const AeroForces f = AeroAt(aero, m, a, v, 0.0);
    const double ca = std::cos(DegToRad(a)), sa = std::sin(DegToRad(a));
    return f.drag * ca + w * sa - f.lift * sa;
  };
  const double lo = aero.MinAlpha(m, v), hi = aero.StallAlpha(m, v);
  const double n_lo = need_fwd(lo), n_hi = need_fwd(hi);
  double alpha;
  if ((n_lo <= 0.0) != (n_hi <= 0.0)) {
    alpha = Bisect(need_fwd, lo, hi);
  } else {
    alpha = std::fabs(n_lo) < std::fabs(n_hi) ? lo : hi;
  }
  return VerticalTrimAt(m, v, alpha, aero, thrust, opt);
}

void CheckSpeed(const AeroEvaluator& aero, FlightMode mode, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kDomain, "airspeed must be finite and >= 0");
  }
  if (v > 0.0) aero.SourceAt(mode, v);  // throws past the top bucket
}

}  // namespace

std::string_view ToString(CoefficientSource source) {
  switch (source) {
    case CoefficientSource::kNone: return "none";
    case CoefficientSource::kFade: return "fade";
    case CoefficientSource::kBucket: return "bucket";
    case CoefficientSource::kMesh: return "mesh";
  }
  return "none";
}

AeroEvaluator::AeroEvaluator(const AeroModel& model, const Atmosphere& atmosphere,
                             const VehicleGeometry& geometry)
    : model_(&model), atmosphere_(atmosphere), geometry_(geometry) {
  for (FlightMode mode : {FlightMode::kQuad, FlightMode::kHybrid, FlightMode::kPlane}) {
    const auto speeds = model.BucketSpeeds(mode);
    if (speeds.size() < 2) continue;
    for (CoefficientKind kind : kAllKinds) {
      meshes_.emplace(std::make_pair(static_cast<int>(mode), static_cast<int>(kind)),
                      BuildMesh(model, mode, kind, kMeshAlphas, speeds));
    }
  }
}

std::pair<double, double> AeroEvaluator::Neighbours(FlightMode mode,
                                                    double airspeed) const {
  const auto speeds = model_->BucketSpeeds(mode);
  if (speeds.empty()) {
    throw Error(ErrorCode::kOutOfEnvelope,
                std::string("no ") + std::string(ToString(mode)) + " buckets");
  }
  if (airspeed > speeds.back() + kSpeedMatch) {
    throw Error(ErrorCode::kOutOfEnvelope,
                Fmt("airspeed %.6g m/s above the highest bucket (%g m/s)", airspeed,
                    speeds.back()));
  }
  if (airspeed <= speeds.front() + kSpeedMatch) return {speeds.front(), speeds.front()};
  for (size_t i = 1; i < speeds.size(); ++i) {
    if (std::fabs(airspeed - speeds[i]) <= kSpeedMatch) return {speeds[i], speeds[i]};
    if (airspeed < speeds[i]) return {speeds[i - 1], speeds[i]};
  }
  return {speeds.back(), speeds.back()};
}

CoefficientSource AeroEvaluator::SourceAt(FlightMode mode, double airspeed) const {
  if (airspeed == 0.0) return CoefficientSource::kNone;
  const auto [lo, hi] = Neighbours(mode, airspeed);
  if (lo != hi) return CoefficientSource::kMesh;
  if (airspeed < lo - kSpeedMatch) return CoefficientSource::kFade;
  return CoefficientSource::kBucket;
}

double AeroEvaluator::StallAlpha(FlightMode mode, double airspeed) const {
  const auto [lo, hi] = Neighbours(mode, airspeed);
  return std::min(model_->Bucket(mode, lo).stall_alpha_deg,
                  model_->Bucket(mode, hi).stall_alpha_deg);
}

double AeroEvaluator::MinAlpha(FlightMode mode, double airspeed) const {
  const auto [lo, hi] = Neighbours(mode, airspeed);
  return std::max(model_->Bucket(mode, lo).min_alpha_deg,
                  model_->Bucket(mode, hi).min_alpha_deg);
}

AeroCoefficients AeroEvaluator::MeshCoefficients(FlightMode mode, double alpha,
                                                 double v) const {
  auto at = [&](CoefficientKind kind) {
    const auto it = meshes_.find({static_cast<int>(mode), static_cast<int>(kind)});
    if (it == meshes_.end()) {
      throw Error(ErrorCode::kOutOfEnvelope, "no interpolation mesh for this mode");
    }
    return Interp(it->second, alpha, v);
  };
  AeroCoefficients c;
  c.cl = at(CoefficientKind::kLift);
  c.cd_plane = at(CoefficientKind::kPlaneDrag);
  if (mode != FlightMode::kPlane) {
    c.cd_quad = at(model_->quad_drag_form() == QuadDragForm::kLinear
                       ? CoefficientKind::kQuadDrag
                       : CoefficientKind::kQuadDragQuadratic);
    c.differential_moment = at(CoefficientKind::kDifferentialMoment);
  }
  c.cm_structural = at(CoefficientKind::kPitchStructural);
  c.cm_elevator = at(CoefficientKind::kElevator);
  c.crm_aileron = at(CoefficientKind::kRollAileron);
  c.crm_rudder = at(CoefficientKind::kRollRudder);
  c.cym_aileron = at(CoefficientKind::kYawAileron);
  c.cym_rudder = at(CoefficientKind::kYawRudder);
  c.csf0 = at(CoefficientKind::kSideForce0);
  c.csf_rudder = at(CoefficientKind::kSideForceRudder);
  return c;
}

AeroCoefficients AeroEvaluator::Coefficients(FlightMode mode, double alpha,
                                             double v, DomainPolicy policy) const {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kDomain, "airspeed must be finite and >= 0");
  }
  if (v == 0.0) return {};
  const auto [lo, hi] = Neighbours(mode, v);
  if (policy == DomainPolicy::kEnforce) {
    if (!std::isfinite(alpha)) throw Error(ErrorCode::kDomain, "alpha must be finite");
    const double stall = StallAlpha(mode, v), min = MinAlpha(mode, v);
    if (alpha > stall + 1e-12) {
      throw Error(ErrorCode::kStall,
                  Fmt("alpha %.6g deg beyond stall bound %.6g deg", alpha, stall));
    }
    if (alpha < min - 1e-12) {
      throw Error(ErrorCode::kDomain,
                  Fmt("alpha %.6g deg below fitted range %.6g deg", alpha, min));
    }
  }
  if (lo != hi) return MeshCoefficients(mode, alpha, v);
  return CoefficientsAt(*model_, mode, lo, alpha, DomainPolicy::kPermissive);
}

AeroForces AeroEvaluator::Forces(const FlightCondition& cond,
                                 DomainPolicy policy) const {
  const double v = cond.airspeed;
  const AeroCoefficients c = Coefficients(cond.mode, cond.alpha_deg, v, policy);
  if (v == 0.0) return {};
  if (SourceAt(cond.mode, v) != CoefficientSource::kFade) {
    return AssembleAeroForces(c, cond, atmosphere_, geometry_);
  }
  // Below the lowest bucket: bucket forces faded linearly to zero at V = 0.
  FlightCondition at_lo = cond;
  at_lo.airspeed = Neighbours(cond.mode, v).first;
  AeroForces f = AssembleAeroForces(c, at_lo, atmosphere_, geometry_);
  const double k = v / at_lo.airspeed;
  f.lift *= k;
  f.drag *= k;
  f.side_force *= k;
  f.roll_moment *= k;
  f.pitch_moment *= k;
  f.yaw_moment *= k;
  return f;
}

double TrimSolution::force_residual() const {
  return std::hypot(residual_x, residual_z);
}

void Residuals(const AeroEvaluator& aero, const ThrustMap& thrust,
               const FlightCondition& cond, RearThrustMode rear_mode,
               TrimSolution* out) {
  const AeroForces a = aero.Forces(cond, DomainPolicy::kPermissive);
  ResidualsFrom(a, thrust, cond, aero.geometry(), rear_mode, out);
}

double PlaneLiftSurplus(const AeroEvaluator& aero, double alpha, double v) {
  const AeroForces f = AeroAt(aero, FlightMode::kPlane, alpha, v, 0.0);
  const double ca = std::cos(DegToRad(alpha)), sa = std::sin(DegToRad(alpha));
  return f.lift * ca + f.drag * sa - aero.geometry().weight() * ca;
}

TrimSolution HoverTrim(const VehicleGeometry& g, const ThrustMap& thrust,
                       RearThrustMode rear_mode) {
  TrimSolution s;
  FlightCondition& c = s.condition;
  c.mode = FlightMode::kQuad;
  const double target = g.weight() / 4.0;
  if (target > 0.0) {
    c.esc_quad = SolveEsc(thrust, PropAlpha(0.0, PropulsionModule::kVertical), 0.0,
                          target, "vertical", &s);
  }
  ResidualsFrom({}, thrust, c, g, rear_mode, &s);
  Finalize(&s);
  return s;
}

TrimSolution LevelTrim(FlightMode mode, double v, const AeroEvaluator& aero,
                       const ThrustMap& thrust, double alpha,
                       const TrimOptions& opt) {
  CheckSpeed(aero, mode, v);
  switch (mode) {
    case FlightMode::kPlane: return PlaneTrim(v, aero, thrust, opt);
    case FlightMode::kHybrid: return VerticalTrimAt(mode, v, alpha, aero, thrust, opt);
    case FlightMode::kQuad:
      if (v == 0.0) return HoverTrim(aero.geometry(), thrust, opt.rear_mode);
      return QuadTrim(v, aero, thrust, opt);
  }
  throw Error(ErrorCode::kInternal, "unknown flight mode");
}

TransitionSchedule Transition(double v_from, double v_to, int steps,
                              const AeroEvaluator& aero, const ThrustMap& thrust,
                              const TransitionOptions& opt) {
  CheckSpeed(aero, FlightMode::kHybrid, v_from);
  CheckSpeed(aero, FlightMode::kHybrid, v_to);
  CheckSpeed(aero, FlightMode::kPlane, std::max(v_from, v_to));
  TransitionSchedule out;
  out.accelerating = v_to >= v_from;
  std::vector<double> speeds;
  if (v_from == v_to) {
    speeds.push_back(v_from);
  } else {
    if (steps < 2) {
      throw Error(ErrorCode::kInvalidArgument, "a transition needs at least 2 steps");
    }
    for (int i = 0; i < steps; ++i) {
      speeds.push_back(i == steps - 1 ? v_to
                                      : v_from + (v_to - v_from) * i / (steps - 1));
    }
  }
  const VehicleGeometry& g = aero.geometry();
  for (double v : speeds) {
    TransitionStep st;
    st.airspeed = v;
    if (v == 0.0) {
      st.trim = HoverTrim(g, thrust, opt.trim.rear_mode);
      out.steps.push_back(st);
      continue;
    }
    TrimSolution plane = PlaneTrim(v, aero, thrust, opt.trim);
    if (plane.feasible) {
      st.trim = plane;
      out.steps.push_back(st);
      continue;
    }
    double alpha = opt.alpha_deg;
    if (opt.alpha_policy == AlphaPolicy::kMinVerticalThrust) {
      const FlightMode m = FlightMode::kHybrid;
      const double lo = aero.MinAlpha(m, v), hi = aero.StallAlpha(m, v);
      double best = INFINITY;
      const int n = static_cast<int>(std::round((hi - lo) / 0.01));
      for (int i = 0; i <= n; ++i) {
        const double a = i == n ? hi : lo + (hi - lo) * i / n;
        const AeroForces f = AeroAt(aero, m, a, v, 0.0);
        const double ca = std::cos(DegToRad(a)), sa = std::sin(DegToRad(a));
        const double t_fwd = f.drag * ca + g.weight() * sa - f.lift * sa;
        const double t_vert = g.weight() * ca - f.lift * ca - f.drag * sa;
        const double af = PropAlpha(a, PropulsionModule::kForward);
        const double av = PropAlpha(a, PropulsionModule::kVertical);
        if (t_fwd > thrust.MaxThrust(af, v) ||
            t_fwd < DynamicThrust(thrust, af, v, kEscIdle) ||
            t_vert / 4.0 > thrust.MaxThrust(av, v) ||
            t_vert / 4.0 < std::min(DynamicThrust(thrust, av, v, kEscIdle),
                                    DynamicThrust(thrust, av, v, kMonotoneSegmentStart))) {
          continue;
        }
        if (t_vert < best - 1e-12 ||
            (std::fabs(t_vert - best) <= 1e-12 && std::fabs(a) < std::fabs(alpha))) {
          best = t_vert;
          alpha = a;
        }
      }
    }
    st.trim = VerticalTrimAt(FlightMode::kHybrid, v, alpha, aero, thrust, opt.trim);
    out.steps.push_back(st);
  }
  return out;
}

namespace {

struct Margin {
  const char* name;
  double raw;    // reported, in the constraint's own unit
  double scale;  // for ranking
};

void Pick(EnvelopePoint* p, const std::vector<Margin>& margins) {
  const Margin* best = nullptr;
  for (const auto& m : margins) {
    if (!best || m.raw / m.scale < best->raw / best->scale) best = &m;
  }
  p->binding = best->name;
  p->margin = best->raw;
  p->feasible = true;
  for (const auto& m : margins) p->feasible = p->feasible && m.raw >= 0.0;
}

EnvelopePoint EvaluatePoint(FlightMode mode, double alpha, double v,
                            const AeroEvaluator& aero, const ThrustMap& thrust,
                            const TrimOptions& opt) {
  EnvelopePoint p;
  p.alpha_deg = alpha;
  p.airspeed = v;
  const VehicleGeometry& g = aero.geometry();
  const double w = g.weight();
  const double af = PropAlpha(alpha, PropulsionModule::kForward);
  const double av = PropAlpha(alpha, PropulsionModule::kVertical);
  try {
    if (v > 0.0) {
      const double hi = aero.StallAlpha(mode, v), lo = aero.MinAlpha(mode, v);
      if (alpha > hi || alpha < lo) {
        p.binding = alpha > hi ? "stall" : "alpha_range";
        p.margin = alpha > hi ? hi - alpha : alpha - lo;
        return p;
      }
    }
    const AeroForces f0 = v > 0.0 ? AeroAt(aero, mode, alpha, v, 0.0) : AeroForces{};
    const double ca = std::cos(DegToRad(alpha)), sa = std::sin(DegToRad(alpha));
    p.thrust_fwd_required = f0.drag * ca + w * sa - f0.lift * sa;
    p.thrust_vert_required = w * ca - f0.lift * ca - f0.drag * sa;
    if (mode != FlightMode::kQuad) p.thrust_fwd_max = thrust.MaxThrust(af, v);
    if (mode != FlightMode::kPlane) p.thrust_vert_max = 4.0 * thrust.MaxThrust(av, v);

    if (mode == FlightMode::kHybrid) {
      const TrimSolution t = VerticalTrimAt(mode, v, alpha, aero, thrust, opt);
      p.elevator_required = t.condition.elevator;
      const double idle = DynamicThrust(thrust, af, v, kEscIdle);
      std::vector<Margin> m = {
          {"thrust",
           std::min(p.thrust_fwd_max - p.thrust_fwd_required, p.thrust_fwd_required - idle),
           std::max(1.0, p.thrust_fwd_max)},
          {"thrust",
           std::min(p.thrust_vert_max - p.thrust_vert_required,
                    p.thrust_vert_required - 4.0 * DynamicThrust(thrust, av, v, kEscIdle)),
           std::max(1.0, p.thrust_vert_max)},
          {"pitch_authority", 1.0 - std::fabs(p.elevator_required), 1.0}};
      Pick(&p, m);
      if (!t.feasible) {
        p.feasible = false;
        if (!t.active_constraints.empty() && p.margin >= 0.0) {
          p.binding = t.active_constraints.front();
        }
      }
      return p;
    }
    if (mode == FlightMode::kQuad) {
      if (v == 0.0 && alpha == 0.0) {
        const TrimSolution t = HoverTrim(g, thrust, opt.rear_mode);
        Pick(&p, {{"thrust", p.thrust_vert_max - w, std::max(1.0, p.thrust_vert_max)}});
        p.feasible = p.feasible && t.feasible;
        return p;
      }
      Pick(&p, {{"thrust", kForceResidualLimit - std::fabs(p.thrust_fwd_required), 1.0},
                {"thrust", p.thrust_vert_max - p.thrust_vert_required,
                 std::max(1.0, p.thrust_vert_max)}});
      return p;
    }
    // Plane.
    if (v == 0.0) {
      p.binding = "no_lift";
      p.margin = -w;
      return p;
    }
    const AeroForces f1 = AeroAt(aero, mode, alpha, v, 1.0);
    const double slope = f1.pitch_moment - f0.pitch_moment;
    p.elevator_required = slope != 0.0 ? -f0.pitch_moment / slope : INFINITY;
    const double idle = DynamicThrust(thrust, af, v, kEscIdle);
    Pick(&p, {{"stall", -p.thrust_vert_required, w},
              {"thrust", std::min(p.thrust_fwd_max - p.thrust_fwd_required,
                                  p.thrust_fwd_required - idle),
               std::max(1.0, p.thrust_fwd_max)},
              {"pitch_authority", 1.0 - std::fabs(p.elevator_required), 1.0}});
    return p;
  } catch (const Error& e) {
    p.feasible = false;
    p.binding = "envelope";
    p.margin = 0.0;
    return p;
  }
}

}  // namespace

EnvelopeMap Envelope(FlightMode mode, const AeroEvaluator& aero,
                     const ThrustMap& thrust, const std::vector<double>& alphas,
                     const std::vector<double>& airspeeds,
                     const TrimOptions& opt) {
  EnvelopeMap out;
  out.mode = mode;
  out.alphas = alphas;
  out.airspeeds = airspeeds;
  const size_t n = alphas.size() * airspeeds.size();
  out.points.resize(n);
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next++; i < n; i = next++) {
      const double v = airspeeds[i / alphas.size()];
      const double a = alphas[i % alphas.size()];
      out.points[i] = EvaluatePoint(mode, a, v, aero, thrust, opt);
    }
  };
  const size_t workers =
      std::min<size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (size_t i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

namespace {

json TrimJson(const TrimSolution& t) {
  const FlightCondition& c = t.condition;
  return {{"mode", std::string(ToString(c.mode))},
          {"alpha_deg", c.alpha_deg},
          {"airspeed_mps", c.airspeed},
          {"esc_fwd_us", c.esc_fwd},
          {"esc_quad_us", c.esc_quad},
          {"elevator", c.elevator},
          {"pitch_thrust_split_N", c.pitch_thrust_split},
          {"feasible", t.feasible},
          {"active_constraints", t.active_constraints},
          {"reason", t.reason},
          {"lift_N", t.lift},
          {"drag_N", t.drag},
          {"thrust_fwd_N", t.thrust_fwd},
          {"thrust_vert_N", t.thrust_vert},
          {"thrust_vert_each_N", t.thrust_vert_each},
          {"residual_x_N", t.residual_x},
          {"residual_z_N", t.residual_z},
          {"residual_my_Nm", t.residual_my},
          {"coefficient_source", std::string(ToString(t.source))},
          {"blended", t.blended()}};
}

std::string Csv(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ";") + s;
  return out;
}

}  // namespace

std::string TrimToJson(const TrimSolution& trim) { return TrimJson(trim).dump(2) + "\n"; }

std::string TransitionToJson(const TransitionSchedule& s) {
  json steps = json::array();
  for (const auto& st : s.steps) steps.push_back(TrimJson(st.trim));
  return json{{"direction", s.accelerating ? "quad_to_plane" : "plane_to_quad"},
              {"profile", "quasi-static"},
              {"steps", steps}}
             .dump(2) +
         "\n";
}

std::string TransitionToCsv(const TransitionSchedule& s) {
  std::string out =
      "airspeed_mps,mode,alpha_deg,esc_fwd_us,esc_quad_us,elevator,"
      "pitch_thrust_split_N,thrust_fwd_N,thrust_vert_N,lift_N,drag_N,"
      "residual_x_N,residual_z_N,residual_my_Nm,feasible,source,constraints\n";
  for (const auto& st : s.steps) {
    const auto& t = st.trim;
    const auto& c = t.condition;
    out += Csv(st.airspeed) + "," + std::string(ToString(c.mode)) + "," +
           Csv(c.alpha_deg) + "," + Csv(c.esc_fwd) + "," + Csv(c.esc_quad) + "," +
           Csv(c.elevator) + "," + Csv(c.pitch_thrust_split) + "," +
           Csv(t.thrust_fwd) + "," + Csv(t.thrust_vert) + "," + Csv(t.lift) + "," +
           Csv(t.drag) + "," + Csv(t.residual_x) + "," + Csv(t.residual_z) + "," +
           Csv(t.residual_my) + "," + (t.feasible ? "1" : "0") + "," +
           std::string(ToString(t.source)) + "," + Join(t.active_constraints) + "\n";
  }
  return out;
}

std::string EnvelopeToJson(const EnvelopeMap& m) {
  json pts = json::array();
  for (const auto& p : m.points) {
    pts.push_back({{"alpha_deg", p.alpha_deg},
                   {"airspeed_mps", p.airspeed},
                   {"feasible", p.feasible},
                   {"binding", p.binding},
                   {"margin", p.margin},
                   {"thrust_fwd_required_N", p.thrust_fwd_required},
                   {"thrust_fwd_max_N", p.thrust_fwd_max},
                   {"thrust_vert_required_N", p.thrust_vert_required},
                   {"thrust_vert_max_N", p.thrust_vert_max},
                   {"elevator_required",
                    std::isfinite(p.elevator_required) ? json(p.elevator_required)
                                                       : json(nullptr)}});
  }
  return json{{"mode", std::string(ToString(m.mode))},
              {"alphas_deg", m.alphas},
              {"airspeeds_mps", m.airspeeds},
              {"points", pts}}
             .dump(2) +
         "\n";
}

std::string EnvelopeToCsv(const EnvelopeMap& m) {
  std::string out =
      "alpha_deg,airspeed_mps,feasible,binding,margin,thrust_fwd_required_N,"
      "thrust_fwd_max_N,thrust_vert_required_N,thrust_vert_max_N,elevator_required\n";
  for (const auto& p : m.points) {
    out += Csv(p.alpha_deg) + "," + Csv(p.airspeed) + "," + (p.feasible ? "1" : "0") +
           "," + p.binding + "," + Csv(p.margin) + "," + Csv(p.thrust_fwd_required) +
           "," + Csv(p.thrust_fwd_max) + "," + Csv(p.thrust_vert_required) + "," +
           Csv(p.thrust_vert_max) + "," + Csv(p.elevator_required) + "\n";
  }
  return out;
}

}  // namespace qpaero
