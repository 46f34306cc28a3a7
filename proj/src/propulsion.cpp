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

#include "qpaero/propulsion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qpaero/core.hpp"
#include "qpaero/error.hpp"

namespace qpaero {
namespace {

void CheckEsc(double esc_us) {
  if (!(esc_us >= kEscIdle && esc_us <= kEscFull)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ESC signal %.6g us outside [1000, 2000]",
                  esc_us);
    throw Error(ErrorCode::kDomain, buf);
  }
}

std::string CellName(double alpha, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(alpha_p=%g deg, V=%g m/s)", alpha, v);
  return buf;
}

struct Bracket {
  size_t lo = 0;
  size_t hi = 0;
  double t = 0.0;  // weight of hi
};

// xs sorted ascending, x already inside [xs.front(), xs.back()].
Bracket FindBracket(const std::vector<double>& xs, size_t first, size_t last,
                    double x) {
  Bracket b{first, first, 0.0};
  if (last == first) return b;
  for (size_t i = first; i < last; ++i) {
    if (x <= xs[i + 1]) {
      b.lo = i;
      b.hi = i + 1;
      b.t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return b;
    }
  }
  b.lo = last - 1;
  b.hi = last;
  b.t = 1.0;
  return b;
}

}  // namespace

double StaticThrustEsc(const CubicThrustCurve& curve, double esc_us) {
  CheckEsc(esc_us);
  return curve.Evaluate(esc_us);
}

ThrustMap::ThrustMap(std::vector<ThrustMapRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw Error(ErrorCode::kBuild, "thrust map has no rows");
  for (const auto& r : rows_) {
    alphas_.push_back(r.alpha_p_deg);
    airspeeds_.push_back(r.airspeed);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(alphas_);
  uniq(airspeeds_);

  constexpr size_t kMissing = static_cast<size_t>(-1);
  index_.assign(alphas_.size() * airspeeds_.size(), kMissing);
  for (size_t k = 0; k < rows_.size(); ++k) {
    const auto ia = static_cast<size_t>(
        std::lower_bound(alphas_.begin(), alphas_.end(), rows_[k].alpha_p_deg) -
        alphas_.begin());
    const auto iv = static_cast<size_t>(
        std::lower_bound(airspeeds_.begin(), airspeeds_.end(),
                         rows_[k].airspeed) -
        airspeeds_.begin());
    size_t& slot = index_[ia * airspeeds_.size() + iv];
    if (slot != kMissing) {
      throw Error(ErrorCode::kBuild, "thrust map cell duplicated " +
                                         CellName(rows_[k].alpha_p_deg,
                                                  rows_[k].airspeed));
    }
    slot = k;
  }
  for (size_t ia = 0; ia < alphas_.size(); ++ia) {
    for (size_t iv = 0; iv < airspeeds_.size(); ++iv) {
      if (index_[ia * airspeeds_.size() + iv] == kMissing) {
        throw Error(ErrorCode::kBuild, "thrust map cell missing " +
                                           CellName(alphas_[ia], airspeeds_[iv]));
      }
    }
  }
  if (airspeeds_.front() < 0.0) {
    throw Error(ErrorCode::kBuild, "thrust map has a negative airspeed");
  }

  // Diagnostics only; the data is kept as given.
  size_t negative_c3 = 0;
  for (const auto& r : rows_) negative_c3 += r.curve.c3 < 0.0 ? 1 : 0;
  const bool c3_mostly_negative = 2 * negative_c3 > rows_.size();
  for (const auto& r : rows_) {
    const auto name = CellName(r.alpha_p_deg, r.airspeed);
    if (c3_mostly_negative && r.curve.c3 > 0.0) {
      warnings_.push_back("sign anomaly: c3 > 0 at " + name);
    }
    const double idle = r.curve.Evaluate(kEscIdle);
    if (std::fabs(idle) >= 1.5) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "idle thrust %.4g N at ", idle);
      warnings_.push_back(buf + name);
    }
    double prev = r.curve.Evaluate(kMonotoneSegmentStart);
    double worst_drop = 0.0;
    for (double nu = kMonotoneSegmentStart + 1.0; nu <= kEscFull; nu += 1.0) {
      const double t = r.curve.Evaluate(nu);
      worst_drop = std::max(worst_drop, prev - t);
      prev = t;
    }
    if (worst_drop > 0.0) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "non-monotone on [1250, 2000] us (max step drop %.3g N) at ",
                    worst_drop);
      warnings_.push_back(buf + name);
    }
  }
}

const CubicThrustCurve& ThrustMap::At(size_t ia, size_t iv) const {
  return rows_[index_[ia * airspeeds_.size() + iv]].curve;
}

const CubicThrustCurve* ThrustMap::Find(double alpha_p_deg,
                                        double airspeed) const {
  for (const auto& r : rows_) {
    if (r.alpha_p_deg == alpha_p_deg && r.airspeed == airspeed) return &r.curve;
  }
  return nullptr;
}

ThrustSample ThrustMap::Evaluate(double alpha_p_deg, double airspeed,
                                 double esc_us) const {
  if (rows_.empty()) throw Error(ErrorCode::kBuild, "thrust map is empty");
  CheckEsc(esc_us);
  if (!(airspeed >= 0.0)) {
    throw Error(ErrorCode::kDomain, "airspeed must be >= 0");
  }
  if (!std::isfinite(alpha_p_deg)) {
    throw Error(ErrorCode::kDomain, "alpha_p is not finite");
  }
  ThrustSample out;

  // Band boundaries inside alphas_.
  const auto split = static_cast<size_t>(
      std::upper_bound(alphas_.begin(), alphas_.end(), kBandSplitDeg) -
      alphas_.begin());
  const bool has_low = split > 0;
  const bool has_high = split < alphas_.size();
  const bool in_low_side = alpha_p_deg <= kBandSplitDeg;

  size_t first = 0;
  size_t last = 0;
  if (in_low_side && has_low) {
    first = 0;
    last = split - 1;
  } else if (!in_low_side && has_high) {
    first = split;
    last = alphas_.size() - 1;
  } else {
    throw Error(ErrorCode::kUnsupportedRegion,
                "no thrust data in this alpha_p band " +
                    CellName(alpha_p_deg, airspeed));
  }
  // Only the outer edges clamp; the side facing the other band is a gap.
  double a = alpha_p_deg;
  const bool toward_gap = in_low_side ? a > alphas_[last] : a < alphas_[first];
  if (toward_gap) {
    throw Error(ErrorCode::kUnsupportedRegion,
                "alpha_p inside the untested gap " +
                    CellName(alpha_p_deg, airspeed));
  }
  if (a < alphas_[first]) {
    a = alphas_[first];
    out.alpha_clamped = true;
  } else if (a > alphas_[last]) {
    a = alphas_[last];
    out.alpha_clamped = true;
  }
  double v = airspeed;
  if (v > airspeeds_.back()) {
    v = airspeeds_.back();
    out.airspeed_clamped = true;
  } else if (v < airspeeds_.front()) {
    v = airspeeds_.front();
    out.airspeed_clamped = true;
  }

  const Bracket ba = FindBracket(alphas_, first, last, a);
  const Bracket bv = FindBracket(airspeeds_, 0, airspeeds_.size() - 1, v);
  const double t00 = At(ba.lo, bv.lo).Evaluate(esc_us);
  const double t01 = At(ba.lo, bv.hi).Evaluate(esc_us);
  const double t10 = At(ba.hi, bv.lo).Evaluate(esc_us);
  const double t11 = At(ba.hi, bv.hi).Evaluate(esc_us);
  // Exact at grid lines: a zero weight drops the neighbour entirely.
  auto lerp = [](double x0, double x1, double t) {
    if (t == 0.0) return x0;
    if (t == 1.0) return x1;
    return x0 + (x1 - x0) * t;
  };
  out.thrust = lerp(lerp(t00, t01, bv.t), lerp(t10, t11, bv.t), ba.t);
  return out;
}

double ThrustMap::MaxThrust(double alpha_p_deg, double airspeed) const {
  auto f = [&](double nu) { return Evaluate(alpha_p_deg, airspeed, nu).thrust; };
  return f(MonotoneSegmentEnd(f));
}

double DynamicThrust(const ThrustMap& map, double alpha_p_deg, double airspeed,
                     double esc_us) {
  return map.Evaluate(alpha_p_deg, airspeed, esc_us).thrust;
}

VerticalThrust VerticalThrustTotal(double module_thrust, double pitching_moment,
                                   double quad_arm, RearThrustMode mode) {
  if (!(quad_arm > 0.0)) {
    throw Error(ErrorCode::kDomain, "quad arm length must be positive");
  }
  const double deficit = mode == RearThrustMode::kAsPrinted
                             ? pitching_moment / quad_arm
                             : pitching_moment / (2.0 * quad_arm);
  VerticalThrust out;
  out.front_each = module_thrust;
  out.rear_each = module_thrust - deficit;
  out.total = 2.0 * out.front_each + 2.0 * out.rear_each;
  return out;
}

double MonotoneSegmentEnd(const std::function<double(double)>& thrust) {
  double prev = thrust(kMonotoneSegmentStart);
  for (double nu = kMonotoneSegmentStart + 1.0; nu <= kEscFull; nu += 1.0) {
    const double t = thrust(nu);
    if (t < prev) {
      // Refine the stationary point inside [nu - 2, nu] by golden-section.
      double lo = std::max(kMonotoneSegmentStart, nu - 2.0);
      double hi = nu;
      constexpr double kInvPhi = 0.6180339887498949;
      for (int i = 0; i < 80; ++i) {
        const double m1 = hi - kInvPhi * (hi - lo);
        const double m2 = lo + kInvPhi * (hi - lo);
        if (thrust(m1) < thrust(m2)) {
          lo = m1;
        } else {
          hi = m2;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev = t;
  }
  return kEscFull;
}

double InvertThrust(const std::function<double(double)>& thrust,
                    double target) {
  const double top_nu = MonotoneSegmentEnd(thrust);
  const double t_idle = thrust(kEscIdle);
  const double t_start = thrust(kMonotoneSegmentStart);
  const double t_top = thrust(top_nu);
  const double lo_bound = std::min(t_idle, t_start);

  auto bisect = [&](double lo, double hi) {
    // Invariant: thrust(lo) - target and thrust(hi) - target differ in sign.
    double flo = thrust(lo) - target;
    for (int i = 0; i < 200 && hi - lo > 1e-11; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = thrust(mid) - target;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  if (target >= t_start && target <= t_top) {
    return bisect(kMonotoneSegmentStart, top_nu);
  }
  if (target < t_start && target >= t_idle) {
    return bisect(kEscIdle, kMonotoneSegmentStart);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "thrust %.6g N not achievable; range [%.6g, %.6g] N", target,
                lo_bound, t_top);
  throw InfeasibleError(buf, lo_bound, t_top);
}

double InvertThrust(const CubicThrustCurve& curve, double target) {
  return InvertThrust([&](double nu) { return curve.Evaluate(nu); }, target);
}

double InvertThrust(const ThrustMap& map, double alpha_p_deg, double airspeed,
                    double target) {
  return InvertThrust(
      [&](double nu) { return map.Evaluate(alpha_p_deg, airspeed, nu).thrust; },
      target);
}

}  // namespace qpaero
