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

#include "qpaero/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "qpaero/error.hpp"

namespace qpaero {
namespace {

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

}  // namespace

double FitResult::Evaluate(double x) const {
  double y = 0.0;
  for (size_t k = coefficients.size(); k-- > 0;) y = y * x + coefficients[k];
  return y;
}

FitResult PolyFit(const std::vector<double>& xs, const std::vector<double>& ys,
                  int degree, Intercept intercept) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kInvalidArgument, "polyfit: xs and ys differ in size");
  }
  if (degree < 1 || degree > 3) {
    throw Error(ErrorCode::kInvalidArgument, "polyfit: degree must be 1, 2 or 3");
  }
  const size_t n = xs.size();
  if (n < static_cast<size_t>(degree) + 1) {
    throw Error(ErrorCode::kSingular, "polyfit: fewer points than degree + 1");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw Error(ErrorCode::kInvalidArgument, "polyfit: non-finite sample");
    }
  }
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  const bool zero = intercept == Intercept::kZero;
  // t = (x - centre) / scale; a zero intercept pins the centre at 0.
  const double centre = zero ? 0.0 : 0.5 * (*mn + *mx);
  const double scale =
      zero ? std::max(std::fabs(*mn), std::fabs(*mx)) : 0.5 * (*mx - *mn);
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kSingular, "polyfit: all abscissae identical");
  }

  const int first = zero ? 1 : 0;
  const int cols = degree + 1 - first;
  Eigen::MatrixXd a(n, cols);
  Eigen::VectorXd b(n);
  for (size_t i = 0; i < n; ++i) {
    const double t = (xs[i] - centre) / scale;
    double p = zero ? t : 1.0;
    for (int c = 0; c < cols; ++c) {
      a(i, c) = p;
      p *= t;
    }
    b(i) = ys[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols) {
    throw Error(ErrorCode::kSingular, "polyfit: rank-deficient design matrix");
  }
  const Eigen::VectorXd sol = qr.solve(b);

  // Expand sum_k s_k ((x - m)/h)^k into raw powers of x.
  FitResult r;
  r.degree = degree;
  r.n_points = n;
  r.coefficients.assign(degree + 1, 0.0);
  for (int c = 0; c < cols; ++c) {
    const int k = c + first;
    const double sk = sol(c) / std::pow(scale, k);
    for (int j = 0; j <= k; ++j) {
      r.coefficients[j] += sk * Binomial(k, j) * std::pow(-centre, k - j);
    }
  }

  const Eigen::VectorXd fitted = a * sol;
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += ys[i];
  mean /= static_cast<double>(n);
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ss_res += (ys[i] - fitted(i)) * (ys[i] - fitted(i));
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  // Exact fits leave rounding-level residue; treat it as zero relative to
  // the data scale so r^2 on constant data is well defined.
  double y_scale = 0.0;
  for (double y : ys) y_scale = std::max(y_scale, std::fabs(y));
  const double tiny = 1e-24 * std::max(1.0, y_scale * y_scale) * n;
  if (ss_res < tiny) ss_res = 0.0;
  if (ss_tot == 0.0) {
    r.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  } else {
    r.r_squared = 1.0 - ss_res / ss_tot;
  }
  r.rmse = std::sqrt(ss_res / static_cast<double>(n));
  return r;
}

ThrustTableFit FitThrustTable(const std::vector<ThrustSamplePoint>& samples) {
  std::map<std::pair<double, double>, std::vector<const ThrustSamplePoint*>> cells;
  for (const auto& s : samples) cells[{s.alpha_p_deg, s.airspeed}].push_back(&s);

  ThrustTableFit out;
  for (const auto& [key, pts] : cells) {
    std::set<double> distinct;
    std::vector<double> xs, ys;
    for (const auto* p : pts) {
      distinct.insert(p->esc_us);
      xs.push_back(p->esc_us);
      ys.push_back(p->thrust);
    }
    if (distinct.size() < 4) {
      out.errors.push_back(
          {key.first, key.second,
           Fmt("cell needs 4 distinct ESC values, got %g", distinct.size())});
      continue;
    }
    try {
      const FitResult f = PolyFit(xs, ys, 3);
      ThrustMapRow row;
      row.alpha_p_deg = key.first;
      row.airspeed = key.second;
      row.curve = {f.coefficients[0], f.coefficients[1], f.coefficients[2],
                   f.coefficients[3], f.r_squared,       f.rmse};
      out.rows.push_back(row);
    } catch (const Error& e) {
      out.errors.push_back({key.first, key.second, e.what()});
    }
  }
  if (!out.rows.empty()) {
    try {
      out.map = ThrustMap(out.rows);
    } catch (const Error&) {
      out.map.reset();
    }
  }
  return out;
}

namespace {

struct Bucket {
  FlightMode mode;
  double airspeed;
  std::vector<const ReducedPoint*> points;
};

bool Undeflected(const ReducedPoint& p) {
  return p.aileron == 0.0 && p.elevator == 0.0 && p.rudder == 0.0;
}

// Averages y over equal x, then fits. Returns nullopt (with a message) when
// there are too few distinct levels.
std::optional<FitResult> FitLevels(const std::vector<std::pair<double, double>>& xy,
                                   int degree, Intercept intercept,
                                   const std::string& what,
                                   std::vector<std::string>& messages) {
  std::map<double, std::pair<double, int>> levels;
  for (const auto& [x, y] : xy) {
    if (!std::isfinite(y)) continue;
    auto& acc = levels[x];
    acc.first += y;
    acc.second += 1;
  }
  std::vector<double> xs, ys;
  for (const auto& [x, acc] : levels) {
    xs.push_back(x);
    ys.push_back(acc.first / acc.second);
  }
  if (xs.size() < static_cast<size_t>(degree) + 1) {
    messages.push_back(what + ": under-determined (" + std::to_string(xs.size()) +
                       " distinct levels)");
    return std::nullopt;
  }
  try {
    return PolyFit(xs, ys, degree, intercept);
  } catch (const Error& e) {
    messages.push_back(what + ": " + e.what());
    return std::nullopt;
  }
}

FitStats Stats(const FitResult& f) { return {f.r_squared, f.rmse}; }

QuadraticFit ToQuadratic(const FitResult& f) {
  QuadraticFit q;
  q.c0 = f.coefficients[0];
  q.c_alpha = f.coefficients.size() > 1 ? f.coefficients[1] : 0.0;
  q.c_alpha2 = f.coefficients.size() > 2 ? f.coefficients[2] : 0.0;
  q.stats = Stats(f);
  return q;
}

// Quantities shared by every mode at one airspeed; fitted from plane data.
struct SharedFit {
  bool have_form = false, have_cm = false, have_de = false;
  bool have_roll = false, have_yaw = false, have_side = false;
  QuadraticFit form_drag;
  MomentModel moment;
  LateralModel lateral;
};

}  // namespace

AeroSuiteFit FitAeroSuite(const std::vector<ReducedPoint>& points,
                          const AeroFitOptions& options) {
  AeroSuiteFit out;
  const VehicleGeometry& g = options.geometry;
  const Atmosphere& atm = options.atmosphere;

  // Group by mode, then airspeed within tolerance (ascending).
  std::vector<const ReducedPoint*> usable;
  for (const auto& p : points) {
    if (p.airspeed > 0.0 && p.coefficients_defined) usable.push_back(&p);
  }
  std::stable_sort(usable.begin(), usable.end(),
                   [](const ReducedPoint* a, const ReducedPoint* b) {
                     return a->airspeed < b->airspeed;
                   });
  std::vector<Bucket> buckets;
  for (const ReducedPoint* p : usable) {
    Bucket* home = nullptr;
    for (auto& b : buckets) {
      if (b.mode == p->mode &&
          std::fabs(b.airspeed - p->airspeed) <= options.bucket_tolerance) {
        home = &b;
        break;
      }
    }
    if (!home) {
      buckets.push_back({p->mode, p->airspeed, {}});
      home = &buckets.back();
    }
    home->points.push_back(p);
  }

  auto stall_for = [&](double v) {
    return v < 8.0 ? options.stall_alpha_low_speed_deg : options.stall_alpha_deg;
  };
  auto in_domain = [&](const ReducedPoint& p, double v) {
    return p.alpha_deg >= options.min_alpha_deg && p.alpha_deg <= stall_for(v);
  };

  // Per-airspeed shared fits from plane-mode buckets.
  std::map<double, SharedFit> shared;
  for (const auto& b : buckets) {
    if (b.mode != FlightMode::kPlane) continue;
    SharedFit& s = shared[b.airspeed];
    std::vector<std::string> msgs;
    std::vector<std::pair<double, double>> form, cm;
    for (const auto* p : b.points) {
      if (!in_domain(*p, b.airspeed) || !Undeflected(*p)) continue;
      form.push_back({p->alpha_deg, p->cd_form});
      cm.push_back({p->alpha_deg, p->cm});
    }
    if (auto f = FitLevels(form, 2, Intercept::kFree, "form drag", msgs)) {
      s.form_drag = ToQuadratic(*f);
      s.have_form = true;
    }
    if (auto f = FitLevels(cm, 1, Intercept::kFree, "C_M", msgs)) {
      s.moment.cm0 = f->coefficients[0];
      s.moment.cm_alpha = f->coefficients[1];
      s.moment.cm_stats = Stats(*f);
      s.have_cm = true;
    }
    if (s.have_cm) {
      std::vector<std::pair<double, double>> de;
      for (const auto* p : b.points) {
        if (!in_domain(*p, b.airspeed)) continue;
        if (p->elevator != 0.0 && p->aileron == 0.0 && p->rudder == 0.0) {
          de.push_back({p->elevator, p->cm - s.moment.StructuralCm(p->alpha_deg)});
        }
      }
      if (auto f = FitLevels(de, 1, Intercept::kZero, "C_Mde", msgs)) {
        s.moment.cm_elevator = f->coefficients[1];
        s.moment.elevator_stats = Stats(*f);
        s.have_de = true;
      }
    }
    {
      std::vector<std::pair<double, double>> rm_a, rm_r, ym_a, ym_r, sf;
      for (const auto* p : b.points) {
        if (!in_domain(*p, b.airspeed)) continue;
        const bool a_only = p->aileron != 0.0 && p->elevator == 0.0 && p->rudder == 0.0;
        const bool r_only = p->rudder != 0.0 && p->aileron == 0.0 && p->elevator == 0.0;
        if (a_only) {
          rm_a.push_back({p->aileron, p->crm});
          ym_a.push_back({p->aileron, p->cym});
        }
        if (r_only) {
          rm_r.push_back({p->rudder, p->crm});
          ym_r.push_back({p->rudder, p->cym});
        }
        if (r_only || Undeflected(*p)) sf.push_back({p->rudder, p->csf});
      }
      auto fa = FitLevels(rm_a, 1, Intercept::kZero, "C_rm_da", msgs);
      auto fr = FitLevels(rm_r, 1, Intercept::kZero, "C_rm_dr", msgs);
      if (fa && fr) {
        s.lateral.crm_aileron = fa->coefficients[1];
        s.lateral.crm_aileron_stats = Stats(*fa);
        s.lateral.crm_rudder = fr->coefficients[1];
        s.lateral.crm_rudder_stats = Stats(*fr);
        s.have_roll = true;
      }
      auto ya = FitLevels(ym_a, 1, Intercept::kZero, "C_ym_da", msgs);
      auto yr = FitLevels(ym_r, 1, Intercept::kZero, "C_ym_dr", msgs);
      if (ya && yr) {
        s.lateral.cym_aileron = ya->coefficients[1];
        s.lateral.cym_aileron_stats = Stats(*ya);
        s.lateral.cym_rudder = yr->coefficients[1];
        s.lateral.cym_rudder_stats = Stats(*yr);
        s.have_yaw = true;
      }
      if (auto f = FitLevels(sf, 1, Intercept::kFree, "C_SF", msgs)) {
        s.lateral.csf0 = f->coefficients[0];
        s.lateral.csf_rudder = f->coefficients[1];
        s.lateral.csf_stats = Stats(*f);
        s.have_side = true;
      }
    }
    for (auto& m : msgs) {
      out.report.warnings.push_back(Fmt("plane %g m/s: ", b.airspeed) + m);
    }
  }

  for (const auto& b : buckets) {
    BucketReport rep;
    rep.mode = b.mode;
    rep.airspeed = b.airspeed;
    std::vector<std::pair<double, double>> cl, cdp, cdq, mdt;
    const SharedFit* s = nullptr;
    for (const auto& [v, fit] : shared) {
      if (std::fabs(v - b.airspeed) <= options.bucket_tolerance) s = &fit;
    }
    for (const auto* p : b.points) {
      if (!Undeflected(*p)) continue;
      if (!in_domain(*p, b.airspeed)) {
        ++rep.n_excluded_stall;
        continue;
      }
      ++rep.n_points;
      cl.push_back({p->alpha_deg, p->cl});
      cdp.push_back({p->alpha_deg, p->cd_plane});
      if (b.mode != FlightMode::kPlane) {
        cdq.push_back({p->alpha_deg, p->cd_quad});
        if (s && s->have_cm) {
          const double qcs =
              atm.dynamic_pressure(p->airspeed) * g.planform_area() * g.wing_chord;
          mdt.push_back({p->alpha_deg,
                         (p->cm - s->moment.StructuralCm(p->alpha_deg)) * qcs});
        }
      }
    }

    BucketModel m;
    m.mode = b.mode;
    m.airspeed = b.airspeed;
    m.reynolds = Reynolds(b.airspeed, g.wing_chord, atm.kinematic_viscosity);
    m.min_alpha_deg = options.min_alpha_deg;
    m.stall_alpha_deg = stall_for(b.airspeed);

    auto& msgs = rep.messages;
    auto lift = FitLevels(cl, 1, Intercept::kFree, "lift", msgs);
    auto pdrag = FitLevels(cdp, 2, Intercept::kFree, "plane drag", msgs);
    bool ok = lift && pdrag;
    if (lift) m.lift = {lift->coefficients[0], lift->coefficients[1], Stats(*lift)};
    if (pdrag) m.plane_drag = ToQuadratic(*pdrag);
    if (b.mode != FlightMode::kPlane) {
      auto ql = FitLevels(cdq, 1, Intercept::kFree, "quad drag (linear)", msgs);
      auto qq = FitLevels(cdq, 2, Intercept::kFree, "quad drag (quadratic)", msgs);
      ok = ok && ql && qq;
      if (ql) m.quad_drag_linear = ToQuadratic(*ql);
      if (qq) m.quad_drag_quadratic = ToQuadratic(*qq);
      if (!s || !s->have_cm) {
        msgs.push_back("differential thrust moment: no plane-mode C_M at this airspeed");
        ok = false;
      } else if (auto f = FitLevels(mdt, 2, Intercept::kFree,
                                    "differential thrust moment", msgs)) {
        m.moment.differential_thrust = ToQuadratic(*f);
      } else {
        ok = false;
      }
    }
    if (s) {
      m.form_drag = s->form_drag;
      m.moment.cm0 = s->moment.cm0;
      m.moment.cm_alpha = s->moment.cm_alpha;
      m.moment.cm_stats = s->moment.cm_stats;
      m.moment.cm_elevator = s->moment.cm_elevator;
      m.moment.elevator_stats = s->moment.elevator_stats;
      m.lateral = s->lateral;
      if (!s->have_form) msgs.push_back("form drag missing");
      if (!s->have_de) msgs.push_back("elevator derivative missing");
      if (!s->have_roll || !s->have_yaw || !s->have_side) {
        msgs.push_back("lateral derivatives incomplete");
      }
    } else {
      msgs.push_back("no plane-mode data at this airspeed; shared tables left zero");
    }
    rep.fitted = ok;
    if (ok) out.model.Insert(std::move(m));
    out.report.buckets.push_back(std::move(rep));
  }
  return out;
}

}  // namespace qpaero
