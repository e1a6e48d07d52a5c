#include "elastpass/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elastpass {
namespace conditions {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConditionRow row(std::string label, double lhs, std::string op, double rhs,
                 bool satisfied, bool informational = false) {
  ConditionRow r;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.op = std::move(op);
  r.satisfied = satisfied;
  r.informational = informational;
  return r;
}

ConditionRow geq(std::string label, double lhs, double rhs,
                 bool informational = false) {
  return row(std::move(label), lhs, ">=", rhs, lhs >= rhs, informational);
}

ConditionRow gt(std::string label, double lhs, double rhs,
                bool informational = false) {
  return row(std::move(label), lhs, ">", rhs, lhs > rhs, informational);
}

ConditionRow leq(std::string label, double lhs, double rhs,
                 bool informational = false) {
  return row(std::move(label), lhs, "<=", rhs, lhs <= rhs, informational);
}

void finish(ConditionReport& rep) {
  rep.passive = true;
  for (const auto& r : rep.rows)
    if (!r.informational && !r.satisfied) rep.passive = false;
}

void requireArch(const PlantParams& p, const ControllerGains& g, bool sdea,
                 bool integral, const char* who) {
  if (p.isSdea() != sdea || g.isPP() == integral)
    throw ConfigError(std::string(who) +
                      ": called for the wrong plant/controller architecture");
}

}  // namespace

double ConditionRow::margin() const {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  const double d = (op == "<=" || op == "<") ? (rhs - lhs) : (lhs - rhs);
  return d / scale;
}

double ConditionReport::minMargin() const {
  double m = kInf;
  for (const auto& r : rows)
    if (!r.informational) m = std::min(m, std::abs(r.margin()));
  return m;
}

ConditionReport seaNullPP(const PlantParams& p, const ControllerGains& g) {
  requireArch(p, g, false, false, "seaNullPP");
  const double a1 = g.alpha() + 1.0;
  ConditionReport rep;
  rep.id = "sea-null-pp";
  rep.rows.push_back(geq("Bm+Gm >= 0", p.Bm + g.Gm, 0.0));
  rep.rows.push_back(geq("alpha+1 >= 0", a1, 0.0));
  finish(rep);
  return rep;
}

ConditionReport seaNullPPI(const PlantParams& p, const ControllerGains& g) {
  requireArch(p, g, false, true, "seaNullPPI");
  const double a1 = g.alpha() + 1.0;
  const double bg = p.Bm + g.Gm;
  const double gi = g.Gt * g.Im;

  ConditionReport rep;
  rep.id = "sea-null-ppi";

  // decisive form is Jm*Gt*Im <= (alpha+1)(Bm+Gm), which stays valid when
  // Gt*Im is zero or negative; the quotient is reported where it exists
  ConditionRow c1 = gt("Jm <= (alpha+1)(Bm+Gm)/(Gt Im)", p.Jm,
                       gi > 0.0 ? a1 * bg / gi : kInf);
  c1.op = "<=";
  c1.satisfied = p.Jm * gi <= a1 * bg;
  rep.rows.push_back(c1);

  rep.rows.push_back(gt("alpha+1 > 0", a1, 0.0));
  rep.rows.push_back(gt("Bm+Gm > 0", bg, 0.0));
  rep.rows.push_back(geq("Gt >= 0", g.Gt, 0.0));
  rep.rows.push_back(geq("Im >= 0", g.Im, 0.0));

  // implied Routh bound, reported for reference
  ConditionRow routh =
      leq("pole bound: Jm <= (Bm+Gm)(Im+(1+alpha)K)/(Gt Im K)", p.Jm,
          gi > 0.0 ? bg * (g.Im + a1 * p.K) / (gi * p.K) : kInf, true);
  routh.satisfied = p.Jm * gi * p.K <= bg * (g.Im + a1 * p.K);
  rep.rows.push_back(routh);

  // stricter bound from element non-negativity of the physical equivalent
  ConditionRow realz =
      leq("realization bound: Jm <= (alpha+1)(Bm Gt - 1)/(Gt^2 Im)", p.Jm,
          g.Gt * g.Gt * g.Im > 0.0
              ? a1 * (p.Bm * g.Gt - 1.0) / (g.Gt * g.Gt * g.Im)
              : kInf,
          true);
  realz.satisfied = p.Jm * g.Gt * g.Gt * g.Im <= a1 * (p.Bm * g.Gt - 1.0);
  rep.rows.push_back(realz);

  finish(rep);
  return rep;
}

ConditionReport seaSpringPP(const PlantParams& p, const ControllerGains& g,
                            double Kd) {
  requireArch(p, g, false, false, "seaSpringPP");
  const double a = g.alpha();
  const double a1 = a + 1.0;
  const double kvir = a / a1 * Kd;

  ConditionReport rep;
  rep.id = "sea-spring-pp";
  rep.rows.push_back(geq("K >= alpha/(alpha+1) Kd", p.K, kvir));
  rep.rows.push_back(gt("alpha/(alpha+1) Kd > 0", kvir, 0.0));
  rep.rows.push_back(gt("alpha+1 > 0", a1, 0.0));
  rep.rows.push_back(geq("Bm+Gm >= 0", p.Bm + g.Gm, 0.0));
  finish(rep);
  return rep;
}

ConditionReport sdeaNullPP(const PlantParams& p, const ControllerGains& g) {
  requireArch(p, g, true, false, "sdeaNullPP");
  const double a1 = g.alpha() + 1.0;
  ConditionReport rep;
  rep.id = "sdea-null-pp";
  rep.rows.push_back(geq("Bm+Gm >= 0", p.Bm + g.Gm, 0.0));
  rep.rows.push_back(geq("alpha+1 >= 0", a1, 0.0));
  finish(rep);
  return rep;
}

ConditionReport sdeaSpringPP(const PlantParams& p, const ControllerGains& g,
                             double Kd) {
  requireArch(p, g, true, false, "sdeaSpringPP");
  const double a = g.alpha();
  const double a1 = a + 1.0;
  const double bg = p.Bm + g.Gm;
  const double kvir = a / a1 * Kd;

  ConditionReport rep;
  rep.id = "sdea-spring-pp";
  rep.rows.push_back(geq("K >= alpha/(alpha+1) Kd", p.K, kvir));
  rep.rows.push_back(gt("alpha/(alpha+1) Kd > 0", kvir, 0.0));
  rep.rows.push_back(gt("alpha+1 > 0", a1, 0.0));
  rep.rows.push_back(gt("Bm+Gm > 0", bg, 0.0));

  // square-root bound from the quadratic-in-w^2 even part
  const double arg = p.Bf * p.K * bg * (p.K + a * (p.K - Kd));
  ConditionRow sturm;
  sturm.label =
      "-2 Jm sqrt(Bf K (Bm+Gm)(K+alpha(K-Kd))) <= "
      "Bf((Bm+Gm)(Bf(1+alpha)+Bm+Gm) - alpha Jm Kd)";
  sturm.op = "<=";
  sturm.rhs = p.Bf * (bg * (p.Bf * a1 + bg) - a * p.Jm * Kd);
  if (arg >= 0.0) {
    sturm.lhs = -2.0 * p.Jm * std::sqrt(arg);
    sturm.satisfied = sturm.lhs <= sturm.rhs;
  } else {
    sturm.lhs = std::numeric_limits<double>::quiet_NaN();
    sturm.satisfied = false;
  }
  rep.rows.push_back(sturm);
  finish(rep);
  return rep;
}

ConditionReport closedFormReport(const ClosedLoopCase& c) {
  const bool sdea = c.plant.isSdea();
  const bool pp = c.gains.isPP();
  const bool spring = c.env.isSpring();
  if (!pp) {
    if (sdea)
      throw ConfigError(
          "no in-scope closed-form conditions for the damped plant with an "
          "integral velocity gain");
    if (spring)
      throw ConfigError("no closed-form conditions for P-PI spring rendering");
    return seaNullPPI(c.plant, c.gains);
  }
  if (sdea)
    return spring ? sdeaSpringPP(c.plant, c.gains, c.env.Kd)
                  : sdeaNullPP(c.plant, c.gains);
  return spring ? seaSpringPP(c.plant, c.gains, c.env.Kd)
                : seaNullPP(c.plant, c.gains);
}

double maxPassiveVirtualStiffness(const PlantParams& p,
                                  const ControllerGains& g) {
  if (!g.isPP())
    throw ConfigError("virtual stiffness bound: proportional controllers only");
  const double a = g.alpha();
  const double a1 = a + 1.0;
  if (!(a > 0.0) || !(a1 > 0.0)) return 0.0;
  if (!p.isSdea()) return p.K;

  // intersect the stiffness ceiling with the square-root condition,
  // locating the flip of the latter by bisection on Kd
  auto sturmOk = [&](double Kd) {
    const auto rep = sdeaSpringPP(p, g, Kd);
    return rep.rows.back().satisfied;
  };

  const double hi = 10.0 * p.K;
  const int samples = 128;
  int flips = 0;
  bool prev = sturmOk(0.0);
  double firstBad = -1.0;
  for (int i = 1; i <= samples; ++i) {
    const double kd = hi * static_cast<double>(i) / samples;
    const bool ok = sturmOk(kd);
    if (ok != prev) {
      ++flips;
      if (firstBad < 0.0 && !ok) firstBad = kd;
      prev = ok;
    }
  }
  if (flips > 1)
    throw std::runtime_error(
        "virtual stiffness bound: square-root condition is not monotone in "
        "Kd over [0, 10K]");
  if (flips == 0) return p.K;  // never binds in range

  double lo = firstBad - hi / samples, up = firstBad;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + up);
    (sturmOk(mid) ? lo : up) = mid;
  }
  const double kdStar = 0.5 * (lo + up);
  return std::min(p.K, a / a1 * kdStar);
}

ConditionReport realizationFeasibility(const ClosedLoopCase& c) {
  const auto& p = c.plant;
  const auto& g = c.gains;
  const double a = g.alpha();
  const double a1 = a + 1.0;
  const double bg = p.Bm + g.Gm;

  ConditionReport rep;
  if (!g.isPP()) {
    if (p.isSdea() || c.env.isSpring())
      throw ConfigError("realization feasibility: unsupported configuration");
    rep.id = "feasibility-sea-null-ppi";
    rep.sufficientOnly = true;
    rep.rows.push_back(gt("alpha+1 > 0", a1, 0.0));
    rep.rows.push_back(gt("Bm Gt - 1 > 0", p.Bm * g.Gt - 1.0, 0.0));
    rep.rows.push_back(geq("Im >= 0", g.Im, 0.0));
    ConditionRow b1n =
        leq("Jm <= (alpha+1)(Bm Gt - 1)/(Gt^2 Im)", p.Jm,
            g.Gt * g.Gt * g.Im > 0.0
                ? a1 * (p.Bm * g.Gt - 1.0) / (g.Gt * g.Gt * g.Im)
                : kInf);
    b1n.satisfied = p.Jm * g.Gt * g.Gt * g.Im <= a1 * (p.Bm * g.Gt - 1.0);
    rep.rows.push_back(b1n);
    finish(rep);
    return rep;
  }

  if (!c.env.isSpring()) {
    rep.id = p.isSdea() ? "feasibility-sdea-null-pp" : "feasibility-sea-null-pp";
    rep.sufficientOnly = false;  // equivalent to the passivity conditions
    rep.rows.push_back(geq("Bm+Gm >= 0", bg, 0.0));
    rep.rows.push_back(geq("alpha+1 >= 0", a1, 0.0));
    finish(rep);
    return rep;
  }

  const double Kd = c.env.Kd;
  const double kvir = a / a1 * Kd;
  if (!p.isSdea()) {
    rep.id = "feasibility-sea-spring-pp";
    rep.sufficientOnly = false;
    rep.rows.push_back(geq("Bm+Gm >= 0", bg, 0.0));
    rep.rows.push_back(gt("alpha/(alpha+1) Kd > 0", kvir, 0.0));
    rep.rows.push_back(gt("alpha+1 > 0", a1, 0.0));
    rep.rows.push_back(geq("K >= alpha/(alpha+1) Kd", p.K, kvir));
    finish(rep);
    return rep;
  }

  rep.id = "feasibility-sdea-spring-pp";
  rep.sufficientOnly = true;
  rep.rows.push_back(gt("Bm+Gm > 0", bg, 0.0));
  rep.rows.push_back(gt("alpha+1 > 0", a1, 0.0));
  rep.rows.push_back(gt("alpha/(alpha+1) Kd > 0", kvir, 0.0));
  rep.rows.push_back(geq("K >= alpha/(alpha+1) Kd", p.K, kvir));
  rep.rows.push_back(leq("Jm K / Bf <= Bm+Gm", p.Jm * p.K / p.Bf, bg));
  finish(rep);
  return rep;
}

}  // namespace conditions
}  // namespace elastpass
