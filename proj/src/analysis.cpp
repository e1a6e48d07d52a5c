#include "elastpass/analysis.hpp"

#include <cmath>
#include <sstream>

namespace elastpass {

FrequencyGrid FrequencyGrid::logspace(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::domain_error("logspace: need 0 < lo < hi and n >= 2");
  FrequencyGrid g;
  g.omega.resize(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g.omega[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  g.omega.front() = lo;
  g.omega.back() = hi;
  return g;
}

EffectiveDecomposition effectiveDecompose(const RationalFunction<double>& z,
                                          const FrequencyGrid& grid) {
  EffectiveDecomposition out;
  out.samples.reserve(grid.omega.size());
  double prevIm = 0.0;
  bool havePrev = false;
  for (const double w : grid.omega) {
    std::complex<double> v;
    try {
      v = z.evalJw(w);
    } catch (const EvaluationError&) {
      std::ostringstream msg;
      msg << "effective decomposition: pole on grid at omega = " << w;
      throw EvaluationError(msg.str());
    }
    EffectiveSample s;
    s.omega = w;
    s.ceff = v.real();
    if (v.imag() < 0.0)
      s.keff = -w * v.imag();
    else if (v.imag() > 0.0)
      s.beff = v.imag() / w;
    if (havePrev && ((prevIm < 0.0 && v.imag() > 0.0) ||
                     (prevIm > 0.0 && v.imag() < 0.0)))
      out.crossings.push_back(w);
    prevIm = v.imag();
    havePrev = true;
    out.samples.push_back(s);
  }
  return out;
}

std::vector<BodePoint> bode(const RationalFunction<double>& z,
                            const FrequencyGrid& grid) {
  std::vector<BodePoint> out;
  out.reserve(grid.omega.size());
  double prevPhase = 0.0;
  bool havePrev = false;
  for (const double w : grid.omega) {
    const std::complex<double> v = z.evalJw(w);
    BodePoint b;
    b.omega = w;
    b.magDb = 20.0 * std::log10(std::abs(v));
    double ph = std::arg(v) * 180.0 / M_PI;
    if (havePrev) {
      while (ph - prevPhase > 180.0) ph -= 360.0;
      while (ph - prevPhase < -180.0) ph += 360.0;
    }
    b.phaseDeg = ph;
    prevPhase = ph;
    havePrev = true;
    out.push_back(b);
  }
  return out;
}

EffectivePair seaNullPPIEffective(const PlantParams& p,
                                  const ControllerGains& g, double omega) {
  if (p.isSdea() || g.isPP())
    throw ConfigError("closed-form effective impedance: SEA P-PI null only");
  const double a1 = g.alpha() + 1.0;
  const double bg = p.Bm + g.Gm;
  const double w2 = omega * omega;
  const double den = a1 * a1 * w2 + g.Gt * g.Gt * g.Im * g.Im;
  EffectivePair out;
  out.ceff = ((bg * a1 - g.Gt * g.Im * p.Jm) * w2 + g.Gt * g.Im * g.Im) / den;
  out.beff = (p.Jm * a1 * w2 + g.Im * (p.Bm * g.Gt - 1.0)) / den;
  return out;
}

EffectivePair sdeaSpringPPEffective(const PlantParams& p,
                                    const ControllerGains& g, double Kd,
                                    double omega) {
  if (!p.isSdea() || !g.isPP())
    throw ConfigError("closed-form effective impedance: SDEA P-P spring only");
  const double a = g.alpha();
  const double a1 = a + 1.0;
  const double bg = p.Bm + g.Gm;
  const double w2 = omega * omega;
  const double den = p.Bf * p.Bf * a1 * a1 * w2 + p.K * p.K * a1 * a1;
  EffectivePair out;
  out.ceff = (p.Bf * (p.Bf * bg * a1 - p.Jm * Kd * a) * w2 +
              p.K * (p.K * bg * a1 - Kd * a * bg)) /
             den;
  out.beff = (p.Bf * p.Bf * p.Jm * a1 * w2 + p.Jm * p.K * p.K * a1 +
              p.Bf * Kd * a * bg - p.Jm * p.K * Kd * a) /
             den;
  return out;
}

RationalFunction<double> parasiticBranch(const ClosedLoopCase& c) {
  using Rat = RationalFunction<double>;
  using Poly = Polynomial<double>;
  const auto& p = c.plant;
  const auto& g = c.gains;
  const double a = g.alpha();
  const double a1 = a + 1.0;
  if (a1 == 0.0)
    throw ConfigError("parasitic branch: degenerate at alpha+1 = 0");

  const Rat z = outputImpedance(c);
  const Rat s{Poly::monomial(1), Poly{1.0}};

  auto springZ = [](double k) { return Rat{Poly{k}, Poly{0.0, 1.0}}; };

  if (!c.env.isSpring()) {
    // remove the serial filter: X = 1 / (1/Z - 1/Zf)
    Rat zf = springZ(p.K);
    if (p.isSdea()) zf = zf + Rat::constant(p.Bf);
    return normalized((z.reciprocal() - zf.reciprocal()).reciprocal());
  }

  // remove the rendered spring, then the serial coupling branch
  const double kvir = a / a1 * c.env.Kd;
  const double kc = p.K - kvir;
  Rat zc = springZ(kc);
  if (p.isSdea()) zc = zc + Rat::constant(p.Bf);
  const Rat inner = z - springZ(kvir);
  return normalized((inner.reciprocal() - zc.reciprocal()).reciprocal());
}

}  // namespace elastpass
