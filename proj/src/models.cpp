#include "elastpass/models.hpp"

#include <cmath>
#include <sstream>

namespace elastpass {

void PlantParams::validate() const {
  if (!(Jm > 0.0) || !std::isfinite(Jm))
    throw ConfigError("plant: Jm must be positive");
  if (!(Bm > 0.0) || !std::isfinite(Bm))
    throw ConfigError("plant: Bm must be positive");
  if (!(K > 0.0) || !std::isfinite(K))
    throw ConfigError("plant: K must be positive");
  if (!(Bf >= 0.0) || !std::isfinite(Bf))
    throw ConfigError("plant: Bf must be non-negative");
}

void ControllerGains::validate() const {
  if (!std::isfinite(Gt) || !std::isfinite(Gm) || !std::isfinite(Im))
    throw ConfigError("gains: Gt, Gm, Im must be finite");
}

void VirtualEnv::validate() const {
  if (kind == Kind::Spring && (!std::isfinite(Kd) || Kd < 0.0))
    throw ConfigError("env: spring rendering needs finite Kd >= 0");
}

void ClosedLoopCase::validate() const {
  plant.validate();
  gains.validate();
  env.validate();
  if (!gains.isPP() && env.isSpring())
    throw ConfigError(
        "spring rendering with an integral velocity gain is not supported; "
        "set Im = 0 or render null impedance");
}

std::string ClosedLoopCase::describe() const {
  std::ostringstream os;
  os << (plant.isSdea() ? "SDEA" : "SEA") << " "
     << (gains.isPP() ? "P-P" : "P-PI") << " "
     << (env.isSpring() ? "spring" : "null");
  return os.str();
}

RationalFunction<double> outputImpedance(const ClosedLoopCase& c) {
  const auto& p = c.plant;
  const auto& g = c.gains;
  const double Kd = c.Kd();

  // Over a common factor 1/s:
  //   velocity controller  Cm = cm(s)/s,   cm = Gm s + Im
  //   filter impedance     Zf = f(s)/s,    f  = Bf s + K
  //   motor + controller   Pc = pc(s)/s,   pc = Jm s^2 + (Bm+Gm) s + Im
  // which reduces the loop to
  //   Z = f (s pc + Gt Kd cm) / ( s [ (Gt cm + s) f + s pc ] ).
  using P = Polynomial<double>;
  const P cm{g.Im, g.Gm};
  const P f{p.K, p.Bf};
  const P pc{g.Im, p.Bm + g.Gm, p.Jm};
  const P s = P::monomial(1);

  P num = f * (s * pc + cm * (g.Gt * Kd));
  P den = s * ((cm * g.Gt + s) * f + s * pc);

  const int k = std::min(num.trailingZeros(), den.trailingZeros());
  return {num.shiftedDown(k), den.shiftedDown(k)};
}

RationalFunction<double> disturbanceAdmittance(const ClosedLoopCase& c) {
  const auto& p = c.plant;
  const auto& g = c.gains;
  double restoring = 0.0;
  if (!g.isPP()) {
    if (c.env.isSpring())
      throw ConfigError("disturbance response: unsupported configuration");
    restoring = g.Im;
  } else if (c.env.isSpring()) {
    restoring = g.alpha() * c.env.Kd;
  }
  using P = Polynomial<double>;
  return {P::monomial(1), P{restoring, p.Bm + g.Gm, p.Jm}};
}

std::pair<PlantParams, ControllerGains> reflectThroughGear(
    const PlantParams& plant, const ControllerGains& gains, double n) {
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::domain_error("gear ratio must be positive and finite");
  PlantParams p = plant;
  ControllerGains g = gains;
  p.Jm = n * n * plant.Jm;
  p.Bm = n * n * plant.Bm;
  g.Gm = n * n * gains.Gm;
  g.Gt = gains.Gt / n;
  return {p, g};
}

}  // namespace elastpass
