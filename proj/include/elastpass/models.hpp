#pragma once

#include <string>
#include <utility>

#include "elastpass/errors.hpp"
#include "elastpass/rational.hpp"

namespace elastpass {

// Reflected actuator-side plant with the physical filter between actuator
// and end-effector. Bf = 0 is the series elastic (undamped) plant.
struct PlantParams {
  double Jm = 0.0;  // reflected actuator inertia, kg m^2
  double Bm = 0.0;  // actuator viscous friction, N m s/rad
  double K = 0.0;   // filter stiffness, N m/rad
  double Bf = 0.0;  // filter damping, N m s/rad

  bool isSdea() const { return Bf > 0.0; }
  void validate() const;
};

// Cascaded controller: outer torque P gain Gt, inner velocity PI gains
// (Gm, Im). Gains may be negative; Im = 0 selects the P-P architecture.
struct ControllerGains {
  double Gt = 0.0;  // rad/(s N m)
  double Gm = 0.0;  // N m s/rad
  double Im = 0.0;  // N m/rad

  double alpha() const { return Gt * Gm; }
  bool isPP() const { return Im == 0.0; }
  void validate() const;
};

struct VirtualEnv {
  enum class Kind { Null, Spring };
  Kind kind = Kind::Null;
  double Kd = 0.0;  // desired virtual stiffness, N m/rad (Spring only)

  static VirtualEnv null() { return {Kind::Null, 0.0}; }
  static VirtualEnv spring(double kd) { return {Kind::Spring, kd}; }
  bool isSpring() const { return kind == Kind::Spring; }
  void validate() const;
};

// One analyzed closed-loop configuration. Supported combinations:
//   - Im == 0, any Bf >= 0, null or spring rendering
//   - Im != 0, null rendering (Bf > 0 allowed but carries no closed-form
//     cross-check; closedFormVerified() reports false for it)
// Spring rendering with an integral velocity gain is rejected.
struct ClosedLoopCase {
  PlantParams plant;
  ControllerGains gains;
  VirtualEnv env;

  ClosedLoopCase(PlantParams p, ControllerGains g, VirtualEnv e)
      : plant(p), gains(g), env(e) {
    validate();
  }

  void validate() const;
  bool closedFormVerified() const {
    return gains.isPP() || !plant.isSdea();
  }
  double Kd() const { return env.isSpring() ? env.Kd : 0.0; }
  std::string describe() const;
};

// Output impedance Z(s) = -tau_filter(s) / omega_end(s) at the interaction
// port, assembled from the loop structure so one code path covers every
// supported configuration. Coefficients come out at the natural plant scale
// (leading denominator coefficient Jm), with exact common powers of s
// already cancelled.
RationalFunction<double> outputImpedance(const ClosedLoopCase& c);

// Admittance omega_end / F_dist with the port torque held at zero:
//   s / (Jm s^2 + (Bm+Gm) s + X), X = Im (integral action) or
//   alpha Kd (spring rendering) or 0 (plain P-P null, the Kd -> 0 limit).
RationalFunction<double> disturbanceAdmittance(const ClosedLoopCase& c);

// Equivalent parameters for a transmission with reduction ratio n:
// Jm, Bm, Gm scale by n^2 and Gt by 1/n. Note alpha maps to n*alpha.
std::pair<PlantParams, ControllerGains> reflectThroughGear(
    const PlantParams& plant, const ControllerGains& gains, double n);

}  // namespace elastpass
