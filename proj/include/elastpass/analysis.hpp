#pragma once

#include <vector>

#include "elastpass/models.hpp"
#include "elastpass/rational.hpp"

namespace elastpass {

// Strictly increasing positive frequencies, rad/s.
struct FrequencyGrid {
  std::vector<double> omega;

  // n log-spaced points on [lo, hi]
  static FrequencyGrid logspace(double lo, double hi, int n);
  // the default span used by the command-line tools
  static FrequencyGrid standard() { return logspace(1e-2, 1e5, 1000); }
};

// Frequency-wise split of Z(jw) into mechanical primitives: the real part
// is effective damping; the imaginary part maps to an effective stiffness
// when it lags (Im < 0) and to an effective inertance when it leads
// (Im > 0). Exactly one of keff/beff is populated per sample; both stay
// zero where Im Z = 0.
struct EffectiveSample {
  double omega = 0.0;
  double ceff = 0.0;  // Re Z(jw), N m s/rad
  double keff = 0.0;  // -w Im Z(jw) when Im < 0, N m/rad
  double beff = 0.0;  // Im Z(jw)/w when Im > 0, kg m^2
};

struct EffectiveDecomposition {
  std::vector<EffectiveSample> samples;
  // frequencies where the imaginary part changes sign between neighbouring
  // grid points (spring/inerter hand-over)
  std::vector<double> crossings;
};

EffectiveDecomposition effectiveDecompose(const RationalFunction<double>& z,
                                          const FrequencyGrid& grid);

struct BodePoint {
  double omega = 0.0;
  double magDb = 0.0;
  double phaseDeg = 0.0;  // unwrapped
};

std::vector<BodePoint> bode(const RationalFunction<double>& z,
                            const FrequencyGrid& grid);

struct EffectivePair {
  double ceff = 0.0;
  double beff = 0.0;
};

// Closed-form effective damping/inertance of the parasitic branch (the
// serial filter spring removed) for null rendering under a PI velocity
// controller.
EffectivePair seaNullPPIEffective(const PlantParams& p,
                                  const ControllerGains& g, double omega);

// Closed-form effective damping/inertance of the parasitic branch (rendered
// spring and coupling filter removed) for damped-plant spring rendering.
EffectivePair sdeaSpringPPEffective(const PlantParams& p,
                                    const ControllerGains& g, double Kd,
                                    double omega);

// The parasitic branch itself, extracted symbolically from the output
// impedance: subtract the rendered spring, then peel the serial coupling
// branch off by inverse composition. Doubles as a topology check against
// the realized networks.
RationalFunction<double> parasiticBranch(const ClosedLoopCase& c);

}  // namespace elastpass
