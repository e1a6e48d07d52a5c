#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "elastpass/rational.hpp"

namespace elastpass {

// Positive-realness engine: a rational impedance is passive iff it has no
// right-half-plane poles, Re Z(jw) >= 0 for all w, and every imaginary-axis
// pole is simple with a positive real residue. Margins are signed distances
// to violation (positive while the condition holds).

struct RhpPoleCheck {
  bool ok = true;
  std::vector<std::complex<double>> poles;           // all denominator roots
  std::vector<std::complex<double>> offendingPoles;  // Re > tolerance
  double margin = 0.0;  // -max Re(pole) / max(1, max |pole|)
};

struct RealPartCheck {
  bool ok = true;
  // present on failure: frequency w* and Re Z(jw*) there
  std::optional<std::pair<double, double>> witness;
  double margin = 0.0;  // min_{x>=0} p(x) / max |p coeff|
};

struct ResidueRecord {
  std::complex<double> pole;
  std::complex<double> residue;
  bool simple = true;
  bool ok = true;
};

struct ImagResidueCheck {
  bool ok = true;
  std::vector<ResidueRecord> records;  // one per imaginary-axis pole
  double margin = 0.0;                 // min Re(residue), +inf if no axis poles
};

struct PassivityVerdict {
  bool passive = false;
  RhpPoleCheck cond1;
  RealPartCheck cond2;
  ImagResidueCheck cond3;

  // smallest normalized distance to any condition boundary
  double minMargin() const;
};

// Relative tolerance separating imaginary-axis poles from perturbed stable
// ones; scaled by the largest pole magnitude.
inline constexpr double kRhpEps = 1e-9;
// Residues are accepted as real when |Im| <= kResEps * |residue|.
inline constexpr double kResEps = 1e-8;

// Condition 1. Exact Routh-style coefficient tests decide denominators of
// degree <= 3 (so boundary configurations are classified exactly); higher
// degrees fall back to root locations.
RhpPoleCheck checkRhpPoles(const RationalFunction<double>& z);

// Condition 2 via the even part p(w^2) = Re[N(jw) D(-jw)].
RealPartCheck checkRealPart(const RationalFunction<double>& z);

// Condition 3: residues N(p)/D'(p) at the imaginary-axis poles.
ImagResidueCheck checkImagAxisResidues(const RationalFunction<double>& z);

// Conjunction of the three checks; normalizes z first.
PassivityVerdict isPositiveReal(const RationalFunction<double>& z);

}  // namespace elastpass
