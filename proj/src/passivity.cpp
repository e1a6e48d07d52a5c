#include "elastpass/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elastpass {
namespace {

double maxAbs(const std::vector<std::complex<double>>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// no roots in the open right half plane, decided from the coefficients;
// valid for degree <= 3 with the sign convention leading > 0
bool coefficientTestLhp(const Polynomial<double>& d) {
  Polynomial<double> p = d.leading() > 0 ? d : d * -1.0;
  const int n = p.degree();
  for (int i = 0; i <= n; ++i)
    if (p.coeff(i) < 0.0) return false;
  if (n == 3)
    return p.coeff(1) * p.coeff(2) - p.coeff(0) * p.coeff(3) >= 0.0;
  return true;
}

}  // namespace

double PassivityVerdict::minMargin() const {
  return std::min({cond1.margin, cond2.margin, cond3.margin});
}

RhpPoleCheck checkRhpPoles(const RationalFunction<double>& z) {
  RhpPoleCheck out;
  const auto& den = z.den();
  if (den.degree() == 0) {
    out.ok = true;
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }

  out.poles = roots(den);
  const double scale = std::max(1.0, maxAbs(out.poles));
  const double eps = kRhpEps * maxAbs(out.poles);

  // imaginary-axis poles belong to the residue condition; the margin here
  // measures distance to an open right-half-plane violation
  double maxRe = -std::numeric_limits<double>::infinity();
  for (const auto& p : out.poles) {
    if (std::abs(p.real()) > eps) maxRe = std::max(maxRe, p.real());
    if (p.real() > eps) out.offendingPoles.push_back(p);
  }
  out.margin = std::isfinite(maxRe)
                   ? -maxRe / scale
                   : std::numeric_limits<double>::infinity();

  if (den.degree() <= 3) {
    out.ok = coefficientTestLhp(den);
    if (out.ok) out.offendingPoles.clear();
  } else {
    out.ok = out.offendingPoles.empty();
  }
  return out;
}

RealPartCheck checkRealPart(const RationalFunction<double>& z) {
  RealPartCheck out;
  Polynomial<double> p = evenPart(z.num(), z.den());
  // structural x^k factors (rendering poles pin p(0) = 0) do not change the
  // sign on the half-line; stripping them keeps the margin meaningful
  if (!p.isZero()) p = p.shiftedDown(p.trailingZeros());
  const double scale = p.maxAbsCoeff();
  const double slack = 1e-12 * scale;

  const HalfLineResult h = nonnegativeOnHalfLine(p, slack);
  out.ok = h.nonnegative;
  out.margin = scale > 0.0 ? h.minValue / scale : 0.0;
  if (!out.ok && h.witness) {
    double wx = *h.witness;
    if (wx <= 0.0) {
      // p dips negative just above the origin (the stripped factor pins
      // p(0) itself); move the witness to the interior of the dip
      wx = 1.0;
      if (p.degree() >= 1) {
        double firstPos = std::numeric_limits<double>::infinity();
        for (const auto& r : roots(p)) {
          if (std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r)) &&
              r.real() > 0.0)
            firstPos = std::min(firstPos, r.real());
        }
        if (std::isfinite(firstPos)) wx = 0.5 * firstPos;
      }
      for (int it = 0; it < 200 && p.eval(wx) >= -slack; ++it) wx *= 0.5;
    }
    const double wStar = std::sqrt(wx);
    double re = std::numeric_limits<double>::quiet_NaN();
    try {
      re = z.evalJw(wStar).real();
    } catch (const EvaluationError&) {
    }
    out.witness = {wStar, re};
  }
  return out;
}

ImagResidueCheck checkImagAxisResidues(const RationalFunction<double>& z) {
  ImagResidueCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  const auto& den = z.den();
  if (den.degree() == 0) return out;

  const auto poles = roots(den);
  const double eps = kRhpEps * maxAbs(poles);
  const Polynomial<double> dden = den.derivative();

  std::vector<bool> counted(poles.size(), false);
  for (size_t i = 0; i < poles.size(); ++i) {
    if (counted[i] || std::abs(poles[i].real()) > eps) continue;
    counted[i] = true;

    ResidueRecord rec;
    rec.pole = {0.0, poles[i].imag()};

    // multiplicity: any other pole within the clustering tolerance
    const double clusterTol =
        1e-7 * std::max(1.0, std::abs(poles[i]));
    for (size_t j = 0; j < poles.size(); ++j) {
      if (j == i || counted[j]) continue;
      if (std::abs(poles[j] - poles[i]) <= clusterTol) {
        rec.simple = false;
        counted[j] = true;
      }
    }

    if (!rec.simple) {
      rec.ok = false;
      out.ok = false;
      out.margin = -std::numeric_limits<double>::infinity();
      out.records.push_back(rec);
      continue;
    }

    rec.residue = z.num().eval(rec.pole) / dden.eval(rec.pole);
    const double mag = std::abs(rec.residue);
    const bool real = std::abs(rec.residue.imag()) <= kResEps * mag;
    const bool positive = rec.residue.real() > 0.0;
    rec.ok = real && positive;
    if (!rec.ok) out.ok = false;
    const double normalized =
        rec.residue.real() / std::max(1.0, mag);
    out.margin = std::min(out.margin, real ? normalized
                                           : -std::abs(rec.residue.imag()) /
                                                 std::max(1.0, mag));
    out.records.push_back(rec);
  }
  return out;
}

PassivityVerdict isPositiveReal(const RationalFunction<double>& z) {
  const RationalFunction<double> zn = normalized(z);
  PassivityVerdict v;
  v.cond1 = checkRhpPoles(zn);
  v.cond2 = checkRealPart(zn);
  v.cond3 = checkImagAxisResidues(zn);
  v.passive = v.cond1.ok && v.cond2.ok && v.cond3.ok;
  return v;
}

}  // namespace elastpass
