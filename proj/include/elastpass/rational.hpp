#pragma once

#include <complex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elastpass/errors.hpp"
#include "elastpass/polynomial.hpp"

namespace elastpass {

// Ratio of real polynomials N(s)/D(s). Construction does not normalize;
// use normalized() to cancel common roots and scale the denominator monic.
template <typename Scalar = double>
class RationalFunction {
 public:
  using Poly = Polynomial<Scalar>;
  using Complex = std::complex<Scalar>;

  RationalFunction() : num_(Poly::zero()), den_(Poly::constant(1)) {}

  RationalFunction(Poly num, Poly den)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero())
      throw std::domain_error("rational function with zero denominator");
  }

  static RationalFunction constant(Scalar a) {
    return {Poly::constant(a), Poly::constant(1)};
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  Complex eval(const Complex& s) const {
    const Complex d = den_.eval(s);
    const Scalar dScale =
        den_.maxAbsCoeff() *
        std::max(Scalar(1), std::pow(std::abs(s), Scalar(den_.degree())));
    if (std::abs(d) <= Scalar(1e-12) * dScale) {
      std::ostringstream msg;
      msg << "evaluation too close to a pole near s = (" << s.real() << ", "
          << s.imag() << "j)";
      throw EvaluationError(msg.str());
    }
    return num_.eval(s) / d;
  }

  // Z(j*omega)
  Complex evalJw(Scalar omega) const { return eval(Complex(0, omega)); }

  RationalFunction operator+(const RationalFunction& o) const {
    return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
  }
  RationalFunction operator-(const RationalFunction& o) const {
    return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
  }
  RationalFunction operator*(const RationalFunction& o) const {
    return {num_ * o.num_, den_ * o.den_};
  }
  RationalFunction operator*(Scalar a) const { return {num_ * a, den_}; }

  RationalFunction reciprocal() const {
    if (num_.isZero())
      throw std::domain_error("reciprocal of the zero rational function");
    return {den_, num_};
  }

 private:
  Poly num_, den_;
};

// Cancels numerator/denominator roots that agree within
// rho * max(1, |root|), then scales the denominator monic. When nothing
// cancels the coefficients pass through untouched apart from the scaling.
template <typename Scalar>
RationalFunction<Scalar> normalized(const RationalFunction<Scalar>& z,
                                    Scalar rho = Scalar(1e-8)) {
  using Poly = Polynomial<Scalar>;
  Poly n = z.num();
  Poly d = z.den();

  // exact common powers of s first
  const int k = std::min(n.isZero() ? 0 : n.trailingZeros(), d.trailingZeros());
  if (k > 0) {
    n = n.shiftedDown(k);
    d = d.shiftedDown(k);
  }

  // uncancelled exact origin roots are set aside so deflation of other
  // roots cannot smear them into nonzero constants
  const int sNum = n.isZero() ? 0 : n.trailingZeros();
  const int sDen = d.trailingZeros();
  if (sNum > 0) n = n.shiftedDown(sNum);
  if (sDen > 0) d = d.shiftedDown(sDen);

  if (!n.isZero() && n.degree() >= 1 && d.degree() >= 1) {
    auto nr = roots(n);
    auto dr = roots(d);
    // deflation accuracy is limited by the root estimates, so polish to
    // convergence before dividing anything out
    auto polish = [](const Poly& p, std::complex<Scalar> r) {
      const Poly dp = p.derivative();
      for (int it = 0; it < 4; ++it) {
        const std::complex<Scalar> der = dp.eval(r);
        if (std::abs(der) == Scalar(0)) break;
        const std::complex<Scalar> step = p.eval(r) / der;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        if (std::abs(step) > Scalar(0.1) * (Scalar(1) + std::abs(r))) break;
        r -= step;
        if (std::abs(step) <= Scalar(1e-15) * (Scalar(1) + std::abs(r))) break;
      }
      return r;
    };
    std::vector<bool> usedN(nr.size(), false), usedD(dr.size(), false);
    bool any = false;
    for (size_t i = 0; i < dr.size(); ++i) {
      const Scalar tol = rho * std::max(Scalar(1), std::abs(dr[i]));
      Scalar best = tol;
      int bestJ = -1;
      for (size_t j = 0; j < nr.size(); ++j) {
        if (usedN[j]) continue;
        const Scalar dist = std::abs(dr[i] - nr[j]);
        if (dist <= best) {
          best = dist;
          bestJ = static_cast<int>(j);
        }
      }
      if (bestJ >= 0) {
        usedD[i] = true;
        usedN[static_cast<size_t>(bestJ)] = true;
        dr[i] = polish(d, dr[i]);
        nr[static_cast<size_t>(bestJ)] = polish(n, nr[static_cast<size_t>(bestJ)]);
        any = true;
      }
    }
    if (any) {
      auto deflateAll = [](const Poly& p,
                           const std::vector<std::complex<Scalar>>& rs,
                           const std::vector<bool>& used) {
        Poly q = p;
        std::vector<bool> done(rs.size(), false);
        for (size_t i = 0; i < rs.size(); ++i) {
          if (!used[i] || done[i]) continue;
          const Scalar imTol =
              Scalar(1e-9) * std::max(Scalar(1), std::abs(rs[i]));
          if (std::abs(rs[i].imag()) <= imTol) {
            q = q.deflateReal(rs[i].real());
            done[i] = true;
          } else {
            // find the conjugate partner; it is cancelled with the same pair
            int partner = -1;
            for (size_t j = i + 1; j < rs.size(); ++j) {
              if (done[j] || !used[j]) continue;
              if (std::abs(rs[j] - std::conj(rs[i])) <= imTol * Scalar(10)) {
                partner = static_cast<int>(j);
                break;
              }
            }
            if (partner < 0) {
              // partner was not matched for cancellation; fall back to the
              // real part only (should not happen for conjugate-symmetric data)
              q = q.deflateReal(rs[i].real());
              done[i] = true;
            } else {
              q = q.deflatePair(rs[i]);
              done[i] = true;
              done[static_cast<size_t>(partner)] = true;
            }
          }
        }
        return q;
      };
      n = deflateAll(n, nr, usedN);
      d = deflateAll(d, dr, usedD);
    }
  }

  if (sNum > 0) n = n * Polynomial<Scalar>::monomial(sNum);
  if (sDen > 0) d = d * Polynomial<Scalar>::monomial(sDen);

  const Scalar lead = d.leading();
  return RationalFunction<Scalar>(n / lead, d / lead);
}

using RatFund = RationalFunction<double>;

}  // namespace elastpass
