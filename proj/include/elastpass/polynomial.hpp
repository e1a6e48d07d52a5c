#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace elastpass {

// Real-coefficient polynomial with ascending coefficient storage:
// coeffs[i] multiplies s^i, so coeffs[0] is the DC term. The zero
// polynomial is canonically a single zero coefficient.
template <typename Scalar = double>
class Polynomial {
  static_assert(std::is_floating_point_v<Scalar>);

 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Complex = std::complex<Scalar>;

  Polynomial() : coeffs_(Coeffs::Zero(1)) {}

  explicit Polynomial(Coeffs c) : coeffs_(std::move(c)) {
    if (coeffs_.size() == 0) coeffs_ = Coeffs::Zero(1);
    checkFinite();
    trim();
  }

  Polynomial(std::initializer_list<Scalar> c)
      : Polynomial(Eigen::Map<const Coeffs>(c.begin(),
                                            static_cast<Eigen::Index>(c.size()))) {}

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(Scalar a) { return Polynomial({a}); }

  // a * s^k
  static Polynomial monomial(int k, Scalar a = Scalar(1)) {
    Coeffs c = Coeffs::Zero(k + 1);
    c(k) = a;
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool isZero() const { return degree() == 0 && coeffs_(0) == Scalar(0); }

  const Coeffs& coeffs() const { return coeffs_; }
  Scalar coeff(int i) const {
    return (i >= 0 && i < coeffs_.size()) ? coeffs_(i) : Scalar(0);
  }
  Scalar leading() const { return coeffs_(coeffs_.size() - 1); }
  Scalar maxAbsCoeff() const { return coeffs_.cwiseAbs().maxCoeff(); }

  Scalar operator()(Scalar x) const { return horner(x); }
  Scalar eval(Scalar x) const { return horner(x); }
  Complex eval(const Complex& s) const { return horner(s); }

  Polynomial derivative() const {
    if (degree() == 0) return zero();
    Coeffs d(coeffs_.size() - 1);
    for (Eigen::Index i = 1; i < coeffs_.size(); ++i)
      d(i - 1) = coeffs_(i) * Scalar(i);
    return Polynomial(std::move(d));
  }

  // number of exactly-zero low-order coefficients (s^k divisibility)
  int trailingZeros() const {
    if (isZero()) return 0;
    int k = 0;
    while (k < static_cast<int>(coeffs_.size()) && coeffs_(k) == Scalar(0)) ++k;
    return k;
  }

  // divide by s^k; requires the k lowest coefficients to be exact zeros
  Polynomial shiftedDown(int k) const {
    if (k == 0) return *this;
    if (trailingZeros() < k)
      throw std::domain_error("polynomial not divisible by s^k");
    return Polynomial(Coeffs(coeffs_.tail(coeffs_.size() - k)));
  }

  Polynomial operator+(const Polynomial& o) const {
    Coeffs c = Coeffs::Zero(std::max(coeffs_.size(), o.coeffs_.size()));
    c.head(coeffs_.size()) = coeffs_;
    c.head(o.coeffs_.size()) += o.coeffs_;
    return Polynomial(std::move(c));
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (o * Scalar(-1)); }

  Polynomial operator*(const Polynomial& o) const {
    if (isZero() || o.isZero()) return zero();
    Coeffs c = Coeffs::Zero(coeffs_.size() + o.coeffs_.size() - 1);
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
      for (Eigen::Index j = 0; j < o.coeffs_.size(); ++j)
        c(i + j) += coeffs_(i) * o.coeffs_(j);
    return Polynomial(std::move(c));
  }

  Polynomial operator*(Scalar a) const { return Polynomial(Coeffs(coeffs_ * a)); }
  Polynomial operator/(Scalar a) const { return Polynomial(Coeffs(coeffs_ / a)); }

  friend Polynomial operator*(Scalar a, const Polynomial& p) { return p * a; }

  bool operator==(const Polynomial& o) const {
    return coeffs_.size() == o.coeffs_.size() && coeffs_ == o.coeffs_;
  }

  // deflate by a root: p / (s - r). Forward and backward recurrences favour
  // small and large |r| respectively; the quotient with the smaller
  // reconstruction residual wins.
  Polynomial deflateReal(Scalar r) const {
    const int n = degree();
    if (n < 1) throw std::domain_error("cannot deflate constant polynomial");
    Coeffs fwd = Coeffs::Zero(n);
    Scalar carry = coeffs_(n);
    for (int i = n - 1; i >= 0; --i) {
      fwd(i) = carry;
      carry = coeffs_(i) + carry * r;
    }
    if (r == Scalar(0)) return Polynomial(std::move(fwd));

    Coeffs bwd = Coeffs::Zero(n);
    bwd(0) = -coeffs_(0) / r;
    for (int i = 1; i < n; ++i) bwd(i) = (bwd(i - 1) - coeffs_(i)) / r;

    // composite quotient: backward below the join (accurate constant end),
    // forward above it
    Coeffs mix = fwd;
    int join = 0;
    Scalar bestGap = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < n; ++i) {
      const Scalar gap = std::abs(fwd(i) - bwd(i)) /
                         std::max({std::abs(fwd(i)), std::abs(bwd(i)),
                                   Scalar(1e-300)});
      if (gap < bestGap) {
        bestGap = gap;
        join = i;
      }
    }
    for (int i = 0; i < join; ++i) mix(i) = bwd(i);

    const Scalar floorScale = Scalar(1e-12) * maxAbsCoeff();
    auto residual = [&](const Coeffs& q) {
      Scalar worst = Scalar(0);
      for (int i = 0; i <= n; ++i) {
        Scalar conv = Scalar(0);
        if (i - 1 >= 0 && i - 1 < n) conv += q(i - 1);
        if (i < n) conv -= r * q(i);
        worst = std::max(worst, std::abs(coeffs_(i) - conv) /
                                    std::max(std::abs(coeffs_(i)), floorScale));
      }
      return worst;
    };
    const Scalar rf = residual(fwd), rb = residual(bwd), rm = residual(mix);
    if (rm <= rf && rm <= rb) return Polynomial(std::move(mix));
    return Polynomial(rf <= rb ? std::move(fwd) : std::move(bwd));
  }

  // deflate by a conjugate pair: p / (s^2 - 2 Re(r) s + |r|^2)
  Polynomial deflatePair(const Complex& r) const {
    const int n = degree();
    if (n < 2) throw std::domain_error("cannot deflate pair from degree < 2");
    const Scalar b = Scalar(-2) * r.real();
    const Scalar c = std::norm(r);

    Coeffs fwd = Coeffs::Zero(n - 1);
    Scalar hi = Scalar(0), lo = Scalar(0);
    for (int i = n - 2; i >= 0; --i) {
      const Scalar qi = coeffs_(i + 2) - b * hi - c * lo;
      fwd(i) = qi;
      lo = hi;
      hi = qi;
    }
    if (c == Scalar(0)) return Polynomial(std::move(fwd));

    Coeffs bwd = Coeffs::Zero(n - 1);
    for (int i = 0; i <= n - 2; ++i) {
      Scalar v = coeffs_(i);
      if (i >= 1) v -= b * bwd(i - 1);
      if (i >= 2) v -= bwd(i - 2);
      bwd(i) = v / c;
    }

    Coeffs mix = fwd;
    int join = 0;
    Scalar bestGap = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i <= n - 2; ++i) {
      const Scalar gap = std::abs(fwd(i) - bwd(i)) /
                         std::max({std::abs(fwd(i)), std::abs(bwd(i)),
                                   Scalar(1e-300)});
      if (gap < bestGap) {
        bestGap = gap;
        join = i;
      }
    }
    for (int i = 0; i < join; ++i) mix(i) = bwd(i);

    const Scalar floorScale = Scalar(1e-12) * maxAbsCoeff();
    auto residual = [&](const Coeffs& q) {
      Scalar worst = Scalar(0);
      for (int i = 0; i <= n; ++i) {
        Scalar conv = Scalar(0);
        if (i - 2 >= 0 && i - 2 <= n - 2) conv += q(i - 2);
        if (i - 1 >= 0 && i - 1 <= n - 2) conv += b * q(i - 1);
        if (i <= n - 2) conv += c * q(i);
        worst = std::max(worst, std::abs(coeffs_(i) - conv) /
                                    std::max(std::abs(coeffs_(i)), floorScale));
      }
      return worst;
    };
    const Scalar rf = residual(fwd), rb = residual(bwd), rm = residual(mix);
    if (rm <= rf && rm <= rb) return Polynomial(std::move(mix));
    return Polynomial(rf <= rb ? std::move(fwd) : std::move(bwd));
  }

 private:
  template <typename T>
  T horner(const T& x) const {
    T acc = T(coeffs_(coeffs_.size() - 1));
    for (Eigen::Index i = coeffs_.size() - 2; i >= 0; --i)
      acc = acc * x + T(coeffs_(i));
    return acc;
  }

  void checkFinite() const {
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
      if (!std::isfinite(coeffs_(i)))
        throw std::domain_error("polynomial coefficient not finite");
  }

  void trim() {
    Eigen::Index n = coeffs_.size();
    while (n > 1 && coeffs_(n - 1) == Scalar(0)) --n;
    if (n != coeffs_.size()) coeffs_.conservativeResize(n);
  }

  Coeffs coeffs_;
};

namespace detail {

// Iterative row/column scaling by powers of two so the companion matrix is
// better conditioned for the QR eigenvalue iteration.
template <typename Scalar>
void balance(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const Eigen::Index n = m.rows();
  bool changed = true;
  int rounds = 0;
  while (changed && rounds++ < 20) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar rn = m.row(i).template lpNorm<1>();
      Scalar cn = m.col(i).template lpNorm<1>();
      if (rn == Scalar(0) || cn == Scalar(0)) continue;
      int expo = 0;
      std::frexp(rn / cn, &expo);
      expo /= 2;
      if (expo != 0) {
        const Scalar sc = std::ldexp(Scalar(1), expo);
        const Scalar sr = std::ldexp(Scalar(1), -expo);
        if (cn * sc + rn * sr < Scalar(0.9) * (cn + rn)) {
          m.row(i) *= sr;
          m.col(i) *= sc;
          changed = true;
        }
      }
    }
  }
}

}  // namespace detail

// All roots with multiplicity, via the balanced companion matrix followed by
// one Newton step per root. Conjugate symmetry comes from the real Schur form.
template <typename Scalar>
std::vector<std::complex<Scalar>> roots(const Polynomial<Scalar>& p) {
  using Complex = std::complex<Scalar>;
  if (p.isZero() || p.degree() < 1)
    throw std::domain_error("roots: polynomial must have degree >= 1");

  const int n = p.degree();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> companion =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  const Scalar an = p.leading();
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) companion(i + 1, i) = Scalar(1);
    companion(i, n - 1) = -p.coeff(i) / an;
  }
  detail::balance(companion);

  Eigen::EigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> es(
      companion, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("roots: eigenvalue iteration failed");

  const Polynomial<Scalar> dp = p.derivative();
  std::vector<Complex> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Complex r = es.eigenvalues()(i);
    const Complex d = dp.eval(r);
    if (std::abs(d) > Scalar(0)) {
      const Complex step = p.eval(r) / d;
      if (std::isfinite(step.real()) && std::isfinite(step.imag()) &&
          std::abs(step) < Scalar(0.5) * (Scalar(1) + std::abs(r)))
        r -= step;
    }
    out.push_back(r);
  }
  return out;
}

// p(x) such that p(w^2) = Re[N(jw) D(-jw)]; odd powers of w vanish
// identically for real coefficients, so only even terms are formed.
// Coefficients whose signed sum cancels to within a few ulps of the
// accumulated magnitude are algebraic zeros contaminated by roundoff and
// are snapped to exact zero; otherwise a spurious 1e-16-relative leading
// term would dominate the sign of p far out on the half-line.
template <typename Scalar>
Polynomial<Scalar> evenPart(const Polynomial<Scalar>& num,
                            const Polynomial<Scalar>& den) {
  if (num.isZero() || den.isZero())
    throw std::domain_error("evenPart: inputs must be nonzero");
  const int m = num.degree() + den.degree();
  typename Polynomial<Scalar>::Coeffs c =
      Polynomial<Scalar>::Coeffs::Zero(m / 2 + 1);
  for (int k = 0; 2 * k <= m; ++k) {
    Scalar acc = Scalar(0);
    Scalar mag = Scalar(0);
    for (int i = 0; i <= 2 * k; ++i) {
      const int j = 2 * k - i;
      if (i > num.degree() || j > den.degree()) continue;
      const Scalar term = num.coeff(i) * den.coeff(j);
      acc += (j % 2 == 0) ? term : -term;
      mag += std::abs(term);
    }
    if (std::abs(acc) <= Scalar(1e-13) * mag) acc = Scalar(0);
    c(k) = (k % 2 == 0) ? acc : -acc;
  }
  return Polynomial<Scalar>(std::move(c));
}

struct HalfLineResult {
  bool nonnegative = true;
  double minValue = 0.0;  // inf over x >= 0; -inf when unbounded below
  double minArg = 0.0;
  std::optional<double> witness;  // x with p(x) < -slack when !nonnegative
};

// Decides p(x) >= -slack for all x >= 0. Exact vertex analysis for degree
// <= 2, stationary points from the derivative's real roots otherwise.
template <typename Scalar>
HalfLineResult nonnegativeOnHalfLine(const Polynomial<Scalar>& p,
                                     Scalar slack = Scalar(0)) {
  HalfLineResult res;
  const int deg = p.degree();

  auto consider = [&](Scalar x, Scalar v) {
    if (v < res.minValue) {
      res.minValue = v;
      res.minArg = x;
    }
  };
  res.minValue = p.eval(Scalar(0));
  res.minArg = Scalar(0);

  bool unboundedBelow = false;
  if (deg >= 1 && p.leading() < Scalar(0)) unboundedBelow = true;

  if (!unboundedBelow) {
    if (deg == 2) {
      const Scalar p2 = p.coeff(2), p1 = p.coeff(1);
      if (p2 > Scalar(0) && p1 < Scalar(0)) {
        const Scalar xv = -p1 / (Scalar(2) * p2);
        consider(xv, p.eval(xv));
      }
    } else if (deg >= 3) {
      for (const auto& r : roots(p.derivative())) {
        const Scalar tol =
            Scalar(1e-9) * std::max(Scalar(1), std::abs(r));
        if (std::abs(r.imag()) > tol || r.real() <= Scalar(0)) continue;
        consider(r.real(), p.eval(r.real()));
      }
    }
    // deg <= 1 with nonnegative slope: minimum is at x = 0, already taken
  } else {
    res.minValue = -std::numeric_limits<double>::infinity();
    // march outward for a concrete witness
    Scalar x = Scalar(1);
    if (deg >= 1) {
      // Cauchy bound on root magnitudes keeps the search short
      Scalar bound = Scalar(0);
      for (int i = 0; i < deg; ++i)
        bound = std::max(bound, std::abs(p.coeff(i) / p.leading()));
      x = Scalar(2) * (Scalar(1) + bound);
    }
    for (int it = 0; it < 200; ++it) {
      if (p.eval(x) < -slack) break;
      x *= Scalar(2);
    }
    res.minArg = x;
  }

  res.nonnegative = res.minValue >= -slack;
  if (!res.nonnegative) {
    if (std::isfinite(res.minValue) && res.minValue < -slack)
      res.witness = res.minArg;
    else if (!std::isfinite(res.minValue))
      res.witness = res.minArg;
  }
  return res;
}

using Polyd = Polynomial<double>;

}  // namespace elastpass
