#include <doctest.h>

#include <complex>
#include <random>

#include "elastpass/polynomial.hpp"
#include "test_support.hpp"

using namespace elastpass;
using Complex = std::complex<double>;

TEST_CASE("polynomial basics") {
  const Polyd p{1.0, 2.0, 3.0};
  CHECK(p.degree() == 2);
  CHECK(p.eval(2.0) == doctest::Approx(1 + 4 + 12));
  const Polyd dp{2.0, 6.0};
  CHECK(p.derivative() == dp);

  const Polyd zeroes{0.0, 0.0};
  CHECK(zeroes.isZero());
  const Polyd a{1.0, 1.0}, b{2.0, 1.0}, ab{2.0, 3.0, 1.0};
  CHECK(a * b == ab);
  const Polyd shifted{0.0, 0.0, 4.0};
  CHECK(shifted.trailingZeros() == 2);
  const Polyd four{4.0};
  CHECK(shifted.shiftedDown(2) == four);
  CHECK_THROWS_AS(a.shiftedDown(1), std::domain_error);

  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((Polyd{1.0, inf}), std::domain_error);
}

TEST_CASE("roots: pure imaginary pair of s^2 + 1") {
  const auto r = roots(Polyd{1.0, 0.0, 1.0});
  REQUIRE(r.size() == 2);
  for (const auto& x : r) {
    CHECK(std::abs(x.real()) < 1e-12);
    CHECK(std::abs(std::abs(x.imag()) - 1.0) < 1e-12);
  }
  CHECK(std::abs(r[0] - std::conj(r[1])) < 1e-12);
}

TEST_CASE("roots: stable cubic has only negative real parts") {
  // a1*a2 - a0*a3 = 3*2 - 1*1 = 5 > 0 with positive coefficients
  const auto r = roots(Polyd{1.0, 3.0, 2.0, 1.0});
  REQUIRE(r.size() == 3);
  for (const auto& x : r) CHECK(x.real() < 0.0);
}

TEST_CASE("roots: s - 1 and error cases") {
  const auto r = roots(Polyd{-1.0, 1.0});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - Complex(1.0, 0.0)) < 1e-14);

  CHECK_THROWS_AS(roots(Polyd{3.0}), std::domain_error);
  CHECK_THROWS_AS(roots(Polyd::zero()), std::domain_error);
}

TEST_CASE("roots: reconstruction property up to degree 6") {
  std::mt19937_64 rng(7101);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  for (int trial = 0; trial < 400; ++trial) {
    const int deg = 1 + static_cast<int>(rng() % 6);
    Polyd::Coeffs c(deg + 1);
    for (int i = 0; i <= deg; ++i)
      c(i) = std::copysign(std::pow(10.0, mag(rng)),
                           rng() % 2 ? 1.0 : -1.0);
    const Polyd p{std::move(c)};
    if (p.degree() != deg) continue;  // leading coefficient trimmed

    // multiply (s - r_i) back together in complex arithmetic
    std::vector<Complex> acc{Complex(p.leading(), 0.0)};
    for (const auto& r : roots(p)) {
      std::vector<Complex> next(acc.size() + 1, Complex(0, 0));
      for (size_t i = 0; i < acc.size(); ++i) {
        next[i + 1] += acc[i];
        next[i] -= r * acc[i];
      }
      acc = std::move(next);
    }
    const double scale = p.maxAbsCoeff();
    for (int i = 0; i <= deg; ++i) {
      CHECK(std::abs(acc[static_cast<size_t>(i)].real() - p.coeff(i)) <=
            1e-8 * scale);
      CHECK(std::abs(acc[static_cast<size_t>(i)].imag()) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("evenPart: hand examples") {
  // (s+1)/(s+2): expand (1 + jw)(2 - jw) by hand -> w^2 + 2
  const Polyd p = evenPart(Polyd{1.0, 1.0}, Polyd{2.0, 1.0});
  const Polyd xPlusTwo{2.0, 1.0};
  CHECK(p == xPlusTwo);

  const Polyd one{1.0};
  CHECK(evenPart(one, one) == one);
}

TEST_CASE("evenPart: null-rendering impedance reduces to a constant") {
  const auto plant = testing::tablePlantSea();
  const auto gains = testing::tableGainsPP();
  const auto z = testing::oracleSeaNullPP(plant, gains);
  const Polyd p = evenPart(z.num(), z.den());
  REQUIRE(p.degree() == 0);
  const double expected =
      plant.K * plant.K * (gains.alpha() + 1.0) * (plant.Bm + gains.Gm);
  CHECK(p.coeff(0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(360.0 * 360.0 * 51.0 * 11.22));
}

TEST_CASE("evenPart: matches direct complex evaluation") {
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  std::uniform_real_distribution<double> logw(-2.0, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dn = 1 + static_cast<int>(rng() % 4);
    const int dd = 1 + static_cast<int>(rng() % 4);
    Polyd::Coeffs cn(dn + 1), cd(dd + 1);
    for (int i = 0; i <= dn; ++i) cn(i) = coeff(rng);
    for (int i = 0; i <= dd; ++i) cd(i) = coeff(rng);
    const Polyd n{std::move(cn)}, d{std::move(cd)};
    if (n.isZero() || d.isZero()) continue;
    const Polyd p = evenPart(n, d);
    for (int k = 0; k < 50; ++k) {
      const double w = std::pow(10.0, logw(rng));
      const Complex direct =
          n.eval(Complex(0, w)) * d.eval(Complex(0, -w));
      const double scale = std::max(1.0, std::abs(direct));
      CHECK(std::abs(p.eval(w * w) - direct.real()) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("nonnegativeOnHalfLine: quadratic boundary cases") {
  // perfect square (x-1)^2: p1 = -2 sqrt(p0 p2) exactly
  auto r = nonnegativeOnHalfLine(Polyd{1.0, -2.0, 1.0});
  CHECK(r.nonnegative);
  CHECK(r.minValue == doctest::Approx(0.0));

  // p1 below the boundary: dips negative near x = 1.5
  r = nonnegativeOnHalfLine(Polyd{1.0, -3.0, 1.0});
  CHECK_FALSE(r.nonnegative);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == doctest::Approx(1.5));
  CHECK((Polyd{1.0, -3.0, 1.0}).eval(*r.witness) < 0.0);

  r = nonnegativeOnHalfLine(Polyd{2.0, 1.0});
  CHECK(r.nonnegative);

  // negative leading coefficient: unbounded below, witness found
  r = nonnegativeOnHalfLine(Polyd{5.0, 1.0, -0.1});
  CHECK_FALSE(r.nonnegative);
  REQUIRE(r.witness.has_value());
  CHECK((Polyd{5.0, 1.0, -0.1}).eval(*r.witness) < 0.0);
}

TEST_CASE("nonnegativeOnHalfLine: agrees with dense sampling on quadratics") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  const int nPoints = 100000;
  std::vector<double> xs(nPoints);
  for (int i = 0; i < nPoints; ++i)
    xs[i] = std::pow(10.0, -6.0 + 12.0 * i / (nPoints - 1.0));

  for (int trial = 0; trial < 200; ++trial) {
    const Polyd p{coeff(rng), coeff(rng), coeff(rng)};
    const double slack = 1e-12 * std::max(1.0, p.maxAbsCoeff());
    const auto r = nonnegativeOnHalfLine(p, slack);
    bool sampledNonneg = p.eval(0.0) >= -slack;
    for (const double x : xs)
      if (p.eval(x) < -slack) {
        sampledNonneg = false;
        break;
      }
    // dense sampling can miss a shallow dip but must never contradict a
    // negative verdict; and a sampled violation must be caught exactly
    if (!sampledNonneg) CHECK_FALSE(r.nonnegative);
    if (r.nonnegative) CHECK(sampledNonneg);
  }
}

TEST_CASE("nonnegativeOnHalfLine: cubic via stationary points") {
  // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3): negative on (1,2) u (0,1)?
  // p(0) = -6 < 0 already
  auto r = nonnegativeOnHalfLine(Polyd{-6.0, 11.0, -6.0, 1.0});
  CHECK_FALSE(r.nonnegative);

  // shifted up: x^3 + x + 1 is increasing and positive at 0
  r = nonnegativeOnHalfLine(Polyd{1.0, 1.0, 0.0, 1.0});
  CHECK(r.nonnegative);

  // interior dip: (x-2)^2 (x+1) - small
  const Polyd q = Polyd{-2.0, 1.0} * Polyd{-2.0, 1.0} * Polyd{1.0, 1.0} -
                  Polyd{0.5};
  r = nonnegativeOnHalfLine(q);
  CHECK_FALSE(r.nonnegative);
  REQUIRE(r.witness.has_value());
  CHECK(q.eval(*r.witness) < 0.0);
}
