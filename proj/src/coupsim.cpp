#include "elastpass/coupsim.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace elastpass {

void CoupledEnv::validate() const {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ConfigError("coupled environment value must be positive");
}

std::complex<double> StateSpace::transfer(std::complex<double> s) const {
  const int n = order();
  Eigen::MatrixXcd m = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
  const Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<std::complex<double>>());
  return (C.cast<std::complex<double>>() * x)(0, 0) + D(0, 0);
}

double StateSpace::spectralAbscissa() const {
  return A.eigenvalues().real().maxCoeff();
}

namespace {

// state indices for the physical (inertia-environment) assembly
struct Layout {
  int wm = 0, delta = 1, wend = 2;
  int xi = -1;     // velocity-error integral, present with integral gain
  int theta = -1;  // end-effector angle, present when rendering a spring
  int n = 3;
};

Layout layoutFor(const ClosedLoopCase& c) {
  Layout l;
  if (!c.gains.isPP()) l.xi = l.n++;
  if (c.env.isSpring()) l.theta = l.n++;
  return l;
}

StateSpace physicalInertiaSS(const ClosedLoopCase& c, double Jenv) {
  const auto& p = c.plant;
  const auto& g = c.gains;
  const Layout l = layoutFor(c);

  Eigen::RowVectorXd tauSea = Eigen::RowVectorXd::Zero(l.n);
  tauSea(l.delta) = p.K;
  tauSea(l.wm) += p.Bf;
  tauSea(l.wend) -= p.Bf;

  Eigen::RowVectorXd tauDes = Eigen::RowVectorXd::Zero(l.n);
  if (l.theta >= 0) tauDes(l.theta) = -c.env.Kd;

  Eigen::RowVectorXd omegaRef = g.Gt * (tauDes - tauSea);

  Eigen::RowVectorXd tauM = g.Gm * omegaRef;
  tauM(l.wm) -= g.Gm;
  if (l.xi >= 0) tauM(l.xi) += g.Im;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(l.n, l.n);
  A.row(l.wm) = tauM - tauSea;
  A(l.wm, l.wm) -= p.Bm;
  A.row(l.wm) /= p.Jm;
  A(l.delta, l.wm) = 1.0;
  A(l.delta, l.wend) = -1.0;
  A.row(l.wend) = tauSea / Jenv;
  if (l.xi >= 0) {
    A.row(l.xi) = omegaRef;
    A(l.xi, l.wm) -= 1.0;
  }
  if (l.theta >= 0) A(l.theta, l.wend) = 1.0;

  StateSpace ss;
  ss.A = A;
  ss.B = Eigen::MatrixXd::Zero(l.n, 1);
  ss.B(l.wend, 0) = 1.0 / Jenv;
  ss.C = Eigen::MatrixXd::Zero(1, l.n);
  ss.C(0, l.wend) = 1.0;
  ss.D = Eigen::MatrixXd::Zero(1, 1);
  ss.stateLabels = {"omega_m", "delta", "omega_end"};
  if (l.xi >= 0) ss.stateLabels.push_back("xi");
  if (l.theta >= 0) ss.stateLabels.push_back("theta_end");
  return ss;
}

// controllable canonical realization of a proper rational function
StateSpace canonicalSS(const RationalFunction<double>& y) {
  const auto yn = normalized(y);
  const Polynomial<double>& num = yn.num();
  const Polynomial<double>& den = yn.den();  // monic
  const int n = den.degree();
  if (num.degree() > n)
    throw ConfigError(
        "coupled admittance is improper (no inertia at the port); "
        "use the eigenvalue sweep instead");

  const double d = num.degree() == n ? num.coeff(n) : 0.0;
  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) ss.A(n - 1, i) = -den.coeff(i);
  ss.B = Eigen::MatrixXd::Zero(n, 1);
  ss.B(n - 1, 0) = 1.0;
  ss.C = Eigen::MatrixXd::Zero(1, n);
  for (int i = 0; i < n; ++i) ss.C(0, i) = num.coeff(i) - d * den.coeff(i);
  ss.D = Eigen::MatrixXd::Constant(1, 1, d);
  for (int i = 0; i < n; ++i) ss.stateLabels.push_back("x" + std::to_string(i + 1));
  return ss;
}

RationalFunction<double> envImpedance(const CoupledEnv& env) {
  using Poly = Polynomial<double>;
  if (env.kind == CoupledEnv::Kind::Inertia)
    return {Poly{0.0, env.value}, Poly{1.0}};
  return {Poly{env.value}, Poly{0.0, 1.0}};
}

}  // namespace

StateSpace coupledStateSpace(const ClosedLoopCase& c, const CoupledEnv& env) {
  env.validate();
  if (env.kind == CoupledEnv::Kind::Inertia)
    return physicalInertiaSS(c, env.value);
  const auto y = (outputImpedance(c) + envImpedance(env)).reciprocal();
  return canonicalSS(y);
}

Polynomial<double> coupledCharacteristic(const ClosedLoopCase& c,
                                         const CoupledEnv& env) {
  env.validate();
  const auto z = outputImpedance(c);
  const auto e = envImpedance(env);
  return z.num() * e.den() + e.num() * z.den();
}

std::vector<StabilityPoint> eigSweep(const ClosedLoopCase& c,
                                     CoupledEnv::Kind kind,
                                     const std::vector<double>& grid) {
  std::vector<StabilityPoint> out;
  out.reserve(grid.size());
  for (const double v : grid) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("environment grid must be positive and finite");
    const auto phi = coupledCharacteristic(c, {kind, v});
    double maxRe = -std::numeric_limits<double>::infinity();
    for (const auto& r : roots(phi)) maxRe = std::max(maxRe, r.real());
    out.push_back({v, maxRe, maxRe <= kEigEps});
  }
  return out;
}

std::vector<double> defaultEnvGrid() {
  std::vector<double> g(60);
  const double llo = std::log(1e-6), lhi = std::log(1e3);
  for (int i = 0; i < 60; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / 59.0);
  return g;
}

double defaultTimestep(const ClosedLoopCase& c, const CoupledEnv& env) {
  const StateSpace ss = coupledStateSpace(c, env);
  const double lmax = ss.A.eigenvalues().cwiseAbs().maxCoeff();
  return std::min(1e-4, lmax > 0.0 ? 0.01 / lmax : 1e-4);
}

SimResult simulate(const ClosedLoopCase& c, const CoupledEnv& env,
                   double impulse, double dt, double T) {
  env.validate();
  if (env.kind != CoupledEnv::Kind::Inertia)
    throw ConfigError("time simulation supports inertial environments");
  if (!(dt > 0.0) || !(T > dt))
    throw std::domain_error("simulate: need dt > 0 and T > dt");

  const StateSpace ss = physicalInertiaSS(c, env.value);
  const Layout l = layoutFor(c);
  const auto& p = c.plant;

  const long nSteps = static_cast<long>(std::ceil(T / dt));
  const long stride = std::max<long>(1, nSteps / 20000);

  Eigen::VectorXd x = ss.B.col(0) * impulse;  // impulse -> port momentum
  double energy = 0.0;

  SimResult out;
  out.impulseEnergy = 0.5 * impulse * impulse / env.value;
  const double guard = 1e12 * std::max(1.0, x.cwiseAbs().maxCoeff());

  auto tauSeaOf = [&](const Eigen::VectorXd& s) {
    double v = p.K * s(l.delta) + p.Bf * (s(l.wm) - s(l.wend));
    return v;
  };
  auto record = [&](double t, const Eigen::VectorXd& s) {
    out.t.push_back(t);
    out.omegaM.push_back(s(l.wm));
    out.omegaEnd.push_back(s(l.wend));
    out.tauSea.push_back(tauSeaOf(s));
    out.energy.push_back(energy);
    out.stateNorm.push_back(s.cwiseAbs().maxCoeff());
  };

  auto power = [&](const Eigen::VectorXd& s) {
    return tauSeaOf(s) * (-s(l.wend));
  };

  record(0.0, x);
  for (long k = 0; k < nSteps; ++k) {
    // RK4 on the state together with the absorbed port energy
    const Eigen::VectorXd k1 = ss.A * x;
    const double e1 = power(x);
    const Eigen::VectorXd x2 = x + 0.5 * dt * k1;
    const Eigen::VectorXd k2 = ss.A * x2;
    const double e2 = power(x2);
    const Eigen::VectorXd x3 = x + 0.5 * dt * k2;
    const Eigen::VectorXd k3 = ss.A * x3;
    const double e3 = power(x3);
    const Eigen::VectorXd x4 = x + dt * k3;
    const Eigen::VectorXd k4 = ss.A * x4;
    const double e4 = power(x4);

    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    energy += dt / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4);
    const double t = dt * static_cast<double>(k + 1);

    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > guard) {
      out.diverged = true;
      out.divergenceTime = t;
      record(t, x);
      break;
    }
    if ((k + 1) % stride == 0 || k + 1 == nSteps) record(t, x);
  }
  return out;
}

std::optional<double> findDestabilizingEnv(const ClosedLoopCase& c,
                                           CoupledEnv::Kind kind,
                                           const std::vector<double>& grid) {
  auto unstable = [&](double v) {
    const auto phi = coupledCharacteristic(c, {kind, v});
    double maxRe = -std::numeric_limits<double>::infinity();
    for (const auto& r : roots(phi)) maxRe = std::max(maxRe, r.real());
    return maxRe > kEigEps;
  };

  double lo = 0.0, hi = -1.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (unstable(grid[i])) {
      hi = grid[i];
      if (i > 0) lo = grid[i - 1];
      break;
    }
  }
  if (hi < 0.0) return std::nullopt;

  while (hi - lo > 1e-3 * hi && hi > 1e-12) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    (unstable(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace elastpass
