#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "elastpass/models.hpp"
#include "elastpass/polynomial.hpp"

namespace elastpass {

// Passive one-port environment attached at the interaction port.
struct CoupledEnv {
  enum class Kind { Inertia, Spring };
  Kind kind = Kind::Inertia;
  double value = 0.0;  // kg m^2 or N m/rad, > 0

  static CoupledEnv inertia(double j) { return {Kind::Inertia, j}; }
  static CoupledEnv spring(double k) { return {Kind::Spring, k}; }
  void validate() const;
};

struct StateSpace {
  Eigen::MatrixXd A, B, C, D;
  std::vector<std::string> stateLabels;

  int order() const { return static_cast<int>(A.rows()); }
  std::complex<double> transfer(std::complex<double> s) const;
  double spectralAbscissa() const;
};

// Spectral-abscissa threshold: larger real parts count as unstable, which
// keeps marginal imaginary-axis modes of lossless passive cases out.
inline constexpr double kEigEps = 1e-7;
// Port-energy tolerance, relative to the injected impulse energy.
inline constexpr double kEnergyEps = 1e-6;

// Closed loop coupled to the environment, with an exogenous end-effector
// torque as input and the end-effector velocity as output. Inertial
// environments are assembled from the physical equations (labeled states
// omega_m, delta, omega_end, xi, theta_end as applicable); spring
// environments use a canonical realization and require a damped filter,
// since without port inertia the coupled admittance is improper.
StateSpace coupledStateSpace(const ClosedLoopCase& c, const CoupledEnv& env);

// Characteristic polynomial of the coupled interconnection,
// zeros of Z_out(s) + Z_env(s).
Polynomial<double> coupledCharacteristic(const ClosedLoopCase& c,
                                         const CoupledEnv& env);

struct StabilityPoint {
  double envValue = 0.0;
  double maxRealEig = 0.0;
  bool stable = true;
};

std::vector<StabilityPoint> eigSweep(const ClosedLoopCase& c,
                                     CoupledEnv::Kind kind,
                                     const std::vector<double>& grid);

// 60 log-spaced environment values on [1e-6, 1e3].
std::vector<double> defaultEnvGrid();

// Resolves the fastest coupled mode: min(1e-4, 0.01/|lambda|_max).
double defaultTimestep(const ClosedLoopCase& c, const CoupledEnv& env);

struct SimResult {
  std::vector<double> t;
  std::vector<double> omegaM, omegaEnd, tauSea;
  std::vector<double> energy;     // E(t) = integral of tau_sea * (-omega_end)
  std::vector<double> stateNorm;  // infinity norm of the state vector
  bool diverged = false;
  double divergenceTime = 0.0;
  double impulseEnergy = 0.0;  // kinetic energy injected at t = 0
};

// Fixed-step 4th-order integration of the impulse response (the impulse
// enters as the initial port momentum). Inertial environments only.
SimResult simulate(const ClosedLoopCase& c, const CoupledEnv& env,
                   double impulse, double dt, double T);

// Smallest environment value on the grid that destabilizes the coupled
// system, refined by bisection to 1e-3 relative; nullopt when every grid
// point is stable. A one-sided oracle: "none found" is not a passivity
// certificate.
std::optional<double> findDestabilizingEnv(
    const ClosedLoopCase& c, CoupledEnv::Kind kind,
    const std::vector<double>& grid = defaultEnvGrid());

}  // namespace elastpass
