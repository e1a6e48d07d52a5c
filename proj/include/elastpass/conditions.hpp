#pragma once

#include <string>
#include <vector>

#include "elastpass/models.hpp"

namespace elastpass {
namespace conditions {

// One inequality row. lhs/rhs are the two sides as written in the
// closed-form condition; `informational` rows are reported but do not
// enter the overall verdict (e.g. bounds implied by the decisive ones).
struct ConditionRow {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string op;  // one of "<=", ">=", "<", ">"
  bool satisfied = false;
  bool informational = false;

  // signed distance to the boundary, positive on the satisfied side,
  // normalized by the magnitude of the sides
  double margin() const;
};

struct ConditionReport {
  std::string id;          // e.g. "sea-null-pp"
  std::vector<ConditionRow> rows;
  bool passive = false;    // AND of the non-informational rows
  bool sufficientOnly = false;  // true for feasibility sets that are only
                                // sufficient for passivity

  double minMargin() const;  // over non-informational rows
};

// Closed-form passivity conditions per architecture. Each evaluator
// rejects calls for the wrong architecture with ConfigError.
ConditionReport seaNullPP(const PlantParams& p, const ControllerGains& g);
ConditionReport seaNullPPI(const PlantParams& p, const ControllerGains& g);
ConditionReport seaSpringPP(const PlantParams& p, const ControllerGains& g,
                            double Kd);
ConditionReport sdeaNullPP(const PlantParams& p, const ControllerGains& g);
ConditionReport sdeaSpringPP(const PlantParams& p, const ControllerGains& g,
                             double Kd);

// Dispatch on the case architecture.
ConditionReport closedFormReport(const ClosedLoopCase& c);

// Supremum of the passively renderable virtual stiffness
// K_vir = alpha/(alpha+1) Kd under proportional control. Equals the filter
// stiffness K for the undamped plant; for the damped plant the square-root
// condition is intersected, solved by bisection on Kd (with a runtime
// monotonicity check on the sampled condition).
double maxPassiveVirtualStiffness(const PlantParams& p,
                                  const ControllerGains& g);

// Element-nonnegativity inequalities of the physical equivalents. For the
// three proportional-only cases these coincide with the passivity
// conditions; for the remaining two they are sufficient only
// (sufficientOnly is set accordingly).
ConditionReport realizationFeasibility(const ClosedLoopCase& c);

}  // namespace conditions
}  // namespace elastpass
