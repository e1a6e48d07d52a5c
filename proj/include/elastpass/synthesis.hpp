#pragma once

#include <functional>
#include <string>
#include <vector>

#include "elastpass/models.hpp"
#include "elastpass/rational.hpp"

namespace elastpass {

enum class ElementKind { Spring, Damper, Inerter };

// Two-terminal element. Spring in N m/rad, damper in N m s/rad, inerter in
// kg m^2. A realization is feasible iff every element value is >= 0.
struct MechElement {
  ElementKind kind;
  double value;
  std::string label;
};

// Composition tree of elements. Mechanical impedance convention, fixed
// project-wide: series children share force (impedances combine
// reciprocally), parallel children share velocity (impedances add). The
// port is at the root, between end-effector terminal and ground.
class MechNetwork {
 public:
  struct Node {
    enum class Type { Element, Series, Parallel };
    Type type = Type::Element;
    MechElement element{ElementKind::Damper, 0.0, ""};
    std::vector<Node> children;
  };

  static MechNetwork element(ElementKind kind, double value, std::string label);
  static MechNetwork series(std::vector<MechNetwork> parts);
  static MechNetwork parallel(std::vector<MechNetwork> parts);

  const Node& root() const { return root_; }
  void forEachElement(const std::function<void(const MechElement&)>& fn) const;
  std::vector<MechElement> elements() const;

 private:
  MechNetwork() = default;
  Node root_;
};

// Passive physical equivalent of the closed-loop output impedance, with the
// element values from their closed-form expressions. Covers the five
// realized configurations; the alpha+1 = 0 null-rendering cases return
// their limit networks (pure filter spring, or filter spring-damper pair).
MechNetwork realize(const ClosedLoopCase& c);

// Driving-point impedance of the tree (spring k/s, damper c, inerter b s,
// composed by the series/parallel rules), normalized.
RationalFunction<double> networkImpedance(const MechNetwork& net);

struct FeasibilityResult {
  bool feasible = true;
  std::vector<MechElement> offenders;
};

// All element values non-negative?
FeasibilityResult feasibility(const MechNetwork& net);

// Graphviz source describing the composition tree.
std::string toGraphviz(const MechNetwork& net);

}  // namespace elastpass
