#include "elastpass/synthesis.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace elastpass {

MechNetwork MechNetwork::element(ElementKind kind, double value,
                                 std::string label) {
  if (!std::isfinite(value))
    throw std::domain_error("network element '" + label + "' is not finite");
  MechNetwork n;
  n.root_.type = Node::Type::Element;
  n.root_.element = {kind, value, std::move(label)};
  return n;
}

MechNetwork MechNetwork::series(std::vector<MechNetwork> parts) {
  if (parts.empty()) throw std::domain_error("series composition of nothing");
  MechNetwork n;
  n.root_.type = Node::Type::Series;
  for (auto& p : parts) n.root_.children.push_back(std::move(p.root_));
  return n;
}

MechNetwork MechNetwork::parallel(std::vector<MechNetwork> parts) {
  if (parts.empty()) throw std::domain_error("parallel composition of nothing");
  MechNetwork n;
  n.root_.type = Node::Type::Parallel;
  for (auto& p : parts) n.root_.children.push_back(std::move(p.root_));
  return n;
}

namespace {

void walk(const MechNetwork::Node& node,
          const std::function<void(const MechElement&)>& fn) {
  if (node.type == MechNetwork::Node::Type::Element) {
    fn(node.element);
    return;
  }
  for (const auto& c : node.children) walk(c, fn);
}

}  // namespace

void MechNetwork::forEachElement(
    const std::function<void(const MechElement&)>& fn) const {
  walk(root_, fn);
}

std::vector<MechElement> MechNetwork::elements() const {
  std::vector<MechElement> out;
  forEachElement([&](const MechElement& e) { out.push_back(e); });
  return out;
}

namespace {

using Rat = RationalFunction<double>;
using Poly = Polynomial<double>;

Rat elementImpedance(const MechElement& e) {
  switch (e.kind) {
    case ElementKind::Spring:
      return {Poly{e.value}, Poly{0.0, 1.0}};
    case ElementKind::Damper:
      return Rat::constant(e.value);
    case ElementKind::Inerter:
      return {Poly{0.0, e.value}, Poly{1.0}};
  }
  throw std::logic_error("unreachable");
}

// series pair: Z1 Z2 / (Z1 + Z2), formed without the spurious D1 D2 factor
Rat seriesPair(const Rat& a, const Rat& b) {
  return {a.num() * b.num(), a.num() * b.den() + b.num() * a.den()};
}

Rat nodeImpedance(const MechNetwork::Node& node) {
  if (node.type == MechNetwork::Node::Type::Element)
    return elementImpedance(node.element);
  Rat acc = nodeImpedance(node.children.front());
  for (size_t i = 1; i < node.children.size(); ++i) {
    const Rat zi = nodeImpedance(node.children[i]);
    acc = node.type == MechNetwork::Node::Type::Series ? seriesPair(acc, zi)
                                                       : acc + zi;
  }
  return acc;
}

}  // namespace

RationalFunction<double> networkImpedance(const MechNetwork& net) {
  return normalized(nodeImpedance(net.root()));
}

FeasibilityResult feasibility(const MechNetwork& net) {
  FeasibilityResult out;
  net.forEachElement([&](const MechElement& e) {
    if (!(e.value >= 0.0)) {
      out.feasible = false;
      out.offenders.push_back(e);
    }
  });
  return out;
}

MechNetwork realize(const ClosedLoopCase& c) {
  const auto& p = c.plant;
  const auto& g = c.gains;
  const double a = g.alpha();
  const double a1 = a + 1.0;
  const double bg = p.Bm + g.Gm;
  const bool sdea = p.isSdea();

  if (!g.isPP() && (sdea || c.env.isSpring()))
    throw ConfigError("realize: no realization for this configuration");

  auto spring = [](double v, const char* l) {
    return MechNetwork::element(ElementKind::Spring, v, l);
  };
  auto damper = [](double v, const char* l) {
    return MechNetwork::element(ElementKind::Damper, v, l);
  };
  auto inerter = [](double v, const char* l) {
    return MechNetwork::element(ElementKind::Inerter, v, l);
  };

  // filter branch: spring K, with damper Bf alongside for the damped plant
  auto filter = [&]() {
    if (!sdea) return spring(p.K, "K");
    return MechNetwork::parallel({spring(p.K, "K"), damper(p.Bf, "Bf")});
  };

  if (!c.env.isSpring()) {
    if (a1 == 0.0) return filter();  // limit network: controller branch drops out

    if (g.isPP()) {
      return MechNetwork::series(
          {filter(), MechNetwork::parallel({damper(bg / a1, "c_par"),
                                            inerter(p.Jm / a1, "b_par")})});
    }
    // integral velocity gain splits the damper into a direct part and a
    // frequency-dependent serial damper-inerter pair
    const double c1n = 1.0 / g.Gt;
    const double c2n = (p.Bm - 1.0 / g.Gt) / a1 - g.Gt * g.Im * p.Jm / (a1 * a1);
    const double b1n = (p.Bm * g.Gt - 1.0) / (g.Gt * g.Gt * g.Im) - p.Jm / a1;
    return MechNetwork::series(
        {filter(),
         MechNetwork::parallel(
             {damper(c1n, "c1n"),
              MechNetwork::series({damper(c2n, "c2n"), inerter(b1n, "b1n")}),
              inerter(p.Jm / a1, "b_par")})});
  }

  // spring rendering
  if (a1 == 0.0)
    throw ConfigError("realize: virtual springs cannot be rendered at alpha+1 = 0");
  const double Kd = c.env.Kd;
  const double kvir = a / a1 * Kd;
  const double kc = p.K - kvir;
  const double sigma = 1.0 / a1 - a / (a1 * a1) * Kd / p.K;

  if (!sdea) {
    return MechNetwork::parallel(
        {spring(kvir, "K_vir"),
         MechNetwork::series(
             {spring(kc, "K_c"),
              MechNetwork::parallel({damper(sigma * bg, "sigma_c"),
                                     inerter(sigma * p.Jm, "sigma_b")})})});
  }

  const double c1s = Kd * a * (p.Bf * bg - p.Jm * p.K) / (p.Bf * p.K * a1 * a1);
  const double b1s = Kd * a * (p.Bf * bg - p.Jm * p.K) / (p.K * p.K * a1 * a1);
  return MechNetwork::parallel(
      {spring(kvir, "K_vir"),
       MechNetwork::series(
           {MechNetwork::parallel({spring(kc, "K_c"), damper(p.Bf, "Bf")}),
            MechNetwork::parallel(
                {damper(sigma * bg, "sigma_c"), inerter(p.Jm / a1, "b_par"),
                 MechNetwork::series(
                     {damper(c1s, "c1s"), inerter(b1s, "b1s")})})})});
}

namespace {

const char* kindName(ElementKind k) {
  switch (k) {
    case ElementKind::Spring: return "spring";
    case ElementKind::Damper: return "damper";
    case ElementKind::Inerter: return "inerter";
  }
  return "?";
}

int emitDot(const MechNetwork::Node& node, std::ostringstream& os, int& id) {
  const int self = id++;
  if (node.type == MechNetwork::Node::Type::Element) {
    os << "  n" << self << " [shape=box,label=\"" << node.element.label << "\\n"
       << kindName(node.element.kind) << " = " << node.element.value << "\"];\n";
    return self;
  }
  os << "  n" << self << " [label=\""
     << (node.type == MechNetwork::Node::Type::Series ? "series" : "parallel")
     << "\"];\n";
  for (const auto& ch : node.children) {
    const int cid = emitDot(ch, os, id);
    os << "  n" << self << " -> n" << cid << ";\n";
  }
  return self;
}

}  // namespace

std::string toGraphviz(const MechNetwork& net) {
  std::ostringstream os;
  os << "digraph mech_network {\n  rankdir=TB;\n";
  int id = 0;
  emitDot(net.root(), os, id);
  os << "}\n";
  return os.str();
}

}  // namespace elastpass
