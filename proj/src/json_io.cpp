#include "elastpass/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace elastpass {

using nlohmann::json;

namespace {

double requireNumber(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing required field '" + key + "'");
  if (!j.at(key).is_number())
    throw ConfigError(ctx + ": field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double optionalNumber(const json& j, const std::string& ctx, const char* key,
                      double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(ctx + ": field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

void rejectUnknown(const json& j, const std::string& ctx,
                   std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError(ctx + ": unknown field '" + key + "'");
  }
}

}  // namespace

ClosedLoopCase RunConfig::effectiveCase() const {
  if (!gearRatio) return caseSpec;
  auto [p, g] = reflectThroughGear(caseSpec.plant, caseSpec.gains, *gearRatio);
  return ClosedLoopCase(p, g, caseSpec.env);
}

RunConfig parseRunConfig(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  rejectUnknown(j, "config", {"plant", "gains", "env", "gear"});
  if (!j.contains("plant") || !j.contains("gains"))
    throw ConfigError("config: 'plant' and 'gains' are required");

  const json& jp = j.at("plant");
  rejectUnknown(jp, "plant", {"Jm", "Bm", "K", "Bf"});
  PlantParams plant;
  plant.Jm = requireNumber(jp, "plant", "Jm");
  plant.Bm = requireNumber(jp, "plant", "Bm");
  plant.K = requireNumber(jp, "plant", "K");
  plant.Bf = optionalNumber(jp, "plant", "Bf", 0.0);

  const json& jg = j.at("gains");
  rejectUnknown(jg, "gains", {"Gt", "Gm", "Im"});
  ControllerGains gains;
  gains.Gt = requireNumber(jg, "gains", "Gt");
  gains.Gm = requireNumber(jg, "gains", "Gm");
  gains.Im = optionalNumber(jg, "gains", "Im", 0.0);

  VirtualEnv env = VirtualEnv::null();
  if (j.contains("env")) {
    const json& je = j.at("env");
    rejectUnknown(je, "env", {"kind", "Kd"});
    if (!je.contains("kind") || !je.at("kind").is_string())
      throw ConfigError("env: 'kind' must be \"null\" or \"spring\"");
    const std::string kind = je.at("kind").get<std::string>();
    if (kind == "null") {
      env = VirtualEnv::null();
    } else if (kind == "spring") {
      env = VirtualEnv::spring(requireNumber(je, "env", "Kd"));
    } else {
      throw ConfigError("env: 'kind' must be \"null\" or \"spring\"");
    }
  }

  RunConfig cfg{ClosedLoopCase(plant, gains, env), std::nullopt};
  if (j.contains("gear")) {
    const json& jn = j.at("gear");
    rejectUnknown(jn, "gear", {"n"});
    cfg.gearRatio = requireNumber(jn, "gear", "n");
    (void)cfg.effectiveCase();  // validate the mapped case as well
  }
  return cfg;
}

RunConfig loadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parseRunConfig(j);
}

json toJson(const PlantParams& p) {
  return {{"Jm", p.Jm}, {"Bm", p.Bm}, {"K", p.K}, {"Bf", p.Bf}};
}

json toJson(const ControllerGains& g) {
  return {{"Gt", g.Gt}, {"Gm", g.Gm}, {"Im", g.Im}, {"alpha", g.alpha()}};
}

json toJson(const VirtualEnv& e) {
  json j{{"kind", e.isSpring() ? "spring" : "null"}};
  if (e.isSpring()) j["Kd"] = e.Kd;
  return j;
}

json toJson(const ClosedLoopCase& c) {
  return {{"plant", toJson(c.plant)},
          {"gains", toJson(c.gains)},
          {"env", toJson(c.env)},
          {"architecture", c.describe()},
          {"closed_form_verified", c.closedFormVerified()}};
}

namespace {

json complexJson(const std::complex<double>& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

json toJson(const PassivityVerdict& v) {
  json c1{{"ok", v.cond1.ok}, {"margin", v.cond1.margin}};
  c1["offending_poles"] = json::array();
  for (const auto& p : v.cond1.offendingPoles)
    c1["offending_poles"].push_back(complexJson(p));

  json c2{{"ok", v.cond2.ok}, {"margin", v.cond2.margin}};
  if (v.cond2.witness)
    c2["witness"] = {{"omega", v.cond2.witness->first},
                     {"re_Z", v.cond2.witness->second}};

  json c3{{"ok", v.cond3.ok}, {"margin", v.cond3.margin}};
  c3["residues"] = json::array();
  for (const auto& r : v.cond3.records)
    c3["residues"].push_back({{"pole", complexJson(r.pole)},
                              {"residue", complexJson(r.residue)},
                              {"simple", r.simple},
                              {"ok", r.ok}});

  return {{"passive", v.passive},
          {"no_rhp_poles", c1},
          {"nonnegative_real_part", c2},
          {"imag_axis_residues", c3}};
}

json toJson(const conditions::ConditionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"label", row.label},
                    {"lhs", row.lhs},
                    {"op", row.op},
                    {"rhs", row.rhs},
                    {"satisfied", row.satisfied},
                    {"informational", row.informational},
                    {"margin", row.margin()}});
  return {{"id", r.id},
          {"passive", r.passive},
          {"sufficient_only", r.sufficientOnly},
          {"conditions", rows}};
}

namespace {

json nodeJson(const MechNetwork::Node& n) {
  using Type = MechNetwork::Node::Type;
  if (n.type == Type::Element) {
    const char* kind = n.element.kind == ElementKind::Spring    ? "spring"
                       : n.element.kind == ElementKind::Damper ? "damper"
                                                               : "inerter";
    return {{"element", {{"kind", kind},
                         {"value", n.element.value},
                         {"label", n.element.label}}}};
  }
  json kids = json::array();
  for (const auto& c : n.children) kids.push_back(nodeJson(c));
  return {{n.type == Type::Series ? "series" : "parallel", kids}};
}

}  // namespace

json toJson(const MechNetwork& net) { return nodeJson(net.root()); }

void writeFileAtomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("atomic rename to " + path + " failed: " +
                             ec.message());
  }
}

}  // namespace elastpass
