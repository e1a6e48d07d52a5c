#include "elastpass/cli_app.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "elastpass/analysis.hpp"
#include "elastpass/conditions.hpp"
#include "elastpass/coupsim.hpp"
#include "elastpass/json_io.hpp"
#include "elastpass/passivity.hpp"
#include "elastpass/synthesis.hpp"

namespace elastpass {
namespace {

using nlohmann::json;

int logLevel() {
  const char* v = std::getenv("ELASTPASS_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void logInfo(const std::string& msg) {
  if (logLevel() >= 1) std::cerr << "[elastpass] " << msg << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct GridSpec {
  double lo = 1e-2, hi = 1e5;
  int n = 1000;
  std::string str() const {
    return fmt(lo) + ":" + fmt(hi) + ":" + std::to_string(n);
  }
};

GridSpec parseGrid(const std::string& s) {
  GridSpec g;
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("--grid expects lo:hi:n");
  try {
    g.lo = std::stod(s.substr(0, c1));
    g.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    g.n = std::stoi(s.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ConfigError("--grid expects lo:hi:n with numeric bounds");
  }
  if (!(g.lo > 0.0) || !(g.hi > g.lo) || g.n < 2)
    throw ConfigError("--grid needs 0 < lo < hi and n >= 2");
  return g;
}

json metaBlock(const RunConfig& cfg, const std::string& command) {
  return {{"tool", "elastpass"},
          {"command", command},
          {"case", toJson(cfg.effectiveCase())},
          {"input_case", toJson(cfg.caseSpec)},
          {"gear_ratio", cfg.gearRatio ? json(*cfg.gearRatio) : json(nullptr)},
          {"tolerances",
           {{"rhp_pole_eps", kRhpEps},
            {"residue_eps", kResEps},
            {"eig_eps", kEigEps},
            {"energy_eps", kEnergyEps}}}};
}

void emit(const std::string& outPath, const std::string& content) {
  if (outPath.empty()) {
    std::cout << content;
    return;
  }
  writeFileAtomic(outPath, content);
  logInfo("wrote " + outPath);
}

std::string csvHeader(const RunConfig& cfg, const std::string& command,
                      const GridSpec& grid) {
  std::ostringstream os;
  os << "# elastpass " << command << "\n";
  os << "# case: " << cfg.effectiveCase().describe() << "\n";
  os << "# config: " << toJson(cfg.effectiveCase()).dump() << "\n";
  os << "# grid: " << grid.str() << "\n";
  return os.str();
}

void printConditionTable(const conditions::ConditionReport& rep,
                         std::ostream& os) {
  os << "closed form [" << rep.id << "]: "
     << (rep.passive ? "PASSIVE" : "NOT PASSIVE")
     << (rep.sufficientOnly ? "  (sufficient conditions)" : "") << "\n";
  for (const auto& r : rep.rows) {
    os << "  " << (r.satisfied ? "[ok]  " : "[FAIL]") << " " << r.label
       << ": " << fmt(r.lhs) << " " << r.op << " " << fmt(r.rhs);
    if (r.informational) os << "  (informational)";
    os << "\n";
  }
}

int cmdCheck(const RunConfig& cfg, const std::string& outPath, bool engineOnly,
             bool closedFormOnly) {
  const ClosedLoopCase c = cfg.effectiveCase();
  json out{{"meta", metaBlock(cfg, "check")}};
  bool passive = false;
  bool havePassive = false;

  std::ostringstream text;
  text << "case: " << c.describe()
       << (c.closedFormVerified() ? "" : "  [unverified-against-closed-forms]")
       << "\n";

  if (!closedFormOnly) {
    const PassivityVerdict v = isPositiveReal(outputImpedance(c));
    out["engine"] = toJson(v);
    passive = v.passive;
    havePassive = true;
    text << "engine: " << (v.passive ? "PASSIVE" : "NOT PASSIVE") << "\n"
         << "  (1) no right-half-plane poles: " << (v.cond1.ok ? "ok" : "FAIL")
         << "  margin " << fmt(v.cond1.margin) << "\n"
         << "  (2) Re Z(jw) >= 0:              " << (v.cond2.ok ? "ok" : "FAIL")
         << "  margin " << fmt(v.cond2.margin) << "\n"
         << "  (3) imaginary-axis residues:    " << (v.cond3.ok ? "ok" : "FAIL")
         << "  margin " << fmt(v.cond3.margin) << "\n";
    if (v.cond2.witness)
      text << "      witness: Re Z(j*" << fmt(v.cond2.witness->first)
           << ") = " << fmt(v.cond2.witness->second) << "\n";
  }
  if (!engineOnly) {
    try {
      const auto rep = conditions::closedFormReport(c);
      out["closed_form"] = toJson(rep);
      if (!havePassive) {
        passive = rep.passive;
        havePassive = true;
      }
      printConditionTable(rep, text);
    } catch (const ConfigError& e) {
      if (closedFormOnly) throw;
      out["closed_form"] = nullptr;
      text << "closed form: not available (" << e.what() << ")\n";
    }
  }

  out["passive"] = passive;
  std::cout << text.str();
  if (!outPath.empty()) writeFileAtomic(outPath, out.dump(2) + "\n");
  return passive ? 0 : 2;
}

int cmdRealize(const RunConfig& cfg, const std::string& outPath) {
  const ClosedLoopCase c = cfg.effectiveCase();
  const MechNetwork net = realize(c);
  const FeasibilityResult feas = feasibility(net);

  json out{{"meta", metaBlock(cfg, "realize")},
           {"network", toJson(net)},
           {"graphviz", toGraphviz(net)},
           {"feasible", feas.feasible}};
  json elems = json::array();
  double tableDamper = std::numeric_limits<double>::quiet_NaN();
  double tableInerter = std::numeric_limits<double>::quiet_NaN();
  net.forEachElement([&](const MechElement& e) {
    const char* kind = e.kind == ElementKind::Spring    ? "spring"
                       : e.kind == ElementKind::Damper ? "damper"
                                                        : "inerter";
    elems.push_back({{"label", e.label}, {"kind", kind}, {"value", e.value}});
    if (e.label == "c_par" || e.label == "c1n" || e.label == "sigma_c")
      tableDamper = e.value;
    if (e.label == "b_par" || e.label == "sigma_b") tableInerter = e.value;
  });
  out["elements"] = elems;
  out["table"] = {{"damper", tableDamper}, {"inerter", tableInerter}};
  json offenders = json::array();
  for (const auto& e : feas.offenders)
    offenders.push_back({{"label", e.label}, {"value", e.value}});
  out["offenders"] = offenders;

  std::cout << "case: " << c.describe() << "\n";
  std::cout << "element            kind      value\n";
  net.forEachElement([&](const MechElement& e) {
    const char* kind = e.kind == ElementKind::Spring    ? "spring "
                       : e.kind == ElementKind::Damper ? "damper "
                                                        : "inerter";
    std::printf("%-18s %s  %s\n", e.label.c_str(), kind, fmt(e.value).c_str());
  });
  std::cout << "parallel damper  = " << fmt(tableDamper) << "\n";
  std::cout << "parallel inerter = " << fmt(tableInerter) << "\n";
  std::cout << "feasible: " << (feas.feasible ? "yes" : "no") << "\n";
  for (const auto& e : feas.offenders)
    std::cout << "  offender: " << e.label << " = " << fmt(e.value) << "\n";

  if (!outPath.empty()) writeFileAtomic(outPath, out.dump(2) + "\n");
  return feas.feasible ? 0 : 2;
}

std::string analysisCsv(const RunConfig& cfg, const std::string& command,
                        const GridSpec& gs, const RationalFunction<double>& z) {
  const FrequencyGrid grid = FrequencyGrid::logspace(gs.lo, gs.hi, gs.n);
  const auto dec = effectiveDecompose(z, grid);
  const auto bp = bode(z, grid);

  std::ostringstream os;
  os << csvHeader(cfg, command, gs);
  os << "omega_rad_s,re,im,mag_db,phase_deg,c_eff,k_eff,b_eff\n";
  for (size_t i = 0; i < grid.omega.size(); ++i) {
    const auto v = z.evalJw(grid.omega[i]);
    const auto& s = dec.samples[i];
    os << fmt(grid.omega[i]) << "," << fmt(v.real()) << "," << fmt(v.imag())
       << "," << fmt(bp[i].magDb) << "," << fmt(bp[i].phaseDeg) << ","
       << fmt(s.ceff) << ",";
    if (v.imag() < 0.0)
      os << fmt(s.keff);
    os << ",";
    if (v.imag() > 0.0)
      os << fmt(s.beff);
    os << "\n";
  }
  return os.str();
}

int cmdBode(const RunConfig& cfg, const std::string& outPath,
            const GridSpec& gs) {
  emit(outPath, analysisCsv(cfg, "bode", gs, outputImpedance(cfg.effectiveCase())));
  return 0;
}

int cmdEffective(const RunConfig& cfg, const std::string& outPath,
                 const GridSpec& gs, bool parasitic) {
  const ClosedLoopCase c = cfg.effectiveCase();
  const RationalFunction<double> z =
      parasitic ? parasiticBranch(c) : outputImpedance(c);
  emit(outPath, analysisCsv(cfg, parasitic ? "effective --parasitic" : "effective",
                            gs, z));
  return 0;
}

int cmdSimulate(const RunConfig& cfg, const std::string& outPath,
                const std::string& envKind, double envValue, double impulse,
                double dt, double duration) {
  const ClosedLoopCase c = cfg.effectiveCase();
  if (!envKind.empty() && envKind != "inertia")
    throw ConfigError("simulate: --env-kind inertia is required");
  const CoupledEnv env = CoupledEnv::inertia(envValue);
  if (dt <= 0.0) dt = defaultTimestep(c, env);
  logInfo("simulate dt = " + fmt(dt));
  const SimResult r = simulate(c, env, impulse, dt, duration);

  std::ostringstream os;
  os << "# elastpass simulate\n";
  os << "# config: " << toJson(c).dump() << "\n";
  os << "# env: inertia " << fmt(envValue) << ", impulse " << fmt(impulse)
     << ", dt " << fmt(dt) << ", T " << fmt(duration) << "\n";
  if (r.diverged)
    os << "# diverged at t = " << fmt(r.divergenceTime) << "\n";
  os << "t,omega_m,omega_end,tau_sea,E\n";
  for (size_t i = 0; i < r.t.size(); ++i)
    os << fmt(r.t[i]) << "," << fmt(r.omegaM[i]) << "," << fmt(r.omegaEnd[i])
       << "," << fmt(r.tauSea[i]) << "," << fmt(r.energy[i]) << "\n";
  emit(outPath, os.str());
  return 0;
}

int cmdSweep(const RunConfig& cfg, const std::string& outPath,
             const std::string& axes, const GridSpec& gx, const GridSpec& gy,
             const std::string& envKind) {
  const ClosedLoopCase base = cfg.effectiveCase();

  if (!envKind.empty()) {
    // environment sweep: spectral abscissa per coupled environment value
    const CoupledEnv::Kind kind = envKind == "inertia"
                                      ? CoupledEnv::Kind::Inertia
                                      : CoupledEnv::Kind::Spring;
    if (envKind != "inertia" && envKind != "spring")
      throw ConfigError("--env-kind must be inertia or spring");
    const FrequencyGrid grid = FrequencyGrid::logspace(gx.lo, gx.hi, gx.n);
    const auto points = eigSweep(base, kind, grid.omega);
    json out{{"meta", metaBlock(cfg, "sweep --env-kind " + envKind)},
             {"env_kind", envKind},
             {"grid", gx.str()},
             {"points", json::array()}};
    for (const auto& pt : points)
      out["points"].push_back({{"value", pt.envValue},
                               {"max_re_eig", pt.maxRealEig},
                               {"stable", pt.stable}});
    emit(outPath, out.dump(2) + "\n");
    return 0;
  }

  if (axes != "gt,im" && axes != "gt,kvir")
    throw ConfigError("--axes must be gt,im or gt,kvir (or use --env-kind)");

  std::ostringstream os;
  os << csvHeader(cfg, "sweep --axes " + axes, gx);
  os << "# grid_y: " << gy.str() << "\n";

  auto logPoint = [](const GridSpec& g, int i) {
    return std::exp(std::log(g.lo) +
                    (std::log(g.hi) - std::log(g.lo)) * i / (g.n - 1));
  };

  if (axes == "gt,im") {
    os << "Gt,Im,passive,margin\n";
    for (int i = 0; i < gx.n; ++i) {
      for (int j = 0; j < gy.n; ++j) {
        ControllerGains g = base.gains;
        g.Gt = logPoint(gx, i);
        g.Im = logPoint(gy, j);
        const auto rep = conditions::seaNullPPI(base.plant, g);
        os << fmt(g.Gt) << "," << fmt(g.Im) << ","
           << (rep.passive ? 1 : 0) << "," << fmt(rep.minMargin()) << "\n";
      }
    }
  } else {
    os << "Gt,K_vir,passive,margin\n";
    for (int i = 0; i < gx.n; ++i) {
      for (int j = 0; j < gy.n; ++j) {
        ControllerGains g = base.gains;
        g.Gt = logPoint(gx, i);
        g.Im = 0.0;
        const double a = g.alpha();
        const double kvir = logPoint(gy, j);
        if (a <= 0.0 || a + 1.0 <= 0.0) {
          os << fmt(g.Gt) << "," << fmt(kvir) << ",0,nan\n";
          continue;
        }
        const double Kd = kvir * (a + 1.0) / a;
        const auto rep =
            base.plant.isSdea()
                ? conditions::sdeaSpringPP(base.plant, g, Kd)
                : conditions::seaSpringPP(base.plant, g, Kd);
        os << fmt(g.Gt) << "," << fmt(kvir) << "," << (rep.passive ? 1 : 0)
           << "," << fmt(rep.minMargin()) << "\n";
      }
    }
  }
  emit(outPath, os.str());
  return 0;
}

}  // namespace

int runCli(int argc, const char* const* argv) {
  CLI::App app{
      "elastpass: frequency-domain passivity, passive network synthesis and "
      "rendering analysis for series (damped) elastic actuators under "
      "velocity-sourced impedance control"};
  app.require_subcommand(1);

  std::string configPath, outPath, gridStr, gridYStr, axes, envKind;
  bool engineOnly = false, closedFormOnly = false, parasitic = false;
  double envValue = 0.01, impulse = 1.0, dt = 0.0, duration = 2.0;

  auto addCommon = [&](CLI::App* sub) {
    sub->add_option("--config", configPath, "case JSON file")->required();
    sub->add_option("--out", outPath, "output file (atomic write)");
  };

  auto* check = app.add_subcommand("check", "passivity verdict");
  addCommon(check);
  check->add_flag("--engine", engineOnly, "engine verdict only");
  check->add_flag("--closed-form", closedFormOnly, "closed-form conditions only");

  auto* realizeCmd = app.add_subcommand("realize", "physical equivalent network");
  addCommon(realizeCmd);

  auto* bodeCmd = app.add_subcommand("bode", "frequency response CSV");
  addCommon(bodeCmd);
  bodeCmd->add_option("--grid", gridStr, "frequency grid lo:hi:n");

  auto* effCmd = app.add_subcommand("effective", "effective impedance CSV");
  addCommon(effCmd);
  effCmd->add_option("--grid", gridStr, "frequency grid lo:hi:n");
  effCmd->add_flag("--parasitic", parasitic,
                   "decompose the extracted parasitic branch");

  auto* simCmd = app.add_subcommand("simulate", "coupled impulse response CSV");
  addCommon(simCmd);
  simCmd->add_option("--env-kind", envKind, "inertia");
  simCmd->add_option("--env-value", envValue, "environment value")->required();
  simCmd->add_option("--impulse", impulse, "impulse magnitude, N m s");
  simCmd->add_option("--dt", dt, "step size; 0 picks min(1e-4, 0.01/|eig|max)");
  simCmd->add_option("--duration", duration, "simulated time, s");

  auto* sweepCmd = app.add_subcommand(
      "sweep", "passivity boundary map or coupled-stability sweep");
  addCommon(sweepCmd);
  sweepCmd->add_option("--axes", axes, "gt,im | gt,kvir");
  sweepCmd->add_option("--grid", gridStr, "x grid lo:hi:n");
  sweepCmd->add_option("--grid-y", gridYStr, "y grid lo:hi:n");
  sweepCmd->add_option("--env-kind", envKind,
                       "environment sweep instead: inertia | spring");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = loadRunConfig(configPath);
    GridSpec gx{1e-2, 1e5, 1000};
    if (!gridStr.empty()) gx = parseGrid(gridStr);
    GridSpec gy = gx;
    if (!gridYStr.empty()) gy = parseGrid(gridYStr);

    if (check->parsed()) return cmdCheck(cfg, outPath, engineOnly, closedFormOnly);
    if (realizeCmd->parsed()) return cmdRealize(cfg, outPath);
    if (bodeCmd->parsed()) return cmdBode(cfg, outPath, gx);
    if (effCmd->parsed()) return cmdEffective(cfg, outPath, gx, parasitic);
    if (simCmd->parsed())
      return cmdSimulate(cfg, outPath, envKind, envValue, impulse, dt, duration);
    if (sweepCmd->parsed())
      return cmdSweep(cfg, outPath, axes, gx, gy, envKind);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace elastpass
