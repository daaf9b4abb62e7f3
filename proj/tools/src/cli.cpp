#include "consgain/cli.hpp"

#include "consgain/errors.hpp"
#include "consgain/experiments.hpp"
#include "consgain/gain.hpp"
#include "consgain/graph.hpp"
#include "consgain/oracle.hpp"
#include "consgain/simulator.hpp"
#include "consgain/spectral.hpp"
#include "consgain/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace consgain::cli {
namespace {

using nlohmann::json;

// Above this size the transfer-matrix oracle is skipped by `analyze --verify`.
constexpr std::size_t kFullOracleMaxVertices = 64;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Thrown for a disconnected graph; carries the component listing.
struct Disconnected {
  std::string message;
};

struct GraphSource {
  std::string family;
  std::size_t n = 0;
  std::size_t k = 1;
  std::string file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--family", family, "complete|star|path|ring")
        ->check(CLI::IsMember({"complete", "star", "path", "ring"}));
    cmd->add_option("--n", n, "vertex count")->check(CLI::Range(std::size_t{2}, kMaxVertices));
    cmd->add_option("--k", k, "ring lattice neighbour radius");
    cmd->add_option("--file", file, "edge list or JSON adjacency");
  }

  [[nodiscard]] std::string label() const {
    if (!file.empty()) return file;
    return family_label(family_spec());
  }

  [[nodiscard]] GraphFamily family_spec() const {
    GraphFamily f;
    f.kind = parse_family_kind(family);
    f.n = n;
    f.k = f.kind == FamilyKind::RingLattice ? k : 0;
    return f;
  }

  [[nodiscard]] Graph load() const {
    if (family.empty() == file.empty()) {
      throw ParameterError("give exactly one graph source: --family with --n, or --file");
    }
    if (!file.empty()) {
      Graph g = load_graph(file);
      if (g.size() > kMaxVertices) {
        throw ParameterError("graph has more than " + std::to_string(kMaxVertices) + " vertices");
      }
      return g;
    }
    if (n == 0) throw ParameterError("--family needs --n");
    return build_family(family_spec());
  }
};

// Loads the graph and stops with exit code 2 when it is not connected.
Graph connected_graph(const GraphSource& src) {
  Graph g = src.load();
  const auto parts = g.components();
  if (parts.size() > 1) {
    std::ostringstream msg;
    msg << "graph is disconnected (" << parts.size() << " components):";
    for (const auto& part : parts) {
      msg << " {";
      for (std::size_t i = 0; i < part.size(); ++i) msg << (i ? "," : "") << part[i];
      msg << '}';
    }
    throw Disconnected{msg.str()};
  }
  return g;
}

std::vector<Protocol> protocols(const std::string& choice) {
  if (choice == "abs") return {Protocol::Absolute};
  if (choice == "rel") return {Protocol::Relative};
  return {Protocol::Absolute, Protocol::Relative};
}

// Writes to --out when given, otherwise to stdout.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParameterError("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw ParameterError("failed writing '" + path + "'");
}

struct Common {
  bool json = false;
  std::string out;
};

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  GraphSource src;
  double alpha = 1.0;
  double beta = 1.0;
  std::string protocol = "both";
  bool verify = false;
};

void analyze(const AnalyzeArgs& a, const Common& c, std::ostream& out) {
  const Graph g = connected_graph(a.src);
  const Gains gains(a.alpha, a.beta);
  const Spectrum spec = spectrum(g);
  const double l2 = spec.algebraic_connectivity();
  const Density d = density(g);

  json doc;
  doc["command"] = "analyze";
  doc["graph"] = {{"source", a.src.label()},
                  {"n", g.size()},
                  {"edges", d.edges},
                  {"density", d.value()},
                  {"lambda2", l2}};
  doc["alpha"] = a.alpha;
  doc["beta"] = a.beta;

  std::ostringstream text;
  text << "graph      " << a.src.label() << "  n=" << g.size() << "  edges=" << d.edges
       << "  density=" << num(d.value()) << '\n'
       << "lambda2    " << num(l2) << '\n'
       << "gains      alpha=" << num(a.alpha) << "  beta=" << num(a.beta) << '\n';

  const bool full_ok = g.size() <= kFullOracleMaxVertices;
  std::vector<GainReport> reports;
  doc["reports"] = json::array();
  for (const Protocol p : protocols(a.protocol)) {
    const GainReport r = gain(p, l2, gains);
    reports.push_back(r);
    json entry = json::parse(to_json(r));
    text << to_string(p) << ":\n"
         << "  gain       " << num(r.value) << '\n'
         << "  threshold  " << num(r.threshold) << "  (" << to_string(r.branch) << ")\n"
         << "  worst_freq " << num(r.worst_freq) << '\n';
    if (a.verify) {
      const ModalNorm modal = hinf_modal(spec, p, gains);
      const double err_modal = std::abs(modal.value - r.value) / r.value;
      entry["oracle"] = {{"modal", modal.value}, {"modal_rel_err", err_modal}};
      text << "  modal      " << num(modal.value) << "  rel_err=" << num(err_modal) << '\n';
      if (full_ok) {
        const Peak full = hinf_fullmatrix(build_state_space(g, p, gains));
        const double err_full = std::abs(full.value - r.value) / r.value;
        entry["oracle"]["fullmatrix"] = full.value;
        entry["oracle"]["fullmatrix_rel_err"] = err_full;
        text << "  fullmatrix " << num(full.value) << "  rel_err=" << num(err_full) << '\n';
      } else {
        entry["oracle"]["fullmatrix"] = nullptr;
        text << "  fullmatrix skipped (n > " << kFullOracleMaxVertices << ")\n";
      }
    }
    doc["reports"].push_back(std::move(entry));
  }
  const Selection sel = select_protocol(l2);
  doc["verdict"] = std::string(to_string(sel.verdict));
  text << "verdict    " << to_string(sel.verdict) << '\n';
  if (reports.size() == 2) {
    const double diff = reports[0].value - reports[1].value;
    doc["difference"] = diff;
    text << "T1 - T2    " << num(diff) << '\n';
  }
  emit(c.json ? doc.dump(2) + '\n' : text.str(), c.out, out);
}

// --- select -----------------------------------------------------------------

void select(const GraphSource& src, const Common& c, std::ostream& out) {
  const Graph g = connected_graph(src);
  const double l2 = spectrum(g).algebraic_connectivity();
  const Selection sel = select_protocol(l2);
  if (c.json) {
    const json doc{{"command", "select"},
                   {"source", src.label()},
                   {"lambda2", l2},
                   {"tie_band", kTieBand},
                   {"verdict", std::string(to_string(sel.verdict))}};
    emit(doc.dump(2) + '\n', c.out, out);
    return;
  }
  emit(std::string(to_string(sel.verdict)) + "  (lambda2=" + num(l2) + ", tie band +/-" +
           num(kTieBand) + ")\n",
       c.out, out);
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
  GraphSource src;
  std::string alpha_range = "0.05:10:60";
  std::string beta_range = "0.05:10:60";
  bool linear = false;
  bool log = false;
  std::string protocol = "both";
};

void sweep(const SweepArgs& a, const Common& c, std::ostream& out) {
  const Graph g = connected_graph(a.src);
  const double l2 = spectrum(g).algebraic_connectivity();
  const bool log = !a.linear;
  const SweepGrid grid{parse_axis(a.alpha_range, log), parse_axis(a.beta_range, log)};
  if (a.protocol == "both") {
    const DifferenceSurface s = difference_surface(grid, l2);
    emit(c.json ? to_json(s) + '\n' : to_csv(s), c.out, out);
    return;
  }
  const GainSurface s = gain_surface(grid, l2, protocols(a.protocol).front());
  emit(c.json ? to_json(s) + '\n' : to_csv(s), c.out, out);
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  GraphSource src;
  double alpha = 1.0;
  double beta = 1.0;
  std::string protocol = "abs";
  std::string disturbance = "sine";
  double frequency = 1.0;
  double bandwidth = 1.0;
  double t_on = 10.0;
  double amplitude = 1.0;
  std::vector<double> weights;
  std::optional<double> horizon;
  std::optional<double> dt;
  bool worst_case = false;
  std::uint64_t seed = 42;
};

void simulate_cmd(const SimulateArgs& a, const Common& c, std::ostream& out) {
  if (a.protocol == "both") {
    throw ParameterError("simulate needs --protocol abs or rel");
  }
  const Graph g = connected_graph(a.src);
  const Protocol p = protocols(a.protocol).front();
  const Gains gains(a.alpha, a.beta);
  const Spectrum spec = spectrum(g);
  const double l2 = spec.algebraic_connectivity();
  const auto n = static_cast<Eigen::Index>(g.size());

  Disturbance d;
  if (a.worst_case) {
    d = worst_case_disturbance(g, p, gains, spec);
  } else {
    d.kind = a.disturbance == "pulse"   ? DisturbanceKind::Pulse
             : a.disturbance == "noise" ? DisturbanceKind::FilteredNoise
                                        : DisturbanceKind::TruncatedSine;
    d.frequency = a.frequency;
    d.bandwidth = a.bandwidth;
    d.t_on = a.t_on;
    d.amplitude = a.amplitude;
    d.seed = a.seed;
    if (a.weights.empty()) {
      // Default: disturb agent 1 only.
      d.weights = Eigen::VectorXd::Unit(n, 0);
    } else {
      if (static_cast<Eigen::Index>(a.weights.size()) != n) {
        throw ParameterError("--weights needs " + std::to_string(n) + " entries");
      }
      d.weights = Eigen::Map<const Eigen::VectorXd>(a.weights.data(), n);
    }
  }
  const double settle = 50.0 / (gains.alpha() * l2 * std::min(1.0, gains.beta()));
  const double horizon = a.horizon.value_or(d.t_on + settle);
  const double dt = a.dt.value_or(std::min(0.02, 0.9 * max_stable_dt(g, p, gains)));
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const SimTrace trace =
      simulate(g, p, gains, d, zero, zero, horizon, dt, {.keep_trajectories = !c.out.empty()});
  const double analytic = gain(p, l2, gains).value;
  const double empirical = empirical_gain(trace);

  if (!c.out.empty()) emit(to_csv(trace), c.out, out);

  if (c.json) {
    json doc{{"command", "simulate"},
             {"source", a.src.label()},
             {"protocol", std::string(to_string(p))},
             {"alpha", a.alpha},
             {"beta", a.beta},
             {"disturbance", std::string(to_string(d.kind))},
             {"frequency", d.frequency},
             {"t_on", d.t_on},
             {"horizon", horizon},
             {"dt", dt},
             {"analytic_gain", analytic},
             {"ratio", empirical / analytic}};
    doc["summary"] = json::parse(summary_json(trace));
    out << doc.dump(2) << '\n';
    return;
  }
  out << "disturbance " << to_string(d.kind) << "  freq=" << num(d.frequency)
      << "  t_on=" << num(d.t_on) << '\n'
      << "horizon     " << num(horizon) << "  dt=" << num(dt) << '\n'
      << "energy_in   " << num(trace.energy_in) << '\n'
      << "energy_out  " << num(trace.energy_out) << '\n'
      << "empirical   " << num(empirical) << '\n'
      << "analytic    " << num(analytic) << '\n'
      << "ratio       " << num(empirical / analytic) << '\n';
}

// --- table1 / density -------------------------------------------------------

void table1(std::size_t n_max, bool csv, const Common& c, std::ostream& out) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= n_max; ++n) ns.push_back(n);
  const auto rows = table1_report(ns);
  const std::string text = c.json ? table1_json(rows) + '\n' : csv ? table1_csv(rows)
                                                                   : table1_text(rows);
  emit(text, c.out, out);
}

GraphFamily parse_family_label(const std::string& label) {
  if (label.rfind("ring", 0) == 0 && label.size() > 4) {
    std::size_t k = 0;
    try {
      k = std::stoul(label.substr(4));
    } catch (const std::exception&) {
      throw ParameterError("bad family '" + label + "'");
    }
    return ring_lattice(k, 2 * k + 1);
  }
  GraphFamily f;
  f.kind = parse_family_kind(label);
  if (f.kind == FamilyKind::RingLattice) f.k = 1;
  return f;
}

void density_cmd(const std::vector<std::string>& labels, std::size_t n_max, const Common& c,
                 std::ostream& out) {
  std::vector<GraphFamily> families;
  for (const auto& label : labels) families.push_back(parse_family_label(label));
  const auto trends = density_trends(families, n_max);
  emit(c.json ? density_json(trends) + '\n' : density_csv(trends), c.out, out);
}

// --- verify -----------------------------------------------------------------

int verify(std::uint64_t seed, std::size_t cases, std::size_t sim_cases, const Common& c,
           const Hooks& hooks, std::ostream& out, std::ostream& err) {
  if (cases == 0) {
    err << "warning: --cases 0 runs no oracle cases; the oracle check passes vacuously\n";
  }
  const OracleSuiteReport oracle = run_oracle_suite(seed, cases, hooks.analytic);
  const SimSuiteReport sim = run_simulation_suite(seed, sim_cases, hooks.analytic);
  const bool ok = oracle.passed() && sim.passed();

  json doc{{"command", "verify"},
           {"seed", seed},
           {"passed", ok},
           {"oracle",
            {{"cases", oracle.cases},
             {"failures", oracle.failures},
             {"max_rel_err_modal", oracle.max_err_modal},
             {"max_rel_err_fullmatrix", oracle.max_err_full},
             {"max_peak_freq_err", oracle.max_freq_err},
             {"max_quartic_residual", oracle.max_residual}}},
           {"simulation",
            {{"runs", sim.runs}, {"violations", sim.violations}, {"max_ratio", sim.max_ratio}}}};
  if (oracle.first_failure) {
    doc["oracle"]["first_failure"] = json::parse(to_json(*oracle.first_failure));
    doc["oracle"]["first_failure_reason"] = oracle.first_failure_reason;
  }
  if (sim.first_violation) {
    doc["simulation"]["first_violation"] = json::parse(to_json(*sim.first_violation));
    doc["simulation"]["first_violation_detail"] = sim.first_violation_detail;
  }

  std::ostringstream text;
  text << "oracle      " << oracle.cases << " cases, " << oracle.failures << " failures\n"
       << "  max rel err modal      " << num(oracle.max_err_modal) << '\n'
       << "  max rel err fullmatrix " << num(oracle.max_err_full) << '\n'
       << "  max peak freq err      " << num(oracle.max_freq_err) << '\n'
       << "simulation  " << sim.runs << " runs, " << sim.violations << " violations, max ratio "
       << num(sim.max_ratio) << '\n'
       << (ok ? "PASS" : "FAIL") << '\n';
  emit(c.json ? doc.dump(2) + '\n' : text.str(), c.out, out);

  if (ok) return kOk;
  if (oracle.first_failure) {
    err << "oracle failure: " << oracle.first_failure_reason << '\n'
        << to_json(*oracle.first_failure) << '\n';
  }
  if (sim.first_violation) {
    err << "simulation violation: " << sim.first_violation_detail << '\n'
        << to_json(*sim.first_violation) << '\n';
  }
  return kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
  CLI::App app{"Disturbance gain analysis for second-order consensus networks", "consgain"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_flag("--json", common.json, "emit a single JSON document");
    cmd->add_option("--out", common.out, "write the output to a file");
  };
  auto add_gains = [](CLI::App* cmd, double& alpha, double& beta) {
    cmd->add_option("--alpha", alpha, "position gain")->check(CLI::PositiveNumber);
    cmd->add_option("--beta", beta, "velocity gain")->check(CLI::PositiveNumber);
  };
  const auto protocol_check = CLI::IsMember({"abs", "rel", "both"});

  AnalyzeArgs an;
  auto* c_analyze = app.add_subcommand("analyze", "gains, thresholds and verdict for one graph");
  an.src.add_to(c_analyze);
  add_gains(c_analyze, an.alpha, an.beta);
  c_analyze->add_option("--protocol", an.protocol)->check(protocol_check);
  c_analyze->add_flag("--verify", an.verify, "cross-check against the numerical oracles");
  add_common(c_analyze);

  GraphSource sel_src;
  auto* c_select = app.add_subcommand("select", "pick the protocol with the smaller gain");
  sel_src.add_to(c_select);
  add_common(c_select);

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "gain or difference surface over (alpha, beta)");
  sw.src.add_to(c_sweep);
  c_sweep->add_option("--alpha-range", sw.alpha_range, "MIN:MAX:COUNT");
  c_sweep->add_option("--beta-range", sw.beta_range, "MIN:MAX:COUNT");
  auto* log_flag = c_sweep->add_flag("--log", sw.log, "log spacing (default)");
  c_sweep->add_flag("--linear", sw.linear, "linear spacing")->excludes(log_flag);
  c_sweep->add_option("--protocol", sw.protocol, "abs|rel for one surface, both for T1 - T2")
      ->check(protocol_check);
  add_common(c_sweep);

  SimulateArgs sm;
  std::optional<double> horizon;
  std::optional<double> dt;
  auto* c_sim = app.add_subcommand("simulate", "time-domain run with a finite-energy disturbance");
  sm.src.add_to(c_sim);
  add_gains(c_sim, sm.alpha, sm.beta);
  c_sim->add_option("--protocol", sm.protocol, "abs|rel")->check(protocol_check);
  c_sim->add_option("--disturbance", sm.disturbance)
      ->check(CLI::IsMember({"sine", "pulse", "noise"}));
  c_sim->add_option("--frequency", sm.frequency, "sine frequency, rad/s")
      ->check(CLI::NonNegativeNumber);
  c_sim->add_option("--bandwidth", sm.bandwidth, "noise bandwidth, rad/s")
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--t-on", sm.t_on, "disturbance duration, s")->check(CLI::PositiveNumber);
  c_sim->add_option("--amplitude", sm.amplitude);
  c_sim->add_option("--weights", sm.weights, "per-agent weights")->delimiter(',');
  c_sim->add_option("--horizon", horizon, "simulated time, s");
  c_sim->add_option("--dt", dt, "RK4 step, s");
  c_sim->add_flag("--worst-case", sm.worst_case, "sine at the worst frequency along the Fiedler vector");
  c_sim->add_option("--seed", sm.seed, "noise seed");
  add_common(c_sim);

  std::size_t table_n_max = 50;
  bool table_csv = false;
  auto* c_table = app.add_subcommand("table1", "closed-form vs eigensolver lambda2 per family");
  c_table->add_option("--n-max", table_n_max)->check(CLI::Range(std::size_t{2}, std::size_t{500}));
  c_table->add_flag("--csv", table_csv);
  add_common(c_table);

  std::vector<std::string> density_families{"complete", "star", "path", "ring1", "ring2", "ring3"};
  std::size_t density_n_max = 50;
  auto* c_density = app.add_subcommand("density", "edge density against n per family");
  c_density->add_option("--families", density_families, "labels, e.g. complete,path,ring2")
      ->delimiter(',');
  c_density->add_option("--n-max", density_n_max)
      ->check(CLI::Range(std::size_t{2}, kMaxVertices));
  add_common(c_density);

  std::uint64_t seed = 42;
  std::size_t cases = 300;
  std::size_t sim_cases = 100;
  auto* c_verify = app.add_subcommand("verify", "randomised oracle and simulation suites");
  c_verify->add_option("--seed", seed);
  c_verify->add_option("--cases", cases, "oracle tuples");
  c_verify->add_option("--sim-cases", sim_cases, "simulation runs");
  add_common(c_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_analyze->parsed()) {
      analyze(an, common, out);
    } else if (c_select->parsed()) {
      select(sel_src, common, out);
    } else if (c_sweep->parsed()) {
      sweep(sw, common, out);
    } else if (c_sim->parsed()) {
      sm.horizon = horizon;
      sm.dt = dt;
      simulate_cmd(sm, common, out);
    } else if (c_table->parsed()) {
      table1(table_n_max, table_csv, common, out);
    } else if (c_density->parsed()) {
      density_cmd(density_families, density_n_max, common, out);
    } else if (c_verify->parsed()) {
      return verify(seed, cases, sim_cases, common, hooks, out, err);
    }
  } catch (const Disconnected& e) {
    err << "error: " << e.message << '\n';
    return kDisconnected;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kDisconnected;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
  std::vector<const char*> argv{"consgain"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err, hooks);
}

}  // namespace consgain::cli
