// Batch driver: reads a key = value config, runs one check suite, writes a line-per-record report.
#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>

#include "hypkz/suites.hpp"

using namespace hypkz;

namespace {

const std::vector<std::string> commands = {"algebra-suite", "qkz-check", "diagram", "extended",
                                           "residue",       "scan",      "resonance-map"};

std::vector<std::string> transforms_or(const RunConfig& c, std::vector<std::string> dflt) {
  if (c.transform.empty()) return dflt;
  return {c.transform};
}

Report run(RunConfig c) {
  Report rep;
  auto t0 = std::chrono::steady_clock::now();
  const std::string& cmd = c.command;
  bool integrals = cmd != "algebra-suite" && cmd != "residue";
  if (!c.point_given) c.point = integrals ? suites::integral_point() : suites::generic_point(2);
  if (cmd == "residue" && !c.point_given) c.point = suites::residue_identity_point(c.k);
  if (cmd == "residue") c.point.lambda[0] = 0.5 * c.k;
  validate_config(c);
  rep.config = c.echo();

  if (cmd != "residue" && cmd != "scan" && cmd != "resonance-map") {
    try {
      auto rr = classify_resonance(c.point, 2 * c.L + 2, 2);
      rep.add({"resonance_free", "resonance classification", rr.kind() == "none" ? 0.0 : 1.0, 0.5,
               rr.kind() == "none" ? Verdict::PASS : Verdict::WARN, rr.kind()});
    } catch (const std::exception& e) {
      rep.add({"resonance_free", "resonance classification", 1.0, 0.5, Verdict::WARN, e.what()});
    }
  }

  if (cmd == "algebra-suite") {
    rep.add(suites::algebra_suite(c.L, c.seed));
  } else if (cmd == "qkz-check") {
    rep.add(suites::qkz_suite(c.point, c.L, c.quad, true, 1e-4, c.m));
  } else if (cmd == "diagram") {
    rep.add(suites::diagram_suite(c.point, c.L, c.quad, transforms_or(c, {"12x12", "idx12"})));
  } else if (cmd == "extended") {
    rep.add(suites::extended_compatibility_suite(c.point, c.L));
    rep.add(suites::extended_qkz_suite(c.point, c.L, c.quad, transforms_or(c, {"12x12", "idx12", "12xid"})));
  } else if (cmd == "residue") {
    rep.add(suites::residue_identity_suite(c.point, c.k));
  } else if (cmd == "scan") {
    QuadratureSpec s = c.quad;
    s.tol = std::min(s.tol, 1e-10);
    rep.add(suites::scan_suite(c.L, s));
  } else if (cmd == "resonance-map") {
    QuadratureSpec s = c.quad;
    s.tol = std::min(s.tol, 1e-10);
    rep.add(suites::residue_map_suite(c.L, s));
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypkz: checks for hypergeometric solutions of rational and trigonometric qKZ equations"};
  std::string command, config_path, out;
  std::optional<int> L;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  app.add_option("--command", command, "algebra-suite | qkz-check | diagram | extended | residue | scan | resonance-map")
      ->check(CLI::IsMember(commands));
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--L", L, "level cap of the truncation");
  app.add_option("--tol", tol, "relative quadrature tolerance");
  app.add_option("--seed", seed, "seed for random sample points");
  app.add_option("--out", out, "write the report to this file");
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    if (!config_path.empty()) read_config_file(cfg, config_path);
    if (!command.empty()) cfg.command = command;
    if (L) cfg.L = *L, cfg.L_given = true;
    if (tol) cfg.quad.tol = *tol;
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.out = out;
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
      throw Error(Err::ConfigError, "unknown command '" + cfg.command + "'");
    if (!cfg.L_given && cfg.command == "algebra-suite") cfg.L = 4;
    Report rep = run(cfg);
    std::cout << rep.summary_table();
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out);
      if (!f) throw Error(Err::ConfigError, "cannot write " + cfg.out);
      f << rep.serialize();
    }
    return rep.any_fail() ? 1 : 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
