#include "riscnoma_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "riscnoma/config.hpp"
#include "riscnoma/crosscheck.hpp"
#include "riscnoma/experiment.hpp"
#include "riscnoma/orchestrator.hpp"
#include "riscnoma/scenario.hpp"

namespace riscnoma::cli {

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string variant;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string variant_list() {
  std::string s;
  for (Variant v : all_variants()) {
    if (!s.empty()) s += ", ";
    s += variant_name(v);
  }
  return s;
}

Variant variant_or_throw(const std::string& name) {
  const auto v = parse_variant(name);
  if (!v) throw UsageError("unknown variant '" + name + "'; valid names: " + variant_list());
  return *v;
}

KeyValueConfig load_config(const std::string& path) {
  return path.empty() ? KeyValueConfig{} : KeyValueConfig::load(path);
}

std::string fixed(double v) { return format_number(v); }

int cmd_run(const Flags& f, std::ostream& out) {
  const KeyValueConfig cfg = load_config(f.config);
  Scenario sc = scenario_from_config(cfg);
  if (f.seed) sc.rng_seed = *f.seed;
  sc.validate();
  AlgorithmConfig alg;
  alg.max_outer_iters = static_cast<int>(cfg.get_int("max_outer_iters", alg.max_outer_iters));
  alg.rel_tol = cfg.get_double("rel_tol", alg.rel_tol);
  alg.variant = variant_or_throw(f.variant.empty() ? cfg.get_string("variant", "lcaobs") : f.variant);
  alg.validate();

  const ChannelSet ch = generate_channels(sc);
  const RunResult r = run_variant(alg.variant, ch, sc, alg);
  const RateReport& rep = r.report;

  std::ostringstream s;
  s << "variant = " << variant_name(alg.variant) << '\n'
    << "seed = " << sc.rng_seed << '\n'
    << "status = " << to_string(r.status) << '\n'
    << "iterations = " << r.iterations << '\n'
    << "total_power_w = " << fixed(r.total_power()) << '\n'
    << "total_power_dbm = " << fixed(watts_to_dbm(r.total_power())) << '\n'
    << "p_s_w = " << fixed(r.solution.p_s) << '\n'
    << "beam_power_s_w = " << fixed(r.solution.w_s.squaredNorm()) << '\n'
    << "beam_power_w_w = " << fixed(r.solution.w_w.squaredNorm()) << '\n'
    << "r_s = " << fixed(rep.r_s) << '\n'
    << "r_s_to_w = " << fixed(rep.r_s_to_w) << '\n'
    << "sinr_w_dt = " << fixed(rep.sinr_w_dt) << '\n'
    << "sinr_w_ct = " << fixed(rep.sinr_w_ct) << '\n'
    << "r_mrc_w = " << fixed(rep.r_mrc_w) << '\n'
    << "r_w_final = " << fixed(rep.r_w_final) << '\n'
    << "slack_r_s = " << fixed(rep.slack_r_s) << '\n'
    << "slack_r_s_to_w = " << fixed(rep.slack_r_s_to_w) << '\n'
    << "slack_r_mrc_w = " << fixed(rep.slack_r_mrc_w) << '\n'
    << "feasible = " << (rep.feasible ? "true" : "false") << '\n'
    << "rank_fallbacks = " << r.rank_fallbacks << '\n'
    << "restarts = " << r.restarts << '\n'
    << "wall_time_s = " << fixed(r.wall_time_s) << '\n';
  s << "power_trace_w =";
  for (std::size_t i = 0; i < r.power_trace.size(); ++i) {
    s << (i == 0 ? " " : ", ") << fixed(r.power_trace[i]);
  }
  s << '\n';

  out << s.str();
  if (!f.out.empty()) {
    std::ofstream file(f.out);
    if (!(file << s.str())) throw std::runtime_error("cannot write '" + f.out + "'");
  }
  return run_exit_code(r.status);
}

int cmd_sweep(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.config.empty()) throw UsageError("sweep needs --config");
  ExperimentSpec spec = experiment_from_config(KeyValueConfig::load(f.config));
  if (f.seed) spec.base_seed = *f.seed;
  if (!f.out.empty()) spec.output = f.out;
  if (!f.variant.empty()) spec.variants = {variant_or_throw(f.variant)};
  spec.validate();

  const ExperimentResult result = run_experiment(spec);
  if (spec.output.empty()) {
    write_csv(out, spec, result);
  } else {
    write_csv_file(spec.output, spec, result);
    err << "wrote " << result.trials.size() << " trial rows and " << result.aggregates.size()
        << " aggregate rows to " << spec.output.string() << '\n';
  }
  return kExitOk;
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  const KeyValueConfig cfg = load_config(f.config);
  Scenario base;
  base.l_ris = 3;
  base.bits = 1;
  const Scenario sc = scenario_from_config(cfg, base);
  sc.validate();
  const int instances = static_cast<int>(cfg.get_int("oracle_instances", 50));
  if (instances < 1) throw UsageError("oracle_instances must be >= 1");
  const std::uint64_t seed = f.seed ? *f.seed : static_cast<std::uint64_t>(cfg.get_int("base_seed", 1));

  const CrossCheckReport report = run_cross_checks(sc, instances, seed);
  out << "oracle: l_ris = " << sc.l_ris << ", bits = " << sc.bits << ", instances = " << instances
      << '\n';
  for (const auto& c : report.checks) {
    out << (c.ok() ? "PASS " : "FAIL ") << c.name << " " << c.passed << '/' << c.total;
    if (!c.ok()) out << " (" << c.worst << ')';
    out << '\n';
  }
  return report.ok() ? kExitOk : kExitInfeasible;
}

}  // namespace

int run_exit_code(RunStatus status) {
  return status == RunStatus::infeasible ? kExitInfeasible : kExitOk;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmit power minimization for RIS-assisted cooperative NOMA", "riscnoma"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value configuration file");
    sub->add_option("--seed", flags.seed, "channel seed (run, oracle) or base seed (sweep)");
    sub->add_option("--out", flags.out, "output path");
    sub->add_option("--variant", flags.variant, "algorithm variant: " + variant_list());
  };
  CLI::App* run = app.add_subcommand("run", "solve one channel realization and print the rates");
  CLI::App* sweep = app.add_subcommand("sweep", "run a Monte-Carlo sweep and write CSV");
  CLI::App* oracle = app.add_subcommand("oracle", "cross-check the exact solvers by enumeration");
  for (CLI::App* sub : {run, sweep, oracle}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(flags, out);
    if (sweep->parsed()) return cmd_sweep(flags, out, err);
    return cmd_oracle(flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace riscnoma::cli
