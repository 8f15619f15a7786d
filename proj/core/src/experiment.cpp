#include "riscnoma/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "riscnoma/rng.hpp"

namespace riscnoma {

namespace {

constexpr std::pair<SweepAxis, std::string_view> kAxes[] = {
    {SweepAxis::iterations, "iterations"}, {SweepAxis::bits, "bits"},
    {SweepAxis::l_ris, "l_ris"},           {SweepAxis::r_w_min, "r_w_min"},
    {SweepAxis::x_ris, "x_ris"},           {SweepAxis::x_weak, "x_weak"},
};

}  // namespace

std::string_view to_string(SweepAxis a) {
  for (const auto& [axis, name] : kAxes) {
    if (axis == a) return name;
  }
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (const auto& [axis, n] : kAxes) {
    if (n == name) return axis;
  }
  return std::nullopt;
}

Scenario apply_axis(Scenario sc, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::iterations: break;
    case SweepAxis::bits: sc.bits = static_cast<int>(std::lround(value)); break;
    case SweepAxis::l_ris: sc.l_ris = static_cast<int>(std::lround(value)); break;
    case SweepAxis::r_w_min: sc.qos_bits_w = value; break;
    case SweepAxis::x_ris: sc.ris_pos.x = value; break;
    case SweepAxis::x_weak: sc.user_w_pos.x = value; break;
  }
  return sc;
}

void ExperimentSpec::validate() const {
  if (n_trials < 1) throw std::invalid_argument("experiment: n_trials must be >= 1");
  if (axis_values.empty()) throw std::invalid_argument("experiment: axis values must be non-empty");
  if (!std::is_sorted(axis_values.begin(), axis_values.end())) {
    throw std::invalid_argument("experiment: axis values must be sorted");
  }
  if (variants.empty()) throw std::invalid_argument("experiment: no variants");
  if (workers < 0) throw std::invalid_argument("experiment: workers must be >= 0");
  if (axis == SweepAxis::iterations && axis_values.front() < 1.0) {
    throw std::invalid_argument("experiment: iteration indices start at 1");
  }
  algorithm.validate();
  for (double v : axis_values) apply_axis(scenario, axis, v).validate();
}

ExperimentSpec experiment_from_config(const KeyValueConfig& cfg) {
  ExperimentSpec spec;
  spec.scenario = scenario_from_config(cfg);
  const std::string axis = cfg.get_string("axis", "r_w_min");
  const auto parsed = parse_axis(axis);
  if (!parsed) throw ConfigError("experiment: unknown axis '" + axis + "'");
  spec.axis = *parsed;
  spec.axis_values = cfg.get_doubles("axis_values");
  if (const auto range = cfg.get("axis_range")) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : *range) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw ConfigError("experiment: axis_range must be start:stop:step");
    const double start = parse_double(trim(parts[0]));
    const double stop = parse_double(trim(parts[1]));
    const double step = parse_double(trim(parts[2]));
    if (!(step > 0.0)) throw ConfigError("experiment: axis_range step must be positive");
    spec.axis_values.clear();
    for (int k = 0;; ++k) {
      const double v = start + k * step;
      if (v > stop + 1e-9 * step) break;
      spec.axis_values.push_back(v);
    }
  }
  if (cfg.contains("variants")) {
    spec.variants.clear();
    for (const auto& name : cfg.get_strings("variants")) {
      const auto v = parse_variant(name);
      if (!v) throw ConfigError("experiment: unknown variant '" + name + "'");
      spec.variants.push_back(*v);
    }
  }
  spec.n_trials = static_cast<int>(cfg.get_int("n_trials", spec.n_trials));
  spec.base_seed = static_cast<std::uint64_t>(cfg.get_int("base_seed", 1));
  spec.output = cfg.get_string("output", "");
  spec.workers = static_cast<int>(cfg.get_int("workers", 0));
  spec.algorithm.max_outer_iters =
      static_cast<int>(cfg.get_int("max_outer_iters", spec.algorithm.max_outer_iters));
  spec.algorithm.rel_tol = cfg.get_double("rel_tol", spec.algorithm.rel_tol);
  spec.validate();
  return spec;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  return CounterRng(base_seed).substream(static_cast<std::uint64_t>(trial)).key();
}

namespace {

struct Unit {
  std::size_t axis_index;
  int trial;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const bool by_iteration = spec.axis == SweepAxis::iterations;
  const std::size_t n_axis = by_iteration ? 1 : spec.axis_values.size();
  const std::size_t n_var = spec.variants.size();
  std::vector<Unit> units;
  for (std::size_t a = 0; a < n_axis; ++a) {
    for (int t = 0; t < spec.n_trials; ++t) units.push_back({a, t});
  }
  // results[unit][variant]
  std::vector<std::vector<RunResult>> results(units.size(), std::vector<RunResult>(n_var));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      try {
        const Unit& u = units[i];
        Scenario sc = apply_axis(spec.scenario, spec.axis, spec.axis_values[u.axis_index]);
        sc.rng_seed = trial_seed(spec.base_seed, u.trial);
        const ChannelSet ch = generate_channels(sc);
        for (std::size_t v = 0; v < n_var; ++v) {
          results[i][v] = run_variant(spec.variants[v], ch, sc, spec.algorithm);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(units.size());
      }
    }
  };
  unsigned n_workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(units.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult out;
  for (std::size_t v = 0; v < n_var; ++v) {
    for (std::size_t a = 0; a < spec.axis_values.size(); ++a) {
      AggregateRecord agg;
      agg.variant = spec.variants[v];
      agg.axis_value = spec.axis_values[a];
      std::vector<double> powers;
      for (int t = 0; t < spec.n_trials; ++t) {
        const std::size_t ui = (by_iteration ? 0 : a) * static_cast<std::size_t>(spec.n_trials) +
                               static_cast<std::size_t>(t);
        const RunResult& rr = results[ui][v];
        TrialRecord rec;
        rec.variant = spec.variants[v];
        rec.axis_value = spec.axis_values[a];
        rec.trial = t;
        rec.seed = trial_seed(spec.base_seed, t);
        rec.iterations = rr.iterations;
        rec.status = rr.status;
        rec.rank_fallbacks = rr.rank_fallbacks;
        rec.p_s_w = rr.solution.p_s;
        rec.total_power_w = rr.total_power();
        if (by_iteration) {
          const auto k = static_cast<std::size_t>(std::lround(spec.axis_values[a]));
          rec.total_power_w = rr.power_trace.empty()
                                  ? std::nan("")
                                  : rr.power_trace[std::min(k, rr.power_trace.size()) - 1];
        }
        out.trials.push_back(rec);
        ++agg.n_trials;
        agg.rank_fallbacks += rec.rank_fallbacks;
        if (rec.status == RunStatus::infeasible || !std::isfinite(rec.total_power_w)) continue;
        ++agg.n_feasible;
        powers.push_back(rec.total_power_w);
        agg.mean_p_s_w += rec.p_s_w;
        agg.mean_iterations += rec.iterations;
      }
      if (agg.n_feasible > 0) {
        const double n = agg.n_feasible;
        double sum = 0.0;
        for (double p : powers) sum += p;
        agg.mean_power_w = sum / n;
        agg.mean_p_s_w /= n;
        agg.mean_iterations /= n;
        if (agg.n_feasible > 1) {
          double ss = 0.0;
          for (double p : powers) ss += (p - agg.mean_power_w) * (p - agg.mean_power_w);
          agg.ci95_w = 1.96 * std::sqrt(ss / (n - 1.0) / n);
        }
      } else {
        agg.mean_power_w = agg.mean_p_s_w = agg.mean_iterations = std::nan("");
      }
      out.aggregates.push_back(agg);
    }
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result) {
  const std::string axis(to_string(spec.axis));
  auto dbm = [](double w) {
    if (std::isnan(w)) return w;
    return w > 0.0 ? watts_to_dbm(w) : -std::numeric_limits<double>::infinity();
  };
  out << kCsvHeader << '\n';
  for (const auto& r : result.trials) {
    out << "trial," << variant_name(r.variant) << ',' << axis << ',' << format_number(r.axis_value)
        << ',' << r.trial << ',' << r.seed << ',' << format_number(r.total_power_w) << ','
        << format_number(dbm(r.total_power_w)) << ',' << format_number(r.p_s_w) << ','
        << r.iterations << ',' << to_string(r.status) << ',' << r.rank_fallbacks << ",\n";
  }
  for (const auto& a : result.aggregates) {
    out << "aggregate," << variant_name(a.variant) << ',' << axis << ','
        << format_number(a.axis_value) << ",all," << spec.base_seed << ','
        << format_number(a.mean_power_w) << ',' << format_number(dbm(a.mean_power_w)) << ','
        << format_number(a.mean_p_s_w) << ',' << format_number(a.mean_iterations) << ",feasible="
        << a.n_feasible << '/' << a.n_trials << ',' << a.rank_fallbacks << ','
        << format_number(a.ci95_w) << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const ExperimentSpec& spec,
                    const ExperimentResult& result) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(f, spec, result);
  f.flush();
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace riscnoma
