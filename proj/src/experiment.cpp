#include "gwrec/experiment.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "gwrec/errors.hpp"
#include "gwrec/parallel.hpp"
#include "gwrec/stats.hpp"
#include "gwrec/wlaw.hpp"

namespace gwrec {
namespace {

template <typename T>
T read(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key \"") + key + "\": " + e.what());
  }
}

std::uint64_t read_count(const nlohmann::json& j, const char* key) {
  if (!j.at(key).is_number_unsigned()) {
    throw ConfigError(std::string("config key \"") + key + "\" must be a nonnegative integer");
  }
  return j.at(key).get<std::uint64_t>();
}

std::vector<std::uint64_t> sizes(const ExperimentConfig& cfg) {
  if (!cfg.n_grid.empty()) return cfg.n_grid;
  return {cfg.n};
}

StateDistribution reference_law(const ExperimentConfig& cfg, const BuiltExample& built) {
  if (built.spec.has_kernel()) {
    return stationary_distribution(transition_matrix_exact(built.spec, built.offspring));
  }
  const UnmarkedValueSource source = UnmarkedValueSource::trees(cfg.node_cap);
  const std::uint64_t master = derive_seed(cfg.seed, ~std::uint64_t{0});
  const auto values = run_indexed(cfg.reps, cfg.threads, [&](std::uint64_t r) {
    Rng rng = Rng::substream(master, r);
    return cftp_sample(built.spec, built.offspring, rng, source, cfg.max_levels).value;
  });
  EmpiricalDistribution counts(built.spec.state_count());
  for (State v : values) counts.add(v);
  return counts.normalized();
}

std::vector<State> conditioned_values(const ExperimentConfig& cfg, const BuiltExample& built,
                                      std::uint64_t n, std::uint64_t master) {
  return run_indexed(cfg.reps, cfg.threads, [&](std::uint64_t r) {
    Rng rng = Rng::substream(master, r);
    const OrderedTree tree = sample_conditioned(built.offspring, n, rng);
    return eval_root(built.spec, tree, rng);
  });
}

}  // namespace

RunMode parse_run_mode(const std::string& name) {
  if (name == "conditioned") return RunMode::conditioned;
  if (name == "experiment") return RunMode::experiment;
  if (name == "cftp") return RunMode::cftp;
  if (name == "wlaw") return RunMode::wlaw;
  if (name == "matrix") return RunMode::matrix;
  if (name == "probe") return RunMode::probe;
  if (name == "figure1") return RunMode::figure1;
  throw ConfigError("unknown mode \"" + name + "\"");
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::conditioned: return "conditioned";
    case RunMode::experiment: return "experiment";
    case RunMode::cftp: return "cftp";
    case RunMode::wlaw: return "wlaw";
    case RunMode::matrix: return "matrix";
    case RunMode::probe: return "probe";
    case RunMode::figure1: return "figure1";
  }
  return "conditioned";
}

SourceChoice parse_source(const std::string& name) {
  if (name == "auto") return SourceChoice::automatic;
  if (name == "law") return SourceChoice::law;
  if (name == "trees") return SourceChoice::trees;
  throw ConfigError("unknown source \"" + name + "\" (auto, law or trees)");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"example", "params", "mode", "n", "n_grid",
                                              "reps", "seed", "max_levels", "node_cap",
                                              "t_max", "samples", "source", "threads", "output"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
  }
  ExperimentConfig cfg;
  if (j.contains("example")) cfg.example.name = read<std::string>(j, "example");
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("config key \"params\" must be an object");
    cfg.example.params = j["params"];
  }
  if (j.contains("mode")) cfg.mode = parse_run_mode(read<std::string>(j, "mode"));
  if (j.contains("n")) cfg.n = read_count(j, "n");
  if (j.contains("n_grid")) {
    if (!j["n_grid"].is_array()) throw ConfigError("config key \"n_grid\" must be an array");
    for (const auto& v : j["n_grid"]) {
      if (!v.is_number_unsigned()) throw ConfigError("n_grid entries must be positive integers");
      cfg.n_grid.push_back(v.get<std::uint64_t>());
    }
  }
  if (j.contains("reps")) cfg.reps = read_count(j, "reps");
  if (j.contains("seed")) cfg.seed = read_count(j, "seed");
  if (j.contains("max_levels")) cfg.max_levels = read_count(j, "max_levels");
  if (j.contains("node_cap")) cfg.node_cap = read_count(j, "node_cap");
  if (j.contains("t_max")) cfg.t_max = read_count(j, "t_max");
  if (j.contains("samples")) cfg.samples = read_count(j, "samples");
  if (j.contains("source")) cfg.source = parse_source(read<std::string>(j, "source"));
  if (j.contains("threads")) cfg.threads = static_cast<unsigned>(read_count(j, "threads"));
  if (j.contains("output")) cfg.output = read<std::string>(j, "output");
  return cfg;
}

void validate(const ExperimentConfig& cfg, const OffspringDistribution& d) {
  if (cfg.reps < 1) throw ConfigError("reps must be at least 1");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  const bool conditioned = cfg.mode == RunMode::conditioned || cfg.mode == RunMode::experiment;
  if (!conditioned) return;
  for (std::uint64_t n : sizes(cfg)) {
    if (n < 1) throw ConfigError("tree sizes must be at least 1");
    if ((n - 1) % d.span() != 0) {
      throw SpanMismatch("n = " + std::to_string(n) + " is not 1 mod the span " +
                         std::to_string(d.span()));
    }
  }
}

UnmarkedValueSource resolve_source(const ExperimentConfig& cfg, const BuiltExample& built) {
  switch (cfg.source) {
    case SourceChoice::trees:
      return UnmarkedValueSource::trees(cfg.node_cap);
    case SourceChoice::law:
      if (!built.spec.has_kernel()) {
        throw ConfigError("source \"law\" needs an example with an exact kernel");
      }
      return UnmarkedValueSource::law(w_law_iterate(built.spec, built.offspring).law);
    case SourceChoice::automatic:
      break;
  }
  if (built.spec.has_kernel()) {
    return UnmarkedValueSource::law(w_law_iterate(built.spec, built.offspring).law);
  }
  return UnmarkedValueSource::trees(cfg.node_cap);
}

std::string conditioned_csv(const ExperimentConfig& cfg) {
  if (!cfg.n_grid.empty()) return convergence_csv(cfg);
  const BuiltExample built = build_example(cfg.example);
  validate(cfg, built.offspring);
  const auto values = conditioned_values(cfg, built, cfg.n, cfg.seed);
  std::ostringstream out;
  out << kConditionedHeader << '\n';
  for (std::uint64_t r = 0; r < values.size(); ++r) {
    out << r << ',' << cfg.n << ',' << values[r] << '\n';
  }
  return out.str();
}

std::string convergence_csv(const ExperimentConfig& cfg) {
  const BuiltExample built = build_example(cfg.example);
  validate(cfg, built.offspring);
  const StateDistribution reference = reference_law(cfg, built);
  const std::vector<std::uint64_t> grid = sizes(cfg);
  std::ostringstream out;
  out << kConvergenceHeader << '\n';
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto values = conditioned_values(cfg, built, grid[g], derive_seed(cfg.seed, g));
    EmpiricalDistribution counts(built.spec.state_count());
    for (State v : values) counts.add(v);
    const StateDistribution empirical = counts.normalized();
    double noise = 0.0;
    for (double p : empirical.probs()) noise += std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.reps));
    out << grid[g] << ',' << format_double(tv_distance(empirical, reference)) << ',' << cfg.reps
        << ',' << format_double(noise / 2.0) << '\n';
  }
  return out.str();
}

std::string cftp_csv(const ExperimentConfig& cfg) {
  const BuiltExample built = build_example(cfg.example);
  validate(cfg, built.offspring);
  const UnmarkedValueSource source = resolve_source(cfg, built);
  const auto results = run_indexed(cfg.reps, cfg.threads, [&](std::uint64_t r) {
    Rng rng = Rng::substream(cfg.seed, r);
    return cftp_sample(built.spec, built.offspring, rng, source, cfg.max_levels);
  });
  std::ostringstream out;
  out << kCftpHeader << '\n';
  for (std::uint64_t r = 0; r < results.size(); ++r) {
    out << r << ',' << results[r].value << ',' << results[r].levels_used << '\n';
  }
  return out.str();
}

std::string wlaw_csv(const ExperimentConfig& cfg, std::string* warning) {
  const BuiltExample built = build_example(cfg.example);
  validate(cfg, built.offspring);
  std::vector<double> law;
  if (built.spec.has_kernel()) {
    const WLawResult result = w_law_iterate(built.spec, built.offspring);
    if (!result.converged && warning != nullptr) {
      *warning = "W law iteration stopped after " + std::to_string(result.iterations) +
                 " levels without converging (last step " + format_double(result.last_step_tv) +
                 ", height tail " + format_double(result.height_tail) + ")";
    }
    law.assign(result.law.probs().begin(), result.law.probs().end());
  } else {
    MonteCarloOptions options;
    options.node_cap = cfg.node_cap;
    options.threads = cfg.threads;
    const StateDistribution estimate =
        w_law_monte_carlo(built.spec, built.offspring, cfg.samples, cfg.seed, options)
            .counts.normalized();
    law.assign(estimate.probs().begin(), estimate.probs().end());
  }
  std::ostringstream out;
  out << kWLawHeader << '\n';
  for (std::size_t s = 0; s < law.size(); ++s) out << s << ',' << format_double(law[s]) << '\n';
  return out.str();
}

std::string matrix_csv(const ExperimentConfig& cfg) {
  const BuiltExample built = build_example(cfg.example);
  validate(cfg, built.offspring);
  TransitionMatrix p;
  if (built.spec.has_kernel()) {
    p = transition_matrix_exact(built.spec, built.offspring);
  } else {
    Rng rng(cfg.seed);
    p = transition_matrix_mc(built.spec, built.offspring, cfg.samples, rng, resolve_source(cfg, built));
  }
  std::ostringstream out;
  out << kMatrixHeader << '\n';
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      out << x << ',' << y << ',' << format_double(p(x, y)) << '\n';
    }
  }
  return out.str();
}

std::string probe_csv(const ExperimentConfig& cfg) {
  const BuiltExample built = build_example(cfg.example);
  validate(cfg, built.offspring);
  const SurvivalCurve curve = coalescence_probe(built.spec, built.offspring, cfg.t_max, cfg.reps,
                                                cfg.seed, resolve_source(cfg, built), cfg.threads);
  std::ostringstream out;
  out << kProbeHeader << '\n';
  for (std::uint64_t t = 0; t <= cfg.t_max; ++t) {
    out << t << ',' << format_double(curve.survival(t)) << ',' << format_double(curve.stderr_at(t))
        << '\n';
  }
  return out.str();
}

std::string figure1_csv(const ExperimentConfig& cfg) {
  if (cfg.example.name != "majority") throw ConfigError("figure1 mode needs the majority example");
  const BuiltExample built = build_example(cfg.example);
  const nlohmann::json& params = cfg.example.params;
  const auto k = params.contains("k") ? params["k"].get<std::uint32_t>() : 1u;
  std::ostringstream out;
  out << kFigure1Header << '\n';
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const MajorityLimits limits = majority_limits(k, p);
    out << format_double(p) << ',' << format_double(p) << ',' << format_double(limits.p_star) << ','
        << format_double(limits.limit) << '\n';
  }
  return out.str();
}

std::string run_csv(const ExperimentConfig& cfg, std::string* warning) {
  switch (cfg.mode) {
    case RunMode::conditioned: return conditioned_csv(cfg);
    case RunMode::experiment: return convergence_csv(cfg);
    case RunMode::cftp: return cftp_csv(cfg);
    case RunMode::wlaw: return wlaw_csv(cfg, warning);
    case RunMode::matrix: return matrix_csv(cfg);
    case RunMode::probe: return probe_csv(cfg);
    case RunMode::figure1: return figure1_csv(cfg);
  }
  throw ConfigError("unknown mode");
}

}  // namespace gwrec
