#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwrec/examples.hpp"
#include "gwrec/spine.hpp"
#include "gwrec/tree.hpp"

namespace gwrec {

enum class RunMode {
  conditioned,  // root values of conditioned trees, or a TV-vs-n grid
  experiment,   // TV-vs-n grid
  cftp,
  wlaw,
  matrix,
  probe,
  figure1,
};

RunMode parse_run_mode(const std::string& name);
std::string to_string(RunMode mode);

// Where unmarked spine children take their values from.
enum class SourceChoice {
  automatic,  // the exact W law when the example has a kernel, else trees
  law,
  trees,
};

SourceChoice parse_source(const std::string& name);

struct ExperimentConfig {
  ExampleConfig example;
  RunMode mode = RunMode::conditioned;
  std::uint64_t n = 101;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t reps = 1000;
  std::uint64_t seed = 1;
  std::uint64_t max_levels = 100'000;
  std::uint64_t node_cap = kDefaultNodeCap;
  std::uint64_t t_max = 30;
  std::uint64_t samples = 100'000;
  SourceChoice source = SourceChoice::automatic;
  unsigned threads = 1;
  std::string output;  // empty: standard output
};

// Reads the keys example, params, mode, n, n_grid, reps, seed, max_levels,
// node_cap, t_max, samples, source, threads and output. Unknown keys and
// ill-typed values throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Throws ConfigError (reps, grids), SpanMismatch (n) as appropriate.
void validate(const ExperimentConfig& cfg, const OffspringDistribution& d);

// CSV schemas, one header line each.
inline constexpr const char* kConditionedHeader = "rep,n,value";
inline constexpr const char* kConvergenceHeader = "n,tv,reps,stderr";
inline constexpr const char* kCftpHeader = "rep,value,levels_used";
inline constexpr const char* kWLawHeader = "state,prob";
inline constexpr const char* kMatrixHeader = "from,to,prob";
inline constexpr const char* kProbeHeader = "t,survival,stderr";
inline constexpr const char* kFigure1Header = "p,leaf,unconditional_pstar,conditional_limit";

// Replicate r of a conditioned run draws from Rng::substream(seed, r);
// grid point g uses derive_seed(seed, g) as its master seed. Output depends
// only on the config, never on the thread count.
std::string conditioned_csv(const ExperimentConfig& cfg);

// For every n in the grid (or the single n): TV between the empirical root
// law over `reps` conditioned trees and the reference law W_inf. The
// reference is the exact stationary law when the example has a kernel and a
// CFTP empirical law over `reps` samples otherwise. stderr is
// 1/2 sum_s sqrt(p_s (1 - p_s) / reps), the noise scale of the estimate.
std::string convergence_csv(const ExperimentConfig& cfg);

std::string cftp_csv(const ExperimentConfig& cfg);

// Exact iteration when a kernel exists, Monte Carlo over `samples` trees
// otherwise. If the iteration stops without converging the last iterate is
// still written, and a description goes to `warning` when given.
std::string wlaw_csv(const ExperimentConfig& cfg, std::string* warning = nullptr);

// Exact spine transition matrix when a kernel exists, common-random-number
// estimate over `samples` steps otherwise.
std::string matrix_csv(const ExperimentConfig& cfg);

std::string probe_csv(const ExperimentConfig& cfg);

// Majority example: p on the grid 0, 0.01, ..., 1 with leaf = p, the law of
// W and the conditional limit.
std::string figure1_csv(const ExperimentConfig& cfg);

// Dispatches on cfg.mode.
std::string run_csv(const ExperimentConfig& cfg, std::string* warning = nullptr);

// Value source resolved for the example (needs the exact W law for `law`).
UnmarkedValueSource resolve_source(const ExperimentConfig& cfg, const BuiltExample& built);

}  // namespace gwrec
