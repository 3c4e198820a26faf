#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gwrec/errors.hpp"
#include "gwrec/examples.hpp"
#include "gwrec/experiment.hpp"

using namespace gwrec;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNonCoalescent = 3, kCapExceeded = 4 };

const char* kSchemas =
    "CSV schemas:\n"
    "  sample-tree            rep,size,height,offspring\n"
    "  eval-root              tree,value\n"
    "  run --mode conditioned rep,n,value (or n,tv,reps,stderr with --n-grid)\n"
    "  experiment             n,tv,reps,stderr\n"
    "  cftp                   rep,value,levels_used\n"
    "  wlaw                   state,prob\n"
    "  matrix                 from,to,prob\n"
    "  probe                  t,survival,stderr\n"
    "  figure1-data           p,leaf,unconditional_pstar,conditional_limit\n"
    "Exit codes: 0 ok, 1 other failure, 2 config, 3 non-coalescent, 4 cap exceeded.\n"
    "Replicate r uses the seed derive_seed(seed, r) (splitmix64 mixing).";

struct Flags {
  std::string config_path;
  std::string example;
  std::string params;
  std::uint32_t k = 0;
  std::uint32_t k_majority = 0;
  double p = 0.0;
  double q = 0.0;
  std::string reduction;
  std::string offspring;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t reps = 0;
  std::uint64_t seed = 1;
  std::uint64_t max_levels = 0;
  std::uint64_t node_cap = 0;
  std::uint64_t t_max = 0;
  std::uint64_t samples = 0;
  std::string source;
  unsigned threads = 1;
  std::string output;
  std::string mode;
  std::string tree;
};

nlohmann::json parse_json_flag(const std::string& text, const char* flag) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(flag) + " is not valid JSON: " + e.what());
  }
}

// Accepts a bare kind name ("catalan") or a JSON object.
nlohmann::json offspring_json(const std::string& text) {
  if (!text.empty() && text.front() == '{') return parse_json_flag(text, "--offspring");
  return nlohmann::json{{"kind", text}};
}

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& description)
      : app_(parent.add_subcommand(name, description)) {
    app_->footer(kSchemas);
  }

  Command& example_flags() {
    add("--config", flags_.config_path, "JSON config file; flags given on the command line override it")
        ->check(CLI::ExistingFile);
    add("--example", flags_.example, "example name (see list-examples)");
    add("--params", flags_.params, "example parameters as a JSON object");
    add("--k", flags_.k, "example parameter k");
    add("--k-majority", flags_.k_majority, "majority example: 2k+1 children");
    add("--p", flags_.p, "example parameter p");
    add("--q", flags_.q, "example parameter q");
    add("--reduction", flags_.reduction, "mod or min")->check(CLI::IsMember({"mod", "min"}));
    add("--offspring", flags_.offspring,
        "offspring law: catalan, geometric, poisson or a JSON object such as "
        "{\"kind\":\"explicit\",\"p\":[0.5,0,0.5]}");
    return *this;
  }

  Command& run_flags() {
    add("--n", flags_.n, "conditioned tree size");
    add("--n-grid", flags_.n_grid, "comma-separated tree sizes")->delimiter(',');
    add("--reps", flags_.reps, "replicates");
    add("--seed", flags_.seed, "master seed")->envname("GWREC_SEED");
    add("--max-levels", flags_.max_levels, "CFTP level limit");
    add("--node-cap", flags_.node_cap, "node cap for unconditional trees");
    add("--t-max", flags_.t_max, "probe horizon");
    add("--samples", flags_.samples, "Monte Carlo samples (wlaw and matrix without a kernel)");
    add("--source", flags_.source, "unmarked spine values: auto, law or trees")
        ->check(CLI::IsMember({"auto", "law", "trees"}));
    add("--threads", flags_.threads, "worker threads")->check(CLI::PositiveNumber);
    add("--output", flags_.output, "output file (default: standard output)");
    return *this;
  }

  template <typename T>
  CLI::Option* add(const std::string& name, T& target, const std::string& help) {
    return app_->add_option(name, target, help);
  }

  bool given(const std::string& name) const { return app_->count(name) > 0; }
  CLI::App* app() const { return app_; }
  Flags& flags() { return flags_; }

  // Without an explicit mode the config file's mode (or conditioned) is kept.
  ExperimentConfig config(std::optional<RunMode> mode) const {
    ExperimentConfig cfg;
    if (given("--config")) {
      std::ifstream in(flags_.config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(flags_.config_path + ": " + e.what());
      }
      cfg = config_from_json(j);
    }
    if (mode) cfg.mode = *mode;
    if (given("--example") || cfg.example.name.empty()) cfg.example.name = flags_.example;
    if (given("--params")) {
      const nlohmann::json extra = parse_json_flag(flags_.params, "--params");
      if (!extra.is_object()) throw ConfigError("--params must be a JSON object");
      cfg.example.params.update(extra);
    }
    auto& params = cfg.example.params;
    if (given("--k")) params["k"] = flags_.k;
    if (given("--k-majority")) params["k"] = flags_.k_majority;
    if (given("--p")) params["p"] = flags_.p;
    if (given("--q")) params["q"] = flags_.q;
    if (given("--reduction")) params["reduction"] = flags_.reduction;
    if (given("--offspring")) params["offspring"] = offspring_json(flags_.offspring);
    if (given("--n")) cfg.n = flags_.n;
    if (given("--n-grid")) cfg.n_grid = flags_.n_grid;
    if (given("--reps")) cfg.reps = flags_.reps;
    if (given("--seed") || !given("--config")) cfg.seed = flags_.seed;
    if (given("--max-levels")) cfg.max_levels = flags_.max_levels;
    if (given("--node-cap")) cfg.node_cap = flags_.node_cap;
    if (given("--t-max")) cfg.t_max = flags_.t_max;
    if (given("--samples")) cfg.samples = flags_.samples;
    if (given("--source")) cfg.source = parse_source(flags_.source);
    if (given("--threads")) cfg.threads = flags_.threads;
    if (given("--output")) cfg.output = flags_.output;
    if (cfg.example.name.empty()) throw ConfigError("no example given (--example or config)");
    return cfg;
  }

 private:
  CLI::App* app_;
  Flags flags_;
};

void emit(const std::string& csv, const std::string& path) {
  if (path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << csv;
}

std::string sample_tree_csv(Command& cmd) {
  const Flags& f = cmd.flags();
  const nlohmann::json law = f.offspring.empty() ? nlohmann::json{{"kind", "catalan"}}
                                                 : offspring_json(f.offspring);
  OffspringDistribution d = OffspringDistribution::catalan();
  try {
    d = OffspringDistribution::from_json(law);
  } catch (const InvalidDistribution& e) {
    throw ConfigError(std::string("--offspring: ") + e.what());
  }
  const std::uint64_t reps = cmd.given("--reps") ? f.reps : 1;
  const std::uint64_t cap = cmd.given("--node-cap") ? f.node_cap : kDefaultNodeCap;
  std::ostringstream out;
  out << "rep,size,height,offspring\n";
  for (std::uint64_t r = 0; r < reps; ++r) {
    Rng rng = Rng::substream(f.seed, r);
    const OrderedTree tree = cmd.given("--n") && f.n > 0 ? sample_conditioned(d, f.n, rng)
                                                         : sample_unconditional(d, rng, cap);
    out << r << ',' << tree.size() << ',' << height(tree) << ',' << tree.to_string() << '\n';
  }
  return out.str();
}

std::string eval_root_csv(Command& cmd) {
  const ExperimentConfig cfg = cmd.config(RunMode::conditioned);
  if (!cmd.given("--tree")) return conditioned_csv(cfg);
  const BuiltExample built = build_example(cfg.example);
  OrderedTree tree = OrderedTree::leaf();
  try {
    tree = OrderedTree::parse(cmd.flags().tree);
  } catch (const InvalidTree& e) {
    throw ConfigError(std::string("--tree: ") + e.what());
  }
  Rng rng(cfg.seed);
  std::ostringstream out;
  out << "tree,value\n" << tree.to_string() << ',' << eval_root(built.spec, tree, rng) << '\n';
  return out.str();
}

std::string list_examples_text() {
  std::ostringstream out;
  for (const ExampleInfo& info : example_registry()) {
    out << info.name << "\n  " << info.summary << "\n  parameters: " << info.parameters
        << "\n  oracles: " << info.oracles << "\n  coalescent: " << (info.coalescent ? "yes" : "no")
        << "\n";
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive functions on conditioned Galton-Watson trees"};
  app.footer(kSchemas);
  app.require_subcommand(1);

  Command sample_tree(app, "sample-tree", "sample unconditional (no --n) or conditioned trees");
  sample_tree.add("--offspring", sample_tree.flags().offspring, "offspring law (default catalan)");
  sample_tree.add("--n", sample_tree.flags().n, "conditioned size; omit for unconditional trees");
  sample_tree.add("--reps", sample_tree.flags().reps, "number of trees");
  sample_tree.add("--seed", sample_tree.flags().seed, "master seed")->envname("GWREC_SEED");
  sample_tree.add("--node-cap", sample_tree.flags().node_cap, "node cap for unconditional trees");
  sample_tree.add("--output", sample_tree.flags().output, "output file");

  Command eval_root_cmd(app, "eval-root", "root value of a given tree, or of conditioned trees");
  eval_root_cmd.example_flags().run_flags();
  eval_root_cmd.add("--tree", eval_root_cmd.flags().tree, "preorder offspring counts, e.g. \"2 0 0\"");

  Command run(app, "run", "run an experiment selected by --mode");
  run.example_flags().run_flags();
  run.add("--mode", run.flags().mode, "conditioned, experiment, cftp, wlaw, matrix, probe, figure1");

  Command wlaw(app, "wlaw", "law of W, the root value of an unconditional tree");
  wlaw.example_flags().run_flags();
  Command cftp(app, "cftp", "perfect samples of W_inf by coupling from the past");
  cftp.example_flags().run_flags();
  Command matrix(app, "matrix", "spine transition matrix");
  matrix.example_flags().run_flags();
  Command probe(app, "probe", "empirical Pr{no coalescence within t levels}");
  probe.example_flags().run_flags();
  Command experiment(app, "experiment", "TV between the root law of T_n and W_inf over an n grid");
  experiment.example_flags().run_flags();
  Command figure1(app, "figure1-data", "majority example: leaf, W and conditional-limit curves");
  figure1.example_flags().run_flags();
  CLI::App* list = app.add_subcommand("list-examples", "names, parameters and oracles of the examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    std::string csv;
    std::string output;
    std::string warning;
    auto run_mode = [&](Command& cmd, RunMode mode) {
      ExperimentConfig cfg = cmd.config(mode);
      output = cfg.output;
      csv = run_csv(cfg, &warning);
    };
    if (list->parsed()) {
      std::cout << list_examples_text();
      return kOk;
    } else if (sample_tree.app()->parsed()) {
      output = sample_tree.flags().output;
      csv = sample_tree_csv(sample_tree);
    } else if (eval_root_cmd.app()->parsed()) {
      output = eval_root_cmd.flags().output;
      csv = eval_root_csv(eval_root_cmd);
    } else if (run.app()->parsed()) {
      if (run.given("--mode")) {
        run_mode(run, parse_run_mode(run.flags().mode));
      } else {
        ExperimentConfig cfg = run.config(std::nullopt);
        output = cfg.output;
        csv = run_csv(cfg, &warning);
      }
    } else if (wlaw.app()->parsed()) {
      run_mode(wlaw, RunMode::wlaw);
    } else if (cftp.app()->parsed()) {
      run_mode(cftp, RunMode::cftp);
    } else if (matrix.app()->parsed()) {
      run_mode(matrix, RunMode::matrix);
    } else if (probe.app()->parsed()) {
      run_mode(probe, RunMode::probe);
    } else if (experiment.app()->parsed()) {
      run_mode(experiment, RunMode::experiment);
    } else if (figure1.app()->parsed()) {
      if (!figure1.given("--example")) figure1.flags().example = "majority";
      ExperimentConfig cfg = figure1.config(RunMode::figure1);
      output = cfg.output;
      csv = figure1_csv(cfg);
    }
    if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
    emit(csv, output);
    return kOk;
  } catch (const NonCoalescent& e) {
    std::cerr << "error: non-coalescent: " << e.what() << '\n';
    return kNonCoalescent;
  } catch (const CapExceeded& e) {
    std::cerr << "error: cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kConfig;
  } catch (const SpanMismatch& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidSize& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
