#include "gwrec/examples.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gwrec/errors.hpp"
#include "gwrec/numeric.hpp"
#include "gwrec/stats.hpp"

namespace gwrec {
namespace {

using Laws = std::span<const std::span<const double>>;

// ---------------------------------------------------------------------------
// Parameter access

class Params {
 public:
  Params(const std::string& example, const nlohmann::json& j, std::set<std::string> allowed)
      : example_(example), j_(j) {
    if (!j_.is_object()) fail("parameters must be a JSON object");
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) fail("unknown parameter \"" + key + "\"");
    }
  }

  double probability(const std::string& key, double fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number()) fail("\"" + key + "\" must be a number");
    const double v = j_[key].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) fail("\"" + key + "\" must lie in [0, 1]");
    return v;
  }

  std::uint32_t count(const std::string& key, std::uint32_t fallback, std::uint32_t lo,
                      std::uint32_t hi) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number_integer()) fail("\"" + key + "\" must be an integer");
    const auto v = j_[key].get<std::int64_t>();
    if (v < lo || v > hi) {
      fail("\"" + key + "\" must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<std::uint32_t>(v);
  }

  Reduction reduction() const {
    if (!j_.contains("reduction")) return Reduction::mod;
    const auto& r = j_["reduction"];
    if (r == "mod") return Reduction::mod;
    if (r == "min") return Reduction::min;
    fail("\"reduction\" must be \"mod\" or \"min\"");
  }

  OffspringDistribution offspring(const OffspringDistribution& fallback) const {
    if (!j_.contains("offspring")) return fallback;
    try {
      return OffspringDistribution::from_json(j_["offspring"]);
    } catch (const InvalidDistribution& e) {
      fail(std::string("offspring: ") + e.what());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(example_ + ": " + what);
  }

 private:
  std::string example_;
  const nlohmann::json& j_;
};

// ---------------------------------------------------------------------------
// Shared kernel pieces

State reduce(std::uint64_t value, std::size_t k, Reduction r) {
  if (r == Reduction::mod) return static_cast<State>(value % k);
  return static_cast<State>(std::min<std::uint64_t>(value, k - 1));
}

// Law of reduce(a + b) for independent reduced values.
std::vector<double> add_laws(std::span<const double> a, std::span<const double> b, Reduction r) {
  const std::size_t k = a.size();
  std::vector<double> out(k, 0.0);
  for (std::size_t x = 0; x < k; ++x) {
    if (a[x] == 0.0) continue;
    for (std::size_t y = 0; y < k; ++y) out[reduce(x + y, k, r)] += a[x] * b[y];
  }
  return out;
}

std::vector<double> shift_law(std::span<const double> a, std::uint64_t by, Reduction r) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t x = 0; x < a.size(); ++x) out[reduce(x + by, a.size(), r)] += a[x];
  return out;
}

std::vector<double> point(std::size_t k, State s) {
  std::vector<double> p(k, 0.0);
  p[s] = 1.0;
  return p;
}

// Law of reduce(offset + sum of children).
std::vector<double> sum_law(Laws laws, std::size_t k, std::uint64_t offset, Reduction r) {
  std::vector<double> acc = point(k, reduce(offset, k, r));
  for (const auto& law : laws) acc = add_laws(acc, law, r);
  return acc;
}

void write(std::span<double> out, const std::vector<double>& law) {
  std::copy(law.begin(), law.end(), out.begin());
}

// Distribution of the number of successes among independent Bernoullis.
std::vector<double> success_count_law(std::span<const double> success) {
  std::vector<double> dp{1.0};
  for (double s : success) {
    std::vector<double> next(dp.size() + 1, 0.0);
    for (std::size_t c = 0; c < dp.size(); ++c) {
      next[c] += dp[c] * (1.0 - s);
      next[c + 1] += dp[c] * s;
    }
    dp = std::move(next);
  }
  return dp;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

// ---------------------------------------------------------------------------
// Builders

BuiltExample counting(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "reduction", "offspring"});
  const std::size_t k = params.count("k", 5, 1, 1u << 20);
  const Reduction r = params.reduction();
  auto node_fn = [k, r](std::size_t, std::span<const State> c, double) {
    std::uint64_t sum = 1;
    for (State v : c) sum += v;
    return reduce(sum, k, r);
  };
  auto kernel = [node_fn](std::size_t arity, std::span<const State> c, double w,
                          std::span<double> acc) { acc[node_fn(arity, c, 0.0)] += w; };
  auto product = [k, r](std::size_t, Laws laws, std::span<double> out) {
    write(out, sum_law(laws, k, 1, r));
  };
  return {RecursiveSpec("counting", k, StateDistribution::point_mass(k, reduce(1, k, r)), node_fn,
                        kernel, product),
          params.offspring(OffspringDistribution::catalan())};
}

BuiltExample leaf_counter(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "reduction", "offspring"});
  const std::size_t k = params.count("k", 5, 1, 1u << 20);
  const Reduction r = params.reduction();
  auto node_fn = [k, r](std::size_t arity, std::span<const State> c, double) {
    if (arity == 0) return reduce(1, k, r);
    std::uint64_t sum = 0;
    for (State v : c) sum += v;
    return reduce(sum, k, r);
  };
  auto kernel = [node_fn](std::size_t arity, std::span<const State> c, double w,
                          std::span<double> acc) { acc[node_fn(arity, c, 0.0)] += w; };
  auto product = [k, r](std::size_t arity, Laws laws, std::span<double> out) {
    write(out, sum_law(laws, k, arity == 0 ? 1 : 0, r));
  };
  return {RecursiveSpec("leaf_counter", k, StateDistribution::point_mass(k, reduce(1, k, r)),
                        node_fn, kernel, product),
          params.offspring(OffspringDistribution::catalan())};
}

BuiltExample path_length(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "reduction", "offspring"});
  const std::size_t k = params.count("k", 8, 1, 1u << 20);
  const Reduction r = params.reduction();
  auto node_fn = [k, r](std::size_t arity, std::span<const State> c, double u) -> State {
    if (arity == 0) return 0;
    return reduce(1 + std::uint64_t{c[uniform_index(u, arity)]}, k, r);
  };
  auto kernel = [k, r](std::size_t arity, std::span<const State> c, double w,
                       std::span<double> acc) {
    if (arity == 0) {
      acc[0] += w;
      return;
    }
    for (State v : c) acc[reduce(1 + std::uint64_t{v}, k, r)] += w / static_cast<double>(arity);
  };
  auto product = [k, r](std::size_t arity, Laws laws, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (arity == 0) {
      out[0] = 1.0;
      return;
    }
    for (const auto& law : laws) {
      const auto shifted = shift_law(law, 1, r);
      for (std::size_t s = 0; s < k; ++s) out[s] += shifted[s] / static_cast<double>(arity);
    }
  };
  return {RecursiveSpec("path_length", k, StateDistribution::point_mass(k, 0), node_fn, kernel,
                        product),
          params.offspring(OffspringDistribution::catalan())};
}

BuiltExample transversal(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"p", "offspring"});
  const double p = params.probability("p", 0.5);
  auto node_fn = [p](std::size_t arity, std::span<const State> c, double u) -> State {
    if (u < p) return 1;
    if (arity == 0) return 0;
    return std::all_of(c.begin(), c.end(), [](State v) { return v == 1; }) ? 1 : 0;
  };
  auto kernel = [p](std::size_t arity, std::span<const State> c, double w, std::span<double> acc) {
    acc[1] += w * p;
    const bool all = arity > 0 && std::all_of(c.begin(), c.end(), [](State v) { return v == 1; });
    acc[all ? 1 : 0] += w * (1.0 - p);
  };
  auto product = [p](std::size_t arity, Laws laws, std::span<double> out) {
    double all = arity > 0 ? 1.0 : 0.0;
    for (const auto& law : laws) all *= law[1];
    out[1] = p + (1.0 - p) * all;
    out[0] = (1.0 - p) * (1.0 - all);
  };
  return {RecursiveSpec("transversal", 2, StateDistribution::bernoulli(p), node_fn, kernel, product),
          params.offspring(OffspringDistribution::catalan())};
}

BuiltExample random_child(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "offspring"});
  const std::size_t k = params.count("k", 3, 1, 1u << 20);
  auto node_fn = [k](std::size_t arity, std::span<const State> c, double u) -> State {
    if (arity == 0) return static_cast<State>(uniform_index(u, k));
    return c[uniform_index(u, arity)];
  };
  auto kernel = [k](std::size_t arity, std::span<const State> c, double w, std::span<double> acc) {
    if (arity == 0) {
      for (std::size_t s = 0; s < k; ++s) acc[s] += w / static_cast<double>(k);
      return;
    }
    for (State v : c) acc[v] += w / static_cast<double>(arity);
  };
  auto product = [k](std::size_t arity, Laws laws, std::span<double> out) {
    if (arity == 0) {
      std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(k));
      return;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& law : laws) {
      for (std::size_t s = 0; s < k; ++s) out[s] += law[s] / static_cast<double>(arity);
    }
  };
  return {RecursiveSpec("random_child", k, StateDistribution::uniform(k), node_fn, kernel, product),
          params.offspring(OffspringDistribution::catalan())};
}

BuiltExample minimax(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"p", "q", "offspring"});
  const double p = params.probability("p", 0.5);  // max-node probability
  const double q = params.probability("q", 0.5);  // leaf Bernoulli parameter
  auto node_fn = [p, q](std::size_t arity, std::span<const State> c, double u) -> State {
    if (arity == 0) return u < q ? 1 : 0;
    return u < p ? *std::max_element(c.begin(), c.end()) : *std::min_element(c.begin(), c.end());
  };
  auto kernel = [p, q](std::size_t arity, std::span<const State> c, double w,
                       std::span<double> acc) {
    if (arity == 0) {
      acc[1] += w * q;
      acc[0] += w * (1.0 - q);
      return;
    }
    acc[*std::max_element(c.begin(), c.end())] += w * p;
    acc[*std::min_element(c.begin(), c.end())] += w * (1.0 - p);
  };
  auto product = [p, q](std::size_t arity, Laws laws, std::span<double> out) {
    if (arity == 0) {
      out[1] = q;
      out[0] = 1.0 - q;
      return;
    }
    double all_zero = 1.0, all_one = 1.0;
    for (const auto& law : laws) {
      all_zero *= law[0];
      all_one *= law[1];
    }
    out[1] = p * (1.0 - all_zero) + (1.0 - p) * all_one;
    out[0] = 1.0 - out[1];
  };
  return {RecursiveSpec("minimax", 2, StateDistribution::bernoulli(q), node_fn, kernel, product),
          params.offspring(OffspringDistribution::catalan())};
}

BuiltExample boolean_functions(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "p", "offspring"});
  const std::uint32_t vars = params.count("k", 1, 1, 3);
  const double p = params.probability("p", 0.5);  // AND-node probability
  const OffspringDistribution catalan = OffspringDistribution::catalan();
  const OffspringDistribution d = params.offspring(catalan);
  if (d.kind() != OffspringKind::explicit_support || d.truncated_pmf(0) != catalan.truncated_pmf(0)) {
    params.fail("requires binary offspring p0 = p2 = 1/2");
  }
  const std::uint32_t rows = 1u << vars;  // assignments
  const std::size_t k = std::size_t{1} << rows;
  const State all_true = static_cast<State>(k - 1);
  // Literal tables in the order x_1..x_k, not x_1..not x_k.
  std::vector<State> literals;
  for (std::uint32_t neg = 0; neg < 2; ++neg) {
    for (std::uint32_t i = 0; i < vars; ++i) {
      State table = 0;
      for (std::uint32_t a = 0; a < rows; ++a) {
        if (((a >> i) & 1u) != neg) table |= State{1} << a;
      }
      literals.push_back(table);
    }
  }
  auto node_fn = [p, literals, all_true](std::size_t arity, std::span<const State> c,
                                         double u) -> State {
    if (arity == 0) return literals[uniform_index(u, literals.size())];
    State out = u < p ? all_true : 0;
    for (State v : c) out = u < p ? (out & v) : (out | v);
    return out;
  };
  std::optional<ExactKernel> kernel;
  if (vars <= 2) {
    kernel = [p, literals, all_true](std::size_t arity, std::span<const State> c, double w,
                                     std::span<double> acc) {
      if (arity == 0) {
        for (State lit : literals) acc[lit] += w / static_cast<double>(literals.size());
        return;
      }
      State conj = all_true, disj = 0;
      for (State v : c) {
        conj &= v;
        disj |= v;
      }
      acc[conj] += w * p;
      acc[disj] += w * (1.0 - p);
    };
  }
  std::vector<double> leaf(k, 0.0);
  for (State lit : literals) leaf[lit] += 1.0 / static_cast<double>(literals.size());
  return {RecursiveSpec("boolean_functions", k, StateDistribution(std::move(leaf)), node_fn, kernel),
          d};
}

BuiltExample binary_subtree(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "reduction", "offspring"});
  const std::size_t k = params.count("k", 16, 1, 1u << 20);
  const Reduction r = params.reduction();
  const OffspringDistribution d = params.offspring(OffspringDistribution::zero_or(3));
  if (d.pmf(0) + d.pmf(1) + d.pmf(2) >= 1.0) {
    params.fail("requires Pr{xi > 2} > 0 (otherwise the subtree is the whole tree)");
  }
  // Node count of the selected subtree: 1 + the two selected children.
  auto node_fn = [k, r](std::size_t arity, std::span<const State> c, double u) -> State {
    if (arity <= 2) {
      std::uint64_t sum = 1;
      for (State v : c) sum += v;
      return reduce(sum, k, r);
    }
    const auto [i, j] = binary_subtree_pair_selection(static_cast<std::uint32_t>(arity), u);
    return reduce(1 + std::uint64_t{c[i - 1]} + c[j - 1], k, r);
  };
  std::optional<ExactKernel> kernel;
  std::optional<ProductLaw> product;
  if (d.finite_support() && d.support_bound() <= 6) {
    kernel = [k, r](std::size_t arity, std::span<const State> c, double w, std::span<double> acc) {
      if (arity <= 2) {
        std::uint64_t sum = 1;
        for (State v : c) sum += v;
        acc[reduce(sum, k, r)] += w;
        return;
      }
      const double share = w / static_cast<double>(choose2(arity));
      for (std::size_t i = 0; i < arity; ++i) {
        for (std::size_t j = i + 1; j < arity; ++j) acc[reduce(1 + std::uint64_t{c[i]} + c[j], k, r)] += share;
      }
    };
    product = [k, r](std::size_t arity, Laws laws, std::span<double> out) {
      if (arity <= 2) {
        write(out, sum_law(laws, k, 1, r));
        return;
      }
      std::fill(out.begin(), out.end(), 0.0);
      const double share = 1.0 / static_cast<double>(choose2(arity));
      for (std::size_t i = 0; i < arity; ++i) {
        for (std::size_t j = i + 1; j < arity; ++j) {
          const auto pair = shift_law(add_laws(laws[i], laws[j], r), 1, r);
          for (std::size_t s = 0; s < k; ++s) out[s] += share * pair[s];
        }
      }
    };
  }
  return {RecursiveSpec("binary_subtree", k, StateDistribution::point_mass(k, reduce(1, k, r)),
                        node_fn, kernel, product),
          d};
}

BuiltExample majority(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "p", "offspring"});
  const std::uint32_t half = params.count("k", 1, 1, 1000);
  const double p = params.probability("p", 0.3);
  const OffspringDistribution forced = OffspringDistribution::zero_or(2 * half + 1);
  if (params.has("offspring") &&
      params.offspring(forced).truncated_pmf(0) != forced.truncated_pmf(0)) {
    params.fail("offspring is forced to p0 = 2k/(2k+1), p_{2k+1} = 1/(2k+1)");
  }
  auto node_fn = [p](std::size_t arity, std::span<const State> c, double u) -> State {
    if (arity == 0) return u < p ? 1 : 0;
    std::size_t ones = 0;
    for (State v : c) ones += v;
    return 2 * ones >= arity ? 1 : 0;
  };
  auto kernel = [p, node_fn](std::size_t arity, std::span<const State> c, double w,
                             std::span<double> acc) {
    if (arity == 0) {
      acc[1] += w * p;
      acc[0] += w * (1.0 - p);
      return;
    }
    acc[node_fn(arity, c, 0.0)] += w;
  };
  auto product = [p](std::size_t arity, Laws laws, std::span<double> out) {
    if (arity == 0) {
      out[1] = p;
      out[0] = 1.0 - p;
      return;
    }
    std::vector<double> success;
    for (const auto& law : laws) success.push_back(law[1]);
    const auto counts = success_count_law(success);
    CompensatedSum ones;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (2 * c >= arity) ones += counts[c];
    }
    out[1] = std::min(1.0, ones.value());
    out[0] = 1.0 - out[1];
  };
  return {RecursiveSpec("majority", 2, StateDistribution::bernoulli(p), node_fn, kernel,
                        product),
          forced};
}

BuiltExample median(const ExampleConfig& cfg) {
  const Params params(cfg.name, cfg.params, {"k", "offspring"});
  const std::size_t k = params.count("k", 3, 1, 1u << 16);
  const OffspringDistribution d = params.offspring(OffspringDistribution::zero_or(3));
  if (!d.finite_support()) params.fail("requires a finite offspring law supported on 0 and odd counts");
  const auto pmf = d.truncated_pmf(0);
  for (std::size_t i = 2; i < pmf.size(); i += 2) {
    if (pmf[i] > 0.0) params.fail("offspring counts must be 0 or odd");
  }
  auto node_fn = [k](std::size_t arity, std::span<const State> c, double u) -> State {
    if (arity == 0) return static_cast<State>(uniform_index(u, k));
    std::vector<State> sorted(c.begin(), c.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(arity / 2), sorted.end());
    return sorted[arity / 2];
  };
  auto kernel = [k, node_fn](std::size_t arity, std::span<const State> c, double w,
                             std::span<double> acc) {
    if (arity == 0) {
      for (std::size_t s = 0; s < k; ++s) acc[s] += w / static_cast<double>(k);
      return;
    }
    acc[node_fn(arity, c, 0.0)] += w;
  };
  // Pr{median <= s} = Pr{at least (l+1)/2 children are <= s}.
  auto product = [k](std::size_t arity, Laws laws, std::span<double> out) {
    if (arity == 0) {
      std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(k));
      return;
    }
    const std::size_t needed = (arity + 1) / 2;
    std::vector<double> cdf_below(arity, 0.0);
    double previous = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t i = 0; i < arity; ++i) cdf_below[i] = std::min(1.0, cdf_below[i] + laws[i][s]);
      const auto counts = success_count_law(cdf_below);
      CompensatedSum at_most;
      for (std::size_t c = needed; c < counts.size(); ++c) at_most += counts[c];
      const double current = s + 1 == k ? 1.0 : std::min(1.0, at_most.value());
      out[s] = std::max(0.0, current - previous);
      previous = current;
    }
  };
  return {RecursiveSpec("median", k, StateDistribution::uniform(k), node_fn, kernel, product), d};
}

}  // namespace

BuiltExample build_example(const ExampleConfig& config) {
  if (config.name == "counting") return counting(config);
  if (config.name == "leaf_counter") return leaf_counter(config);
  if (config.name == "path_length") return path_length(config);
  if (config.name == "transversal") return transversal(config);
  if (config.name == "random_child") return random_child(config);
  if (config.name == "minimax") return minimax(config);
  if (config.name == "boolean_functions") return boolean_functions(config);
  if (config.name == "binary_subtree") return binary_subtree(config);
  if (config.name == "majority") return majority(config);
  if (config.name == "median") return median(config);
  throw ConfigError("unknown example \"" + config.name + "\"");
}

const std::vector<ExampleInfo>& example_registry() {
  static const std::vector<ExampleInfo> registry = {
      {"counting", "f_l = 1 + sum of children, reduced; root of T_n is n (reduced)",
       "k (states, default 5), reduction (mod|min, default mod), offspring (default catalan)",
       "root of T_n = n mod k exactly", false},
      {"leaf_counter", "f_0 = 1, f_l = sum of children, reduced; counts leaves",
       "k (default 5), reduction (default mod), offspring (default catalan)",
       "Catalan: root of T_n = (n+1)/2 mod k", false},
      {"path_length", "f_0 = 0, f_l = 1 + value of a uniform child; random path length",
       "k (default 8), reduction (default mod), offspring (default catalan)",
       "path_length_limit_pmf, W geometric(p0), survival <= (1-p0)^t", true},
      {"transversal", "value 1 if marked (prob p), else product of children (0 at leaves)",
       "p (marking probability, default 0.5), offspring (default catalan)",
       "transversal_rho_star, survival <= (1-p)^t", true},
      {"random_child", "leaves uniform on k states, f_l = value of a uniform child",
       "k (default 3), offspring (default catalan)", "W_inf uniform, survival <= (1-p0)^t", true},
      {"minimax", "max node with prob p, else min node; Bernoulli(q) leaves",
       "p (max-node probability, default 0.5), q (leaf probability, default 0.5), offspring "
       "(default catalan)",
       "minimax_limits, survival <= (1-(1-p1)(p p* + (1-p)(1-p*)))^t", true},
      {"boolean_functions", "AND node with prob p, else OR; leaves uniform literals; value = truth table",
       "k (variables 1..3, default 1), p (AND probability, default 0.5); offspring fixed to catalan",
       "exact kernel for k <= 2; every function has positive limit probability", true},
      {"binary_subtree", "node count of a random binary subtree (two children chosen when l >= 3)",
       "k (default 16), reduction (default mod), offspring (default p0=2/3, p3=1/3; needs "
       "Pr{xi>2}>0)",
       "odd sizes when p1 = 0; exact kernel when support <= 6", true},
      {"majority", "majority of 2k+1 children; Bernoulli(p) leaves",
       "k (2k+1 children, default 1), p (leaf probability, default 0.3); offspring forced",
       "majority_limits (p*, p01, p10, conditional limit)", true},
      {"median", "median of the children; leaves uniform on k states",
       "k (states, default 3), offspring (0 or odd counts, default p0=2/3, p3=1/3)",
       "coalescence checked empirically", true},
  };
  return registry;
}

double path_length_limit_pmf(double p0, std::uint64_t i) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("p0 must lie in (0, 1)");
  return static_cast<double>(i + 1) * p0 * p0 * std::pow(1.0 - p0, static_cast<double>(i));
}

TransversalLimit transversal_rho_star(const OffspringDistribution& d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("marking probability must lie in [0, 1]");
  const double p0 = d.pmf(0);
  auto fixed_point_gap = [&](double r) { return r - p - (1.0 - p) * (d.gf(r) - p0); };
  const BisectionResult root = bisect(fixed_point_gap, 0.0, 1.0);
  const double rho = p / (1.0 - (1.0 - p) * d.gf_derivative(root.root));
  return {p == 0.0 ? 0.0 : rho, root.root, std::abs(fixed_point_gap(root.root))};
}

MinimaxLimits minimax_limits(const OffspringDistribution& d, double max_prob, double leaf_prob) {
  if (!(max_prob >= 0.0 && max_prob <= 1.0 && leaf_prob >= 0.0 && leaf_prob <= 1.0)) {
    throw DomainError("minimax probabilities must lie in [0, 1]");
  }
  const double p0 = d.pmf(0);
  auto gap = [&](double x) {
    return x - (leaf_prob * p0 + max_prob * (1.0 - d.gf(1.0 - x)) +
                (1.0 - max_prob) * (d.gf(x) - p0));
  };
  const double p_star = bisect(gap, 0.0, 1.0).root;
  const double g_low = d.gf_derivative(1.0 - p_star);
  const double g_high = d.gf_derivative(p_star);
  const double denominator = 1.0 - max_prob * g_low - (1.0 - max_prob) * g_high;
  const bool degenerate = std::abs(denominator) < 1e-9;
  const double limit =
      degenerate ? std::nan("") : max_prob * (1.0 - g_low) / denominator;
  return {p_star, limit, denominator, degenerate};
}

MajorityLimits majority_limits(std::uint32_t k, double p) {
  if (k < 1) throw DomainError("majority needs k >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("leaf probability must lie in [0, 1]");
  const std::uint64_t n = 2 * std::uint64_t{k} + 1;
  const double internal = 1.0 / static_cast<double>(n);
  auto gap = [&](double x) {
    return x - (internal * binomial_tail(n, x, k + 1) + (1.0 - internal) * p);
  };
  const double p_star = bisect(gap, 0.0, 1.0).root;
  const double p01 = binomial_tail(2 * k, p_star, k + 1);
  const double p10 = std::max(0.0, 1.0 - binomial_tail(2 * k, p_star, k));
  return {p_star, p01, p10, p01 / (p01 + p10)};
}

std::pair<std::uint32_t, std::uint32_t> binary_subtree_pair_selection(std::uint32_t arity, double u) {
  if (arity < 2) throw DomainError("pair selection needs at least two children");
  auto index = static_cast<std::uint64_t>(uniform_index(u, choose2(arity)));
  for (std::uint32_t i = 1; i < arity; ++i) {
    const std::uint64_t row = arity - i;
    if (index < row) return {i, static_cast<std::uint32_t>(i + 1 + index)};
    index -= row;
  }
  return {arity - 1, arity};
}

}  // namespace gwrec
