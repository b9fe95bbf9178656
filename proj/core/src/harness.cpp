#include "treelab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "treelab/automorphisms.hpp"
#include "treelab/patterns.hpp"
#include "treelab/sampler.hpp"

namespace treelab {

namespace {

int opt_int(const std::map<std::string, std::string>& options, const std::string& key, int def) {
  const auto it = options.find(key);
  if (it == options.end()) return def;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter option '" + key + "': '" + it->second +
                                "' is not an integer");
  }
}

double opt_double(const std::map<std::string, std::string>& options, const std::string& key,
                  double def) {
  const auto it = options.find(key);
  if (it == options.end()) return def;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter option '" + key + "': '" + it->second +
                                "' is not a number");
  }
}

void reject_unknown_options(const std::string& id,
                            const std::map<std::string, std::string>& options,
                            std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : options) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw std::invalid_argument("parameter '" + id + "': unknown option '" + key + "'");
  }
}

// Runs fn(i) for every i in [0, count), distributing replicates over worker
// threads through a shared atomic counter. Results must be written into
// replicate-indexed slots by fn, which keeps every output independent of the
// scheduling. The first exception thrown by any worker is rethrown here.
void parallel_replicates(long long count, int threads,
                         const std::function<void(long long)>& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

int resolve_threads(int requested, long long work) {
  long long t = requested;
  if (t <= 0) t = static_cast<long long>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return static_cast<int>(std::min<long long>(t, std::max<long long>(1, work)));
}

// Directed-edge layer recursion. Round k holds, for every vertex v at once,
// w_k(v) = #vertices at distance exactly k from v, via
//   f_k(u->v) = w_{k-1}(v) - f_{k-1}(v->u),   f_1(u->v) = 1,
//   w_k(v) = sum of f_k(v->x) over neighbours x,
// where f_k(u->v) counts vertices at distance k from u whose path leaves
// through v. Each round costs O(n).
class LayerRounds {
 public:
  explicit LayerRounds(const LabelledTree& t) : n_(t.n()) {
    off_.resize(n_ + 2, 0);
    for (int v = 1; v <= n_; ++v) off_[v + 1] = off_[v] + t.degree(v);
    const int m = off_[n_ + 1];
    head_.resize(m);
    rev_.resize(m);
    for (int v = 1; v <= n_; ++v) {
      const auto nb = t.neighbors(v);
      for (std::size_t j = 0; j < nb.size(); ++j) head_[off_[v] + static_cast<int>(j)] = nb[j];
    }
    for (int v = 1; v <= n_; ++v) {
      const auto nb = t.neighbors(v);
      for (std::size_t j = 0; j < nb.size(); ++j) {
        const int u = nb[j];
        const auto un = t.neighbors(u);
        const int pos =
            static_cast<int>(std::lower_bound(un.begin(), un.end(), v) - un.begin());
        rev_[off_[v] + static_cast<int>(j)] = off_[u] + pos;
      }
    }
    f_.assign(m, 1);
    f_next_.assign(m, 0);
    w_.resize(n_ + 1, 0);
    cum_.resize(n_ + 1, 0);
    for (int v = 1; v <= n_; ++v) {
      w_[v] = off_[v + 1] - off_[v];
      cum_[v] = w_[v];
    }
    k_ = 1;
  }

  int k() const { return k_; }
  const std::vector<int>& layer() const { return w_; }    // w_k(v)
  const std::vector<int>& visited() const { return cum_; }  // sum_{d<=k} w_d(v)

  // Advances to depth k+1. Returns false (and stops) once every layer is empty.
  bool step() {
    bool any = false;
    for (int v = 1; v <= n_; ++v) {
      for (int e = off_[v]; e < off_[v + 1]; ++e) {
        const int u = head_[e];
        f_next_[e] = w_[u] - f_[rev_[e]];
      }
    }
    f_.swap(f_next_);
    ++k_;
    for (int v = 1; v <= n_; ++v) {
      int sum = 0;
      for (int e = off_[v]; e < off_[v + 1]; ++e) sum += f_[e];
      w_[v] = sum;
      cum_[v] += sum;
      if (sum > 0) any = true;
    }
    return any;
  }

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<int> off_, head_, rev_;
  std::vector<int> f_, f_next_;
  std::vector<int> w_, cum_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Parameter registry
// ---------------------------------------------------------------------------

RealParameter make_parameter(const std::string& id,
                             const std::map<std::string, std::string>& options) {
  RealParameter p;
  if (id == "leaves") {
    reject_unknown_options(id, options, {});
    p.id = "leaves";
    p.relabel_invariant = true;
    p.eval = [](const LabelledTree& t) { return static_cast<double>(degree_count(t, 1)); };
    return p;
  }
  if (id == "degree-count") {
    reject_unknown_options(id, options, {"d"});
    const int d = opt_int(options, "d", 1);
    if (d < 1) throw std::invalid_argument("parameter degree-count: d must be >= 1");
    p.id = "degree-count-" + std::to_string(d);
    p.relabel_invariant = true;
    p.eval = [d](const LabelledTree& t) { return static_cast<double>(degree_count(t, d)); };
    return p;
  }
  if (id == "max-degree") {
    reject_unknown_options(id, options, {});
    p.id = "max-degree";
    p.relabel_invariant = true;
    p.eval = [](const LabelledTree& t) { return static_cast<double>(max_degree(t)); };
    return p;
  }
  if (id == "path-count") {
    reject_unknown_options(id, options, {"l", "beta-filter"});
    const int l = opt_int(options, "l", 3);
    if (l < 2) throw std::invalid_argument("parameter path-count: l must be >= 2");
    std::optional<double> filter;
    if (options.count("beta-filter")) {
      filter = opt_double(options, "beta-filter", 0.0);
      if (!(*filter > 0)) throw std::invalid_argument("parameter path-count: beta-filter must be > 0");
    }
    p.id = "path-count-" + std::to_string(l) + (filter ? "-filtered" : "");
    p.relabel_invariant = true;
    p.eval = [l, filter](const LabelledTree& t) {
      return static_cast<double>(path_count(t, l, filter));
    };
    return p;
  }
  if (id == "pattern") {
    reject_unknown_options(id, options, {"pattern-json", "degree-cap"});
    const auto it = options.find("pattern-json");
    if (it == options.end())
      throw std::invalid_argument("parameter pattern: option pattern-json is required");
    const Pattern pat = pattern_from_json(it->second);
    std::optional<int> cap;
    if (options.count("degree-cap")) {
      cap = opt_int(options, "degree-cap", 0);
      if (*cap < 1) throw std::invalid_argument("parameter pattern: degree-cap must be >= 1");
    }
    p.id = cap ? "pattern-capped" : "pattern";
    p.relabel_invariant = true;
    p.eval = [pat, cap](const LabelledTree& t) {
      return static_cast<double>(pattern_count(t, pat, cap));
    };
    return p;
  }
  if (id == "beta") {
    reject_unknown_options(id, options, {});
    p.id = "beta";
    p.relabel_invariant = true;
    p.eval = [](const LabelledTree& t) { return beta_exact_adaptive(t); };
    return p;
  }
  if (id == "log-aut-rooted") {
    reject_unknown_options(id, options, {"root"});
    const int root = opt_int(options, "root", 1);
    p.id = "log-aut-rooted";
    p.relabel_invariant = false;
    p.eval = [root](const LabelledTree& t) { return log_aut_rooted(t, root); };
    return p;
  }
  if (id == "log-aut-small") {
    reject_unknown_options(id, options, {"root", "threshold"});
    const int root = opt_int(options, "root", 1);
    std::optional<int> threshold;
    if (options.count("threshold")) {
      threshold = opt_int(options, "threshold", 0);
      if (*threshold < 1)
        throw std::invalid_argument("parameter log-aut-small: threshold must be >= 1");
    }
    p.id = "log-aut-small";
    p.relabel_invariant = false;
    p.eval = [root, threshold](const LabelledTree& t) {
      const int thr = threshold ? *threshold
                                : std::max(1, static_cast<int>(std::floor(
                                                  4.0 * std::log(static_cast<double>(t.n())))));
      return log_aut_small(t, root, thr);
    };
    return p;
  }
  if (id == "log-aut-full") {
    reject_unknown_options(id, options, {});
    p.id = "log-aut-full";
    p.relabel_invariant = true;
    p.eval = [](const LabelledTree& t) { return log_aut_full(t); };
    return p;
  }
  if (id == "branch-count") {
    reject_unknown_options(id, options, {"root", "vertex", "branch"});
    const int root = opt_int(options, "root", 1);
    const int vertex = opt_int(options, "vertex", 2);
    std::string spec = "singleton";
    if (const auto it = options.find("branch"); it != options.end()) spec = it->second;
    ShapeCode code;
    if (spec == "singleton") {
      code = branch_shape_singleton().code;
    } else if (spec == "edge") {
      code = branch_shape_rooted_edge().code;
    } else {
      code = branch_shape_from_code(spec).code;  // validates the code
    }
    p.id = "branch-count";
    p.relabel_invariant = false;
    p.eval = [root, vertex, code](const LabelledTree& t) {
      return static_cast<double>(count_branches(t, root, vertex, code));
    };
    return p;
  }
  if (id == "edge-count") {
    reject_unknown_options(id, options, {});
    p.id = "edge-count";
    p.relabel_invariant = true;
    p.eval = [](const LabelledTree& t) { return static_cast<double>(t.n() - 1); };
    return p;
  }
  throw std::invalid_argument("unknown parameter id '" + id + "'");
}

std::vector<std::string> parameter_ids() {
  return {"beta",        "branch-count",  "degree-count",  "edge-count",
          "leaves",      "log-aut-full",  "log-aut-rooted", "log-aut-small",
          "max-degree",  "path-count",    "pattern"};
}

// ---------------------------------------------------------------------------
// Experiment configuration JSON
// ---------------------------------------------------------------------------

ExperimentConfig experiment_config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("experiment config: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.n = j.at("n").get<int>();
    cfg.count = j.at("count").get<long long>();
    cfg.parameter = j.at("parameter").get<std::string>();
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      cfg.seed.master = s.value("master", std::uint64_t{0});
      cfg.seed.stream = s.value("stream", std::uint64_t{0});
    }
    if (j.contains("options")) {
      for (const auto& [key, value] : j.at("options").items())
        cfg.options[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    cfg.out_path = j.value("out_path", std::string());
    cfg.format = j.value("format", std::string("csv"));
    cfg.threads = j.value("threads", 0);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("experiment config: ") + e.what());
  }
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["count"] = cfg.count;
  j["seed"] = {{"master", cfg.seed.master}, {"stream", cfg.seed.stream}};
  j["parameter"] = cfg.parameter;
  j["options"] = nlohmann::json::object();
  for (const auto& [key, value] : cfg.options) j["options"][key] = value;
  j["out_path"] = cfg.out_path;
  j["format"] = cfg.format;
  j["threads"] = cfg.threads;
  return j.dump(2);
}

std::string SummaryStats::to_json() const {
  nlohmann::json j;
  j["parameter"] = parameter;
  j["n"] = n;
  j["m"] = m;
  j["mean"] = mean;
  j["variance"] = variance;
  j["min"] = min;
  j["max"] = max;
  if (ks_delta)
    j["ks_delta"] = *ks_delta;
  else
    j["ks_delta"] = nullptr;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

SummaryStats run_experiment(const ExperimentConfig& cfg, std::vector<double>* values_out) {
  if (cfg.n < 2) throw std::invalid_argument("experiment: n must be >= 2");
  if (cfg.count < 1) throw std::invalid_argument("experiment: count must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json")
    throw std::invalid_argument("experiment: format must be 'csv' or 'json'");
  const RealParameter param = make_parameter(cfg.parameter, cfg.options);

  std::vector<double> values(static_cast<std::size_t>(cfg.count));
  const int threads = resolve_threads(cfg.threads, cfg.count);
  parallel_replicates(cfg.count, threads, [&](long long i) {
    RngStream rng(SeedSpec{cfg.seed.master, cfg.seed.stream + static_cast<std::uint64_t>(i)});
    if (param.relabel_invariant) {
      // The relabelling stage cannot change the value; skip it.
      const LabelledTree t = aldous_broder_stage1(sample_attachment(cfg.n, rng));
      values[static_cast<std::size_t>(i)] = param.eval(t);
    } else {
      const LabelledTree t = sample_uniform(cfg.n, rng);
      values[static_cast<std::size_t>(i)] = param.eval(t);
    }
  });

  SummaryStats s;
  s.parameter = param.id;
  s.n = cfg.n;
  s.m = cfg.count;
  long double mean = 0.0L;
  for (double v : values) mean += v;
  mean /= static_cast<long double>(values.size());
  long double var = 0.0L;
  for (double v : values) {
    const long double d = v - mean;
    var += d * d;
  }
  s.mean = static_cast<double>(mean);
  s.variance = values.size() >= 2 ? static_cast<double>(var / (values.size() - 1)) : 0.0;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  if (values.size() >= 2 && s.variance > 0.0) s.ks_delta = ks_normal(values);

  if (!cfg.out_path.empty()) {
    if (cfg.format == "csv")
      write_values_csv(cfg.out_path, values);
    else
      write_values_json(cfg.out_path, values);
  }
  if (values_out) *values_out = std::move(values);
  return s;
}

double ks_normal(std::vector<double> values) {
  const std::size_t m = values.size();
  if (m < 2) throw std::invalid_argument("degenerate sample");
  long double mean = 0.0L;
  for (double v : values) mean += v;
  mean /= static_cast<long double>(m);
  long double var = 0.0L;
  for (double v : values) {
    const long double d = v - mean;
    var += d * d;
  }
  var /= static_cast<long double>(m - 1);
  if (!(var > 0.0L)) throw std::invalid_argument("degenerate sample");
  const double sd = std::sqrt(static_cast<double>(var));
  const double mu = static_cast<double>(mean);
  std::sort(values.begin(), values.end());
  double delta = 0.0;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double phi = normal_cdf((values[i] - mu) / sd);
    delta = std::max(delta, phi - static_cast<double>(i) * inv_m);
    delta = std::max(delta, static_cast<double>(i + 1) * inv_m - phi);
  }
  return delta;
}

void write_values_csv(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "replicate,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: '" + path + "'");
}

void write_values_json(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const nlohmann::json j = values;
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: '" + path + "'");
}

// ---------------------------------------------------------------------------
// Beta decisions
// ---------------------------------------------------------------------------

double beta_exact_adaptive(const LabelledTree& t) {
  const int n = t.n();
  LayerRounds dp(t);
  std::int64_t best_num = 0, best_den = 1;
  for (int v = 1; v <= n; ++v) {
    const std::int64_t w = dp.layer()[v];
    if (w * best_den > best_num) {
      best_num = w;
      best_den = 1;
    }
  }
  for (;;) {
    const int k = dp.k();
    // Every vertex at distance > k from v is still unvisited, so any future
    // layer from v has size at most n - 1 - visited(v) and depth at least
    // k + 1. Once no vertex can beat the current best, the value is final.
    std::int64_t max_remaining = 0;
    for (int v = 1; v <= n; ++v) {
      const std::int64_t r = n - 1 - dp.visited()[v];
      if (r > max_remaining) max_remaining = r;
    }
    if (max_remaining * best_den <= best_num * (k + 1)) break;
    if (!dp.step()) break;
    const std::int64_t d = dp.k();
    for (int v = 1; v <= n; ++v) {
      const std::int64_t w = dp.layer()[v];
      if (w * best_den > best_num * d) {
        best_num = w;
        best_den = d;
      }
    }
  }
  return static_cast<double>(best_num) / static_cast<double>(best_den);
}

bool beta_at_least(const LabelledTree& t, double c) {
  if (!(c > 1.0)) throw std::invalid_argument("beta decision: threshold must exceed 1");
  const int n = t.n();
  const int delta = max_degree(t);
  // Depth 1 sees a layer of size exactly max degree somewhere.
  if (static_cast<double>(delta) >= c) return true;
  const int cap = static_cast<int>(std::floor((n - 1) / c));
  // A depth-d layer of a tree with maximum degree delta has at most
  // delta (delta-1)^{d-1} vertices; if that stays below c d for every
  // admissible depth, no witness can exist.
  bool possible = false;
  double bound = delta;
  for (int d = 2; d <= cap; ++d) {
    bound *= std::max(0, delta - 1);
    if (bound >= c * d) {
      possible = true;
      break;
    }
    if (delta <= 2) break;  // the bound is flat but c d keeps growing
  }
  if (!possible) return false;

  LayerRounds dp(t);  // depth-1 layers are degrees: no witness there
  for (;;) {
    const int k = dp.k();
    if (k >= cap) return false;
    std::int64_t max_remaining = 0;
    for (int v = 1; v <= n; ++v) {
      const std::int64_t r = n - 1 - dp.visited()[v];
      if (r > max_remaining) max_remaining = r;
    }
    // Future layers have size <= max_remaining and depth >= k + 1.
    if (static_cast<double>(max_remaining) < c * (k + 1)) return false;
    if (!dp.step()) return false;
    const int d = dp.k();
    for (int v = 1; v <= n; ++v)
      if (static_cast<double>(dp.layer()[v]) >= c * d) return true;
  }
}

// ---------------------------------------------------------------------------
// Tail report
// ---------------------------------------------------------------------------

TailReport tail_report(int n, long long m, SeedSpec seed, double beta_threshold,
                       int beta_subsample, int threads) {
  if (n < 2) throw std::invalid_argument("tail report: n must be >= 2");
  if (m < 1) throw std::invalid_argument("tail report: m must be >= 1");
  if (!(beta_threshold > 1.0))
    throw std::invalid_argument("tail report: beta threshold must exceed 1");
  if (beta_subsample < 0) beta_subsample = 0;
  const int sub = static_cast<int>(std::min<long long>(beta_subsample, m));

  std::vector<int> maxdegs(static_cast<std::size_t>(m));
  std::vector<char> exceeds(static_cast<std::size_t>(m));
  std::vector<double> betas(static_cast<std::size_t>(sub));
  parallel_replicates(m, resolve_threads(threads, m), [&](long long i) {
    RngStream rng(SeedSpec{seed.master, seed.stream + static_cast<std::uint64_t>(i)});
    // Max degree and beta are relabelling-invariant; stage I suffices.
    const LabelledTree t = aldous_broder_stage1(sample_attachment(n, rng));
    maxdegs[static_cast<std::size_t>(i)] = max_degree(t);
    exceeds[static_cast<std::size_t>(i)] = beta_at_least(t, beta_threshold) ? 1 : 0;
    if (i < sub) betas[static_cast<std::size_t>(i)] = beta_exact_adaptive(t);
  });

  TailReport r;
  r.n = n;
  r.m = m;
  r.beta_threshold = beta_threshold;
  r.beta_depth_cap = static_cast<int>(std::floor((n - 1) / beta_threshold));
  for (char e : exceeds) r.beta_exceed_count += e;

  const int dmax = *std::max_element(maxdegs.begin(), maxdegs.end());
  std::vector<long long> hist(dmax + 2, 0);
  for (int d : maxdegs) ++hist[d];
  r.maxdeg_exceed.assign(dmax + 1, 0);
  long long suffix = 0;
  for (int d = dmax; d >= 1; --d) {
    suffix += hist[d + 1];  // #samples with maxdeg > d
    r.maxdeg_exceed[d] = suffix;
  }
  r.maxdeg_bound.assign(dmax + 1, 0.0);
  for (int d = 1; d <= dmax; ++d) {
    const double p = std::min(
        1.0, std::exp(std::log(static_cast<double>(n)) - log_factorial(d)));
    const double phat =
        static_cast<double>(r.maxdeg_exceed[d]) / static_cast<double>(m);
    const double se = std::sqrt(std::max(0.0, phat * (1.0 - phat) / static_cast<double>(m)));
    r.maxdeg_bound[d] = p + 3.0 * se;
    if (phat > r.maxdeg_bound[d]) r.maxdeg_ok = false;
  }

  r.beta_subsample = sub;
  r.beta_quantile_probs = {0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
  if (sub > 0) {
    std::vector<double> sorted = betas;
    std::sort(sorted.begin(), sorted.end());
    for (double p : r.beta_quantile_probs) {
      const auto idx = static_cast<std::size_t>(std::llround(p * (sorted.size() - 1)));
      r.beta_quantiles.push_back(sorted[idx]);
    }
  }
  return r;
}

std::string TailReport::to_string() const {
  std::ostringstream os;
  os.precision(6);
  os << "tail report: n=" << n << " m=" << m << "\n";
  os << "  max degree vs min(1, n/d!) + 3se: " << (maxdeg_ok ? "ok" : "VIOLATION") << "\n";
  for (std::size_t d = 1; d < maxdeg_exceed.size(); ++d) {
    const double phat = static_cast<double>(maxdeg_exceed[d]) / static_cast<double>(m);
    os << "    P(maxdeg > " << d << ") = " << phat << " (" << maxdeg_exceed[d] << "/" << m
       << ") <= " << maxdeg_bound[d] << "\n";
  }
  os << "  beta >= " << beta_threshold << ": " << beta_exceed_count << " of " << m
     << " samples (depths 1.." << beta_depth_cap << " examined)\n";
  os << "  exact beta quantiles over first " << beta_subsample << " replicates:";
  for (std::size_t i = 0; i < beta_quantiles.size(); ++i)
    os << " q" << beta_quantile_probs[i] << "=" << beta_quantiles[i];
  os << "\n";
  return os.str();
}

std::string TailReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["beta_threshold"] = beta_threshold;
  j["beta_exceed_count"] = beta_exceed_count;
  j["beta_depth_cap"] = beta_depth_cap;
  j["maxdeg_exceed"] = std::vector<long long>(maxdeg_exceed.begin(), maxdeg_exceed.end());
  j["maxdeg_bound"] = maxdeg_bound;
  j["maxdeg_ok"] = maxdeg_ok;
  j["beta_subsample"] = beta_subsample;
  j["beta_quantile_probs"] = beta_quantile_probs;
  j["beta_quantiles"] = beta_quantiles;
  return j.dump(2);
}

}  // namespace treelab
