// treelab: command-line front end for the random-tree laboratory.
//
// Subcommands:
//   sample      draw uniform labelled trees, emit them in the tree text format
//   stats       evaluate a tree parameter on trees read from a file or stdin
//   moments     evaluate a closed-form moment formula, print a JSON report
//   verify      run the exact-enumeration cross-check suite (pass/fail table)
//   experiment  Monte Carlo driver: sample, evaluate, summarize, write values
//
// Exit codes: 0 success, 1 verification/runtime failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treelab/automorphisms.hpp"
#include "treelab/harness.hpp"
#include "treelab/moments.hpp"
#include "treelab/numeric.hpp"
#include "treelab/oracle.hpp"
#include "treelab/patterns.hpp"
#include "treelab/sampler.hpp"
#include "treelab/tree.hpp"

namespace {

using nlohmann::json;
using namespace treelab;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Parameter options shared by `stats` and `experiment`. Each flag maps onto
// one key of the parameter registry's option map.
struct ParameterFlags {
  std::string pattern_file;
  std::optional<int> l, root, threshold, d, vertex, degree_cap;
  std::optional<double> beta_filter;
  std::string branch;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pattern-file", pattern_file,
                    "JSON pattern file for --parameter pattern");
    cmd->add_option("--l", l, "path/pattern length option");
    cmd->add_option("--root", root, "root vertex option");
    cmd->add_option("--threshold", threshold, "branch-size threshold option");
    cmd->add_option("--d", d, "degree option for degree-count");
    cmd->add_option("--vertex", vertex, "vertex option for branch-count");
    cmd->add_option("--branch", branch,
                    "branch shape: 'singleton', 'edge', or a canonical code");
    cmd->add_option("--beta-filter", beta_filter, "layer-growth filter for path-count");
    cmd->add_option("--degree-cap", degree_cap, "degree cap option for pattern");
  }

  std::map<std::string, std::string> to_options() const {
    std::map<std::string, std::string> opts;
    if (!pattern_file.empty()) opts["pattern-json"] = read_file(pattern_file);
    if (l) opts["l"] = std::to_string(*l);
    if (root) opts["root"] = std::to_string(*root);
    if (threshold) opts["threshold"] = std::to_string(*threshold);
    if (d) opts["d"] = std::to_string(*d);
    if (vertex) opts["vertex"] = std::to_string(*vertex);
    if (!branch.empty()) opts["branch"] = branch;
    if (beta_filter) {
      std::ostringstream s;
      s.precision(17);
      s << *beta_filter;
      opts["beta-filter"] = s.str();
    }
    if (degree_cap) opts["degree-cap"] = std::to_string(*degree_cap);
    return opts;
  }
};

json report_to_json(const MomentReport& r) {
  json j;
  j["formula"] = r.formula;
  j["exact"] = r.exact_valid ? json(rat_string(r.exact)) : json(nullptr);
  j["value"] = r.value;
  j["log_value"] = r.log_value;
  return j;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleArgs {
  int n = 0;
  long long count = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string method = "aldous-broder";
  std::string out_path;
};

int run_sample(const SampleArgs& a) {
  if (a.method != "aldous-broder" && a.method != "prufer")
    throw std::invalid_argument("unknown --method '" + a.method + "'");
  std::ofstream file;
  if (!a.out_path.empty()) {
    file.open(a.out_path);
    if (!file) throw std::runtime_error("cannot open '" + a.out_path + "' for writing");
  }
  std::ostream& os = a.out_path.empty() ? std::cout : file;
  for (long long i = 0; i < a.count; ++i) {
    RngStream rng(SeedSpec{a.seed, a.stream + static_cast<std::uint64_t>(i)});
    const LabelledTree t =
        a.method == "prufer" ? sample_prufer(a.n, rng) : sample_uniform(a.n, rng);
    if (i > 0) os << "\n";
    write_tree(os, t);
  }
  if (!os) throw std::runtime_error("write failed");
  return 0;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string parameter;
  ParameterFlags flags;
  std::string in_path = "-";
  std::string out_path;
  std::string format = "csv";
};

int run_stats(const StatsArgs& a) {
  const RealParameter p = make_parameter(a.parameter, a.flags.to_options());

  std::ifstream file;
  if (a.in_path != "-") {
    file.open(a.in_path);
    if (!file) throw std::invalid_argument("cannot open '" + a.in_path + "' for reading");
  }
  std::istream& is = a.in_path == "-" ? std::cin : file;

  std::vector<double> values;
  int n_first = 0;
  bool same_n = true;
  while (true) {
    is >> std::ws;
    if (!is || is.peek() == std::char_traits<char>::eof()) break;
    const LabelledTree t = read_tree(is);
    if (values.empty())
      n_first = t.n();
    else if (t.n() != n_first)
      same_n = false;
    values.push_back(p.eval(t));
  }
  if (values.empty()) throw std::invalid_argument("no trees on input");

  if (!a.out_path.empty()) {
    if (a.format == "csv")
      write_values_csv(a.out_path, values);
    else if (a.format == "json")
      write_values_json(a.out_path, values);
    else
      throw std::invalid_argument("unknown --format '" + a.format + "'");
  }

  SummaryStats s;
  s.m = static_cast<long long>(values.size());
  s.parameter = p.id;
  s.n = same_n ? n_first : 0;
  long double sum = 0.0L;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = static_cast<double>(sum / static_cast<long double>(values.size()));
  long double ss = 0.0L;
  for (double v : values) {
    const long double d = static_cast<long double>(v) - s.mean;
    ss += d * d;
  }
  if (values.size() >= 2)
    s.variance = static_cast<double>(ss / static_cast<long double>(values.size() - 1));
  if (values.size() >= 2 && s.variance > 0.0) s.ks_delta = ks_normal(values);
  std::cout << s.to_json() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

ForestSpec forest_spec_from_json(const json& j) {
  ForestSpec spec;
  spec.n = j.at("n").get<int>();
  for (const json& c : j.at("components")) {
    ForestComponent comp;
    comp.vertices = c.at("vertices").get<std::vector<int>>();
    for (const json& e : c.value("edges", json::array()))
      comp.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    comp.anchors = c.at("anchors").get<std::vector<int>>();
    spec.components.push_back(std::move(comp));
  }
  return spec;
}

Pattern pattern_from_params(const json& j) { return pattern_from_json(j.at("pattern").dump()); }

BranchShape branch_from_params(const json& j) {
  const std::string b = j.at("branch").get<std::string>();
  if (b == "singleton") return branch_shape_singleton();
  if (b == "edge") return branch_shape_rooted_edge();
  return branch_shape_from_code(b);
}

int run_moments(const std::string& formula, const json& params) {
  json out;
  if (formula == "forest-count") {
    out = report_to_json(forest_count_exact(forest_spec_from_json(params)));
  } else if (formula == "pattern-mean") {
    out = report_to_json(
        pattern_expectation_exact(params.at("n").get<int>(), pattern_from_params(params)));
  } else if (formula == "pattern-mean-log") {
    out["formula"] = "pattern-mean-log";
    out["log_value"] =
        pattern_expectation_log(params.at("n").get<std::int64_t>(), pattern_from_params(params));
  } else if (formula == "conditional-pattern-mean") {
    out = report_to_json(conditional_pattern_expectation(
        params.at("x").get<std::vector<int>>(), pattern_from_params(params)));
  } else if (formula == "path-variance-leading") {
    out = report_to_json(
        path_variance_leading(params.at("n").get<std::int64_t>(), params.at("l").get<int>()));
  } else if (formula == "path-variance-identity") {
    const auto [lhs, rhs] = path_variance_identity(params.at("l").get<int>());
    out["formula"] = "path-variance-identity";
    out["lhs"] = rat_string(lhs);
    out["rhs"] = rat_string(rhs);
    out["equal"] = (lhs == rhs);
  } else if (formula == "multinomial-moment") {
    out = report_to_json(multinomial_factorial_moment(params.at("n").get<int>(),
                                                      params.at("a").get<std::vector<int>>(),
                                                      params.at("b").get<std::vector<int>>()));
  } else if (formula == "branch-moment") {
    out = report_to_json(branch_factorial_moment(
        params.at("n").get<int>(), branch_from_params(params), params.at("k").get<unsigned>(),
        params.value("at_root", false)));
  } else if (formula == "branch-moment-log") {
    out["formula"] = "branch-moment-log";
    out["log_value"] = branch_factorial_moment_log(
        params.at("n").get<std::int64_t>(), branch_from_params(params),
        params.at("k").get<unsigned>(), params.value("at_root", false));
  } else if (formula == "poisson-log-moments") {
    const PoissonLogMoments m = poisson_log_moments(params.at("lambda").get<double>(),
                                                    params.value("tail_tol", 1e-15));
    out = {{"formula", "poisson-log-moments"},
           {"e_log_fact", m.e_log_fact},
           {"e_log_fact_plus1", m.e_log_fact_plus1},
           {"e_log2_fact", m.e_log2_fact},
           {"tail_bound", m.tail_bound},
           {"terms", m.terms}};
  } else if (formula == "poisson-log-bounds") {
    const PoissonLogBounds b = poisson_log_bounds(params.at("lambda").get<double>());
    out = {{"formula", "poisson-log-bounds"}, {"a_lower", b.a_lower}, {"a_upper", b.a_upper},
           {"b_lower", b.b_lower},            {"b_upper", b.b_upper}, {"c_lower", b.c_lower}};
  } else if (formula == "lambda-series") {
    std::optional<std::int64_t> n;
    if (params.contains("n")) n = params.at("n").get<std::int64_t>();
    const LambdaSeriesReport r = lambda_series(params.at("s_max").get<int>(), n);
    out = {{"formula", "lambda-series"},
           {"s_max", r.s_max},
           {"s0", r.s0},
           {"s1", r.s1},
           {"s2", r.s2},
           {"tail0", r.tail0},
           {"tail1", r.tail1},
           {"tail2", r.tail2},
           {"shapes_per_size", r.shapes_per_size},
           {"method", r.method}};
  } else {
    throw std::invalid_argument(
        "unknown --formula '" + formula +
        "' (expected forest-count, pattern-mean, pattern-mean-log, conditional-pattern-mean, "
        "path-variance-leading, path-variance-identity, multinomial-moment, branch-moment, "
        "branch-moment-log, poisson-log-moments, poisson-log-bounds, lambda-series)");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckRow {
  bool pass = false;
  std::string name;
  std::string detail;
  double seconds = 0.0;
};

int run_verify(const std::string& suite, int n_max) {
  if (suite != "oracle") throw std::invalid_argument("unknown --suite '" + suite + "'");
  if (n_max < 2 || n_max > 8)
    throw std::invalid_argument("--n must be between 2 and 8 for the oracle suite");

  std::vector<CheckRow> rows;
  const auto timed = [&rows](const std::string& name,
                             const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckRow row;
    row.name = name;
    try {
      const auto [ok, detail] = body();
      row.pass = ok;
      row.detail = detail;
    } catch (const std::exception& e) {
      row.pass = false;
      row.detail = std::string("exception: ") + e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  };

  timed("tree-count", [&]() -> std::pair<bool, std::string> {
    for (int n = 2; n <= n_max; ++n) {
      BigInt seen = 0;
      enumerate_trees(n, [&](const LabelledTree&) { seen += 1; });
      if (seen != tree_count(n))
        return {false, "n=" + std::to_string(n) + ": enumeration count != n^(n-2)"};
    }
    return {true, "enumeration counts match n^(n-2) for n=2.." + std::to_string(n_max)};
  });

  timed("prufer-roundtrip", [&]() -> std::pair<bool, std::string> {
    for (int n = 2; n <= n_max; ++n) {
      bool ok = true;
      enumerate_trees(n, [&](const LabelledTree& t) {
        if (!ok) return;
        const LabelledTree back = prufer_decode(prufer_encode(t), n);
        if (back.edges() != t.edges()) ok = false;
      });
      if (!ok) return {false, "n=" + std::to_string(n) + ": decode(encode(t)) != t"};
    }
    return {true, "decode/encode identity on every tree, n=2.." + std::to_string(n_max)};
  });

  timed("leaf-mean-formula", [&]() -> std::pair<bool, std::string> {
    const Pattern leaf{2, {{1, 2}}, {1, 0}};
    for (int n = 2; n <= n_max; ++n) {
      const BigRat enumerated = exact_statistics(n, exact_leaf_count()).mean;
      const MomentReport closed = pattern_expectation_exact(n, leaf);
      if (enumerated != closed.exact)
        return {false, "n=" + std::to_string(n) + ": enumeration mean != closed form"};
    }
    return {true, "E[leaves] matches the closed form for n=2.." + std::to_string(n_max)};
  });

  timed("path-mean-formula", [&]() -> std::pair<bool, std::string> {
    const Pattern p3{3, {{1, 2}, {2, 3}}, {1, 1, 1}};
    for (int n = 3; n <= n_max; ++n) {
      const BigRat enumerated = exact_statistics(n, exact_path_count(3)).mean;
      const MomentReport closed = pattern_expectation_exact(n, p3);
      if (enumerated != closed.exact)
        return {false, "n=" + std::to_string(n) + ": enumeration mean != closed form"};
    }
    return {true, "E[3-vertex paths] matches the closed form for n=3.." + std::to_string(n_max)};
  });

  timed("aut-brute", [&]() -> std::pair<bool, std::string> {
    const int n_aut = std::min(n_max, 7);
    for (int n = 2; n <= n_aut; ++n) {
      bool ok = true;
      enumerate_trees(n, [&](const LabelledTree& t) {
        if (!ok) return;
        if (brute_aut(t) != aut_full_exact(t)) ok = false;
      });
      if (!ok) return {false, "n=" + std::to_string(n) + ": permutation count != branch product"};
    }
    return {true, "|Aut| by permutations == branch formula, n=2.." + std::to_string(n_aut)};
  });

  timed("beta-adaptive", [&]() -> std::pair<bool, std::string> {
    const int n_beta = std::min(n_max, 6);
    for (int n = 2; n <= n_beta; ++n) {
      bool ok = true;
      enumerate_trees(n, [&](const LabelledTree& t) {
        if (!ok) return;
        if (beta_exact_adaptive(t) != beta(t).value()) ok = false;
      });
      if (!ok) return {false, "n=" + std::to_string(n) + ": adaptive beta != quadratic beta"};
    }
    return {true, "adaptive beta == quadratic beta on every tree, n=2.." + std::to_string(n_beta)};
  });

  timed("sampler-uniformity", [&]() -> std::pair<bool, std::string> {
    // Chi-squared goodness of fit on the full tree space, cells indexed by
    // the Prüfer code. Deterministic seeds; reject below p = 1e-6.
    std::ostringstream detail;
    for (const std::string method : {"aldous-broder", "prufer"}) {
      for (int n : {4, 5}) {
        long long cells = 1;
        for (int i = 0; i < n - 2; ++i) cells *= n;
        const long long m = 40 * cells;
        std::vector<long long> hits(static_cast<std::size_t>(cells), 0);
        for (long long i = 0; i < m; ++i) {
          RngStream rng(SeedSpec{1234, static_cast<std::uint64_t>(i)});
          const LabelledTree t =
              method == "prufer" ? sample_prufer(n, rng) : sample_uniform(n, rng);
          const PruferSequence code = prufer_encode(t);
          long long idx = 0;
          for (int v : code) idx = idx * n + (v - 1);
          ++hits[static_cast<std::size_t>(idx)];
        }
        const double expect = static_cast<double>(m) / static_cast<double>(cells);
        double stat = 0.0;
        for (long long h : hits) {
          const double diff = static_cast<double>(h) - expect;
          stat += diff * diff / expect;
        }
        const double p = chi_squared_tail(stat, static_cast<double>(cells - 1));
        detail << method << " n=" << n << " p=" << std::setprecision(3) << p << "  ";
        if (p < 1e-6) return {false, detail.str() + "(rejected)"};
      }
    }
    return {true, detail.str()};
  });

  timed("stage1-martingale", [&]() -> std::pair<bool, std::string> {
    const MartingaleTrace tr = doob_stage1_trace(4, exact_leaf_count(), true);
    if (!tr.martingale_ok) return {false, "conditional means drift"};
    if (!tr.telescope_ok) return {false, "increment second moments do not sum to the variance"};
    return {true, "exposure martingale exact at n=4 (leaf count)"};
  });

  bool all = true;
  std::size_t width = 0;
  for (const CheckRow& r : rows) width = std::max(width, r.name.size());
  for (const CheckRow& r : rows) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
              << r.name << "  " << r.detail << "  (" << std::fixed << std::setprecision(2)
              << r.seconds << "s)\n";
    std::cout.unsetf(std::ios::floatfield);
  }
  std::cout << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string config_path;
  std::optional<int> n;
  std::optional<long long> count;
  std::optional<std::uint64_t> seed, stream;
  std::string parameter;
  ParameterFlags flags;
  std::optional<std::string> out_path, format;
  std::optional<int> threads;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  if (!a.config_path.empty()) {
    cfg = experiment_config_from_json(read_file(a.config_path));
  } else {
    if (a.parameter.empty())
      throw std::invalid_argument("either --config or --parameter is required");
    cfg.parameter = a.parameter;
    cfg.options = a.flags.to_options();
  }
  if (a.n) cfg.n = *a.n;
  if (a.count) cfg.count = *a.count;
  if (a.seed) cfg.seed.master = *a.seed;
  if (a.stream) cfg.seed.stream = *a.stream;
  if (a.out_path) cfg.out_path = *a.out_path;
  if (a.format) cfg.format = *a.format;
  if (a.threads) cfg.threads = *a.threads;
  const SummaryStats s = run_experiment(cfg);
  std::cout << s.to_json() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treelab: uniform random labelled trees, tree parameters, exact moments"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "draw uniform trees, print tree text blocks");
  sample_cmd->add_option("--n", sample_args.n, "number of vertices")
      ->required()
      ->check(CLI::Range(2, 100000000));
  sample_cmd->add_option("--count", sample_args.count, "number of trees")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample_args.seed, "master seed");
  sample_cmd->add_option("--stream", sample_args.stream, "first stream index");
  sample_cmd->add_option("--method", sample_args.method,
                         "sampler: aldous-broder (two-stage) or prufer");
  sample_cmd->add_option("--out", sample_args.out_path, "output file (default stdout)");

  StatsArgs stats_args;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "evaluate a parameter on trees from --in (tree text)");
  stats_cmd->add_option("--parameter", stats_args.parameter, "parameter id")->required();
  stats_args.flags.attach(stats_cmd);
  stats_cmd->add_option("--in", stats_args.in_path, "input file, '-' for stdin");
  stats_cmd->add_option("--out", stats_args.out_path, "write per-tree values here");
  stats_cmd->add_option("--format", stats_args.format, "value file format: csv or json");

  std::string moments_formula, moments_params = "{}", moments_params_file;
  CLI::App* moments_cmd =
      app.add_subcommand("moments", "evaluate a closed-form moment formula");
  moments_cmd->add_option("--formula", moments_formula, "formula name")->required();
  moments_cmd->add_option("--params", moments_params, "formula parameters as inline JSON");
  moments_cmd->add_option("--params-file", moments_params_file,
                          "read formula parameters from a JSON file");

  std::string verify_suite = "oracle";
  int verify_n = 6;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "exact-enumeration cross checks (exit 1 on failure)");
  verify_cmd->add_option("--suite", verify_suite, "check suite (oracle)");
  verify_cmd->add_option("--n", verify_n, "largest tree size to enumerate (2..8)");

  ExperimentArgs exp_args;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiment driver");
  exp_cmd->add_option("--config", exp_args.config_path, "JSON experiment config file");
  exp_cmd->add_option("--n", exp_args.n, "number of vertices");
  exp_cmd->add_option("--count", exp_args.count, "number of replicates");
  exp_cmd->add_option("--seed", exp_args.seed, "master seed");
  exp_cmd->add_option("--stream", exp_args.stream, "first stream index");
  exp_cmd->add_option("--parameter", exp_args.parameter, "parameter id");
  exp_args.flags.attach(exp_cmd);
  exp_cmd->add_option("--out", exp_args.out_path, "write per-replicate values here");
  exp_cmd->add_option("--format", exp_args.format, "value file format: csv or json");
  exp_cmd->add_option("--threads", exp_args.threads, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sample_cmd)) return run_sample(sample_args);
    if (app.got_subcommand(stats_cmd)) return run_stats(stats_args);
    if (app.got_subcommand(moments_cmd)) {
      json params;
      try {
        params = json::parse(moments_params_file.empty() ? moments_params
                                                         : read_file(moments_params_file));
      } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("--params: ") + e.what());
      }
      return run_moments(moments_formula, params);
    }
    if (app.got_subcommand(verify_cmd)) return run_verify(verify_suite, verify_n);
    if (app.got_subcommand(exp_cmd)) return run_experiment_cmd(exp_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "treelab: usage error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "treelab: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "treelab: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
