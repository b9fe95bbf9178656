#pragma once
// Monte Carlo experiment harness: reproducible multi-replicate sampling with
// per-replicate random streams (results independent of thread scheduling),
// a registry of real-valued tree parameters, Kolmogorov-Smirnov distance to
// the fitted normal, CSV/JSON outputs, and tail-behaviour reports for the
// maximum degree and the layer-growth statistic beta.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treelab/numeric.hpp"
#include "treelab/tree.hpp"

namespace treelab {

// A real-valued tree parameter. `relabel_invariant` declares (provably) that
// F(relabel(t, w)) == F(t) for every permutation w; the harness uses it to
// skip the relabelling stage, which cannot change the sampled values.
struct RealParameter {
  std::string id;
  bool relabel_invariant = false;
  std::function<double(const LabelledTree&)> eval;
};

// Builds a registry parameter. Options (all strings) depend on the id:
//   leaves            -- no options
//   degree-count      -- d (default 1)
//   max-degree        -- no options
//   path-count        -- l (default 3), beta-filter (optional, float c)
//   pattern           -- pattern-json (required), degree-cap (optional int)
//   beta              -- no options
//   log-aut-rooted    -- root (default 1)
//   log-aut-small     -- root (default 1), threshold (default floor(4 ln n),
//                        resolved at run time from the experiment's n)
//   log-aut-full      -- no options
//   branch-count      -- root (default 1), vertex (default 2),
//                        branch = "singleton" | "edge" | canonical code
//   edge-count        -- constant n-1 (degenerate example)
// Throws std::invalid_argument for unknown ids/options.
RealParameter make_parameter(const std::string& id, const std::map<std::string, std::string>& options = {});

std::vector<std::string> parameter_ids();

struct ExperimentConfig {
  int n = 0;
  long long count = 0;           // number of replicates M
  SeedSpec seed;                 // replicate i uses stream seed.stream + i
  std::string parameter;         // registry id
  std::map<std::string, std::string> options;  // parameter options
  std::string out_path;          // optional: write CSV/JSON of all values
  std::string format = "csv";    // "csv" or "json"
  int threads = 0;               // 0 = hardware concurrency
};

// Parses the JSON config format used by the CLI (same field names).
ExperimentConfig experiment_config_from_json(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

struct SummaryStats {
  long long m = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased (divides by m-1)
  double min = 0.0;
  double max = 0.0;
  std::optional<double> ks_delta;  // set when the sample is non-degenerate
  std::string parameter;
  int n = 0;
  std::string to_json() const;
};

// Runs the experiment: replicate i draws tree i from stream
// (seed.master, seed.stream + i) and evaluates the parameter. Values are
// stored by replicate index, so mean/variance/KS are bit-identical for any
// thread count. If values_out is non-null the per-replicate values are
// returned there (index = replicate).
SummaryStats run_experiment(const ExperimentConfig& cfg, std::vector<double>* values_out = nullptr);

// Kolmogorov-Smirnov distance between the empirical distribution and the
// normal fitted by sample mean and unbiased sample variance:
//   delta = max_i max(Phi(z_(i)) - i/M, (i+1)/M - Phi(z_(i))).
// Throws std::invalid_argument("degenerate sample") when the sample variance
// vanishes (or M < 2).
double ks_normal(std::vector<double> values);

// Writes "replicate,value" CSV (17 significant digits) or a JSON array.
void write_values_csv(const std::string& path, const std::vector<double>& values);
void write_values_json(const std::string& path, const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Tail behaviour report
// ---------------------------------------------------------------------------

// For M sampled trees on n vertices:
//  * max-degree exceedance counts over d = 1..max observed, compared with
//    the bound P(maxdeg > d) <= min(1, n/d!) plus three binomial standard
//    errors of the empirical frequency;
//  * the exact number of samples with beta >= threshold (decided exactly for
//    every sample: beta >= c forces a layer of size >= c d at some depth
//    d <= (n-1)/c, checked by a depth-capped layer recursion; trees whose
//    maximum degree already rules this out are screened first);
//  * empirical quantiles of the exact beta over a documented subsample
//    (the first `beta_subsample` replicates).
struct TailReport {
  int n = 0;
  long long m = 0;
  double beta_threshold = 0.0;
  long long beta_exceed_count = 0;
  int beta_depth_cap = 0;                       // depths examined by the exact decision
  std::vector<long long> maxdeg_exceed;         // [d] = #samples with maxdeg > d; index 0 unused
  std::vector<double> maxdeg_bound;             // [d] = min(1, n/d!) + 3 SE
  bool maxdeg_ok = true;                        // empirical freq <= bound for all d
  int beta_subsample = 0;
  std::vector<double> beta_quantile_probs;      // e.g. 0, 0.25, 0.5, 0.75, 0.9, 1
  std::vector<double> beta_quantiles;           // matching exact-beta quantiles
  std::string to_string() const;
  std::string to_json() const;
};

TailReport tail_report(int n, long long m, SeedSpec seed, double beta_threshold,
                       int beta_subsample = 32, int threads = 0);

// Exact beta(t) with the adaptive early stop (identical value to beta(t),
// usually far fewer layer rounds; exposed for tests and the report).
double beta_exact_adaptive(const LabelledTree& t);

// True iff beta(t) >= c, decided by the depth-capped recursion only
// (depths 1..floor((n-1)/c)); exact for c > 1.
bool beta_at_least(const LabelledTree& t, double c);

}  // namespace treelab
