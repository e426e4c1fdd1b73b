#ifndef LAZYBV_METRICS_HPP
#define LAZYBV_METRICS_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lazybv {

enum class RunStatus { Sat, Unsat, Unknown, Timeout, Error };

std::string_view to_string(RunStatus s);
std::optional<RunStatus> parse_run_status(std::string_view s);
inline bool is_definite(RunStatus s) { return s == RunStatus::Sat || s == RunStatus::Unsat; }

/// One (benchmark, variant) run.
struct EvalRecord
{
  std::string benchmark;
  std::string variant;
  RunStatus status = RunStatus::Error;
  double cpu_seconds = 0;
  std::size_t rounds = 0;

  friend bool operator==(const EvalRecord &, const EvalRecord &) = default;
};

inline constexpr std::string_view kCsvHeader = "benchmark,variant,status,cpu_seconds,rounds";

void write_csv_header(std::ostream &os);
void write_csv_row(std::ostream &os, const EvalRecord &r);
/// Expects kCsvHeader first; throws Error on malformed rows.
std::vector<EvalRecord> read_csv(std::istream &is);

/// Records grouped per variant, groups in `order`; an empty `order` means
/// first-appearance order.
std::vector<std::vector<EvalRecord>> group_by_variant(const std::vector<EvalRecord> &records, const std::vector<std::string> &order = {});

struct StepMetrics
{
  std::string variant;
  std::size_t contribution = 0;
  std::size_t cost = 0;
  std::size_t solved = 0;
};

/// Contribution and cost of each step of a variant ladder.
struct MetricsTable
{
  std::size_t benchmarks = 0;
  std::string baseline;
  std::size_t baseline_solved = 0;
  std::vector<StepMetrics> steps;

  [[nodiscard]] std::size_t total_contribution() const;
  [[nodiscard]] std::size_t total_cost() const;
  [[nodiscard]] std::size_t final_solved() const { return steps.empty() ? baseline_solved : steps.back().solved; }
};

/// Solved/unsolved counts of a variant (rows) against the baseline (columns).
struct CrossTable
{
  std::size_t both_unsolved = 0;
  std::size_t baseline_only = 0;
  std::size_t variant_only = 0;
  std::size_t both_solved = 0;

  [[nodiscard]] std::size_t variant_unsolved() const { return both_unsolved + baseline_only; }
  [[nodiscard]] std::size_t variant_solved() const { return variant_only + both_solved; }
  [[nodiscard]] std::size_t baseline_unsolved() const { return both_unsolved + variant_only; }
  [[nodiscard]] std::size_t baseline_solved() const { return baseline_only + both_solved; }
  [[nodiscard]] std::size_t total() const { return variant_unsolved() + variant_solved(); }
};

/// Benchmarks a run solved, i.e. answered with a status in `counted`.
std::set<std::string> solved_set(const std::vector<EvalRecord> &run, const std::set<RunStatus> &counted = { RunStatus::Sat, RunStatus::Unsat });

/**
 * ladder[0] is the baseline S_0, ladder[N] the run with steps 1..N.
 * contribution_N = |S_N \ S_{N-1}|, cost_N = |S_{N-1} \ S_N|.
 * Throws BenchmarkSetMismatchError unless every run covers the same
 * benchmarks exactly once.
 */
MetricsTable compute_metrics(const std::vector<std::vector<EvalRecord>> &ladder,
  const std::set<RunStatus> &counted = { RunStatus::Sat, RunStatus::Unsat });

CrossTable cross_table(const std::vector<EvalRecord> &baseline, const std::vector<EvalRecord> &variant,
  const std::set<RunStatus> &counted = { RunStatus::Sat, RunStatus::Unsat });

std::string render_metrics(const MetricsTable &m);
std::string render_cross_table(const CrossTable &c, std::string_view baseline, std::string_view variant);
/// Header `step,variant,contribution,cost,solved`; step 0 is the baseline.
void write_metrics_csv(std::ostream &os, const MetricsTable &m);

struct ScatterPoint
{
  std::string benchmark;
  double baseline_seconds = 0;
  double variant_seconds = 0;
};

/// One point per benchmark, sorted by name. Unsolved runs are placed at
/// `timeout` so they sit on the plot border.
std::vector<ScatterPoint> scatter(const std::vector<EvalRecord> &baseline, const std::vector<EvalRecord> &variant, double timeout);
/// Two tab-separated columns, baseline then variant seconds.
void write_scatter_tsv(std::ostream &os, const std::vector<ScatterPoint> &points);

/// Benchmarks that got sat in one run and unsat in another.
std::vector<std::string> contradictions(const std::vector<std::vector<EvalRecord>> &runs);

}// namespace lazybv

#endif
