#ifndef LAZYBV_BENCH_HPP
#define LAZYBV_BENCH_HPP

#include "lazybv/metrics.hpp"
#include "lazybv/refinement.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace lazybv {

struct RunOptions
{
  std::string backend = "builtin";
  double timeout_seconds = 1200;
};

/// Outcome of one in-process solve, with the parse excluded from the timing.
struct TimedRun
{
  RunStatus status = RunStatus::Error;
  /// CPU time of this process and its reaped children during the solve.
  double cpu_seconds = 0;
  std::size_t rounds = 0;
  std::string message;
};

RunStatus run_status_of(const SolveResult &r);

/// Parses and solves `path` in the calling process. Never throws; parse and
/// backend errors become RunStatus::Error.
TimedRun run_file(const std::filesystem::path &path, const SchemeConfig &config, const RunOptions &options);

struct BenchOptions
{
  std::vector<std::string> variants{ "baseline", "full" };
  RunOptions run;
  unsigned jobs = 1;
  /// Benchmark names in records are paths relative to this root, when set.
  std::filesystem::path root;
};

/// .smt2 files under `dir`, recursively, sorted.
std::vector<std::filesystem::path> list_benchmarks(const std::filesystem::path &dir);

/**
 * Runs every (benchmark, variant) pair in its own worker process, at most
 * `jobs` at a time. Records come back benchmark-major in input order, and
 * `on_record` sees each one as soon as all earlier ones are done, so a
 * caller streaming them to disk keeps a consistent prefix if interrupted.
 * A worker that dies, or outlives twice the timeout, yields status error or
 * timeout respectively.
 */
std::vector<EvalRecord> run_bench(const std::vector<std::filesystem::path> &files, const BenchOptions &options,
  const std::function<void(const EvalRecord &)> &on_record = {});

}// namespace lazybv

#endif
