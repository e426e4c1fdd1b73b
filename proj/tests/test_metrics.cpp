#include "lazybv/errors.hpp"
#include "lazybv/metrics.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace lazybv;

namespace {

/// One run of `variant` over `names`, solving exactly `solved`.
std::vector<EvalRecord> run(const std::string &variant, const std::vector<std::string> &names, const std::set<std::string> &solved)
{
  std::vector<EvalRecord> out;
  for (const auto &n : names) out.push_back({ n, variant, solved.contains(n) ? RunStatus::Unsat : RunStatus::Timeout, 1.0, 0 });
  return out;
}

}// namespace

TEST(Metrics, CsvRoundTrip)
{
  const std::vector<EvalRecord> rs{ { "a/b.smt2", "full", RunStatus::Sat, 0.25, 3 },
    { "odd, \"name\".smt2", "baseline", RunStatus::Timeout, 1200, 0 }, { "c.smt2", "omit2", RunStatus::Error, 0, 0 } };
  std::stringstream ss;
  write_csv_header(ss);
  for (const auto &r : rs) write_csv_row(ss, r);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "benchmark,variant,status,cpu_seconds,rounds");
  EXPECT_EQ(read_csv(ss), rs);
}

TEST(Metrics, CsvRejectsMalformedInput)
{
  std::istringstream no_header("a,b,sat,1,0\n");
  EXPECT_THROW(read_csv(no_header), Error);
  std::istringstream bad_status("benchmark,variant,status,cpu_seconds,rounds\na,b,maybe,1,0\n");
  EXPECT_THROW(read_csv(bad_status), Error);
  std::istringstream bad_number("benchmark,variant,status,cpu_seconds,rounds\na,b,sat,fast,0\n");
  EXPECT_THROW(read_csv(bad_number), Error);
}

TEST(Metrics, ContributionAndCostExamples)
{
  const std::vector<std::string> names{ "a", "b", "c" };
  auto m = compute_metrics({ run("baseline", names, { "a" }), run("step1", names, { "a", "b", "c" }) });
  ASSERT_EQ(m.steps.size(), 1u);
  EXPECT_EQ(m.steps[0].contribution, 2u);
  EXPECT_EQ(m.steps[0].cost, 0u);

  m = compute_metrics({ run("baseline", names, {}), run("step1", names, { "a", "b" }), run("step12", names, { "b", "c" }) });
  EXPECT_EQ(m.steps[1].contribution, 1u);
  EXPECT_EQ(m.steps[1].cost, 1u);
}

TEST(Metrics, TelescopesOnRandomLadders)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t k = 1 + rng() % 6;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("b" + std::to_string(i));
    std::vector<std::vector<EvalRecord>> ladder;
    for (std::size_t s = 0; s <= k; ++s) {
      std::set<std::string> solved;
      for (const auto &b : names)
        if (rng() % 2) solved.insert(b);
      ladder.push_back(run("v" + std::to_string(s), names, solved));
    }
    const MetricsTable m = compute_metrics(ladder);
    const auto lhs = static_cast<long>(m.total_contribution()) - static_cast<long>(m.total_cost());
    ASSERT_EQ(lhs, static_cast<long>(m.final_solved()) - static_cast<long>(m.baseline_solved));
    const CrossTable c = cross_table(ladder.front(), ladder.back());
    ASSERT_EQ(c.both_unsolved + c.baseline_only + c.variant_only + c.both_solved, n);
    ASSERT_EQ(c.variant_solved(), m.final_solved());
    ASSERT_EQ(c.baseline_solved(), m.baseline_solved);
  }
}

TEST(Metrics, CrossTableMargins)
{
  CrossTable c;
  c.both_unsolved = 113;
  c.baseline_only = 28;
  c.variant_only = 39;
  c.both_solved = 5904;
  EXPECT_EQ(c.variant_unsolved(), 141u);
  EXPECT_EQ(c.variant_solved(), 5943u);
  EXPECT_EQ(c.baseline_unsolved(), 152u);
  EXPECT_EQ(c.baseline_solved(), 5932u);
  EXPECT_EQ(c.total(), 6084u);
  const std::string text = render_cross_table(c, "baseline", "full");
  EXPECT_NE(text.find("5943"), std::string::npos);
  EXPECT_NE(text.find("6084"), std::string::npos);
}

TEST(Metrics, StepSums)
{
  const std::size_t contribution[] = { 28, 2, 15, 1 };
  const std::size_t cost[] = { 24, 3, 0, 1 };
  MetricsTable m;
  for (int i = 0; i < 4; ++i) m.steps.push_back({ "s" + std::to_string(i), contribution[i], cost[i], 0 });
  EXPECT_EQ(m.total_contribution(), 46u);
  EXPECT_EQ(m.total_cost(), 28u);
}

TEST(Metrics, BenchmarkSetMismatch)
{
  const auto a = run("baseline", { "x", "y" }, { "x" });
  const auto b = run("full", { "x", "z" }, { "x" });
  EXPECT_THROW(compute_metrics({ a, b }), BenchmarkSetMismatchError);
  EXPECT_THROW(cross_table(a, b), BenchmarkSetMismatchError);
  auto dup = run("full", { "x", "y" }, {});
  dup.push_back(dup.front());
  EXPECT_THROW(compute_metrics({ a, dup }), BenchmarkSetMismatchError);
  EXPECT_THROW(compute_metrics({}), BenchmarkSetMismatchError);
}

TEST(Metrics, GroupByVariant)
{
  std::vector<EvalRecord> all = run("baseline", { "x", "y" }, { "x" });
  const auto full = run("full", { "x", "y" }, { "y" });
  all.insert(all.begin() + 1, full.begin(), full.end());
  auto groups = group_by_variant(all);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].front().variant, "baseline");
  groups = group_by_variant(all, { "full", "baseline" });
  EXPECT_EQ(groups[0].front().variant, "full");
  EXPECT_THROW(group_by_variant(all, { "missing" }), BenchmarkSetMismatchError);
}

TEST(Metrics, UnsatOnlyCounting)
{
  std::vector<EvalRecord> base{ { "a", "baseline", RunStatus::Sat, 1, 0 }, { "b", "baseline", RunStatus::Unsat, 1, 0 } };
  std::vector<EvalRecord> full{ { "a", "full", RunStatus::Sat, 1, 0 }, { "b", "full", RunStatus::Unknown, 1, 0 } };
  const auto m = compute_metrics({ base, full }, { RunStatus::Unsat });
  EXPECT_EQ(m.baseline_solved, 1u);
  EXPECT_EQ(m.steps[0].cost, 1u);
  EXPECT_EQ(m.steps[0].contribution, 0u);
}

TEST(Metrics, ScatterPlacesUnsolvedAtTimeout)
{
  std::vector<EvalRecord> base{ { "b", "baseline", RunStatus::Timeout, 3.5, 0 }, { "a", "baseline", RunStatus::Sat, 0.5, 0 } };
  std::vector<EvalRecord> full{ { "a", "full", RunStatus::Unknown, 0.1, 2 }, { "b", "full", RunStatus::Unsat, 2.0, 4 } };
  const auto pts = scatter(base, full, 10);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].benchmark, "a");
  EXPECT_DOUBLE_EQ(pts[0].baseline_seconds, 0.5);
  EXPECT_DOUBLE_EQ(pts[0].variant_seconds, 10);
  EXPECT_DOUBLE_EQ(pts[1].baseline_seconds, 10);
  EXPECT_DOUBLE_EQ(pts[1].variant_seconds, 2.0);
  std::ostringstream os;
  write_scatter_tsv(os, pts);
  EXPECT_EQ(os.str(), "0.500000\t10.000000\n10.000000\t2.000000\n");
}

TEST(Metrics, Contradictions)
{
  std::vector<EvalRecord> a{ { "p", "v1", RunStatus::Sat, 0, 0 }, { "q", "v1", RunStatus::Unsat, 0, 0 } };
  std::vector<EvalRecord> b{ { "p", "v2", RunStatus::Unsat, 0, 0 }, { "q", "v2", RunStatus::Timeout, 0, 0 } };
  EXPECT_EQ(contradictions({ a, b }), std::vector<std::string>{ "p" });
}
