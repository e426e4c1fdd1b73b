#include "lazybv/metrics.hpp"

#include "lazybv/errors.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace lazybv {

std::string_view to_string(RunStatus s)
{
  switch (s) {
  case RunStatus::Sat: return "sat";
  case RunStatus::Unsat: return "unsat";
  case RunStatus::Unknown: return "unknown";
  case RunStatus::Timeout: return "timeout";
  case RunStatus::Error: return "error";
  }
  return "error";
}

std::optional<RunStatus> parse_run_status(std::string_view s)
{
  for (RunStatus r : { RunStatus::Sat, RunStatus::Unsat, RunStatus::Unknown, RunStatus::Timeout, RunStatus::Error })
    if (to_string(r) == s) return r;
  return std::nullopt;
}

namespace {

void write_field(std::ostream &os, std::string_view f)
{
  if (f.find_first_of(",\"\n") == std::string_view::npos) {
    os << f;
    return;
  }
  os << '"';
  for (char c : f) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

std::vector<std::string> split_row(const std::string &line, std::size_t lineno)
{
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw Error("csv line " + std::to_string(lineno) + ": unterminated quote");
  return out;
}

template<typename T> T parse_number(const std::string &s, std::size_t lineno)
{
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

std::map<std::string, RunStatus> index_run(const std::vector<EvalRecord> &run)
{
  std::map<std::string, RunStatus> out;
  for (const auto &r : run)
    if (!out.emplace(r.benchmark, r.status).second)
      throw BenchmarkSetMismatchError("benchmark '" + r.benchmark + "' appears twice for variant '" + r.variant + "'");
  return out;
}

std::string variant_of(const std::vector<EvalRecord> &run) { return run.empty() ? std::string("?") : run.front().variant; }

void require_same_set(const std::map<std::string, RunStatus> &a, const std::map<std::string, RunStatus> &b, const std::string &va,
  const std::string &vb)
{
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first))
      throw BenchmarkSetMismatchError("benchmark '" + ia->first + "' is in '" + va + "' but not in '" + vb + "'");
    if (ia == a.end() || ib->first < ia->first)
      throw BenchmarkSetMismatchError("benchmark '" + ib->first + "' is in '" + vb + "' but not in '" + va + "'");
    ++ia;
    ++ib;
  }
}

}// namespace

void write_csv_header(std::ostream &os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream &os, const EvalRecord &r)
{
  write_field(os, r.benchmark);
  os << ',';
  write_field(os, r.variant);
  os << ',' << to_string(r.status) << ',' << std::fixed << std::setprecision(6) << r.cpu_seconds << std::defaultfloat << ',' << r.rounds
     << '\n';
}

std::vector<EvalRecord> read_csv(std::istream &is)
{
  std::vector<EvalRecord> out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line) || line != kCsvHeader) throw Error("csv: expected header '" + std::string(kCsvHeader) + "'");
  ++lineno;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_row(line, lineno);
    if (f.size() != 5) throw Error("csv line " + std::to_string(lineno) + ": expected 5 fields");
    EvalRecord r;
    r.benchmark = f[0];
    r.variant = f[1];
    const auto st = parse_run_status(f[2]);
    if (!st) throw Error("csv line " + std::to_string(lineno) + ": unknown status '" + f[2] + "'");
    r.status = *st;
    r.cpu_seconds = parse_number<double>(f[3], lineno);
    r.rounds = parse_number<std::size_t>(f[4], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<EvalRecord>> group_by_variant(const std::vector<EvalRecord> &records, const std::vector<std::string> &order)
{
  std::vector<std::string> names = order;
  if (names.empty()) {
    for (const auto &r : records)
      if (std::find(names.begin(), names.end(), r.variant) == names.end()) names.push_back(r.variant);
  }
  std::vector<std::vector<EvalRecord>> out(names.size());
  for (const auto &r : records) {
    const auto it = std::find(names.begin(), names.end(), r.variant);
    if (it != names.end()) out[static_cast<std::size_t>(it - names.begin())].push_back(r);
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (out[i].empty()) throw BenchmarkSetMismatchError("no records for variant '" + names[i] + "'");
  return out;
}

std::size_t MetricsTable::total_contribution() const
{
  std::size_t n = 0;
  for (const auto &s : steps) n += s.contribution;
  return n;
}

std::size_t MetricsTable::total_cost() const
{
  std::size_t n = 0;
  for (const auto &s : steps) n += s.cost;
  return n;
}

std::set<std::string> solved_set(const std::vector<EvalRecord> &run, const std::set<RunStatus> &counted)
{
  std::set<std::string> out;
  for (const auto &r : run)
    if (counted.contains(r.status)) out.insert(r.benchmark);
  return out;
}

MetricsTable compute_metrics(const std::vector<std::vector<EvalRecord>> &ladder, const std::set<RunStatus> &counted)
{
  if (ladder.empty()) throw BenchmarkSetMismatchError("empty variant ladder");
  const auto base = index_run(ladder[0]);
  MetricsTable m;
  m.benchmarks = base.size();
  m.baseline = variant_of(ladder[0]);
  std::set<std::string> prev = solved_set(ladder[0], counted);
  m.baseline_solved = prev.size();
  for (std::size_t n = 1; n < ladder.size(); ++n) {
    require_same_set(base, index_run(ladder[n]), m.baseline, variant_of(ladder[n]));
    std::set<std::string> cur = solved_set(ladder[n], counted);
    StepMetrics s;
    s.variant = variant_of(ladder[n]);
    s.solved = cur.size();
    for (const auto &b : cur) s.contribution += prev.contains(b) ? 0 : 1;
    for (const auto &b : prev) s.cost += cur.contains(b) ? 0 : 1;
    m.steps.push_back(std::move(s));
    prev = std::move(cur);
  }
  return m;
}

CrossTable cross_table(const std::vector<EvalRecord> &baseline, const std::vector<EvalRecord> &variant, const std::set<RunStatus> &counted)
{
  const auto b = index_run(baseline);
  const auto v = index_run(variant);
  require_same_set(b, v, variant_of(baseline), variant_of(variant));
  CrossTable c;
  for (const auto &[name, bs] : b) {
    const bool in_b = counted.contains(bs);
    const bool in_v = counted.contains(v.at(name));
    if (in_b && in_v) ++c.both_solved;
    else if (in_b) ++c.baseline_only;
    else if (in_v) ++c.variant_only;
    else ++c.both_unsolved;
  }
  return c;
}

std::string render_metrics(const MetricsTable &m)
{
  std::ostringstream os;
  os << std::left << std::setw(12) << "step" << std::setw(14) << "variant" << std::right << std::setw(13) << "contribution"
     << std::setw(8) << "cost" << std::setw(9) << "solved" << '\n';
  os << std::left << std::setw(12) << "baseline" << std::setw(14) << m.baseline << std::right << std::setw(13) << "-" << std::setw(8)
     << "-" << std::setw(9) << m.baseline_solved << '\n';
  for (std::size_t i = 0; i < m.steps.size(); ++i) {
    const auto &s = m.steps[i];
    os << std::left << std::setw(12) << ("step " + std::to_string(i + 1)) << std::setw(14) << s.variant << std::right << std::setw(13)
       << s.contribution << std::setw(8) << s.cost << std::setw(9) << s.solved << '\n';
  }
  os << std::left << std::setw(26) << "sum" << std::right << std::setw(13) << m.total_contribution() << std::setw(8) << m.total_cost()
     << std::setw(9) << m.final_solved() << '\n';
  os << "benchmarks: " << m.benchmarks << '\n';
  return os.str();
}

std::string render_cross_table(const CrossTable &c, std::string_view baseline, std::string_view variant)
{
  std::ostringstream os;
  const auto name = std::string(variant).substr(0, 10);
  os << std::setw(21) << "" << std::setw(24) << (std::string(baseline) + " unsolved/solved") << '\n';
  os << std::left << std::setw(11) << name << std::setw(10) << "unsolved" << std::right << std::setw(10) << c.both_unsolved
     << std::setw(10) << c.baseline_only << std::setw(10) << c.variant_unsolved() << '\n';
  os << std::left << std::setw(11) << "" << std::setw(10) << "solved" << std::right << std::setw(10) << c.variant_only << std::setw(10)
     << c.both_solved << std::setw(10) << c.variant_solved() << '\n';
  os << std::setw(21) << "" << std::setw(10) << c.baseline_unsolved() << std::setw(10) << c.baseline_solved() << std::setw(10)
     << c.total() << '\n';
  return os.str();
}

void write_metrics_csv(std::ostream &os, const MetricsTable &m)
{
  os << "step,variant,contribution,cost,solved\n";
  os << "0,";
  write_field(os, m.baseline);
  os << ",0,0," << m.baseline_solved << '\n';
  for (std::size_t i = 0; i < m.steps.size(); ++i) {
    os << i + 1 << ',';
    write_field(os, m.steps[i].variant);
    os << ',' << m.steps[i].contribution << ',' << m.steps[i].cost << ',' << m.steps[i].solved << '\n';
  }
}

std::vector<ScatterPoint> scatter(const std::vector<EvalRecord> &baseline, const std::vector<EvalRecord> &variant, double timeout)
{
  std::map<std::string, const EvalRecord *> v;
  for (const auto &r : variant) v[r.benchmark] = &r;
  require_same_set(index_run(baseline), index_run(variant), variant_of(baseline), variant_of(variant));
  auto seconds = [&](const EvalRecord &r) { return is_definite(r.status) ? r.cpu_seconds : timeout; };
  std::vector<ScatterPoint> out;
  for (const auto &r : baseline) out.push_back({ r.benchmark, seconds(r), seconds(*v.at(r.benchmark)) });
  std::sort(out.begin(), out.end(), [](const ScatterPoint &a, const ScatterPoint &b) { return a.benchmark < b.benchmark; });
  return out;
}

void write_scatter_tsv(std::ostream &os, const std::vector<ScatterPoint> &points)
{
  os << std::fixed << std::setprecision(6);
  for (const auto &p : points) os << p.baseline_seconds << '\t' << p.variant_seconds << '\n';
  os << std::defaultfloat;
}

std::vector<std::string> contradictions(const std::vector<std::vector<EvalRecord>> &runs)
{
  std::map<std::string, std::set<RunStatus>> seen;
  for (const auto &run : runs)
    for (const auto &r : run)
      if (is_definite(r.status)) seen[r.benchmark].insert(r.status);
  std::vector<std::string> out;
  for (const auto &[name, s] : seen)
    if (s.size() > 1) out.push_back(name);
  return out;
}

}// namespace lazybv
