#include "lazybv/bench.hpp"
#include "lazybv/corpus.hpp"
#include "lazybv/errors.hpp"
#include "lazybv/metrics.hpp"
#include "lazybv/refinement.hpp"
#include "lazybv/smtlib.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lazybv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBackend = 2;

/// Raised for bad flag values found after CLI11 has accepted the syntax.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string slurp(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SchemeFlags
{
  std::string variant;
  std::string stages;
  unsigned omit = 0;
  std::string merge;
  std::string fresh = "per-app";
  std::string signed_mode = "signed";

  void add_to(CLI::App &app)
  {
    app.add_option("--variant", variant, "Named scheme: " + [] {
      std::string s;
      for (const auto &n : variant_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }());
    app.add_option("--stages", stages,
      "Multiplication steps, comma separated; '+' joins stages into one step "
      "(simple, intervals, relations, full-interval, or 1-4)");
    app.add_option("--omit-stage", omit, "Drop multiplication step N (1-based)");
    app.add_option("--merge-stages", merge, "Merge consecutive multiplication steps A,B");
    app.add_option("--fresh-symbols", fresh, "per-app or shared")->check(CLI::IsMember({ "per-app", "shared" }));
    app.add_option("--signed-mode", signed_mode, "signed or rewrite-unsigned")->check(CLI::IsMember({ "signed", "rewrite-unsigned" }));
  }

  [[nodiscard]] SchemeConfig build() const
  {
    SchemeConfig c;
    try {
      if (!variant.empty()) c = variant_config(variant);
      if (!stages.empty()) {
        const SchemeConfig defaults;
        c.mul_steps.clear();
        for (const auto &step : split(stages, ',')) {
          Step merged;
          for (const auto &name : split(step, '+')) {
            if (name.size() == 1 && name[0] >= '1' && name[0] <= '4') {
              const auto &d = defaults.mul_steps[static_cast<std::size_t>(name[0] - '1')];
              merged.insert(merged.end(), d.begin(), d.end());
            } else if (auto s = parse_stage(name)) {
              merged.push_back(*s);
            } else {
              throw UsageError("unknown stage '" + name + "'");
            }
          }
          c.mul_steps.push_back(std::move(merged));
        }
      }
      if (omit != 0) {
        if (omit > c.mul_steps.size()) throw UsageError("--omit-stage out of range");
        c.mul_steps.erase(c.mul_steps.begin() + (omit - 1));
      }
      if (!merge.empty()) {
        const auto parts = split(merge, ',');
        if (parts.size() != 2) throw UsageError("--merge-stages expects A,B");
        const unsigned a = static_cast<unsigned>(std::stoul(parts[0]));
        const unsigned b = static_cast<unsigned>(std::stoul(parts[1]));
        if (b != a + 1 || a < 1 || b > c.mul_steps.size()) throw UsageError("--merge-stages expects two consecutive steps");
        auto &first = c.mul_steps[a - 1];
        first.insert(first.end(), c.mul_steps[a].begin(), c.mul_steps[a].end());
        c.mul_steps.erase(c.mul_steps.begin() + a);
      }
      c.fresh_symbols = fresh == "shared" ? FreshSymbolPolicy::SharedPerOp : FreshSymbolPolicy::PerApplication;
      c.signed_mode = signed_mode == "rewrite-unsigned" ? SignedMode::RewriteUnsigned : SignedMode::Signed;
      c.validate();
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    } catch (const std::out_of_range &e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

std::string print_value(TermTable &t, const Value &v)
{
  if (const bool *b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return print_term(t, t.mk_const(std::get<BvValue>(v)));
}

// --- solve ------------------------------------------------------------------

struct SolveFlags
{
  std::string file;
  std::string backend = "builtin";
  double timeout = 1200;
  std::size_t max_rounds = 0;
  bool model = false;
  bool stats = false;
  std::string dump_cnf;
  SchemeFlags scheme;
};

int cmd_solve(const SolveFlags &f)
{
  TermTable table;
  Script script;
  SchemeConfig config;
  try {
    config = f.scheme.build();
    script = parse_script(table, slurp(f.file));
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::unique_ptr<Backend> backend;
  BuiltinBackend *builtin = nullptr;
  try {
    if (!f.dump_cnf.empty()) {
      if (f.backend != "builtin") {
        std::cerr << "error: --dump-cnf needs the builtin backend\n";
        return kExitUsage;
      }
      BuiltinOptions opts;
      opts.record_cnf = true;
      auto b = std::make_unique<BuiltinBackend>(table, opts);
      builtin = b.get();
      backend = std::move(b);
    } else {
      backend = make_backend(table, f.backend);
    }
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: backend: " << e.what() << '\n';
    return kExitBackend;
  }

  Limits limits;
  limits.timeout_seconds = f.timeout;
  limits.max_rounds = f.max_rounds;
  const SolveResult r = solve(table, script, config, *backend, limits);

  std::cout << to_string(r.status) << '\n';
  if (f.model && r.status == Result::Sat) {
    std::cout << "(\n";
    for (Term s : script.declarations)
      std::cout << "  (" << print_symbol(table.node(s).name) << ' ' << print_value(table, *r.model.find(s)) << ")\n";
    std::cout << ")\n";
  }
  if (f.stats) {
    if (r.status == Result::Unknown) std::cout << "; reason: " << to_string(r.reason) << (r.message.empty() ? "" : " (" + r.message + ")") << '\n';
    std::cout << "; rounds: " << r.rounds << "\n; constraints: " << r.constraints << "\n; instances: " << r.instances.size() << '\n';
    for (const auto &i : r.instances) {
      std::cout << ";   #" << i.id << ' ' << to_string(i.op) << " w=" << i.width << " depth=" << i.depth << " steps=" << i.steps_taken
                << " refinements=" << i.refinements << " full-interval=" << i.full_interval_refinements;
      if (!i.hbs_indices.empty()) {
        std::cout << " hbs={";
        for (std::size_t k = 0; k < i.hbs_indices.size(); ++k) std::cout << (k ? "," : "") << i.hbs_indices[k];
        std::cout << '}';
      }
      std::cout << (i.exhausted ? " exhausted" : "") << '\n';
    }
  }
  if (builtin != nullptr) {
    std::ofstream out(f.dump_cnf);
    out << builtin->dimacs();
  }
  if (r.status == Result::Unknown && r.reason == UnknownReason::BackendFailure) {
    std::cerr << "error: backend failure: " << r.message << '\n';
    return kExitBackend;
  }
  return kExitOk;
}

// --- bench ------------------------------------------------------------------

struct BenchFlags
{
  std::string dir;
  std::string variants = "baseline,full";
  std::string out = "results.csv";
  std::string backend = "builtin";
  double timeout = 1200;
  unsigned jobs = 1;
};

int cmd_bench(const BenchFlags &f)
{
  BenchOptions opts;
  opts.variants = split(f.variants, ',');
  opts.run.backend = f.backend;
  opts.run.timeout_seconds = f.timeout;
  opts.jobs = f.jobs;
  opts.root = std::filesystem::is_directory(f.dir) ? std::filesystem::path(f.dir) : std::filesystem::path();
  for (const auto &v : opts.variants) {
    try {
      variant_config(v);
    } catch (const std::invalid_argument &e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  if (!std::filesystem::exists(f.dir)) {
    std::cerr << "error: no such path " << f.dir << '\n';
    return kExitUsage;
  }
  const auto files = list_benchmarks(f.dir);
  std::ofstream csv(f.out);
  if (!csv) {
    std::cerr << "error: cannot write " << f.out << '\n';
    return kExitUsage;
  }
  write_csv_header(csv);
  csv.flush();
  std::size_t n = 0;
  run_bench(files, opts, [&](const EvalRecord &r) {
    write_csv_row(csv, r);
    csv.flush();
    std::cerr << '[' << ++n << '/' << files.size() * opts.variants.size() << "] " << r.benchmark << ' ' << r.variant << ' '
              << to_string(r.status) << '\n';
  });
  return kExitOk;
}

// --- metrics / scatter --------------------------------------------------------

std::vector<EvalRecord> read_records(const std::vector<std::string> &files)
{
  std::vector<EvalRecord> all;
  for (const auto &path : files) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    auto rs = read_csv(in);
    all.insert(all.end(), rs.begin(), rs.end());
  }
  return all;
}

struct MetricsFlags
{
  std::vector<std::string> csvs;
  std::string ladder;
  std::string out;
  bool unsat_only = false;
};

int cmd_metrics(const MetricsFlags &f)
{
  const auto runs = group_by_variant(read_records(f.csvs), split(f.ladder, ','));
  std::set<RunStatus> counted{ RunStatus::Sat, RunStatus::Unsat };
  if (f.unsat_only) counted = { RunStatus::Unsat };
  const MetricsTable m = compute_metrics(runs, counted);
  std::cout << render_metrics(m);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    std::cout << '\n';
    std::cout << render_cross_table(cross_table(runs[0], runs[i], counted), m.baseline, runs[i].front().variant);
  }
  const auto bad = contradictions(runs);
  for (const auto &b : bad) std::cerr << "warning: contradictory verdicts on " << b << '\n';
  if (!f.out.empty()) {
    std::ofstream out(f.out);
    write_metrics_csv(out, m);
  }
  return kExitOk;
}

struct ScatterFlags
{
  std::vector<std::string> csvs;
  std::string baseline = "baseline";
  std::string variant = "full";
  double timeout = 1200;
  std::string out;
};

int cmd_scatter(const ScatterFlags &f)
{
  const auto runs = group_by_variant(read_records(f.csvs), { f.baseline, f.variant });
  const auto points = scatter(runs[0], runs[1], f.timeout);
  if (f.out.empty()) {
    write_scatter_tsv(std::cout, points);
  } else {
    std::ofstream out(f.out);
    write_scatter_tsv(out, points);
  }
  return kExitOk;
}

// --- gen-corpus ---------------------------------------------------------------

int cmd_gen_corpus(const std::string &dir, const CorpusOptions &opts)
{
  std::filesystem::create_directories(dir);
  const auto entries = generate_corpus(opts);
  std::ofstream index(std::filesystem::path(dir) / "STATUS.tsv");
  index << "file\tstatus\tsettled_by\n";
  for (const auto &e : entries) {
    std::ofstream(std::filesystem::path(dir) / e.name) << e.text;
    index << e.name << '\t' << e.status << '\t' << e.settled_by << '\n';
  }
  std::cerr << entries.size() << " benchmarks written to " << dir << '\n';
  return kExitOk;
}

// --- interactive --------------------------------------------------------------

/// True once `buf` holds a complete top-level s-expression (ignoring comments and |quoted| symbols).
bool complete(const std::string &buf)
{
  int depth = 0;
  bool seen = false;
  bool bar = false;
  bool str = false;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const char c = buf[i];
    if (bar) {
      bar = c != '|';
    } else if (str) {
      str = c != '"';
    } else if (c == ';') {
      while (i < buf.size() && buf[i] != '\n') ++i;
    } else if (c == '|') {
      bar = true;
    } else if (c == '"') {
      str = true;
    } else if (c == '(') {
      ++depth;
      seen = true;
    } else if (c == ')') {
      --depth;
    } else if (!std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
      seen = true;
    }
  }
  return seen && depth <= 0 && !bar && !str;
}

/**
 * Line-oriented SMT-LIB session on stdin/stdout. Every check-sat re-solves
 * the accumulated assertions with the refinement loop.
 */
int cmd_interactive(const SchemeFlags &scheme, double timeout)
{
  const SchemeConfig config = scheme.build();
  TermTable table;
  Parser parser(table);
  Script script;
  bool print_success = true;
  std::optional<Model> model;
  auto reply = [](const std::string &s) { std::cout << s << std::endl; };
  auto ok = [&] {
    if (print_success) reply("success");
  };

  std::string buf;
  std::string line;
  while (std::getline(std::cin, line)) {
    buf += line;
    buf += '\n';
    if (!complete(buf)) continue;
    std::string text;
    text.swap(buf);
    try {
      SExprReader reader(text);
      while (auto e = reader.next()) {
        const Command c = parser.parse_command(*e);
        switch (c.type) {
        case Command::Type::SetOption:
          if (c.name == ":print-success") print_success = c.value == "true";
          ok();
          break;
        case Command::Type::SetLogic:
        case Command::Type::SetInfo: ok(); break;
        case Command::Type::DeclareFun:
          script.declarations.push_back(c.terms.at(0));
          ok();
          break;
        case Command::Type::DefineFun: ok(); break;
        case Command::Type::Assert:
          script.assertions.push_back(c.terms.at(0));
          model.reset();
          ok();
          break;
        case Command::Type::CheckSat: {
          auto backend = std::make_unique<BuiltinBackend>(table);
          Limits limits;
          limits.timeout_seconds = timeout;
          const SolveResult r = solve(table, script, config, *backend, limits);
          if (r.status == Result::Sat) model = r.model;
          else model.reset();
          reply(to_string(r.status));
          break;
        }
        case Command::Type::GetValue: {
          if (!model) {
            reply("(error \"no model available\")");
            break;
          }
          std::string out = "(";
          for (std::size_t i = 0; i < c.terms.size(); ++i) {
            const Value v = eval(table, c.terms[i], *model);
            out += (i ? " (" : "(") + print_term(table, c.terms[i]) + " " + print_value(table, v) + ")";
          }
          reply(out + ")");
          break;
        }
        case Command::Type::GetModel: {
          if (!model) {
            reply("(error \"no model available\")");
            break;
          }
          std::string out = "(";
          for (Term s : script.declarations)
            out += "\n  (define-fun " + print_symbol(table.node(s).name) + " () " + table.sort(s).to_string() + " " +
                   print_value(table, *model->find(s)) + ")";
          reply(out + "\n)");
          break;
        }
        case Command::Type::Exit: return kExitOk;
        }
      }
    } catch (const std::exception &e) {
      std::string msg = e.what();
      for (auto &ch : msg)
        if (ch == '"') ch = '\'';
      reply("(error \"" + msg + "\")");
    }
  }
  return kExitOk;
}

}// namespace

int main(int argc, char **argv)
{
  CLI::App app{ "Lazy abstraction-refinement solver for quantifier-free bit-vector formulas" };
  app.require_subcommand(1);

  SolveFlags solve_flags;
  auto *solve_cmd = app.add_subcommand("solve", "Solve one SMT-LIB file");
  solve_cmd->add_option("file", solve_flags.file, "SMT-LIB 2 input")->required();
  solve_cmd->add_option("--backend", solve_flags.backend, "builtin | oracle[:bits] | external:<path> [args]");
  solve_cmd->add_option("--timeout", solve_flags.timeout, "Wall-clock budget in seconds (0: none)")->capture_default_str();
  solve_cmd->add_option("--max-rounds", solve_flags.max_rounds, "Refinement round limit (0: none)");
  solve_cmd->add_flag("--model", solve_flags.model, "Print the model of declared symbols");
  solve_cmd->add_flag("--stats", solve_flags.stats, "Print refinement statistics");
  solve_cmd->add_option("--dump-cnf", solve_flags.dump_cnf, "Write the final CNF in DIMACS (builtin backend)");
  solve_flags.scheme.add_to(*solve_cmd);

  BenchFlags bench_flags;
  auto *bench_cmd = app.add_subcommand("bench", "Run a benchmark directory under several variants");
  bench_cmd->add_option("dir", bench_flags.dir, "Directory of .smt2 files (or one file)")->required();
  bench_cmd->add_option("--variants", bench_flags.variants, "Comma-separated variant names")->capture_default_str();
  bench_cmd->add_option("--out", bench_flags.out, "CSV output")->capture_default_str();
  bench_cmd->add_option("--backend", bench_flags.backend, "Backend for every run")->capture_default_str();
  bench_cmd->add_option("--timeout", bench_flags.timeout, "Per-run budget in seconds")->capture_default_str();
  bench_cmd->add_option("--jobs,-j", bench_flags.jobs, "Parallel worker processes")->capture_default_str();

  MetricsFlags metrics_flags;
  auto *metrics_cmd = app.add_subcommand("metrics", "Contribution/cost table from bench CSVs");
  metrics_cmd->add_option("csv", metrics_flags.csvs, "Bench CSV files")->required();
  metrics_cmd->add_option("--ladder", metrics_flags.ladder, "Variants in ladder order, baseline first (default: order of appearance)");
  metrics_cmd->add_option("--out", metrics_flags.out, "Also write the table as CSV");
  metrics_cmd->add_flag("--unsat-only", metrics_flags.unsat_only, "Count only unsat answers as solved");

  ScatterFlags scatter_flags;
  auto *scatter_cmd = app.add_subcommand("scatter", "Baseline vs variant times as two-column TSV");
  scatter_cmd->add_option("csv", scatter_flags.csvs, "Bench CSV files")->required();
  scatter_cmd->add_option("--baseline", scatter_flags.baseline)->capture_default_str();
  scatter_cmd->add_option("--variant", scatter_flags.variant)->capture_default_str();
  scatter_cmd->add_option("--timeout", scatter_flags.timeout, "Time plotted for unsolved runs")->capture_default_str();
  scatter_cmd->add_option("--out", scatter_flags.out, "Output file (default: stdout)");

  std::string corpus_dir;
  CorpusOptions corpus_opts;
  auto *corpus_cmd = app.add_subcommand("gen-corpus", "Generate the benchmark families with settled statuses");
  corpus_cmd->add_option("dir", corpus_dir)->required();
  corpus_cmd->add_option("--seed", corpus_opts.seed)->capture_default_str();
  corpus_cmd->add_option("--per-family", corpus_opts.per_family)->capture_default_str();
  corpus_cmd->add_option("--min-width", corpus_opts.min_width)->capture_default_str();
  corpus_cmd->add_option("--max-width", corpus_opts.max_width)->capture_default_str();
  corpus_cmd->add_option("--baseline-timeout", corpus_opts.baseline_timeout)->capture_default_str();

  SchemeFlags interactive_scheme;
  double interactive_timeout = 0;
  auto *interactive_cmd = app.add_subcommand("interactive", "SMT-LIB session on stdin/stdout");
  interactive_cmd->add_option("--timeout", interactive_timeout, "Per check-sat budget in seconds (0: none)");
  interactive_scheme.add_to(*interactive_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_flags);
    if (*bench_cmd) return cmd_bench(bench_flags);
    if (*metrics_cmd) return cmd_metrics(metrics_flags);
    if (*scatter_cmd) return cmd_scatter(scatter_flags);
    if (*corpus_cmd) return cmd_gen_corpus(corpus_dir, corpus_opts);
    if (*interactive_cmd) return cmd_interactive(interactive_scheme, interactive_timeout);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
