#include "lazybv/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace lazybv::sat {

void CnfFormula::add_clause(std::span<const Lit> clause)
{
  if (clause.empty()) {
    has_empty_clause = true;
    return;
  }
  for (Lit l : clause) {
    if (l == 0) throw std::invalid_argument("literal 0 in clause");
    num_vars = std::max(num_vars, std::abs(l));
  }
  clauses.emplace_back(clause.begin(), clause.end());
}

std::string CnfFormula::to_dimacs() const
{
  std::string out = "p cnf " + std::to_string(num_vars) + " " + std::to_string(clauses.size() + (has_empty_clause ? 1 : 0)) + "\n";
  for (const auto &c : clauses) {
    for (Lit l : c) out += std::to_string(l) + " ";
    out += "0\n";
  }
  if (has_empty_clause) out += "0\n";
  return out;
}

namespace {

// Encoded literal: 2 * var + (negative ? 1 : 0), var 0-based.
int encode(Lit l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }
int var_of(int x) { return x >> 1; }

double luby(double y, int x)
{
  int size = 1;
  int seq = 0;
  for (; size < x + 1; seq++, size = 2 * size + 1) {}
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

constexpr int kNoReason = -1;

}// namespace

struct Solver::Impl
{
  struct Clause
  {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watcher
  {
    int cref;
    int blocker;
  };

  SolverOptions opt;
  SolverStats stats;
  bool ok = true;

  std::vector<Clause> clauses;
  std::vector<std::vector<Watcher>> watches;
  std::vector<signed char> assigns;
  std::vector<int> level;
  std::vector<int> reason;
  std::vector<int> trail;
  std::vector<int> trail_lim;
  std::vector<char> flipped;
  std::size_t qhead = 0;

  std::vector<double> activity;
  double var_inc = 1;
  double cla_inc = 1;
  std::vector<char> polarity;
  std::vector<char> seen;
  std::vector<int> heap;
  std::vector<int> heap_pos;

  std::size_t num_learnts = 0;
  double max_learnts = 0;
  std::vector<char> model;

  int nvars() const { return static_cast<int>(assigns.size()); }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }
  signed char lit_val(int x) const
  {
    const signed char a = assigns[static_cast<std::size_t>(var_of(x))];
    return (x & 1) != 0 ? static_cast<signed char>(-a) : a;
  }

  // --- activity heap ---------------------------------------------------------
  bool heap_less(int a, int b) const { return activity[static_cast<std::size_t>(a)] > activity[static_cast<std::size_t>(b)]; }
  void heap_up(std::size_t i)
  {
    const int v = heap[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap[parent])) break;
      heap[i] = heap[parent];
      heap_pos[static_cast<std::size_t>(heap[i])] = static_cast<int>(i);
      i = parent;
    }
    heap[i] = v;
    heap_pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_down(std::size_t i)
  {
    const int v = heap[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap.size()) break;
      if (child + 1 < heap.size() && heap_less(heap[child + 1], heap[child])) ++child;
      if (!heap_less(heap[child], v)) break;
      heap[i] = heap[child];
      heap_pos[static_cast<std::size_t>(heap[i])] = static_cast<int>(i);
      i = child;
    }
    heap[i] = v;
    heap_pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_insert(int v)
  {
    if (heap_pos[static_cast<std::size_t>(v)] >= 0) return;
    heap.push_back(v);
    heap_up(heap.size() - 1);
  }
  int heap_pop()
  {
    const int top = heap[0];
    heap_pos[static_cast<std::size_t>(top)] = -1;
    heap[0] = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap_pos[static_cast<std::size_t>(heap[0])] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(int v)
  {
    auto &a = activity[static_cast<std::size_t>(v)];
    a += var_inc;
    if (a > 1e100) {
      for (auto &x : activity) x *= 1e-100;
      var_inc *= 1e-100;
    }
    if (heap_pos[static_cast<std::size_t>(v)] >= 0) heap_up(static_cast<std::size_t>(heap_pos[static_cast<std::size_t>(v)]));
  }
  void bump_clause(Clause &c)
  {
    c.activity += cla_inc;
    if (c.activity > 1e20) {
      for (auto &k : clauses)
        if (k.learnt) k.activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  // --- core ---------------------------------------------------------------
  int new_var()
  {
    const int v = nvars();
    assigns.push_back(0);
    level.push_back(0);
    reason.push_back(kNoReason);
    activity.push_back(0);
    polarity.push_back(1);
    seen.push_back(0);
    heap_pos.push_back(-1);
    watches.emplace_back();
    watches.emplace_back();
    heap_insert(v);
    return v + 1;
  }

  void enqueue(int x, int from)
  {
    const auto v = static_cast<std::size_t>(var_of(x));
    assigns[v] = (x & 1) != 0 ? -1 : 1;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(x);
  }

  void attach(int cref)
  {
    const Clause &c = clauses[static_cast<std::size_t>(cref)];
    watches[static_cast<std::size_t>(c.lits[0] ^ 1)].push_back({ cref, c.lits[1] });
    watches[static_cast<std::size_t>(c.lits[1] ^ 1)].push_back({ cref, c.lits[0] });
  }

  void cancel_until(int lvl)
  {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail.size(); i-- > static_cast<std::size_t>(trail_lim[static_cast<std::size_t>(lvl)]);) {
      const int x = trail[i];
      const auto v = static_cast<std::size_t>(var_of(x));
      polarity[v] = static_cast<char>(x & 1);
      assigns[v] = 0;
      reason[v] = kNoReason;
      heap_insert(var_of(x));
    }
    trail.resize(static_cast<std::size_t>(trail_lim[static_cast<std::size_t>(lvl)]));
    trail_lim.resize(static_cast<std::size_t>(lvl));
    flipped.resize(static_cast<std::size_t>(lvl));
    qhead = trail.size();
  }

  int propagate()
  {
    while (qhead < trail.size()) {
      const int p = trail[qhead++];
      const int false_lit = p ^ 1;
      auto &ws = watches[static_cast<std::size_t>(p)];
      std::size_t i = 0;
      std::size_t j = 0;
      ++stats.propagations;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (lit_val(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause &c = clauses[static_cast<std::size_t>(w.cref)];
        if (c.deleted) {
          ++i;
          continue;
        }
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        ++i;
        const int first = c.lits[0];
        if (first != w.blocker && lit_val(first) == 1) {
          ws[j++] = { w.cref, first };
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (lit_val(c.lits[k]) != -1) {
            std::swap(c.lits[1], c.lits[k]);
            watches[static_cast<std::size_t>(c.lits[1] ^ 1)].push_back({ w.cref, first });
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = { w.cref, first };
        if (lit_val(first) == -1) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead = trail.size();
          return w.cref;
        }
        enqueue(first, w.cref);
      }
      ws.resize(j);
    }
    return kNoReason;
  }

  bool redundant(int x) const
  {
    const int r = reason[static_cast<std::size_t>(var_of(x))];
    if (r == kNoReason) return false;
    const Clause &c = clauses[static_cast<std::size_t>(r)];
    for (std::size_t k = 1; k < c.lits.size(); ++k) {
      const auto v = static_cast<std::size_t>(var_of(c.lits[k]));
      if (seen[v] == 0 && level[v] > 0) return false;
    }
    return true;
  }

  void analyze(int confl, std::vector<int> &learnt, int &backtrack_level)
  {
    learnt.clear();
    learnt.push_back(-1);
    int path = 0;
    int p = -1;
    std::size_t index = trail.size();
    do {
      Clause &c = clauses[static_cast<std::size_t>(confl)];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
        const int q = c.lits[k];
        const auto v = static_cast<std::size_t>(var_of(q));
        if (seen[v] == 0 && level[v] > 0) {
          bump_var(var_of(q));
          seen[v] = 1;
          if (level[v] >= decision_level()) ++path;
          else learnt.push_back(q);
        }
      }
      while (seen[static_cast<std::size_t>(var_of(trail[--index]))] == 0) {}
      p = trail[index];
      confl = reason[static_cast<std::size_t>(var_of(p))];
      seen[static_cast<std::size_t>(var_of(p))] = 0;
      --path;
    } while (path > 0);
    learnt[0] = p ^ 1;

    // Drop literals implied by the rest of the clause.
    std::vector<int> all(learnt.begin() + 1, learnt.end());
    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k)
      if (!redundant(learnt[k])) learnt[keep++] = learnt[k];
    learnt.resize(keep);
    for (int q : all) seen[static_cast<std::size_t>(var_of(q))] = 0;

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k)
        if (level[static_cast<std::size_t>(var_of(learnt[k]))] > level[static_cast<std::size_t>(var_of(learnt[max_i]))]) max_i = k;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level[static_cast<std::size_t>(var_of(learnt[1]))];
    }
  }

  bool locked(int cref) const
  {
    const Clause &c = clauses[static_cast<std::size_t>(cref)];
    const auto v = static_cast<std::size_t>(var_of(c.lits[0]));
    return assigns[v] != 0 && reason[v] == cref && lit_val(c.lits[0]) == 1;
  }

  void reduce_db()
  {
    std::vector<int> learnts;
    for (std::size_t i = 0; i < clauses.size(); ++i)
      if (clauses[i].learnt && !clauses[i].deleted) learnts.push_back(static_cast<int>(i));
    std::sort(learnts.begin(), learnts.end(), [this](int a, int b) {
      return clauses[static_cast<std::size_t>(a)].activity < clauses[static_cast<std::size_t>(b)].activity;
    });
    const std::size_t half = learnts.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      Clause &c = clauses[static_cast<std::size_t>(learnts[i])];
      if (c.lits.size() > 2 && !locked(learnts[i])) {
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        --num_learnts;
      }
    }
  }

  int pick_branch()
  {
    while (!heap.empty()) {
      const int v = heap_pop();
      if (assigns[static_cast<std::size_t>(v)] == 0) return 2 * v + polarity[static_cast<std::size_t>(v)];
    }
    return -1;
  }

  void add_clause(std::span<const Lit> lits)
  {
    if (!ok) return;
    cancel_until(0);
    std::vector<int> c;
    c.reserve(lits.size());
    for (Lit l : lits) {
      if (l == 0) throw std::invalid_argument("literal 0 in clause");
      while (std::abs(l) > nvars()) new_var();
      c.push_back(encode(l));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == (c[i] ^ 1)) return;// tautology
      const signed char val = lit_val(c[i]);
      if (val == 1) return;
      if (val == 0) c[keep++] = c[i];
    }
    c.resize(keep);
    if (c.empty()) {
      ok = false;
      return;
    }
    if (c.size() == 1) {
      enqueue(c[0], kNoReason);
      if (propagate() != kNoReason) ok = false;
      return;
    }
    clauses.push_back({ std::move(c), false, false, 0 });
    attach(static_cast<int>(clauses.size() - 1));
  }

  Result search(const Deadline &deadline)
  {
    std::vector<int> learnt;
    std::uint64_t budget_start = stats.conflicts;
    int restart_round = 0;
    std::uint64_t restart_limit = static_cast<std::uint64_t>(100 * luby(2, restart_round));
    std::uint64_t since_restart = 0;
    if (max_learnts == 0) max_learnts = std::max(1000.0, static_cast<double>(clauses.size()) / 3.0);

    for (;;) {
      const int confl = propagate();
      if (confl != kNoReason) {
        ++stats.conflicts;
        ++since_restart;
        if (decision_level() == 0) {
          ok = false;
          return Result::Unsat;
        }
        if (opt.learning) {
          int bt = 0;
          analyze(confl, learnt, bt);
          cancel_until(bt);
          if (learnt.size() == 1) {
            enqueue(learnt[0], kNoReason);
          } else {
            clauses.push_back({ learnt, true, false, 0 });
            const int cref = static_cast<int>(clauses.size() - 1);
            bump_clause(clauses.back());
            attach(cref);
            enqueue(learnt[0], cref);
            ++num_learnts;
            ++stats.learned;
          }
          var_inc /= 0.95;
          cla_inc /= 0.999;
        } else {
          int d = decision_level();
          while (d > 0 && flipped[static_cast<std::size_t>(d - 1)] != 0) --d;
          if (d == 0) {
            ok = false;
            return Result::Unsat;
          }
          const int decision = trail[static_cast<std::size_t>(trail_lim[static_cast<std::size_t>(d - 1)])];
          cancel_until(d - 1);
          trail_lim.push_back(static_cast<int>(trail.size()));
          flipped.push_back(1);
          enqueue(decision ^ 1, kNoReason);
        }
        if ((stats.conflicts & 255U) == 0 && deadline.expired()) {
          cancel_until(0);
          return Result::Unknown;
        }
        if (opt.conflict_budget != 0 && stats.conflicts - budget_start >= opt.conflict_budget) {
          cancel_until(0);
          return Result::Unknown;
        }
        continue;
      }

      if (opt.learning && opt.restarts && since_restart >= restart_limit) {
        cancel_until(0);
        ++stats.restarts;
        since_restart = 0;
        restart_limit = static_cast<std::uint64_t>(100 * luby(2, ++restart_round));
        if (deadline.expired()) return Result::Unknown;
      }
      if (opt.learning && static_cast<double>(num_learnts) >= max_learnts + static_cast<double>(trail.size())) {
        reduce_db();
        max_learnts *= 1.1;
      }
      if ((stats.decisions & 1023U) == 0 && deadline.expired()) {
        cancel_until(0);
        return Result::Unknown;
      }
      const int next = pick_branch();
      if (next < 0) {
        model.assign(assigns.size(), 0);
        for (std::size_t v = 0; v < assigns.size(); ++v) model[v] = assigns[v] == 1 ? 1 : 0;
        cancel_until(0);
        return Result::Sat;
      }
      ++stats.decisions;
      trail_lim.push_back(static_cast<int>(trail.size()));
      flipped.push_back(0);
      enqueue(next, kNoReason);
    }
  }

  Result solve(const Deadline &deadline)
  {
    model.clear();
    if (!ok) return Result::Unsat;
    cancel_until(0);
    if (propagate() != kNoReason) {
      ok = false;
      return Result::Unsat;
    }
    return search(deadline);
  }
};

Solver::Solver(SolverOptions options) : impl_(std::make_unique<Impl>())
{
  impl_->opt = options;
}

Solver::~Solver() = default;

int Solver::new_var() { return impl_->new_var(); }

void Solver::add_clause(std::span<const Lit> clause) { impl_->add_clause(clause); }

void Solver::add_formula(const CnfFormula &f)
{
  while (impl_->nvars() < f.num_vars) impl_->new_var();
  if (f.has_empty_clause) impl_->ok = false;
  for (const auto &c : f.clauses) impl_->add_clause(c);
}

Result Solver::solve(const Deadline &deadline) { return impl_->solve(deadline); }

bool Solver::value(int var) const
{
  if (var < 1 || static_cast<std::size_t>(var) > impl_->model.size()) throw std::out_of_range("no model value for variable");
  return impl_->model[static_cast<std::size_t>(var - 1)] != 0;
}

int Solver::num_vars() const { return impl_->nvars(); }

const SolverStats &Solver::stats() const { return impl_->stats; }

Result solve_cnf(const CnfFormula &f, std::vector<bool> &assignment, SolverOptions options, const Deadline &deadline)
{
  Solver s(options);
  s.add_formula(f);
  const Result r = s.solve(deadline);
  assignment.assign(static_cast<std::size_t>(f.num_vars) + 1, false);
  if (r == Result::Sat)
    for (int v = 1; v <= f.num_vars; ++v) assignment[static_cast<std::size_t>(v)] = s.value(v);
  return r;
}

}// namespace lazybv::sat
