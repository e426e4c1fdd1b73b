#include "lazybv/refinement.hpp"

#include "lazybv/errors.hpp"

#include <unordered_set>

namespace lazybv {

std::string_view to_string(UnknownReason r)
{
  switch (r) {
  case UnknownReason::None: return "none";
  case UnknownReason::Timeout: return "timeout";
  case UnknownReason::BackendFailure: return "backend-failure";
  case UnknownReason::Incomplete: return "incomplete";
  case UnknownReason::RoundLimit: return "round-limit";
  }
  return "?";
}

std::vector<std::size_t> check_spurious(const AbstractionEngine &engine, const TermTable &table, const Model &model)
{
  std::vector<std::size_t> out;
  Evaluator ev(table, model);
  for (const auto &inst : engine.instances()) {
    const Value *ap = model.find(inst.ap);
    if (ap == nullptr) throw MissingAssignmentError("model has no value for " + table.node(inst.ap).name);
    try {
      const BvValue x = ev.eval_bv(inst.x);
      const BvValue y = ev.eval_bv(inst.y);
      BvValue exact;
      switch (inst.op) {
      case OpKind::Mul: exact = x * y; break;
      case OpKind::Sdiv: exact = x.sdiv(y); break;
      case OpKind::Udiv: exact = x.udiv(y); break;
      case OpKind::Srem: exact = x.srem(y); break;
      case OpKind::Urem: exact = x.urem(y); break;
      }
      if (!(std::get<BvValue>(*ap) == exact)) out.push_back(inst.id);
    } catch (const UnboundSymbolError &e) {
      throw MissingAssignmentError(e.what());
    }
  }
  return out;
}

Model project_model(const TermTable &table, const Model &model, const Script &script)
{
  Model out;
  for (Term s : script.declarations) {
    if (const Value *v = model.find(s)) out.set(s, *v);
    else if (table.sort(s).is_bool()) out.set(s, false);
    else out.set(s, BvValue::from_u64(table.width(s), 0));
  }
  return out;
}

Model extend_exactly(const AbstractionEngine &engine, const TermTable &table, const Model &model)
{
  Model out = model;
  for (Term s : engine.symbols()) {
    if (out.contains(s)) continue;
    out.set(s, eval(table, *engine.definition(s), out));
  }
  return out;
}

namespace {

class Session
{
public:
  Session(TermTable &table, const Script &script, const SchemeConfig &config, Backend &backend)
    : table_(table), script_(script), engine_(table, config), backend_(backend)
  {}

  SolveResult run(const Deadline &deadline, const Limits &limits);

private:
  void assert_all(const std::vector<Term> &terms);
  /// Model plus exact values for engine symbols the backend never saw.
  Model extend(const Model &m) const;
  bool originals_hold(const Model &projected) const;
  SolveResult finish(SolveResult r) const;

  TermTable &table_;
  const Script &script_;
  AbstractionEngine engine_;
  Backend &backend_;
  std::unordered_set<Term> visited_;
  std::vector<Term> seen_symbols_;
  std::size_t constraints_ = 0;
};

void Session::assert_all(const std::vector<Term> &terms)
{
  for (Term t : terms) {
    std::vector<Term> stack{ t };
    while (!stack.empty()) {
      const Term c = stack.back();
      stack.pop_back();
      if (!visited_.insert(c).second) continue;
      if (table_.kind(c) == Kind::Symbol) seen_symbols_.push_back(c);
      for (Term k : table_.node(c).children) stack.push_back(k);
    }
    backend_.assert_term(t);
    ++constraints_;
  }
}

Model Session::extend(const Model &m) const { return extend_exactly(engine_, table_, m); }

bool Session::originals_hold(const Model &projected) const
{
  Evaluator ev(table_, projected);
  for (Term a : script_.assertions)
    if (!ev.eval_bool(a)) return false;
  return true;
}

SolveResult Session::finish(SolveResult r) const
{
  r.constraints = constraints_;
  for (const auto &inst : engine_.instances()) {
    r.instances.push_back({ inst.id, inst.op, inst.width, inst.depth, inst.cursor, inst.refinements, inst.full_interval_refinements,
      std::vector<unsigned>(inst.hbs_indices.begin(), inst.hbs_indices.end()), inst.exhausted });
  }
  return r;
}

SolveResult Session::run(const Deadline &deadline, const Limits &limits)
{
  SolveResult r;
  auto unknown = [&](UnknownReason why, std::string msg) {
    r.status = Result::Unknown;
    r.reason = why;
    r.message = std::move(msg);
    return finish(r);
  };

  try {
    assert_all(engine_.abstract_formula(script_.assertions));
    for (;;) {
      if (deadline.expired()) return unknown(UnknownReason::Timeout, "time limit reached");
      const Result answer = backend_.check_sat(deadline);
      if (answer == Result::Unsat) {
        r.status = Result::Unsat;
        return finish(r);
      }
      if (answer == Result::Unknown) {
        if (deadline.expired()) return unknown(UnknownReason::Timeout, "time limit reached");
        return unknown(UnknownReason::BackendFailure, "backend answered unknown");
      }

      std::vector<Term> wanted = script_.declarations;
      wanted.insert(wanted.end(), seen_symbols_.begin(), seen_symbols_.end());
      const Model raw = backend_.get_value(wanted);
      const Model projected = project_model(table_, raw, script_);
      if (originals_hold(projected)) {
        r.status = Result::Sat;
        r.model = projected;
        return finish(r);
      }

      Model model = extend(raw);
      const std::vector<std::size_t> violated = check_spurious(engine_, table_, model);
      if (violated.empty()) return unknown(UnknownReason::BackendFailure, "model violates the input but no abstraction");
      if (limits.max_rounds != 0 && r.rounds >= limits.max_rounds) return unknown(UnknownReason::RoundLimit, "round limit reached");

      // Advance each violated instance until its new constraints exclude the model.
      bool progress = false;
      std::vector<Term> added;
      for (std::size_t id : violated) {
        for (;;) {
          const BvValue xv = std::get<BvValue>(eval(table_, engine_.instances()[id].x, model));
          auto out = engine_.next_refinement(id, xv);
          if (!out) break;
          // A repeating stage that emits nothing for this model never will.
          if (out->constraints.empty() && engine_.instances()[id].cursor >= engine_.config().steps(engine_.instances()[id].op).size()) break;
          assert_all(out->constraints);
          added.insert(added.end(), out->constraints.begin(), out->constraints.end());
          model = extend(model);
          Evaluator ev(table_, model);
          bool excluded = false;
          for (Term c : out->constraints)
            if (!ev.eval_bool(c)) excluded = true;
          if (excluded) {
            progress = true;
            break;
          }
        }
      }
      ++r.rounds;
      if (limits.on_round) limits.on_round(model, added);
      if (!progress) return unknown(UnknownReason::Incomplete, "abstraction scheme exhausted without excluding the model");
    }
  } catch (const BackendProtocolError &e) {
    return unknown(UnknownReason::BackendFailure, e.what());
  } catch (const OracleCapacityError &e) {
    return unknown(UnknownReason::BackendFailure, e.what());
  }
}

}// namespace

SolveResult solve(TermTable &table, const Script &script, const SchemeConfig &config, Backend &backend, Limits limits)
{
  config.validate();
  const Deadline deadline = limits.timeout_seconds > 0 ? Deadline::after(limits.timeout_seconds) : Deadline::never();
  Session session(table, script, config, backend);
  return session.run(deadline, limits);
}

}// namespace lazybv
