#include "lazybv/backend.hpp"

#include "lazybv/bitblast.hpp"
#include "lazybv/errors.hpp"

#include <sstream>

namespace lazybv {

std::string to_string(Result r)
{
  switch (r) {
  case Result::Sat: return "sat";
  case Result::Unsat: return "unsat";
  case Result::Unknown: break;
  }
  return "unknown";
}

void Backend::assert_term(Term t)
{
  if (!table_.sort(t).is_bool()) throw SortError("asserted term is not Bool");
  asserted_.push_back(t);
  if (state_ == State::UnsatKnown) return;
  state_ = State::Idle;
  do_assert(t);
}

Result Backend::check_sat(const Deadline &deadline)
{
  if (state_ == State::UnsatKnown) return Result::Unsat;
  const Result r = do_check(deadline);
  state_ = r == Result::Sat ? State::SatKnown : r == Result::Unsat ? State::UnsatKnown : State::Idle;
  return r;
}

Model Backend::get_value(std::span<const Term> symbols)
{
  if (state_ != State::SatKnown) throw NotSatError("get_value requires a preceding sat answer");
  for (Term s : symbols)
    if (table_.kind(s) != Kind::Symbol) throw UndeclaredSymbolError("get_value on a non-symbol term");
  return do_get_values(symbols);
}

namespace {

Value default_value(const TermTable &table, Term s)
{
  const Sort sort = table.sort(s);
  if (sort.is_bool()) return false;
  return BvValue::from_u64(sort.width(), 0);
}

/// Forwards clauses to the solver and optionally records them.
class TeeSink : public sat::ClauseSink
{
public:
  TeeSink(sat::Solver &solver, bool record) : solver_(solver), record_(record) {}
  using ClauseSink::add_clause;

  int new_var() override
  {
    if (record_) cnf.new_var();
    return solver_.new_var();
  }
  void add_clause(std::span<const sat::Lit> clause) override
  {
    if (record_) cnf.add_clause(clause);
    solver_.add_clause(clause);
  }

  sat::CnfFormula cnf;

private:
  sat::Solver &solver_;
  bool record_;
};

}// namespace

struct BuiltinBackend::Impl
{
  Impl(const TermTable &table, const BuiltinOptions &options)
    : solver(options.sat), sink(solver, options.record_cnf), blaster(table, sink)
  {}

  sat::Solver solver;
  TeeSink sink;
  BitBlaster blaster;
};

BuiltinBackend::BuiltinBackend(TermTable &table, BuiltinOptions options)
  : Backend(table), impl_(std::make_unique<Impl>(table, options))
{}

BuiltinBackend::~BuiltinBackend() = default;

const sat::SolverStats &BuiltinBackend::sat_stats() const { return impl_->solver.stats(); }

std::string BuiltinBackend::dimacs() const { return impl_->sink.cnf.to_dimacs(); }

void BuiltinBackend::do_assert(Term t) { impl_->blaster.assert_term(t); }

Result BuiltinBackend::do_check(const Deadline &deadline) { return impl_->solver.solve(deadline); }

Model BuiltinBackend::do_get_values(std::span<const Term> symbols)
{
  Model m;
  auto value = [this](sat::Lit l) { return impl_->solver.lit_value(l); };
  for (Term s : symbols) {
    if (table_.sort(s).is_bool()) {
      auto l = impl_->blaster.find_lit(s);
      m.set(s, l ? Value{ value(*l) } : default_value(table_, s));
    } else if (const Bits *bits = impl_->blaster.find_bits(s)) {
      m.set(s, read_bits(*bits, value));
    } else {
      m.set(s, default_value(table_, s));
    }
  }
  return m;
}

std::unique_ptr<Backend> make_backend(TermTable &table, const std::string &spec)
{
  if (spec == "builtin") return std::make_unique<BuiltinBackend>(table);
  if (spec == "oracle") return std::make_unique<OracleBackend>(table);
  if (spec.starts_with("oracle:")) return std::make_unique<OracleBackend>(table, static_cast<unsigned>(std::stoul(spec.substr(7))));
  if (spec.starts_with("external:")) {
    std::istringstream in(spec.substr(9));
    ExternalConfig cfg;
    in >> cfg.path;
    for (std::string arg; in >> arg;) cfg.args.push_back(arg);
    if (cfg.path.empty()) throw std::invalid_argument("external backend needs a solver path");
    return std::make_unique<ExternalBackend>(table, cfg);
  }
  throw std::invalid_argument("unknown backend '" + spec + "'");
}

}// namespace lazybv
