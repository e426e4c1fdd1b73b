#include "lazybv/abstraction.hpp"

#include "lazybv/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace lazybv {

std::string_view to_string(OpKind op)
{
  switch (op) {
  case OpKind::Mul: return "mul";
  case OpKind::Sdiv: return "sdiv";
  case OpKind::Udiv: return "udiv";
  case OpKind::Srem: return "srem";
  case OpKind::Urem: return "urem";
  }
  return "?";
}

Kind native_kind(OpKind op)
{
  switch (op) {
  case OpKind::Mul: return Kind::BvMul;
  case OpKind::Sdiv: return Kind::BvSdiv;
  case OpKind::Udiv: return Kind::BvUdiv;
  case OpKind::Srem: return Kind::BvSrem;
  case OpKind::Urem: return Kind::BvUrem;
  }
  return Kind::BvMul;
}

std::optional<OpKind> op_kind_of(Kind kind)
{
  switch (kind) {
  case Kind::BvMul: return OpKind::Mul;
  case Kind::BvSdiv: return OpKind::Sdiv;
  case Kind::BvUdiv: return OpKind::Udiv;
  case Kind::BvSrem: return OpKind::Srem;
  case Kind::BvUrem: return OpKind::Urem;
  default: return std::nullopt;
  }
}

std::string_view to_string(Stage s)
{
  switch (s) {
  case Stage::Simple: return "simple";
  case Stage::Intervals: return "intervals";
  case Stage::Relations: return "relations";
  case Stage::FullInterval: return "full-interval";
  case Stage::Full: return "full";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view name)
{
  for (Stage s : { Stage::Simple, Stage::Intervals, Stage::Relations, Stage::FullInterval, Stage::Full })
    if (to_string(s) == name) return s;
  return std::nullopt;
}

// --- configuration -----------------------------------------------------------

SchemeConfig SchemeConfig::baseline()
{
  SchemeConfig c;
  c.enabled = false;
  return c;
}

SchemeConfig SchemeConfig::full() { return SchemeConfig{}; }

SchemeConfig SchemeConfig::omit_step(unsigned n)
{
  SchemeConfig c;
  if (n < 1 || n > c.mul_steps.size()) throw std::invalid_argument("no such step to omit");
  c.mul_steps.erase(c.mul_steps.begin() + (n - 1));
  c.validate();
  return c;
}

SchemeConfig SchemeConfig::merge_steps(unsigned a)
{
  SchemeConfig c;
  if (a < 1 || a >= c.mul_steps.size()) throw std::invalid_argument("no such steps to merge");
  auto &first = c.mul_steps[a - 1];
  const auto &second = c.mul_steps[a];
  first.insert(first.end(), second.begin(), second.end());
  c.mul_steps.erase(c.mul_steps.begin() + a);
  c.validate();
  return c;
}

SchemeConfig SchemeConfig::prefix(unsigned n)
{
  SchemeConfig c;
  if (n < 1 || n > c.mul_steps.size()) throw std::invalid_argument("prefix length out of range");
  c.mul_steps.resize(n);
  return c;
}

bool SchemeConfig::sound() const
{
  if (!enabled) return true;
  auto ends_with = [](const std::vector<Step> &steps, Stage s) {
    return !steps.empty() && std::find(steps.back().begin(), steps.back().end(), s) != steps.back().end();
  };
  return ends_with(mul_steps, Stage::FullInterval) && ends_with(div_steps, Stage::Full);
}

void SchemeConfig::validate() const
{
  auto check = [](const std::vector<Step> &steps, const std::vector<Stage> &allowed, Stage last, const char *what) {
    std::vector<Stage> seen;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].empty()) throw std::invalid_argument(std::string(what) + ": empty step");
      for (Stage s : steps[i]) {
        if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
          throw std::invalid_argument(std::string(what) + ": stage '" + std::string(to_string(s)) + "' not applicable");
        if (std::find(seen.begin(), seen.end(), s) != seen.end())
          throw std::invalid_argument(std::string(what) + ": stage '" + std::string(to_string(s)) + "' repeated");
        if (s == last && i + 1 != steps.size())
          throw std::invalid_argument(std::string(what) + ": '" + std::string(to_string(s)) + "' must be in the last step");
        seen.push_back(s);
      }
    }
    if (steps.empty()) throw std::invalid_argument(std::string(what) + ": no steps");
  };
  check(mul_steps, { Stage::Simple, Stage::Intervals, Stage::Relations, Stage::FullInterval }, Stage::FullInterval, "mul scheme");
  check(div_steps, { Stage::Relations, Stage::Full }, Stage::Full, "division scheme");
}

std::vector<std::string> variant_names() { return { "baseline", "step1", "step12", "step123", "full", "omit2", "merge23" }; }

SchemeConfig variant_config(const std::string &name)
{
  if (name == "baseline") return SchemeConfig::baseline();
  if (name == "full") return SchemeConfig::full();
  if (name == "step1") return SchemeConfig::prefix(1);
  if (name == "step12") return SchemeConfig::prefix(2);
  if (name == "step123") return SchemeConfig::prefix(3);
  if (name == "omit2") return SchemeConfig::omit_step(2);
  if (name == "merge23") return SchemeConfig::merge_steps(2);
  throw std::invalid_argument("unknown variant '" + name + "'");
}

// --- engine -----------------------------------------------------------------

AbstractionEngine::AbstractionEngine(TermTable &table, SchemeConfig config) : table_(table), config_(std::move(config))
{
  if (config_.enabled) {
    for (const auto &steps : { config_.mul_steps, config_.div_steps })
      if (steps.empty()) throw std::invalid_argument("scheme without steps");
  }
}

Term AbstractionEngine::fresh_symbol(const std::string &prefix, unsigned width, Term definition)
{
  const Term s = table_.mk_symbol(table_.fresh_name(prefix), Sort::bv(width));
  definitions_.emplace(s, definition);
  symbols_.push_back(s);
  return s;
}

std::optional<Term> AbstractionEngine::definition(Term symbol) const
{
  auto it = definitions_.find(symbol);
  if (it == definitions_.end()) return std::nullopt;
  return it->second;
}

Term AbstractionEngine::is_zero(Term x) { return table_.eq(x, constant(table_.width(x), 0)); }

Term AbstractionEngine::is_value(Term x, std::int64_t v) { return table_.eq(x, constant(table_.width(x), v)); }

Term AbstractionEngine::slice(Term x, unsigned hi, unsigned lo)
{
  for (;;) {
    const TermNode &n = table_.node(x);
    if (lo == 0 && hi + 1 == n.sort.width()) return x;
    if (n.kind == Kind::BvConst) return table_.mk_const(n.value.extract(hi, lo));
    if ((n.kind == Kind::SignExtend || n.kind == Kind::ZeroExtend) && hi < table_.width(n.children[0])) {
      x = n.children[0];
      continue;
    }
    if (n.kind == Kind::Extract) {
      hi += n.attrs.lo;
      lo += n.attrs.lo;
      x = n.children[0];
      continue;
    }
    return table_.extract(hi, lo, x);
  }
}

namespace {

Term sext_to(TermTable &t, Term x, unsigned extra)
{
  if (extra == 0) return x;
  const TermNode &n = t.node(x);
  if (n.kind == Kind::BvConst) return t.mk_const(n.value.sext(extra));
  return t.sext(x, extra);
}

Term zext_to(TermTable &t, Term x, unsigned extra)
{
  if (extra == 0) return x;
  const TermNode &n = t.node(x);
  if (n.kind == Kind::BvConst) return t.mk_const(n.value.zext(extra));
  return t.zext(x, extra);
}

}// namespace

Term AbstractionEngine::hbs(Term x, unsigned i)
{
  const unsigned w = table_.width(x);
  if (i >= w) throw std::invalid_argument("hbs index out of range");
  std::vector<Term> parts{ table_.bit(x, i) };
  for (unsigned j = i + 1; j < w; ++j) parts.push_back(table_.not_(table_.bit(x, j)));
  return table_.and_(parts);
}

Term AbstractionEngine::noov(Term x, Term y)
{
  const unsigned w = table_.width(x);
  auto magnitude = [&](Term v) { return table_.ite(table_.bit(v, w - 1), table_.bvneg(v), v); };
  const Term a = magnitude(x);
  const Term b = magnitude(y);
  // nlz(a) + nlz(b) >= w + 1 split as nlz(a) >= k and nlz(b) >= w + 1 - k.
  std::vector<Term> cases{ is_zero(x), is_zero(y) };
  for (unsigned k = 1; k <= w; ++k) cases.push_back(table_.and_({ is_zero(slice(a, w - 1, w - k)), is_zero(slice(b, w - 1, k - 1)) }));
  return table_.or_(cases);
}

Term AbstractionEngine::lower_bound(Term a, Term b, unsigned n)
{
  const unsigned w = table_.width(b);
  Term l = table_.ite(hbs(a, 0), b, constant(w, 0));
  for (unsigned i = 1; i <= n; ++i) l = table_.ite(hbs(a, i), table_.bvshl(b, constant(w, i)), l);
  return l;
}

Term AbstractionEngine::upper_bound(Term a, Term b, unsigned n)
{
  const unsigned w = table_.width(b);
  Term u = table_.bvshl(b, constant(w, 1));
  for (unsigned i = 1; i <= n; ++i) u = table_.ite(hbs(a, i), table_.bvshl(b, constant(w, i + 1)), u);
  return u;
}

std::size_t AbstractionEngine::instance_for(OpKind op, Term x, Term y, unsigned depth)
{
  const auto key = std::make_tuple(op, x.id, y.id);
  if (auto it = index_.find(key); it != index_.end()) return it->second;

  AbstractionInstance inst;
  inst.id = instances_.size();
  inst.op = op;
  inst.x = x;
  inst.y = y;
  inst.width = table_.width(x);
  inst.depth = depth;
  const unsigned w = inst.width;
  const Term native = table_.mk(native_kind(op), { x, y });
  inst.ap = fresh_symbol("ap_" + std::string(to_string(op)), w, native);
  const bool is_signed = op == OpKind::Mul || op == OpKind::Sdiv || op == OpKind::Srem;
  inst.x2 = is_signed ? sext_to(table_, x, w) : zext_to(table_, x, w);
  inst.y2 = is_signed ? sext_to(table_, y, w) : zext_to(table_, y, w);
  if (op == OpKind::Mul) {
    inst.x2p = table_.ite(table_.bit(x, w - 1), table_.bvneg(inst.x2), inst.x2);
    inst.y2p = table_.ite(table_.bit(y, w - 1), table_.bvneg(inst.y2), inst.y2);
    inst.r2p = fresh_symbol("r2p", 2 * w, table_.bvmul(inst.x2p, inst.y2p));
    inst.r2 = table_.ite(table_.xor_(table_.bit(x, w - 1), table_.bit(y, w - 1)), table_.bvneg(inst.r2p), inst.r2p);
  }
  widths_.insert(w);
  widths_.insert(2 * w);
  index_.emplace(key, inst.id);
  by_ap_.emplace(inst.ap, inst.id);
  instances_.push_back(std::move(inst));
  return instances_.back().id;
}

Term AbstractionEngine::rewrite_signed(OpKind op, Term x, Term y, unsigned depth)
{
  const unsigned w = table_.width(x);
  const OpKind u = op == OpKind::Sdiv ? OpKind::Udiv : OpKind::Urem;
  const Term sx = table_.bit(x, w - 1);
  const Term sy = table_.bit(y, w - 1);
  auto negate = [&](Term t) {
    const TermNode &n = table_.node(t);
    return n.kind == Kind::BvConst ? table_.mk_const(-n.value) : table_.bvneg(t);
  };
  const Term nx = negate(x);
  const Term ny = negate(y);
  if (op == OpKind::Sdiv) {
    return table_.ite(sx,
      table_.ite(sy, apply(u, nx, ny, depth), negate(apply(u, nx, y, depth))),
      table_.ite(sy, negate(apply(u, x, ny, depth)), apply(u, x, y, depth)));
  }
  return table_.ite(sx,
    table_.ite(sy, negate(apply(u, nx, ny, depth)), negate(apply(u, nx, y, depth))),
    table_.ite(sy, apply(u, x, ny, depth), apply(u, x, y, depth)));
}

Term AbstractionEngine::apply(OpKind op, Term x, Term y, unsigned depth)
{
  if (table_.kind(x) == Kind::BvConst && table_.kind(y) == Kind::BvConst) {
    const Term native = table_.mk(native_kind(op), { x, y });
    return table_.mk_const(std::get<BvValue>(eval(table_, native, Model{})));
  }
  if (config_.signed_mode == SignedMode::RewriteUnsigned && (op == OpKind::Sdiv || op == OpKind::Srem))
    return rewrite_signed(op, x, y, depth);
  return instances_[instance_for(op, x, y, depth)].ap;
}

std::vector<Term> AbstractionEngine::abstract_formula(std::span<const Term> assertions)
{
  for (unsigned w : collect_widths(table_, assertions)) widths_.insert(w);
  std::vector<Term> out(assertions.begin(), assertions.end());
  if (!config_.enabled) return out;

  std::unordered_map<Term, Term> mapped;
  for (Term t : topological_order(table_, assertions)) {
    const TermNode &n = table_.node(t);
    if (n.children.empty()) {
      mapped.emplace(t, t);
      continue;
    }
    std::vector<Term> kids;
    kids.reserve(n.children.size());
    for (Term c : n.children) kids.push_back(mapped.at(c));
    Term r;
    if (auto op = op_kind_of(n.kind)) {
      r = apply(*op, kids[0], kids[1], 0);
    } else if (kids == n.children) {
      r = t;
    } else {
      const Kind kind = n.kind;
      const Attrs attrs = n.attrs;
      r = table_.mk(kind, kids, attrs);
    }
    mapped.emplace(t, r);
  }
  for (Term &t : out) t = mapped.at(t);
  return out;
}

// --- stages -----------------------------------------------------------------

void AbstractionEngine::emit_definitions(AbstractionInstance &inst, StageOutput &out)
{
  if (inst.definitions_emitted || inst.op != OpKind::Mul) return;
  inst.definitions_emitted = true;
  out.constraints.push_back(table_.eq(inst.ap, slice(inst.r2, inst.width - 1, 0)));
}

StageOutput AbstractionEngine::mul_stage_simple(std::size_t id)
{
  StageOutput out;
  emit_definitions(instances_.at(id), out);
  const AbstractionInstance inst = instances_.at(id);
  const unsigned w = inst.width;
  const Term x = inst.x;
  const Term y = inst.y;
  const Term ap = inst.ap;
  auto &c = out.constraints;
  auto &T = table_;

  c.push_back(T.implies(is_zero(x), is_zero(ap)));
  c.push_back(T.implies(is_zero(y), is_zero(ap)));
  c.push_back(T.implies(is_value(x, 1), T.eq(ap, y)));
  c.push_back(T.implies(is_value(y, 1), T.eq(ap, x)));
  c.push_back(T.implies(is_value(x, -1), T.eq(ap, T.bvneg(y))));
  c.push_back(T.implies(is_value(y, -1), T.eq(ap, T.bvneg(x))));

  const Term n = noov(x, y);
  const Term sx = T.bit(x, w - 1);
  const Term sy = T.bit(y, w - 1);
  const Term sr = T.bit(ap, w - 1);
  const Term zero = constant(w, 0);
  c.push_back(T.implies(n, T.implies(T.and_({ T.not_(sx), T.not_(sy) }), T.not_(sr))));
  c.push_back(T.implies(n, T.implies(T.and_({ T.bvslt(zero, x), sy }), sr)));
  c.push_back(T.implies(n, T.implies(T.and_({ sx, T.bvslt(zero, y) }), sr)));
  c.push_back(T.implies(n, T.implies(T.and_({ sx, sy }), T.not_(sr))));

  auto power_of_two = [&](Term v, unsigned i) {
    std::vector<Term> bits;
    for (unsigned j = 0; j < w; ++j) bits.push_back(j == i ? T.bit(v, j) : T.not_(T.bit(v, j)));
    return T.and_(bits);
  };
  for (unsigned i = 1; i < w; ++i) {
    const Term shift = constant(2 * w, i);
    c.push_back(T.implies(power_of_two(x, i), T.eq(inst.r2p, T.bvshl(inst.y2p, shift))));
    c.push_back(T.implies(power_of_two(y, i), T.eq(inst.r2p, T.bvshl(inst.x2p, shift))));
  }
  return out;
}

StageOutput AbstractionEngine::mul_stage_intervals(std::size_t id)
{
  StageOutput out;
  emit_definitions(instances_.at(id), out);
  const AbstractionInstance inst = instances_.at(id);
  auto &T = table_;
  const Term lo = lower_bound(inst.x2p, inst.y2p, inst.width - 1);
  const Term hi = upper_bound(inst.x2p, inst.y2p, inst.width - 1);
  const Term guard = T.and_({ T.not_(is_zero(inst.x2p)), T.not_(is_zero(inst.y2p)) });
  out.constraints.push_back(T.implies(guard, T.and_({ T.bvule(lo, inst.r2p), T.bvult(inst.r2p, hi) })));
  return out;
}

StageOutput AbstractionEngine::mul_stage_relations(std::size_t id)
{
  StageOutput out;
  emit_definitions(instances_.at(id), out);
  const AbstractionInstance inst = instances_.at(id);
  if (inst.depth >= config_.max_spawn_depth) return out;
  const std::size_t before = instances_.size();
  const unsigned d = inst.depth + 1;
  const unsigned w2 = 2 * inst.width;
  auto &T = table_;
  auto &c = out.constraints;
  const Term x2 = inst.x2;
  const Term y2 = inst.y2;
  // The double-width product ap_mul(x2, y2) is the instance's own r2.
  const Term m = inst.r2;

  c.push_back(T.eq(m, apply(OpKind::Mul, y2, x2, d)));
  c.push_back(T.or_({ is_zero(x2), T.eq(y2, apply(OpKind::Sdiv, m, x2, d)) }));
  c.push_back(T.or_({ is_zero(y2), T.eq(x2, apply(OpKind::Sdiv, m, y2, d)) }));

  const std::set<unsigned> widths = widths_;
  for (unsigned wp : widths) {
    if (wp >= w2) continue;
    const Term xs = slice(x2, wp - 1, 0);
    const Term ys = slice(y2, wp - 1, 0);
    const Term ms = slice(m, wp - 1, 0);
    c.push_back(T.eq(ms, apply(OpKind::Mul, xs, ys, d)));
    c.push_back(T.eq(ms, apply(OpKind::Mul, ys, xs, d)));
    if (wp < 2) continue;
    // Half-width factors whose product cannot overflow wp bits.
    const unsigned h = wp / 2;
    const Term xh = sext_to(T, slice(x2, h - 1, 0), wp - h);
    const Term yh = sext_to(T, slice(y2, h - 1, 0), wp - h);
    const Term mxy = apply(OpKind::Mul, xh, yh, d);
    c.push_back(T.eq(mxy, apply(OpKind::Mul, yh, xh, d)));
    c.push_back(T.or_({ is_zero(yh), T.eq(xh, apply(OpKind::Sdiv, mxy, yh, d)) }));
    c.push_back(T.or_({ is_zero(xh), T.eq(yh, apply(OpKind::Sdiv, mxy, xh, d)) }));
  }
  for (std::size_t i = before; i < instances_.size(); ++i) out.spawned.push_back(i);
  return out;
}

StageOutput AbstractionEngine::div_stage_relations(std::size_t id)
{
  StageOutput out;
  const AbstractionInstance inst = instances_.at(id);
  const unsigned w = inst.width;
  auto &T = table_;
  auto &c = out.constraints;
  const Term x = inst.x;
  const Term y = inst.y;
  const Term ap = inst.ap;
  const Term y_nonzero = T.not_(is_zero(y));

  switch (inst.op) {
  case OpKind::Sdiv:
    c.push_back(T.implies(is_value(y, 1), T.eq(ap, x)));
    c.push_back(T.implies(is_value(y, -1), T.eq(ap, T.bvneg(x))));
    c.push_back(T.implies(T.and_({ is_zero(x), y_nonzero }), is_zero(ap)));
    c.push_back(T.implies(is_zero(y), T.eq(ap, T.ite(T.bit(x, w - 1), constant(w, 1), constant(w, -1)))));
    break;
  case OpKind::Udiv:
    c.push_back(T.implies(is_value(y, 1), T.eq(ap, x)));
    c.push_back(T.implies(is_zero(y), is_value(ap, -1)));
    c.push_back(T.implies(T.and_({ is_zero(x), y_nonzero }), is_zero(ap)));
    c.push_back(T.implies(y_nonzero, T.bvule(ap, x)));
    break;
  case OpKind::Urem:
    c.push_back(T.implies(is_zero(y), T.eq(ap, x)));
    c.push_back(T.implies(is_value(y, 1), is_zero(ap)));
    c.push_back(T.implies(y_nonzero, T.bvult(ap, y)));
    c.push_back(T.bvule(ap, x));
    break;
  case OpKind::Srem:
  case OpKind::Mul: break;
  }
  if (inst.op == OpKind::Mul) throw std::logic_error("division relations on a Mul instance");
  if (inst.depth >= config_.max_spawn_depth) return out;

  const std::size_t before = instances_.size();
  const unsigned d = inst.depth + 1;
  const bool is_signed = inst.op == OpKind::Sdiv || inst.op == OpKind::Srem;
  const Term x2 = inst.x2;
  const Term y2 = inst.y2;
  const Term q2 = apply(is_signed ? OpKind::Sdiv : OpKind::Udiv, x2, y2, d);
  const Term r2 = apply(is_signed ? OpKind::Srem : OpKind::Urem, x2, y2, d);
  const bool is_div = inst.op == OpKind::Sdiv || inst.op == OpKind::Udiv;
  c.push_back(T.eq(ap, slice(is_div ? q2 : r2, w - 1, 0)));
  c.push_back(T.eq(x2, T.bvadd(apply(OpKind::Mul, q2, y2, d), r2)));
  for (std::size_t i = before; i < instances_.size(); ++i) out.spawned.push_back(i);
  return out;
}

StageOutput AbstractionEngine::op_stage_full(std::size_t id)
{
  AbstractionInstance &inst = instances_.at(id);
  StageOutput out;
  out.constraints.push_back(table_.eq(inst.ap, table_.mk(native_kind(inst.op), { inst.x, inst.y })));
  inst.exhausted = true;
  return out;
}

StageOutput AbstractionEngine::mul_stage_full_interval(std::size_t id, const BvValue &x_value)
{
  AbstractionInstance &inst = instances_.at(id);
  StageOutput out;
  emit_definitions(inst, out);
  const auto &steps = config_.mul_steps;
  const bool has_simple = std::any_of(steps.begin(), steps.end(), [](const Step &s) {
    return std::find(s.begin(), s.end(), Stage::Simple) != s.end();
  });
  if (!has_simple && !inst.zero_guard_emitted) {
    // Without the simple stage nothing covers x = 0.
    inst.zero_guard_emitted = true;
    out.constraints.push_back(table_.implies(is_zero(inst.x), is_zero(inst.ap)));
  }
  if (x_value.is_zero()) return out;
  const auto i = static_cast<unsigned>(x_value.highest_set_bit());
  if (inst.hbs_indices.contains(i))
    throw IndexAlreadyAssertedError("hbs index " + std::to_string(i) + " already asserted for instance " + std::to_string(id));
  const Term h = hbs(inst.x, i);
  const Term exact = table_.eq(inst.ap, table_.bvmul(inst.x, inst.y));
  out.constraints.push_back(table_.implies(h, exact));
  inst.hbs_indices.insert(i);
  ++inst.full_interval_refinements;
  if (inst.hbs_indices.size() == inst.width) inst.exhausted = true;
  return out;
}

void AbstractionEngine::functional_consistency(std::size_t id, StageOutput &out)
{
  const AbstractionInstance inst = instances_.at(id);
  for (const auto &other : instances_) {
    if (other.id == id || other.op != inst.op || other.width != inst.width || other.cursor == 0) continue;
    out.constraints.push_back(table_.implies(table_.and_({ table_.eq(inst.x, other.x), table_.eq(inst.y, other.y) }),
      table_.eq(inst.ap, other.ap)));
  }
}

std::optional<StageOutput> AbstractionEngine::next_refinement(std::size_t id, const BvValue &x_value)
{
  if (instances_.at(id).exhausted) return std::nullopt;
  const OpKind op = instances_[id].op;
  const auto &steps = config_.steps(op);
  StageOutput out;
  auto merge = [&out](StageOutput s) {
    out.constraints.insert(out.constraints.end(), s.constraints.begin(), s.constraints.end());
    out.spawned.insert(out.spawned.end(), s.spawned.begin(), s.spawned.end());
  };
  if (config_.fresh_symbols == FreshSymbolPolicy::SharedPerOp && instances_[id].cursor == 0) functional_consistency(id, out);

  const bool repeats = op == OpKind::Mul && std::find(steps.back().begin(), steps.back().end(), Stage::FullInterval) != steps.back().end();
  const std::size_t cursor = instances_[id].cursor;
  if (cursor >= steps.size()) {
    // Past the last step: only a repeating full-interval stage remains.
    if (!repeats) {
      instances_[id].exhausted = true;
      return std::nullopt;
    }
    merge(mul_stage_full_interval(id, x_value));
  } else {
    for (Stage s : steps[cursor]) {
      switch (s) {
      case Stage::Simple: merge(mul_stage_simple(id)); break;
      case Stage::Intervals: merge(mul_stage_intervals(id)); break;
      case Stage::Relations: merge(op == OpKind::Mul ? mul_stage_relations(id) : div_stage_relations(id)); break;
      case Stage::FullInterval: merge(mul_stage_full_interval(id, x_value)); break;
      case Stage::Full: merge(op_stage_full(id)); break;
      }
    }
    instances_[id].cursor = cursor + 1;
    if (cursor + 1 == steps.size() && !repeats) instances_[id].exhausted = true;
  }
  ++instances_[id].refinements;
  return out;
}

}// namespace lazybv
