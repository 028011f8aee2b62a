#include "foml/kripke.hpp"

#include <algorithm>

namespace foml {

Value OpTable::at(std::span<const Value> args, std::size_t n) const {
  std::size_t idx = 0;
  for (Value a : args) idx = idx * n + static_cast<std::size_t>(a);
  if (args.size() != arity || idx >= values.size()) throw EvalError("operator table lookup out of range");
  return values[idx];
}

void Relation::add(int from, int to) {
  auto& s = succ.at(static_cast<std::size_t>(from));
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it == s.end() || *it != to) s.insert(it, to);
}

bool Relation::has(int from, int to) const {
  const auto& s = succ.at(static_cast<std::size_t>(from));
  return std::binary_search(s.begin(), s.end(), to);
}

bool Relation::is_reflexive() const {
  for (std::size_t i = 0; i < succ.size(); ++i)
    if (!has(static_cast<int>(i), static_cast<int>(i))) return false;
  return true;
}

bool Relation::is_transitive() const {
  for (std::size_t a = 0; a < succ.size(); ++a)
    for (int b : succ[a])
      for (int c : succ[static_cast<std::size_t>(b)])
        if (!has(static_cast<int>(a), c)) return false;
  return true;
}

bool Relation::is_functional() const {
  return std::all_of(succ.begin(), succ.end(), [](const auto& s) { return s.size() == 1; });
}

const char* frame_name(Frame f) {
  switch (f) {
    case Frame::K: return "k";
    case Frame::T: return "t";
    case Frame::K4: return "k4";
    case Frame::S4: return "s4";
  }
  return "?";
}

Frame parse_frame(std::string_view s) {
  if (s == "k") return Frame::K;
  if (s == "t") return Frame::T;
  if (s == "k4") return Frame::K4;
  if (s == "s4") return Frame::S4;
  throw Error("unknown frame class '" + std::string(s) + "' (expected k, t, k4, or s4)");
}

bool frame_admits(Frame f, const Relation& r) {
  const bool refl = f == Frame::T || f == Frame::S4;
  const bool trans = f == Frame::K4 || f == Frame::S4;
  return (!refl || r.is_reflexive()) && (!trans || r.is_transitive());
}

Universe Universe::standard(std::size_t size) {
  Universe u;
  u.names = {"tt", "ff"};
  for (std::size_t i = 2; i < size; ++i) u.names.push_back("u" + std::to_string(i));
  return u;
}

int KripkeModel::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

void validate_universe(const Universe& u) {
  const auto n = static_cast<Value>(u.size());
  if (u.tt < 0 || u.tt >= n || u.ff < 0 || u.ff >= n) throw Error("tt/ff not in the universe");
  if (u.tt == u.ff) throw Error("tt and ff must be distinct");
}

void validate_tables(const std::map<std::string, OpTable>& ops, std::size_t n) {
  for (const auto& [name, t] : ops) {
    std::size_t expect = 1;
    for (std::size_t i = 0; i < t.arity; ++i) expect *= n;
    if (t.values.size() != expect) throw Error("operator '" + name + "' table is not total");
    for (Value v : t.values)
      if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw Error("operator '" + name + "' maps outside the universe");
  }
}

void validate_relation(const Relation& r, std::size_t states, const char* what) {
  if (r.states() != states) throw Error(std::string(what) + " has the wrong number of states");
  for (const auto& s : r.succ)
    for (int t : s)
      if (t < 0 || static_cast<std::size_t>(t) >= states)
        throw Error(std::string(what) + " mentions an unknown state");
}

}  // namespace

void KripkeModel::validate() const {
  validate_universe(universe);
  validate_tables(ops, universe.size());
  if (states.empty()) throw Error("a Kripke model needs at least one state");
  validate_relation(r, states.size(), "R");
  if (prime_r) validate_relation(*prime_r, states.size(), "primeR");
  for (const auto& [x, v] : xi)
    if (v < 0 || static_cast<std::size_t>(v) >= universe.size())
      throw Error("xi(" + x + ") outside the universe");
  for (const auto& [v, vals] : zeta) {
    if (vals.size() != states.size()) throw Error("zeta is not total for '" + v + "'");
    for (Value a : vals)
      if (a < 0 || static_cast<std::size_t>(a) >= universe.size())
        throw Error("zeta(" + v + ") outside the universe");
  }
}

void FolStructure::validate() const {
  validate_universe(universe);
  validate_tables(ops, universe.size());
  for (const auto& [x, v] : xi)
    if (v < 0 || static_cast<std::size_t>(v) >= universe.size())
      throw Error("xi(" + x + ") outside the universe");
}

void PropModel::validate() const {
  if (states.empty()) throw Error("a Kripke model needs at least one state");
  validate_relation(r, states.size(), "R");
  if (prime_r) validate_relation(*prime_r, states.size(), "primeR");
  for (const auto& [a, vals] : zeta)
    if (vals.size() != states.size()) throw Error("zeta is not total for '" + a + "'");
}

namespace {

// Rigid variable lookup: innermost binder first, then overrides, then xi.
class Bindings {
 public:
  Bindings(const std::map<std::string, Value>& xi, const std::map<std::string, Value>* extra)
      : xi_(xi), extra_(extra) {}

  void push(const std::string& x, Value v) { stack_.emplace_back(&x, v); }
  void pop() { stack_.pop_back(); }
  void set_top(Value v) { stack_.back().second = v; }

  Value lookup(const std::string& x) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      if (*it->first == x) return it->second;
    if (extra_) {
      auto it = extra_->find(x);
      if (it != extra_->end()) return it->second;
    }
    auto it = xi_.find(x);
    if (it == xi_.end()) throw EvalError("no value for rigid variable '" + x + "'");
    return it->second;
  }

 private:
  const std::map<std::string, Value>& xi_;
  const std::map<std::string, Value>* extra_;
  std::vector<std::pair<const std::string*, Value>> stack_;
};

const OpTable& find_op(const std::map<std::string, OpTable>& ops, const std::string& name) {
  auto it = ops.find(name);
  if (it == ops.end()) throw EvalError("no interpretation for operator '" + name + "'");
  return it->second;
}

class KripkeEvaluator {
 public:
  KripkeEvaluator(const KripkeModel& m, const std::map<std::string, Value>* extra)
      : m_(m), n_(m.universe.size()), env_(m.xi, extra) {}

  Value eval(int w, const Expr& e) {
    const Universe& u = m_.universe;
    switch (e.kind()) {
      case Kind::RigidVar: return env_.lookup(e.name());
      case Kind::FlexVar: {
        auto it = m_.zeta.find(e.name());
        if (it == m_.zeta.end()) throw EvalError("no value for flexible variable '" + e.name() + "'");
        return it->second.at(static_cast<std::size_t>(w));
      }
      case Kind::Op: {
        const OpTable& t = find_op(m_.ops, e.name());
        Value buf[8];
        std::vector<Value> big;
        Value* args = buf;
        if (e.arity() > 8) {
          big.resize(e.arity());
          args = big.data();
        }
        for (std::size_t i = 0; i < e.arity(); ++i) args[i] = eval(w, e.args()[i]);
        return t.at(std::span<const Value>(args, e.arity()), n_);
      }
      case Kind::Eq: return eval(w, e.arg(0)) == eval(w, e.arg(1)) ? u.tt : u.ff;
      case Kind::False: return u.ff;
      case Kind::Implies:
        return (eval(w, e.arg(0)) != u.tt || eval(w, e.arg(1)) == u.tt) ? u.tt : u.ff;
      case Kind::Forall: {
        env_.push(e.name(), 0);
        Value result = u.tt;
        for (std::size_t d = 0; d < n_; ++d) {
          env_.set_top(static_cast<Value>(d));
          if (eval(w, e.arg(0)) != u.tt) {
            result = u.ff;
            break;
          }
        }
        env_.pop();
        return result;
      }
      case Kind::Nabla: {
        for (int s : m_.r.succ[static_cast<std::size_t>(w)])
          if (eval(s, e.arg(0)) != u.tt) return u.ff;
        return u.tt;
      }
      case Kind::Prime: {
        if (!m_.prime_r) throw EvalError("prime evaluated in a model without primeR");
        const auto& succ = m_.prime_r->succ[static_cast<std::size_t>(w)];
        if (succ.size() == 1) return eval(succ.front(), e.arg(0));
        for (int s : succ)
          if (eval(s, e.arg(0)) != u.tt) return u.ff;
        return u.tt;
      }
      case Kind::Def:
        throw EvalError("defined operator '" + e.name() + "' must be expanded before evaluation");
    }
    throw InvariantError("eval: unknown node kind");
  }

 private:
  const KripkeModel& m_;
  std::size_t n_;
  Bindings env_;
};

class FolEvaluator {
 public:
  explicit FolEvaluator(const FolStructure& s) : s_(s), n_(s.universe.size()), env_(s.xi, nullptr) {}

  Value eval(const Expr& e) {
    const Universe& u = s_.universe;
    switch (e.kind()) {
      case Kind::RigidVar: return env_.lookup(e.name());
      case Kind::FlexVar: {
        auto it = s_.xi.find(e.name());
        if (it == s_.xi.end()) throw EvalError("no value for variable '" + e.name() + "'");
        return it->second;
      }
      case Kind::Op: {
        const OpTable& t = find_op(s_.ops, e.name());
        std::vector<Value> args;
        args.reserve(e.arity());
        for (const auto& a : e.args()) args.push_back(eval(a));
        return t.at(args, n_);
      }
      case Kind::Eq: return eval(e.arg(0)) == eval(e.arg(1)) ? u.tt : u.ff;
      case Kind::False: return u.ff;
      case Kind::Implies: return (eval(e.arg(0)) != u.tt || eval(e.arg(1)) == u.tt) ? u.tt : u.ff;
      case Kind::Forall: {
        env_.push(e.name(), 0);
        Value result = u.tt;
        for (std::size_t d = 0; d < n_; ++d) {
          env_.set_top(static_cast<Value>(d));
          if (eval(e.arg(0)) != u.tt) {
            result = u.ff;
            break;
          }
        }
        env_.pop();
        return result;
      }
      case Kind::Nabla:
      case Kind::Prime:
      case Kind::Def:
        throw EvalError(std::string("not a first-order expression: ") + kind_name(e.kind()));
    }
    throw InvariantError("eval_fol: unknown node kind");
  }

 private:
  const FolStructure& s_;
  std::size_t n_;
  Bindings env_;
};

bool ml_rec(const PropModel& k, int w, const Expr& e) {
  switch (e.kind()) {
    case Kind::FlexVar: {
      auto it = k.zeta.find(e.name());
      if (it == k.zeta.end()) throw EvalError("no valuation for atom '" + e.name() + "'");
      return it->second.at(static_cast<std::size_t>(w));
    }
    case Kind::False: return false;
    case Kind::Implies: return !ml_rec(k, w, e.arg(0)) || ml_rec(k, w, e.arg(1));
    case Kind::Nabla:
      for (int s : k.r.succ[static_cast<std::size_t>(w)])
        if (!ml_rec(k, s, e.arg(0))) return false;
      return true;
    case Kind::Prime:
      if (!k.prime_r) throw EvalError("prime evaluated in a model without primeR");
      for (int s : k.prime_r->succ[static_cast<std::size_t>(w)])
        if (!ml_rec(k, s, e.arg(0))) return false;
      return true;
    default:
      throw EvalError(std::string("not a propositional modal formula: ") + kind_name(e.kind()));
  }
}

}  // namespace

Value eval_expanded(const KripkeModel& m, int w, const Expr& e) {
  return KripkeEvaluator(m, nullptr).eval(w, e);
}

Value eval_expanded(const KripkeModel& m, int w, const Expr& e,
                    const std::map<std::string, Value>& extra_rigid) {
  return KripkeEvaluator(m, &extra_rigid).eval(w, e);
}

Value eval(const KripkeModel& m, int w, const Expr& e, const DefinitionEnvironment& env) {
  if (w < 0 || static_cast<std::size_t>(w) >= m.num_states()) throw EvalError("state out of range");
  if (contains_kind(e, Kind::Def)) return eval_expanded(m, w, expand_definitions(e, env));
  return eval_expanded(m, w, e);
}

bool holds(const KripkeModel& m, int w, const Expr& e, const DefinitionEnvironment& env) {
  return eval(m, w, e, env) == m.universe.tt;
}

Value eval_fol(const FolStructure& s, const Expr& e) { return FolEvaluator(s).eval(e); }

bool holds_fol(const FolStructure& s, const Expr& e) { return eval_fol(s, e) == s.universe.tt; }

bool eval_ml(const PropModel& k, int w, const Expr& e) {
  if (w < 0 || static_cast<std::size_t>(w) >= k.num_states()) throw EvalError("state out of range");
  return ml_rec(k, w, e);
}

FolStructure fol_view(const KripkeModel& m, int w) {
  FolStructure s{m.universe, m.ops, m.xi};
  for (const auto& [v, vals] : m.zeta) s.xi[v] = vals.at(static_cast<std::size_t>(w));
  return s;
}

KripkeModel as_kripke(const PropModel& k) {
  KripkeModel m;
  m.universe = Universe::standard(2);
  m.states = k.states;
  m.r = k.r;
  m.prime_r = k.prime_r;
  for (const auto& [a, vals] : k.zeta) {
    auto& z = m.zeta[a];
    for (bool b : vals) z.push_back(b ? m.universe.tt : m.universe.ff);
  }
  return m;
}

}  // namespace foml
