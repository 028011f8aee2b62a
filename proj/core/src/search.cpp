#include "foml/search.hpp"

#include <algorithm>

namespace foml {

void Signature::add(const Expr& e) {
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    switch (n.kind()) {
      case Kind::Op: ops.emplace(n.name(), n.arity()); break;
      case Kind::FlexVar:
        if (std::find(flex_vars.begin(), flex_vars.end(), n.name()) == flex_vars.end())
          flex_vars.push_back(n.name());
        break;
      case Kind::Nabla: uses_nabla = true; break;
      case Kind::Prime: uses_prime = true; break;
      case Kind::Def: throw InvariantError("Signature::add: expression not expanded");
      default: break;
    }
    for (const auto& a : n.args()) walk(a);
  };
  walk(e);
  for (const auto& x : free_rigid_vars(e))
    if (std::find(rigid_vars.begin(), rigid_vars.end(), x) == rigid_vars.end())
      rigid_vars.push_back(x);
}

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<Relation> all_relations(std::size_t s, Frame frame) {
  std::vector<Relation> out;
  const std::size_t bits = s * s;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
    Relation r(s);
    for (std::size_t b = 0; b < bits; ++b)
      if (mask & (std::size_t{1} << b)) r.add(static_cast<int>(b / s), static_cast<int>(b % s));
    if (frame_admits(frame, r)) out.push_back(std::move(r));
  }
  return out;
}

std::vector<Relation> functional_relations(std::size_t s) {
  std::vector<Relation> out;
  const std::size_t total = ipow(s, s);
  for (std::size_t code = 0; code < total; ++code) {
    Relation r(s);
    std::size_t c = code;
    for (std::size_t st = 0; st < s; ++st) {
      r.add(static_cast<int>(st), static_cast<int>(c % s));
      c /= s;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Mixed-radix counter; returns false after wrapping around.
bool increment(std::vector<std::size_t>& digits, const std::vector<std::size_t>& bases) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < bases[i]) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::optional<std::uint64_t> for_each_kripke_model(
    const Signature& sig, const SearchBounds& bounds,
    const std::function<bool(const KripkeModel&)>& visit) {
  std::uint64_t visited = 0;
  for (std::size_t n = 2; n <= std::max<std::size_t>(2, bounds.max_universe); ++n) {
    for (std::size_t s = 1; s <= bounds.max_states; ++s) {
      const std::vector<Relation> rels =
          sig.uses_nabla ? all_relations(s, bounds.frame) : std::vector<Relation>{Relation(s)};
      std::vector<Relation> prels;
      if (sig.uses_prime)
        prels = bounds.functional_prime ? functional_relations(s) : all_relations(s, Frame::K);
      if (rels.empty()) continue;

      KripkeModel m;
      m.universe = Universe::standard(n);
      for (std::size_t i = 0; i < s; ++i) m.states.push_back("s" + std::to_string(i));
      std::vector<std::size_t> bases;
      for (const auto& [name, arity] : sig.ops) {
        m.ops[name] = OpTable{arity, std::vector<Value>(ipow(n, arity), 0)};
        bases.insert(bases.end(), ipow(n, arity), n);
      }
      for (const auto& x : sig.rigid_vars) {
        m.xi[x] = 0;
        bases.push_back(n);
      }
      for (const auto& v : sig.flex_vars) {
        m.zeta[v].assign(s, 0);
        bases.insert(bases.end(), s, n);
      }
      bases.push_back(rels.size());
      if (sig.uses_prime) bases.push_back(prels.size());

      std::vector<std::size_t> digits(bases.size(), 0);
      do {
        if (visited >= bounds.max_models) return std::nullopt;
        std::size_t d = 0;
        for (auto& [name, t] : m.ops)
          for (auto& v : t.values) v = static_cast<Value>(digits[d++]);
        for (auto& [x, v] : m.xi) v = static_cast<Value>(digits[d++]);
        for (auto& [v, vals] : m.zeta)
          for (auto& a : vals) a = static_cast<Value>(digits[d++]);
        m.r = rels[digits[d++]];
        if (sig.uses_prime) {
          m.prime_r = prels[digits[d++]];
        } else {
          m.prime_r.reset();
        }
        ++visited;
        if (!visit(m)) return visited;
      } while (increment(digits, bases));
    }
  }
  return visited;
}

std::optional<std::uint64_t> for_each_fol_structure(
    const Signature& sig, std::size_t max_universe, std::uint64_t max_models,
    const std::function<bool(const FolStructure&)>& visit) {
  std::uint64_t visited = 0;
  for (std::size_t n = 2; n <= std::max<std::size_t>(2, max_universe); ++n) {
    FolStructure st;
    st.universe = Universe::standard(n);
    std::vector<std::size_t> bases;
    for (const auto& [name, arity] : sig.ops) {
      st.ops[name] = OpTable{arity, std::vector<Value>(ipow(n, arity), 0)};
      bases.insert(bases.end(), ipow(n, arity), n);
    }
    for (const auto& x : sig.rigid_vars) st.xi[x] = 0;
    for (const auto& v : sig.flex_vars) st.xi[v] = 0;
    bases.insert(bases.end(), st.xi.size(), n);

    std::vector<std::size_t> digits(bases.size(), 0);
    do {
      if (visited >= max_models) return std::nullopt;
      std::size_t d = 0;
      for (auto& [name, t] : st.ops)
        for (auto& v : t.values) v = static_cast<Value>(digits[d++]);
      for (auto& [x, v] : st.xi) v = static_cast<Value>(digits[d++]);
      ++visited;
      if (!visit(st)) return visited;
    } while (increment(digits, bases));
  }
  return visited;
}

KripkeSearchResult find_countermodel(const Obligation& ob, const SearchBounds& bounds) {
  if (bounds.max_universe < 1 || bounds.max_states < 1)
    throw Error("find_countermodel: bounds must be at least 1");
  std::vector<Expr> hyps;
  for (const auto& h : ob.hypotheses) hyps.push_back(expand_definitions(h, ob.env));
  const Expr goal = expand_definitions(ob.goal, ob.env);
  Signature sig;
  for (const auto& h : hyps) sig.add(h);
  sig.add(goal);

  KripkeSearchResult result;
  auto visited = for_each_kripke_model(sig, bounds, [&](const KripkeModel& m) {
    const Value tt = m.universe.tt;
    const int states = static_cast<int>(m.num_states());
    for (const auto& h : hyps)
      for (int w = 0; w < states; ++w)
        if (eval_expanded(m, w, h) != tt) return true;
    for (int w = 0; w < states; ++w) {
      if (eval_expanded(m, w, goal) != tt) {
        result.status = SearchStatus::Found;
        result.model = m;
        result.state = w;
        return false;
      }
    }
    return true;
  });
  if (result.status == SearchStatus::Found) {
    result.models_checked = visited.value_or(bounds.max_models);
    return result;
  }
  result.status = visited ? SearchStatus::NoneWithinBounds : SearchStatus::ResourceOut;
  result.models_checked = visited.value_or(bounds.max_models);
  return result;
}

FolSearchResult find_fol_countermodel(const std::vector<Expr>& hypotheses, const Expr& goal,
                                      std::size_t max_universe, std::uint64_t max_models) {
  Signature sig;
  for (const auto& h : hypotheses) sig.add(h);
  sig.add(goal);
  if (sig.uses_nabla || sig.uses_prime)
    throw Error("find_fol_countermodel: input is not first-order");

  FolSearchResult result;
  auto visited = for_each_fol_structure(sig, max_universe, max_models, [&](const FolStructure& s) {
    for (const auto& h : hypotheses)
      if (!holds_fol(s, h)) return true;
    if (holds_fol(s, goal)) return true;
    result.status = SearchStatus::Found;
    result.structure = s;
    return false;
  });
  result.models_checked = visited.value_or(max_models);
  if (result.status != SearchStatus::Found)
    result.status = visited ? SearchStatus::NoneWithinBounds : SearchStatus::ResourceOut;
  return result;
}

}  // namespace foml
