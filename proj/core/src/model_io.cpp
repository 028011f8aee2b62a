#include <algorithm>

#include "foml/kripke.hpp"
#include "foml/sexpr.hpp"

namespace foml {

namespace {

void print_tables(const std::map<std::string, OpTable>& ops, const Universe& u, std::string& out) {
  const std::size_t n = u.size();
  for (const auto& [name, t] : ops) {
    out += "  (op " + name;
    std::vector<std::size_t> digits(t.arity, 0);
    for (std::size_t idx = 0; idx < t.values.size(); ++idx) {
      out += " (row";
      for (std::size_t d : digits) out += " " + u.names[d];
      out += " " + u.names[static_cast<std::size_t>(t.values[idx])] + ")";
      for (std::size_t i = t.arity; i-- > 0;) {
        if (++digits[i] < n) break;
        digits[i] = 0;
      }
    }
    out += ")\n";
  }
}

void print_relation(const char* head, const Relation& r, const std::vector<std::string>& states,
                    std::string& out) {
  out += std::string("  (") + head;
  for (std::size_t a = 0; a < r.succ.size(); ++a)
    for (int b : r.succ[a]) out += " (" + states[a] + " " + states[static_cast<std::size_t>(b)] + ")";
  out += ")";
}

}  // namespace

std::string print_model(const KripkeModel& m) {
  const Universe& u = m.universe;
  std::string out = "(model\n  (universe";
  for (const auto& v : u.names) out += " " + v;
  out += ")\n";
  out += "  (tt " + u.names[static_cast<std::size_t>(u.tt)] + ")\n";
  out += "  (ff " + u.names[static_cast<std::size_t>(u.ff)] + ")\n";
  print_tables(m.ops, u, out);
  out += "  (xi";
  for (const auto& [x, v] : m.xi) out += " (" + x + " " + u.names[static_cast<std::size_t>(v)] + ")";
  out += ")\n  (states";
  for (const auto& s : m.states) out += " " + s;
  out += ")\n";
  print_relation("R", m.r, m.states, out);
  out += "\n  (zeta";
  for (const auto& [v, vals] : m.zeta)
    for (std::size_t s = 0; s < vals.size(); ++s)
      out += " (" + v + " " + m.states[s] + " " + u.names[static_cast<std::size_t>(vals[s])] + ")";
  out += ")";
  if (m.prime_r) {
    out += "\n";
    print_relation("primeR", *m.prime_r, m.states, out);
  }
  out += ")\n";
  return out;
}

std::string print_fol_structure(const FolStructure& s) {
  const Universe& u = s.universe;
  std::string out = "(structure\n  (universe";
  for (const auto& v : u.names) out += " " + v;
  out += ")\n";
  out += "  (tt " + u.names[static_cast<std::size_t>(u.tt)] + ")\n";
  out += "  (ff " + u.names[static_cast<std::size_t>(u.ff)] + ")\n";
  print_tables(s.ops, u, out);
  out += "  (xi";
  for (const auto& [x, v] : s.xi) out += " (" + x + " " + u.names[static_cast<std::size_t>(v)] + ")";
  out += ")\n";
  return out;
}

namespace {

using Code = ParseError::Code;

int index_of(const std::vector<std::string>& names, const SExpr& s, const char* what) {
  if (!s.is_atom()) s.fail(std::string("expected a ") + what);
  auto it = std::find(names.begin(), names.end(), s.atom);
  if (it == names.end()) s.fail(std::string("unknown ") + what + " '" + s.atom + "'", Code::UnknownSymbol);
  return static_cast<int>(it - names.begin());
}

std::vector<std::string> atom_list(const SExpr& form, const char* what) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < form.items.size(); ++i) {
    const SExpr& s = form.items[i];
    if (!s.is_atom()) s.fail(std::string("expected a ") + what + " name");
    if (std::find(out.begin(), out.end(), s.atom) != out.end())
      s.fail(std::string("duplicate ") + what + " '" + s.atom + "'");
    out.push_back(s.atom);
  }
  return out;
}

Relation parse_relation(const SExpr& form, const std::vector<std::string>& states) {
  Relation r(states.size());
  for (std::size_t i = 1; i < form.items.size(); ++i) {
    const SExpr& p = form.items[i];
    if (!p.is_list || p.items.size() != 2) p.fail("expected a state pair (s t)");
    r.add(index_of(states, p.items[0], "state"), index_of(states, p.items[1], "state"));
  }
  return r;
}

}  // namespace

KripkeModel parse_model(std::string_view text) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1 || forms[0].head() != "model")
    throw ParseError(Code::Syntax, 1, 1, "expected a single (model ...) form");
  const SExpr& model = forms[0];

  std::map<std::string, const SExpr*, std::less<>> clause;
  std::vector<const SExpr*> op_clauses;
  for (std::size_t i = 1; i < model.items.size(); ++i) {
    const SExpr& c = model.items[i];
    std::string head(c.head());
    if (head.empty()) c.fail("expected a model clause");
    if (head == "op") {
      op_clauses.push_back(&c);
    } else if (head == "universe" || head == "tt" || head == "ff" || head == "xi" ||
               head == "states" || head == "R" || head == "zeta" || head == "primeR") {
      if (!clause.emplace(head, &c).second) c.fail("duplicate clause '" + head + "'");
    } else {
      c.fail("unknown model clause '" + head + "'");
    }
  }
  for (const char* required : {"universe", "tt", "ff", "states"})
    if (!clause.contains(required))
      model.fail(std::string("model is missing the (") + required + " ...) clause");

  KripkeModel m;
  m.universe.names = atom_list(*clause["universe"], "value");
  for (const char* which : {"tt", "ff"}) {
    const SExpr& c = *clause[which];
    if (c.items.size() != 2) c.fail(std::string("usage: (") + which + " value)");
    int v = index_of(m.universe.names, c.items[1], "value");
    (std::string_view(which) == "tt" ? m.universe.tt : m.universe.ff) = v;
  }
  m.states = atom_list(*clause["states"], "state");
  const std::size_t n = m.universe.size();

  for (const SExpr* c : op_clauses) {
    if (c->items.size() < 2 || !c->items[1].is_atom()) c->fail("usage: (op name (row ...) ...)");
    const std::string& name = c->items[1].atom;
    if (m.ops.contains(name)) c->fail("duplicate operator '" + name + "'");
    if (c->items.size() < 3) c->fail("operator '" + name + "' has no rows");
    if (c->items[2].head() != "row" || c->items[2].items.size() < 2) c->items[2].fail("malformed row");
    const std::size_t arity = c->items[2].items.size() - 2;
    OpTable t{arity, {}};
    std::size_t total = 1;
    for (std::size_t i = 0; i < arity; ++i) total *= n;
    t.values.assign(total, -1);
    for (std::size_t i = 2; i < c->items.size(); ++i) {
      const SExpr& row = c->items[i];
      if (row.head() != "row" || row.items.size() != arity + 2) row.fail("malformed row");
      std::size_t idx = 0;
      for (std::size_t k = 0; k < arity; ++k)
        idx = idx * n + static_cast<std::size_t>(index_of(m.universe.names, row.items[k + 1], "value"));
      if (t.values[idx] != -1) row.fail("duplicate row");
      t.values[idx] = index_of(m.universe.names, row.items[arity + 1], "value");
    }
    if (std::find(t.values.begin(), t.values.end(), -1) != t.values.end())
      c->fail("operator '" + name + "' table is not total");
    m.ops.emplace(name, std::move(t));
  }

  if (auto it = clause.find("xi"); it != clause.end()) {
    for (std::size_t i = 1; i < it->second->items.size(); ++i) {
      const SExpr& p = it->second->items[i];
      if (!p.is_list || p.items.size() != 2 || !p.items[0].is_atom()) p.fail("expected (x value)");
      if (!m.xi.emplace(p.items[0].atom, index_of(m.universe.names, p.items[1], "value")).second)
        p.fail("duplicate xi entry");
    }
  }
  m.r = clause.contains("R") ? parse_relation(*clause["R"], m.states) : Relation(m.states.size());
  if (auto it = clause.find("primeR"); it != clause.end())
    m.prime_r = parse_relation(*it->second, m.states);
  if (auto it = clause.find("zeta"); it != clause.end()) {
    for (std::size_t i = 1; i < it->second->items.size(); ++i) {
      const SExpr& p = it->second->items[i];
      if (!p.is_list || p.items.size() != 3 || !p.items[0].is_atom()) p.fail("expected (v state value)");
      auto& vals = m.zeta[p.items[0].atom];
      if (vals.empty()) vals.assign(m.states.size(), -1);
      auto s = static_cast<std::size_t>(index_of(m.states, p.items[1], "state"));
      if (vals[s] != -1) p.fail("duplicate zeta entry");
      vals[s] = index_of(m.universe.names, p.items[2], "value");
    }
    for (const auto& [v, vals] : m.zeta)
      if (std::find(vals.begin(), vals.end(), -1) != vals.end())
        it->second->fail("zeta is not total for '" + v + "'");
  }
  try {
    m.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    model.fail(e.what(), Code::Semantic);
  }
  return m;
}

}  // namespace foml
