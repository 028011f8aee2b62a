#include "foml/emitters.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <sys/wait.h>

#include "foml/search.hpp"
#include "foml/sexpr.hpp"

namespace foml {

namespace {

// Free symbols of a first-order sequent in a stable order.
struct FolSymbols {
  std::map<std::string, std::size_t> ops;
  std::vector<std::string> constants;  // free rigid and flexible variables
};

FolSymbols collect_symbols(const FolSequent& s) {
  Signature sig;
  for (const auto& h : s.hypotheses) sig.add(h);
  sig.add(s.goal);
  if (sig.uses_nabla || sig.uses_prime) throw Error("emitters: the sequent is not first-order");
  FolSymbols out{sig.ops, sig.rigid_vars};
  out.constants.insert(out.constants.end(), sig.flex_vars.begin(), sig.flex_vars.end());
  return out;
}

// Injective renaming of source names into a target syntax.
class NameMap {
 public:
  NameMap(std::function<std::string(const std::string&)> base, std::function<bool(const std::string&)> reserved)
      : base_(std::move(base)), reserved_(std::move(reserved)) {}

  const std::string& operator()(const std::string& name) {
    auto it = map_.find(name);
    if (it != map_.end()) return it->second;
    const std::string b = base_(name);
    std::string n = b;
    for (int k = 1; reserved_(n) || used_.contains(n); ++k) n = b + "_" + std::to_string(k);
    used_.insert(n);
    return map_.emplace(name, n).first->second;
  }

 private:
  std::function<std::string(const std::string&)> base_;
  std::function<bool(const std::string&)> reserved_;
  std::map<std::string, std::string> map_;
  std::set<std::string> used_;
};

std::string comment_block(const SymbolTable* table, const char* prefix) {
  if (!table || table->size() == 0) return {};
  std::string out;
  for (const auto& s : table->entries()) out += std::string(prefix) + " " + s.name + " := " + s.display + "\n";
  return out;
}

// ---------------------------------------------------------------- SMT-LIB

bool smt_simple_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

bool smt_reserved(const std::string& s) {
  static const std::set<std::string> words = {
      "tt", "ff", "U", "not", "and", "or", "xor", "=>", "=", "ite", "forall", "exists", "let", "true", "false",
      "distinct", "par", "_", "!", "as", "match", "NUMERAL", "DECIMAL", "STRING", "BINARY", "HEXADECIMAL",
      "Bool"};
  if (words.contains(s)) return true;
  return s.rfind("b!", 0) == 0;  // bound-variable namespace
}

class SmtWriter {
 public:
  SmtWriter()
      : names_(
            [](const std::string& n) {
              std::string out;
              for (char c : n) out += (c == '|' || c == '\\') ? '_' : c;
              return out.rfind("b!", 0) == 0 ? "u" + out : out;
            },
            smt_reserved) {}

  std::string sym(const std::string& name) {
    const std::string& n = names_(name);
    const bool simple = !n.empty() && !std::isdigit(static_cast<unsigned char>(n[0])) &&
                        std::all_of(n.begin(), n.end(), smt_simple_char);
    return simple ? n : "|" + n + "|";
  }

  std::string term(const Expr& e) {
    switch (e.kind()) {
      case Kind::RigidVar:
        if (auto b = bound(e.name())) return *b;
        return sym(e.name());
      case Kind::FlexVar: return sym(e.name());
      case Kind::Op: {
        if (e.arity() == 0) return sym(e.name());
        std::string out = "(" + sym(e.name());
        for (const auto& a : e.args()) out += " " + term(a);
        return out + ")";
      }
      case Kind::False: return "ff";
      case Kind::Eq:
      case Kind::Implies:
      case Kind::Forall: return "(ite " + formula(e) + " tt ff)";
      default: throw Error(std::string("emit_smt: unexpected ") + kind_name(e.kind()));
    }
  }

  std::string formula(const Expr& e) {
    switch (e.kind()) {
      case Kind::Eq: return "(= " + term(e.arg(0)) + " " + term(e.arg(1)) + ")";
      case Kind::False: return "false";
      case Kind::Implies: return "(=> " + formula(e.arg(0)) + " " + formula(e.arg(1)) + ")";
      case Kind::Forall: {
        const std::string v = "b!" + std::to_string(scope_.size());
        scope_.emplace_back(e.name(), v);
        std::string body = formula(e.arg(0));
        scope_.pop_back();
        return "(forall ((" + v + " U)) " + body + ")";
      }
      default: return "(= " + term(e) + " tt)";
    }
  }

 private:
  std::optional<std::string> bound(const std::string& x) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == x) return it->second;
    return std::nullopt;
  }

  NameMap names_;
  std::vector<std::pair<std::string, std::string>> scope_;
};

// ------------------------------------------------------------------- TPTP

bool tptp_reserved(const std::string& s) {
  return s == "tt" || s == "ff" || s.rfind("bool_", 0) == 0;
}

std::string tptp_base(const std::string& n) {
  std::string out;
  for (char c : n) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  if (out.empty() || !std::islower(static_cast<unsigned char>(out[0])) || out.rfind("bool_", 0) == 0)
    out = "n_" + out;
  return out;
}

class TptpWriter {
 public:
  TptpWriter() : names_(tptp_base, tptp_reserved) {}

  std::string sym(const std::string& name) { return names_(name); }

  std::string term(const Expr& e) {
    switch (e.kind()) {
      case Kind::RigidVar:
        if (auto b = bound(e.name())) return *b;
        return sym(e.name());
      case Kind::FlexVar: return sym(e.name());
      case Kind::Op: {
        if (e.arity() == 0) return sym(e.name());
        std::string out = sym(e.name()) + "(";
        for (std::size_t i = 0; i < e.arity(); ++i) out += (i ? "," : "") + term(e.arg(i));
        return out + ")";
      }
      case Kind::False: return "ff";
      case Kind::Eq:
      case Kind::Implies:
      case Kind::Forall: return define(e);
      default: throw Error(std::string("emit_tptp: unexpected ") + kind_name(e.kind()));
    }
  }

  std::string formula(const Expr& e) {
    switch (e.kind()) {
      case Kind::Eq: return "(" + term(e.arg(0)) + " = " + term(e.arg(1)) + ")";
      case Kind::False: return "$false";
      case Kind::Implies: return "(" + formula(e.arg(0)) + " => " + formula(e.arg(1)) + ")";
      case Kind::Forall: {
        const std::string v = "X" + std::to_string(scope_.size());
        scope_.emplace_back(e.name(), v);
        std::string body = formula(e.arg(0));
        scope_.pop_back();
        return "(! [" + v + "] : " + body + ")";
      }
      default: return "(" + term(e) + " = tt)";
    }
  }

  const std::vector<std::string>& definitions() const { return defs_; }

 private:
  std::optional<std::string> bound(const std::string& x) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == x) return it->second;
    return std::nullopt;
  }

  // A fresh function b(X..) over the bound variables in scope that occur in
  // e, characterised by an axiom, standing for e in term position.
  std::string define(const Expr& e) {
    std::vector<std::string> args;
    for (const auto& [src, v] : scope_)
      if (occurs_free(e, src) && bound(src) == v && std::find(args.begin(), args.end(), v) == args.end())
        args.push_back(v);
    const std::string f = formula(e);
    std::string app = "bool_" + std::to_string(defs_.size());
    if (!args.empty()) {
      app += "(";
      for (std::size_t i = 0; i < args.size(); ++i) app += (i ? "," : "") + args[i];
      app += ")";
    }
    std::string body = "((" + f + " => " + app + " = tt) & (~" + f + " => " + app + " = ff))";
    if (!args.empty()) {
      std::string vars;
      for (std::size_t i = 0; i < args.size(); ++i) vars += (i ? "," : "") + args[i];
      body = "(! [" + vars + "] : " + body + ")";
    }
    defs_.push_back("fof(def_bool_" + std::to_string(defs_.size()) + ", axiom, " + body + ").");
    return app;
  }

  NameMap names_;
  std::vector<std::pair<std::string, std::string>> scope_;
  std::vector<std::string> defs_;
};

// ------------------------------------------------------------------- ML

const std::set<std::string, std::less<>>& ml_keywords() {
  static const std::set<std::string, std::less<>> k = {"false", "true", "=>", "not", "and", "or", "iff", "forall",
                                                       "exists", "nabla", "delta", "prime", "="};
  return k;
}

Expr parse_ml(const SExpr& s) {
  if (s.is_atom()) {
    if (s.atom == "false") return Expr::falsum();
    if (ml_keywords().contains(s.atom)) s.fail("'" + s.atom + "' is not an ML formula");
    return Expr::flex(s.atom);
  }
  const std::string_view head = s.head();
  if (head == "=>" && s.items.size() == 3) {
    Expr lhs = parse_ml(s.items[1]);
    return Expr::implies(std::move(lhs), parse_ml(s.items[2]));
  }
  if (head == "nabla" && s.items.size() == 2) return Expr::nabla(parse_ml(s.items[1]));
  if (head == "prime" && s.items.size() == 2) return Expr::prime(parse_ml(s.items[1]));
  s.fail("expected an atom, false, (=> a b), (nabla a), or (prime a)");
}

Frame parse_frame_clause(const SExpr& c) {
  if (c.items.size() != 2 || !c.items[1].is_atom()) c.fail("usage: (" + std::string(c.head()) + " k|t|k4|s4)");
  try {
    return parse_frame(c.items[1].atom);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    c.items[1].fail(e.what());
  }
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

}  // namespace

std::string emit_smt(const FolSequent& s, const SymbolTable* table) {
  const FolSymbols syms = collect_symbols(s);
  SmtWriter w;
  std::string out = comment_block(table, ";");
  out += "(set-logic UF)\n(declare-sort U 0)\n(declare-const tt U)\n(declare-const ff U)\n";
  out += "(assert (distinct tt ff))\n";
  for (const auto& [name, arity] : syms.ops) {
    if (arity == 0) {
      out += "(declare-const " + w.sym(name) + " U)\n";
    } else {
      out += "(declare-fun " + w.sym(name) + " (";
      for (std::size_t i = 0; i < arity; ++i) out += i ? " U" : "U";
      out += ") U)\n";
    }
  }
  for (const auto& c : syms.constants) out += "(declare-const " + w.sym(c) + " U)\n";
  for (const auto& h : s.hypotheses) out += "(assert " + w.formula(h) + ")\n";
  out += "(assert (not " + w.formula(s.goal) + "))\n(check-sat)\n";
  return out;
}

std::string emit_tptp(const FolSequent& s, const SymbolTable* table) {
  const FolSymbols syms = collect_symbols(s);
  TptpWriter w;
  for (const auto& [name, arity] : syms.ops) w.sym(name);
  for (const auto& c : syms.constants) w.sym(c);
  std::vector<std::string> hyps;
  for (const auto& h : s.hypotheses) hyps.push_back(w.formula(h));
  const std::string goal = w.formula(s.goal);

  std::string out = comment_block(table, "%");
  out += "fof(tt_ne_ff, axiom, tt != ff).\n";
  for (const auto& d : w.definitions()) out += d + "\n";
  for (std::size_t i = 0; i < hyps.size(); ++i)
    out += "fof(hyp_" + std::to_string(i + 1) + ", axiom, " + hyps[i] + ").\n";
  out += "fof(goal, conjecture, " + goal + ").\n";
  return out;
}

std::string emit_ml(const MLSequent& s) {
  check_ml_formula(s.goal);
  std::string out = "(ml-sequent\n  (frame ";
  out += frame_name(s.frame);
  out += ")\n  (prime-frame ";
  out += frame_name(s.prime_frame);
  out += ")\n  (global-hypotheses";
  for (const auto& h : s.hypotheses) {
    check_ml_formula(h);
    out += "\n    " + to_core_string(h);
  }
  out += ")\n  (goal " + to_core_string(s.goal) + "))\n";
  return out;
}

MLSequent parse_ml_sequent(std::string_view text) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1 || forms[0].head() != "ml-sequent")
    throw ParseError(ParseError::Code::Syntax, 1, 1, "expected a single (ml-sequent ...) form");
  const SExpr& root = forms[0];
  MLSequent s;
  bool seen[4] = {false, false, false, false};
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& c = root.items[i];
    const std::string_view head = c.head();
    int slot = head == "frame" ? 0 : head == "prime-frame" ? 1 : head == "global-hypotheses" ? 2 : head == "goal" ? 3 : -1;
    if (slot < 0) c.fail("unknown ml-sequent clause");
    if (seen[slot]) c.fail("duplicate clause '" + std::string(head) + "'");
    seen[slot] = true;
    switch (slot) {
      case 0: s.frame = parse_frame_clause(c); break;
      case 1: s.prime_frame = parse_frame_clause(c); break;
      case 2:
        for (std::size_t k = 1; k < c.items.size(); ++k) s.hypotheses.push_back(parse_ml(c.items[k]));
        break;
      case 3:
        if (c.items.size() != 2) c.fail("usage: (goal formula)");
        s.goal = parse_ml(c.items[1]);
        break;
    }
  }
  if (!seen[3]) root.fail("ml-sequent is missing (goal ...)");
  return s;
}

const char* solver_answer_name(SolverAnswer a) {
  switch (a) {
    case SolverAnswer::Valid: return "valid";
    case SolverAnswer::Invalid: return "invalid";
    case SolverAnswer::Unknown: return "unknown";
  }
  return "?";
}

std::optional<SolverAnswer> run_solver(const std::string& solver, const std::string& script, bool tptp,
                                       int timeout_seconds) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::path dir = fs::temp_directory_path(ec);
  if (ec) return std::nullopt;
  const fs::path file = dir / ("foml-" + std::to_string(fnv1a(script)) + (tptp ? ".p" : ".smt2"));
  {
    std::ofstream f(file);
    if (!f) return std::nullopt;
    f << script;
  }
  const std::string cmd = "timeout " + std::to_string(timeout_seconds) + " " + shell_quote(solver) + " " +
                          shell_quote(file.string()) + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return std::nullopt;
  std::string output;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), p)) output += buf.data();
  const int status = pclose(p);
  fs::remove(file, ec);
  if (status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 127) return std::nullopt;

  auto has_line = [&](std::string_view want) {
    std::size_t pos = 0;
    while (pos <= output.size()) {
      std::size_t end = output.find('\n', pos);
      if (end == std::string::npos) end = output.size();
      std::string_view line(output.data() + pos, end - pos);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
      if (line == want) return true;
      pos = end + 1;
    }
    return false;
  };
  if (tptp) {
    if (output.find("SZS status Theorem") != std::string::npos) return SolverAnswer::Valid;
    if (output.find("SZS status CounterSatisfiable") != std::string::npos) return SolverAnswer::Invalid;
    return SolverAnswer::Unknown;
  }
  if (has_line("unsat")) return SolverAnswer::Valid;
  if (has_line("sat")) return SolverAnswer::Invalid;
  return SolverAnswer::Unknown;
}

}  // namespace foml
