#include "foml/expr.hpp"

namespace foml {

namespace {

bool is_false(const Expr& e) { return e.is(Kind::False); }

// e == (a => FALSE)
const Expr* negated(const Expr& e) {
  if (e.is(Kind::Implies) && is_false(e.arg(1))) return &e.arg(0);
  return nullptr;
}

void print_core(const Expr& e, std::string& out);
void print_sugar(const Expr& e, std::string& out);

void print_app(const char* head, const Expr& e, bool sugar, std::string& out) {
  out += '(';
  out += head;
  for (const auto& a : e.args()) {
    out += ' ';
    sugar ? print_sugar(a, out) : print_core(a, out);
  }
  out += ')';
}

void print_leaf_or_app(const Expr& e, bool sugar, std::string& out) {
  switch (e.kind()) {
    case Kind::RigidVar:
    case Kind::FlexVar:
      out += e.name();
      return;
    case Kind::Op:
    case Kind::Def:
      if (e.arity() == 0) {
        out += e.name();
      } else {
        print_app(e.name().c_str(), e, sugar, out);
      }
      return;
    case Kind::Eq: print_app("=", e, sugar, out); return;
    case Kind::False: out += "false"; return;
    case Kind::Implies: print_app("=>", e, sugar, out); return;
    case Kind::Nabla: print_app("nabla", e, sugar, out); return;
    case Kind::Prime: print_app("prime", e, sugar, out); return;
    case Kind::Forall:
      out += "(forall ";
      out += e.name();
      out += ' ';
      sugar ? print_sugar(e.arg(0), out) : print_core(e.arg(0), out);
      out += ')';
      return;
  }
}

void print_core(const Expr& e, std::string& out) { print_leaf_or_app(e, false, out); }

void print_pair(const char* head, const Expr& a, const Expr& b, std::string& out) {
  out += '(';
  out += head;
  out += ' ';
  print_sugar(a, out);
  out += ' ';
  print_sugar(b, out);
  out += ')';
}

// not e prints as and, exists, or delta.
bool prints_as_connective(const Expr& e) {
  if (e.is(Kind::Implies)) return negated(e.arg(1)) != nullptr;
  if (e.is(Kind::Forall) || e.is(Kind::Nabla)) return negated(e.arg(0)) != nullptr;
  return false;
}

void print_sugar(const Expr& e, std::string& out) {
  if (!e.is(Kind::Implies)) {
    print_leaf_or_app(e, true, out);
    return;
  }
  const Expr& lhs = e.arg(0);
  const Expr& rhs = e.arg(1);
  if (is_false(lhs) && is_false(rhs)) {
    out += "true";
    return;
  }
  if (is_false(rhs)) {
    // not (a => not b) is (and a b); (and (=> a b) (=> b a)) is (iff a b).
    if (lhs.is(Kind::Implies)) {
      if (const Expr* b = negated(lhs.arg(1))) {
        const Expr& a = lhs.arg(0);
        if (a.is(Kind::Implies) && b->is(Kind::Implies) && a.arg(0) == b->arg(1) &&
            a.arg(1) == b->arg(0)) {
          print_pair("iff", a.arg(0), a.arg(1), out);
          return;
        }
        print_pair("and", a, *b, out);
        return;
      }
    }
    if (lhs.is(Kind::Forall)) {
      if (const Expr* body = negated(lhs.arg(0))) {
        out += "(exists ";
        out += lhs.name();
        out += ' ';
        print_sugar(*body, out);
        out += ')';
        return;
      }
    }
    if (lhs.is(Kind::Nabla)) {
      if (const Expr* body = negated(lhs.arg(0))) {
        out += "(delta ";
        print_sugar(*body, out);
        out += ')';
        return;
      }
    }
    out += "(not ";
    print_sugar(lhs, out);
    out += ')';
    return;
  }
  if (const Expr* a = negated(lhs); a && !prints_as_connective(*a)) {
    print_pair("or", *a, rhs, out);
    return;
  }
  print_pair("=>", lhs, rhs, out);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_sugar(e, out);
  return out;
}

std::string to_core_string(const Expr& e) {
  std::string out;
  print_core(e, out);
  return out;
}

}  // namespace foml
