#include "foml/modal_prover.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

namespace foml {

void check_ml_formula(const Expr& e) {
  switch (e.kind()) {
    case Kind::FlexVar:
    case Kind::False: return;
    case Kind::Implies:
    case Kind::Nabla:
    case Kind::Prime:
      for (const auto& a : e.args()) check_ml_formula(a);
      return;
    default:
      throw Error(std::string("not a propositional modal formula: ") + kind_name(e.kind()) + " in " +
                  to_string(e));
  }
}

const char* status_name(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Proved: return "proved";
    case Verdict::Status::Countermodel: return "countermodel";
    case Verdict::Status::ResourceOut: return "resource-out";
  }
  return "?";
}

namespace {

struct ResourceOut {};

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { w_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1U; }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool empty() const { return w_.empty(); }
  auto operator<=>(const Bits&) const = default;

 private:
  std::vector<std::uint64_t> w_;
};

// Formula ids; signed literal T(id) = 2*id, F(id) = 2*id + 1.
struct Formula {
  Kind kind = Kind::False;
  int a = -1;
  int b = -1;
  std::string atom;
};

constexpr int modality_of(Kind k) { return k == Kind::Nabla ? 0 : 1; }

class Tableau {
 public:
  Tableau(const MLSequent& s, std::uint64_t limit) : limit_(limit) {
    refl_[0] = s.frame == Frame::T || s.frame == Frame::S4;
    trans_[0] = s.frame == Frame::K4 || s.frame == Frame::S4;
    refl_[1] = s.prime_frame == Frame::T || s.prime_frame == Frame::S4;
    trans_[1] = s.prime_frame == Frame::K4 || s.prime_frame == Frame::S4;
    for (const auto& h : s.hypotheses) hyps_.push_back(intern(h));
    goal_ = intern(s.goal);
    bits_ = 2 * forms_.size();
  }

  std::size_t bits() const { return bits_; }

  Bits initial_root() const {
    Bits b = hyp_bits();
    b.set(F(goal_));
    return b;
  }

  // Empty when `l` is satisfiable; otherwise an unsatisfiable subset of `l`.
  std::optional<Bits> expand(const Bits& l) {
    if (++steps_ > limit_) throw ResourceOut{};
    if (auto it = unsat_.find(l); it != unsat_.end()) return it->second;
    std::optional<Bits> core = expand_uncached(l);
    if (core) unsat_.emplace(l, *core);
    return core;
  }

  PropModel model(bool uses_prime) const {
    PropModel k;
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) k.states.push_back("w" + std::to_string(i));
    Relation rel[2] = {Relation(n), Relation(n)};
    for (std::size_t i = 0; i < n; ++i)
      for (auto [m, t] : nodes_[i].edges) rel[m].add(static_cast<int>(i), t);
    for (int m = 0; m < 2; ++m) {
      if (refl_[m])
        for (std::size_t i = 0; i < n; ++i) rel[m].add(static_cast<int>(i), static_cast<int>(i));
      if (trans_[m]) close_transitively(rel[m]);
    }
    k.r = rel[0];
    if (uses_prime) k.prime_r = rel[1];
    for (std::size_t id = 0; id < forms_.size(); ++id) {
      if (forms_[id].kind != Kind::FlexVar) continue;
      auto& z = k.zeta[forms_[id].atom];
      for (const auto& node : nodes_) z.push_back(node.label.test(T(static_cast<int>(id))));
    }
    return k;
  }

  std::uint64_t steps() const { return steps_; }

 private:
  static std::size_t T(int id) { return 2 * static_cast<std::size_t>(id); }
  static std::size_t F(int id) { return 2 * static_cast<std::size_t>(id) + 1; }

  struct Node {
    Bits label;
    std::vector<std::pair<int, int>> edges;  // (modality, target)
  };

  int intern(const Expr& e) {
    if (auto it = ids_.find(e); it != ids_.end()) return it->second;
    Formula f;
    f.kind = e.kind();
    switch (e.kind()) {
      case Kind::FlexVar: f.atom = e.name(); break;
      case Kind::False: break;
      case Kind::Implies:
        f.a = intern(e.arg(0));
        f.b = intern(e.arg(1));
        break;
      case Kind::Nabla:
      case Kind::Prime: f.a = intern(e.arg(0)); break;
      default: throw Error(std::string("prover: unsupported node ") + kind_name(e.kind()));
    }
    forms_.push_back(std::move(f));
    const int id = static_cast<int>(forms_.size() - 1);
    ids_.emplace(e, id);
    return id;
  }

  Bits hyp_bits() const {
    Bits b(bits_);
    for (int h : hyps_) b.set(T(h));
    return b;
  }

  static void close_transitively(Relation& r) {
    const std::size_t n = r.states();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (r.has(static_cast<int>(i), static_cast<int>(k)))
          for (std::size_t j = 0; j < n; ++j)
            if (r.has(static_cast<int>(k), static_cast<int>(j))) r.add(static_cast<int>(i), static_cast<int>(j));
  }

  // Each derived literal records the literals of the initial label it follows
  // from, so a closed branch reports only the choices it depends on.
  std::optional<Bits> expand_uncached(const Bits& init) {
    const int nf = static_cast<int>(forms_.size());
    Bits l = init;
    std::vector<Bits> why(bits_);
    auto reason = [&](std::size_t lit) {
      if (!why[lit].empty()) return why[lit];
      Bits b(bits_);
      b.set(lit);
      return b;
    };
    auto lift = [&](const Bits& c, std::initializer_list<std::size_t> skip) {
      Bits out(bits_);
      for (std::size_t i = 0; i < bits_; ++i)
        if (c.test(i) && std::find(skip.begin(), skip.end(), i) == skip.end()) out |= reason(i);
      return out;
    };

    for (bool changed = true; changed;) {
      changed = false;
      auto add = [&](std::size_t lit, Bits r) {
        if (!l.test(lit)) {
          l.set(lit);
          why[lit] = std::move(r);
          changed = true;
        }
      };
      for (int id = 0; id < nf; ++id) {
        const Formula& f = forms_[id];
        if (f.kind == Kind::Implies && l.test(F(id))) {
          add(T(f.a), reason(F(id)));
          add(F(f.b), reason(F(id)));
        } else if (f.kind == Kind::Implies && l.test(T(id))) {
          if (l.test(T(f.a))) add(T(f.b), reason(T(id)) |= reason(T(f.a)));
          if (l.test(F(f.b))) add(F(f.a), reason(T(id)) |= reason(F(f.b)));
        } else if ((f.kind == Kind::Nabla || f.kind == Kind::Prime) && refl_[modality_of(f.kind)] &&
                   l.test(T(id))) {
          add(T(f.a), reason(T(id)));
        }
      }
    }
    for (int id = 0; id < nf; ++id) {
      if (l.test(T(id)) && l.test(F(id))) return reason(T(id)) |= reason(F(id));
      if (forms_[id].kind == Kind::False && l.test(T(id))) return reason(T(id));
    }
    for (int id = 0; id < nf; ++id) {
      const Formula& f = forms_[id];
      if (f.kind != Kind::Implies || !l.test(T(id))) continue;
      if (l.test(F(f.a)) || l.test(T(f.b))) continue;
      Bits left = l;
      left.set(F(f.a));
      const std::optional<Bits> c1 = expand(left);
      if (!c1) return std::nullopt;
      if (!c1->test(F(f.a))) return lift(*c1, {});
      Bits right = l;
      right.set(T(f.a));
      right.set(T(f.b));
      const std::optional<Bits> c2 = expand(right);
      if (!c2) return std::nullopt;
      if (!c2->test(T(f.a)) && !c2->test(T(f.b))) return lift(*c2, {});
      Bits core = lift(*c1, {F(f.a)});
      core |= lift(*c2, {T(f.a), T(f.b)});
      return core |= reason(T(id));
    }

    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{l, {}});
    for (int id = 0; id < nf; ++id) {
      const Formula& f = forms_[id];
      if ((f.kind != Kind::Nabla && f.kind != Kind::Prime) || !l.test(F(id))) continue;
      const int m = modality_of(f.kind);
      const Bits hyps = hyp_bits();
      Bits s = hyps;
      // Parent literals each successor literal comes from.
      std::vector<Bits> from(bits_);
      auto origin = [&](std::size_t lit, std::size_t parent) {
        s.set(lit);
        if (from[lit].empty()) from[lit] = Bits(bits_);
        from[lit] |= reason(parent);
      };
      origin(F(f.a), F(id));
      for (int j = 0; j < nf; ++j) {
        const Formula& g = forms_[j];
        if (g.kind != f.kind || !l.test(T(j))) continue;
        origin(T(g.a), T(j));
        if (trans_[m]) origin(T(j), T(j));
      }
      int target = -1;
      for (std::size_t k = 0; k < nodes_.size() && target < 0; ++k)
        if (s.subset_of(nodes_[k].label)) target = static_cast<int>(k);
      if (target < 0) {
        target = static_cast<int>(nodes_.size());
        if (const std::optional<Bits> c = expand(s)) {
          nodes_.resize(static_cast<std::size_t>(self));
          Bits core(bits_);
          for (std::size_t i = 0; i < bits_; ++i)
            if (c->test(i) && !hyps.test(i)) core |= from[i];
          return core;
        }
      }
      nodes_[static_cast<std::size_t>(self)].edges.emplace_back(m, target);
    }
    return std::nullopt;
  }

  std::uint64_t limit_;
  std::uint64_t steps_ = 0;
  bool refl_[2]{};
  bool trans_[2]{};
  std::vector<Formula> forms_;
  std::unordered_map<Expr, int, ExprHash> ids_;
  std::vector<int> hyps_;
  int goal_ = -1;
  std::size_t bits_ = 0;
  std::vector<Node> nodes_;
  std::map<Bits, Bits> unsat_;
};

}  // namespace

Verdict prove_ml(const MLSequent& s, const ProverLimits& limits) {
  for (const auto& h : s.hypotheses) check_ml_formula(h);
  check_ml_formula(s.goal);
  bool uses_prime = contains_kind(s.goal, Kind::Prime);
  for (const auto& h : s.hypotheses) uses_prime = uses_prime || contains_kind(h, Kind::Prime);

  Tableau t(s, limits.max_nodes);
  Verdict v;
  try {
    if (t.expand(t.initial_root())) {
      v.status = Verdict::Status::Proved;
      v.nodes = t.steps();
      return v;
    }
  } catch (const ResourceOut&) {
    v.status = Verdict::Status::ResourceOut;
    v.nodes = t.steps();
    return v;
  }
  PropModel k = t.model(uses_prime);
  for (const auto& h : s.hypotheses)
    for (std::size_t w = 0; w < k.num_states(); ++w)
      if (!eval_ml(k, static_cast<int>(w), h))
        throw InvariantError("prover countermodel violates hypothesis " + to_string(h));
  if (eval_ml(k, 0, s.goal)) throw InvariantError("prover countermodel satisfies the goal");
  if (!frame_admits(s.frame, k.r) || (k.prime_r && !frame_admits(s.prime_frame, *k.prime_r)))
    throw InvariantError("prover countermodel is outside the frame class");
  v.status = Verdict::Status::Countermodel;
  v.model = std::move(k);
  v.state = 0;
  v.nodes = t.steps();
  return v;
}

}  // namespace foml
