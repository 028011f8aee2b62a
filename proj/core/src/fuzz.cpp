#include "foml/fuzz.hpp"

#include <map>

#include "foml/coalesce_fol.hpp"
#include "foml/coalesce_ml.hpp"
#include "foml/leibniz.hpp"
#include "foml/prime_pipeline.hpp"
#include "foml/problem.hpp"
#include "foml/search.hpp"

namespace foml {

const DefinitionEnvironment& fuzz_environment() {
  static const DefinitionEnvironment env = parse_problem_file(R"(
    (declare-op 0 0) (declare-op 1 0) (declare-op f 1) (declare-op g 2) (declare-op P 1)
    (declare-rigid a) (declare-rigid b)
    (declare-flex u) (declare-flex v)
    (define (cst x) (exists y (nabla (= x y))))
    (define (id x) x)
    (define (gd x y) (=> (= x 0) (nabla (= y 0))))
    (define (mix x y) (and (cst (f x)) (= y v)))
    (define (nxt x) (prime (= (f x) u)))
    (define (wrap x y z) (forall y (=> (gd x y) (id (g z y)))))
  )").env;
  return env;
}

const DefinitionEnvironment& action_environment() {
  static const DefinitionEnvironment env = parse_problem_file(R"(
    (declare-op 0 0) (declare-op f 1)
    (declare-rigid a)
    (declare-flex u) (declare-flex v)
    (define (stay x) (= (prime x) x))
    (define (inc x) (f x))
  )").env;
  return env;
}

namespace {

const std::vector<std::string> kBinders = {"x", "y", "z"};

std::size_t def_modal_depth(const DefinitionEnvironment& env, const Definition& d) {
  std::vector<Expr> params;
  for (const auto& p : d.params) params.push_back(Expr::rigid(p));
  return modal_depth(expand_definitions(Expr::def(d.name, params), env));
}

}  // namespace

ExprGen::ExprGen(SplitMix64& rng, const DefinitionEnvironment& env, GenOptions options)
    : rng_(rng), env_(env), opt_(options) {
  rigid_.assign(env.rigid_vars().begin(), env.rigid_vars().end());
  flex_.assign(env.flex_vars().begin(), env.flex_vars().end());
  ops_.assign(env.ops().begin(), env.ops().end());
}

Expr ExprGen::leaf(const std::vector<std::string>& bound) {
  for (;;) {
    switch (rng_.below(9)) {
      case 0:
      case 1:
      case 2:
        if (!bound.empty()) return Expr::rigid(rng_.pick(bound));
        break;
      case 3:
        if (!rigid_.empty()) return Expr::rigid(rng_.pick(rigid_));
        break;
      case 4:
      case 5:
        if (opt_.flexible && !flex_.empty()) return Expr::flex(rng_.pick(flex_));
        break;
      case 6:
      case 7: {
        std::vector<std::string> consts;
        for (const auto& [name, arity] : ops_)
          if (arity == 0) consts.push_back(name);
        if (!consts.empty()) return Expr::op(rng_.pick(consts));
        break;
      }
      default: return Expr::falsum();
    }
  }
}

Expr ExprGen::gen(std::size_t depth, std::size_t modal_left, bool under_prime,
                  std::vector<std::string>& bound) {
  if (depth == 0) return leaf(bound);
  auto sub = [&](std::size_t modal = SIZE_MAX, bool prime = false) {
    return gen(depth - 1, modal == SIZE_MAX ? modal_left : modal, under_prime || prime, bound);
  };
  for (;;) {
    switch (rng_.below(12)) {
      case 0: return leaf(bound);
      case 1: {
        std::vector<std::pair<std::string, std::size_t>> fns;
        for (const auto& o : ops_)
          if (o.second > 0) fns.push_back(o);
        if (fns.empty()) break;
        const auto& [name, arity] = rng_.pick(fns);
        std::vector<Expr> args;
        for (std::size_t i = 0; i < arity; ++i) args.push_back(sub());
        return Expr::op(name, std::move(args));
      }
      case 2:
      case 3: {
        Expr l = sub();
        return Expr::eq(std::move(l), sub());
      }
      case 4: {
        Expr l = sub();
        return Expr::implies(std::move(l), sub());
      }
      case 5: {
        const std::string& x = rng_.pick(kBinders);
        bound.push_back(x);
        Expr body = sub();
        bound.pop_back();
        return Expr::forall(x, std::move(body));
      }
      case 6:
        if (!opt_.nabla || modal_left == 0) break;
        return Expr::nabla(sub(modal_left - 1));
      case 7:
        if (!opt_.prime || modal_left == 0 || under_prime) break;
        return Expr::prime(sub(modal_left - 1, true));
      case 8:
      case 9: {
        if (!opt_.definitions || env_.definitions().empty()) break;
        const Definition& d = rng_.pick(env_.definitions());
        const auto& info = env_.info(d.name);
        if (info.body_has_prime && (under_prime || !opt_.prime)) break;
        if (!info.body_rigid && !opt_.flexible) break;
        const std::size_t md = def_modal_depth(env_, d);
        if (md > modal_left) break;
        if (md > 0 && !opt_.nabla && !info.body_has_prime) break;
        std::vector<Expr> args;
        for (std::size_t i = 0; i < d.params.size(); ++i) args.push_back(sub(modal_left - md, info.body_has_prime));
        return Expr::def(d.name, std::move(args));
      }
      case 10: {
        switch (rng_.below(6)) {
          case 0: return negate(sub());
          case 1: {
            Expr l = sub();
            return conj(std::move(l), sub());
          }
          case 2: {
            Expr l = sub();
            return disj(std::move(l), sub());
          }
          case 3: {
            const std::string& x = rng_.pick(kBinders);
            bound.push_back(x);
            Expr body = sub();
            bound.pop_back();
            return exists(x, std::move(body));
          }
          case 4:
            if (!opt_.nabla || modal_left == 0) break;
            return delta(sub(modal_left - 1));
          default: return truth();
        }
        break;
      }
      default: {
        Expr l = sub();
        return Expr::implies(std::move(l), sub());
      }
    }
  }
}

Expr ExprGen::expr() {
  std::vector<std::string> bound;
  return gen(rng_.between(1, opt_.max_depth), opt_.max_modal_depth, false, bound);
}

Expr ExprGen::rigid_expr() {
  const GenOptions saved = opt_;
  opt_.nabla = opt_.prime = opt_.definitions = opt_.flexible = false;
  std::vector<std::string> bound;
  Expr e = gen(rng_.between(0, 3), 0, true, bound);
  opt_ = saved;
  return e;
}

std::vector<Expr> ExprGen::def_args(const std::string& d) {
  const Definition& def = env_.definition(d);
  const bool prime = env_.info(d).body_has_prime;
  const std::size_t md = def_modal_depth(env_, def);
  const std::size_t left = opt_.max_modal_depth > md ? opt_.max_modal_depth - md : 0;
  std::vector<Expr> args;
  std::vector<std::string> bound;
  for (std::size_t i = 0; i < def.params.size(); ++i) args.push_back(gen(rng_.between(0, 3), left, prime, bound));
  return args;
}

KripkeModel random_model(SplitMix64& rng, const DefinitionEnvironment& env, ModelOptions options) {
  KripkeModel m;
  const std::size_t n = rng.between(2, std::max<std::size_t>(2, options.max_universe));
  const std::size_t s = rng.between(1, std::max<std::size_t>(1, options.max_states));
  m.universe = Universe::standard(n);
  auto value = [&] { return static_cast<Value>(rng.below(n)); };
  for (const auto& [name, arity] : env.ops()) {
    OpTable t{arity, {}};
    std::size_t rows = 1;
    for (std::size_t i = 0; i < arity; ++i) rows *= n;
    for (std::size_t r = 0; r < rows; ++r) t.values.push_back(value());
    m.ops.emplace(name, std::move(t));
  }
  for (const auto& x : env.rigid_vars()) m.xi[x] = value();
  for (std::size_t i = 0; i < s; ++i) m.states.push_back("s" + std::to_string(i));
  for (const auto& v : env.flex_vars())
    for (std::size_t i = 0; i < s; ++i) m.zeta[v].push_back(value());
  m.r = Relation(s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      if (rng.chance(1, 2)) m.r.add(static_cast<int>(a), static_cast<int>(b));
  Relation p(s);
  const bool functional = options.functional_prime || rng.chance(1, 2);
  for (std::size_t a = 0; a < s; ++a) {
    if (functional) {
      p.add(static_cast<int>(a), static_cast<int>(rng.below(s)));
    } else {
      for (std::size_t b = 0; b < s; ++b)
        if (rng.chance(1, 2)) p.add(static_cast<int>(a), static_cast<int>(b));
    }
  }
  m.prime_r = p;
  return m;
}

const char* property_name(Property p) {
  switch (p) {
    case Property::FolWitness: return "fol-witness";
    case Property::MlWitness: return "ml-witness";
    case Property::RigidLemma: return "rigid-lemma";
    case Property::LeibnizLemma: return "leibniz-lemma";
    case Property::Consequent: return "consequent";
    case Property::PrimeDistribution: return "prime-distribution";
    case Property::ActionLifting: return "action-lifting";
  }
  return "?";
}

const std::vector<Property>& all_properties() {
  static const std::vector<Property> all = {Property::FolWitness,   Property::MlWitness,
                                            Property::RigidLemma,   Property::LeibnizLemma,
                                            Property::Consequent,   Property::PrimeDistribution,
                                            Property::ActionLifting};
  return all;
}

std::optional<Property> parse_property(std::string_view s) {
  for (Property p : all_properties())
    if (s == property_name(p)) return p;
  return std::nullopt;
}

namespace {

using Result = std::optional<std::string>;

std::string describe(const KripkeModel& m, int w) {
  return "state " + m.states[static_cast<std::size_t>(w)] + " of\n" + print_model(m);
}

bool pure_fol(const Expr& e) {
  return !contains_kind(e, Kind::Nabla) && !contains_kind(e, Kind::Prime) && !contains_kind(e, Kind::Def);
}

bool pure_ml(const Expr& e) {
  return !contains_kind(e, Kind::Eq) && !contains_kind(e, Kind::Forall) && !contains_kind(e, Kind::Op) &&
         !contains_kind(e, Kind::Def) && !contains_kind(e, Kind::RigidVar);
}

Result fol_witness(SplitMix64& rng) {
  const auto& env = fuzz_environment();
  ExprGen gen(rng, env);
  std::vector<Expr> es;
  for (int i = 0; i < 3; ++i) es.push_back(gen.expr());
  const KripkeModel m = random_model(rng, env);
  const int w = static_cast<int>(rng.below(m.num_states()));
  SymbolTable table(CoalesceOptions{rng.chance(1, 2) ? CanonicalOrder::Innermost : CanonicalOrder::Appearance});
  std::vector<Expr> cs;
  for (const auto& e : es) {
    cs.push_back(coalesce_fol(e, {}, table, env));
    if (!pure_fol(cs.back())) return "coalesced output is not first-order: " + to_string(cs.back());
  }
  const FolStructure s = build_witness_structure(m, w, table, env);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const Value a = eval_fol(s, cs[i]);
    const Value b = eval(m, w, es[i], env);
    if (a != b)
      return "expression " + to_string(es[i]) + "\ncoalesced " + to_string(cs[i]) + "\nwitness value " +
             m.universe.names[a] + " but model value " + m.universe.names[b] + " at " + describe(m, w);
  }
  return std::nullopt;
}

Result ml_witness(SplitMix64& rng) {
  const auto& env = fuzz_environment();
  ExprGen gen(rng, env);
  std::vector<Expr> es;
  for (int i = 0; i < 3; ++i) es.push_back(gen.expr());
  const KripkeModel m = random_model(rng, env);
  AtomTable atoms;
  std::vector<Expr> cs;
  bool prime = false;
  for (const auto& e : es) {
    cs.push_back(coalesce_ml(e, atoms, env));
    if (!pure_ml(cs.back())) return "coalesced output is not propositional: " + to_string(cs.back());
    prime = prime || has_prime(e, env);
  }
  const PropModel k = build_witness_propmodel(m, atoms, env);
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    const int wi = static_cast<int>(w);
    for (std::size_t i = 0; i < es.size(); ++i) {
      const bool a = eval_ml(k, wi, cs[i]);
      const bool b = eval(m, wi, es[i], env) == m.universe.tt;
      if (a != b)
        return "expression " + to_string(es[i]) + "\ncoalesced " + to_string(cs[i]) + "\nwitness says " +
               (a ? "true" : "false") + " at " + describe(m, wi);
    }
    for (const auto& h : hypotheses(atoms, prime))
      if (!eval_ml(k, wi, h)) return "hypothesis " + to_string(h) + " fails at " + describe(m, wi);
  }
  return std::nullopt;
}

// d(args) at w in m versus d(args with x at i) at w in m with xi(x) = value.
Result compare_substituted(const KripkeModel& m, int w, const std::string& d, std::vector<Expr> args,
                           std::size_t i, const DefinitionEnvironment& env, const char* lemma) {
  const Expr original = Expr::def(d, args);
  NameSet avoid = env.all_names();
  for (const auto& a : args) collect_names(a, avoid);
  for (const auto& p : env.definition(d).params) avoid.insert(p);
  const std::string x = fresh_name("x", avoid);
  KripkeModel m2 = m;
  m2.xi[x] = eval(m, w, args[i], env);
  args[i] = Expr::rigid(x);
  const Expr replaced = Expr::def(d, args);
  const Value a = eval(m, w, original, env);
  const Value b = eval(m2, w, replaced, env);
  if (a == b) return std::nullopt;
  return std::string(lemma) + ": " + to_string(original) + " is " + m.universe.names[a] + " but " +
         to_string(replaced) + " with " + x + " = " + m.universe.names[m2.xi[x]] + " is " + m.universe.names[b] +
         " at " + describe(m, w);
}

Result rigid_lemma(SplitMix64& rng) {
  const auto& env = fuzz_environment();
  ExprGen gen(rng, env);
  const Definition& d = rng.pick(env.definitions());
  std::vector<Expr> args = gen.def_args(d.name);
  const std::size_t i = rng.below(args.size());
  args[i] = gen.rigid_expr();
  if (!is_rigid(args[i], env)) return "generator produced a non-rigid argument " + to_string(args[i]);
  const KripkeModel m = random_model(rng, env);
  return compare_substituted(m, static_cast<int>(rng.below(m.num_states())), d.name, std::move(args), i, env,
                             "rigid-argument lemma");
}

std::vector<std::pair<std::string, std::size_t>> leibniz_positions(const DefinitionEnvironment& env) {
  const LeibnizTable t = compute_leibniz(env);
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& d : env.definitions())
    for (std::size_t i = 0; i < d.params.size(); ++i)
      if (t.is_leibniz(d.name, i)) out.emplace_back(d.name, i);
  return out;
}

Result leibniz_lemma(SplitMix64& rng) {
  const auto& env = fuzz_environment();
  static const auto positions = leibniz_positions(env);
  ExprGen gen(rng, env);
  const auto& [d, i] = rng.pick(positions);
  std::vector<Expr> args = gen.def_args(d);
  const KripkeModel m = random_model(rng, env);
  return compare_substituted(m, static_cast<int>(rng.below(m.num_states())), d, std::move(args), i, env,
                             "Leibniz-position lemma");
}

Result consequent(SplitMix64& rng) {
  const auto& env = fuzz_environment();
  static const auto positions = leibniz_positions(env);
  ExprGen gen(rng, env);
  std::string d;
  std::size_t i;
  std::vector<Expr> args;
  Expr f;
  if (rng.chance(1, 2)) {
    std::tie(d, i) = rng.pick(positions);
    args = gen.def_args(d);
    f = gen.def_args(d)[i];
  } else {
    const Definition& def = rng.pick(env.definitions());
    d = def.name;
    args = gen.def_args(d);
    i = rng.below(args.size());
    args[i] = gen.rigid_expr();
    f = gen.rigid_expr();
  }
  std::vector<Expr> args2 = args;
  args2[i] = f;
  const Expr claim = Expr::implies(Expr::eq(args[i], f), Expr::eq(Expr::def(d, args), Expr::def(d, args2)));
  const KripkeModel m = random_model(rng, env);
  for (std::size_t w = 0; w < m.num_states(); ++w)
    if (!holds(m, static_cast<int>(w), claim, env))
      return "consequent fails: " + to_string(claim) + " at " + describe(m, static_cast<int>(w));
  return std::nullopt;
}

bool primes_on_variables(const Expr& e) {
  if (e.is(Kind::Prime)) return e.arg(0).is(Kind::FlexVar);
  for (const auto& a : e.args())
    if (!primes_on_variables(a)) return false;
  return true;
}

Result prime_distribution(SplitMix64& rng) {
  const auto& env = action_environment();
  GenOptions opt;
  opt.nabla = false;
  ExprGen gen(rng, env, opt);
  const Expr e = gen.expr();
  const Expr d = distribute_prime(expand_definitions(e, env), env);
  if (!primes_on_variables(d)) return "prime left on a compound expression: " + to_string(d);
  ModelOptions mo;
  mo.functional_prime = true;
  const KripkeModel m = random_model(rng, env, mo);
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    const Value a = eval(m, static_cast<int>(w), e, env);
    const Value b = eval_expanded(m, static_cast<int>(w), d);
    if (a != b)
      return "distribute_prime changed the value of " + to_string(e) + " (now " + to_string(d) + ") at " +
             describe(m, static_cast<int>(w));
  }
  return std::nullopt;
}

Result action_lifting(SplitMix64& rng) {
  const auto& env = action_environment();
  GenOptions opt;
  opt.nabla = false;
  opt.max_depth = 3;
  ExprGen gen(rng, env, opt);
  const Expr c = gen.expr();
  SymbolTable table(CoalesceOptions{CanonicalOrder::Innermost, true});
  const Expr t = translate_action(c, table, env);
  if (contains_kind(t, Kind::Prime) || !pure_fol(t)) return "action translation is not first-order: " + to_string(t);

  SearchBounds bounds;
  bounds.max_universe = 2;
  bounds.max_states = 2;
  bounds.functional_prime = true;
  const auto km = find_countermodel(Obligation{{}, c, env, Mode::Action}, bounds);
  const auto fm = find_fol_countermodel({}, t, 2);
  if (km.status == SearchStatus::ResourceOut || fm.status == SearchStatus::ResourceOut)
    return "search exceeded its cap on " + to_string(c);

  if (km.model) {
    const FolStructure s = build_witness_structure(*km.model, km.state, table, env);
    if (holds_fol(s, t))
      return "Kripke countermodel of " + to_string(c) + " does not map to a countermodel of " + to_string(t) +
             " at " + describe(*km.model, km.state);
  }
  if (fm.structure) {
    const KripkeModel lifted = lift_action_structure(*fm.structure, table, env);
    if (holds(lifted, 0, c, env))
      return "first-order countermodel of " + to_string(t) + " does not lift to " + to_string(c) + ":\n" +
             print_fol_structure(*fm.structure);
  }
  if (km.model.has_value() != fm.structure.has_value())
    return "countermodel existence differs for " + to_string(c) + " (Kripke " +
           (km.model ? "found" : "none") + ", first-order " + (fm.structure ? "found" : "none") + ")";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_case(Property p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  try {
    switch (p) {
      case Property::FolWitness: return fol_witness(rng);
      case Property::MlWitness: return ml_witness(rng);
      case Property::RigidLemma: return rigid_lemma(rng);
      case Property::LeibnizLemma: return leibniz_lemma(rng);
      case Property::Consequent: return consequent(rng);
      case Property::PrimeDistribution: return prime_distribution(rng);
      case Property::ActionLifting: return action_lifting(rng);
    }
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
  return "unknown property";
}

FuzzReport run_fuzz(std::uint64_t seed, std::uint64_t iters, const std::vector<Property>& properties,
                    std::size_t max_failures) {
  FuzzReport report;
  for (std::uint64_t i = 0; i < iters; ++i) {
    const std::uint64_t base = case_seed(seed, i);
    for (Property p : properties) {
      const std::uint64_t cs = case_seed(base, static_cast<std::uint64_t>(p));
      ++report.cases;
      if (auto failure = check_case(p, cs); failure && report.failures.size() < max_failures)
        report.failures.push_back(FuzzFailure{p, i, cs, std::move(*failure)});
    }
  }
  return report;
}

}  // namespace foml
