#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "foml/coalesce_fol.hpp"
#include "foml/coalesce_ml.hpp"
#include "foml/emitters.hpp"
#include "foml/fuzz.hpp"
#include "foml/leibniz.hpp"
#include "foml/modal_prover.hpp"
#include "foml/prime_pipeline.hpp"
#include "foml/problem.hpp"
#include "foml/search.hpp"
#include "foml/sexpr.hpp"

namespace foml::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string model_file;
  std::string frame;
  std::string prime_frame;
  std::string order = "innermost";
  std::string bounds;
  std::string emit;
  std::string solver;
  std::string output;
  std::string out_dir = ".";
  bool rewrite_rigid_box = false;
  bool check = false;
  std::uint64_t seed = 1;
  std::uint64_t iters = 1000;
  std::vector<std::string> properties;
  std::string replay;
  int timeout = 30;
  std::uint64_t max_nodes = ProverLimits{}.max_nodes;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Frame frame_or(const std::string& flag, Frame fallback) {
  if (flag.empty()) return fallback;
  try {
    return parse_frame(flag);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

SearchBounds parse_bounds(const std::string& text) {
  SearchBounds b;
  unsigned long u = 0;
  unsigned long s = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> u >> comma >> s) || comma != ',' || !in.eof() || u < 2 || s < 1)
    throw UsageError("--bounds expects U,S with U >= 2 and S >= 1, got '" + text + "'");
  b.max_universe = u;
  b.max_states = s;
  return b;
}

CoalesceOptions coalesce_options(const Options& o, bool prime_names) {
  try {
    return CoalesceOptions{parse_canonical_order(o.order), prime_names};
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::string commented(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += "; " + line + "\n";
  return out;
}

// The obligation as given, with rigid boxes rewritten when requested.
Obligation load_obligation(const Options& o) {
  Obligation ob = parse_problem(read_file(o.file));
  if (o.rewrite_rigid_box) {
    const Frame f = frame_or(o.frame, Frame::K);
    const bool reflexive = f == Frame::T || f == Frame::S4;
    for (auto& h : ob.hypotheses) h = rewrite_rigid_box(h, reflexive, ob.env);
    ob.goal = rewrite_rigid_box(ob.goal, reflexive, ob.env);
  }
  return ob;
}

// First-order translation; action obligations go through prime distribution.
FolCoalesced translate_fol(const Obligation& ob, const Options& o) {
  if (ob.mode != Mode::Action) return coalesce_obligation_fol(ob, coalesce_options(o, false));
  FolCoalesced c{{}, SymbolTable(coalesce_options(o, true))};
  for (const auto& h : ob.hypotheses) c.sequent.hypotheses.push_back(translate_action(h, c.table, ob.env));
  c.sequent.goal = translate_action(ob.goal, c.table, ob.env);
  return c;
}

MLSequent translate_ml(const Obligation& ob, const Options& o) {
  MlCoalesced c = coalesce_obligation_ml(ob);
  MLSequent s;
  s.hypotheses = c.hypotheses;
  s.hypotheses.insert(s.hypotheses.end(), c.h.begin(), c.h.end());
  s.goal = c.goal;
  s.frame = frame_or(o.frame, Frame::K);
  s.prime_frame = frame_or(o.prime_frame, Frame::K);
  return s;
}

void report_oracle(const Obligation& ob, const Options& o, std::ostream& out) {
  if (o.bounds.empty()) return;
  SearchBounds b = parse_bounds(o.bounds);
  b.frame = frame_or(o.frame, Frame::K);
  b.functional_prime = ob.mode == Mode::Action;
  const KripkeSearchResult r = find_countermodel(ob, b);
  switch (r.status) {
    case SearchStatus::Found:
      out << "; oracle: countermodel at state " << r.model->states[static_cast<std::size_t>(r.state)] << "\n"
          << commented(print_model(*r.model));
      break;
    case SearchStatus::NoneWithinBounds:
      out << "; oracle: no countermodel within bounds " << o.bounds << " (" << r.models_checked
          << " models)\n";
      break;
    case SearchStatus::ResourceOut: out << "; oracle: model cap reached\n"; break;
  }
}

int cmd_coalesce_fol(const Options& o, std::ostream& out) {
  const Obligation ob = load_obligation(o);
  const FolCoalesced c = translate_fol(ob, o);
  out << print_problem(Obligation{c.sequent.hypotheses, c.sequent.goal, coalesced_environment(ob.env, c.table),
                                  Mode::Fol})
      << format_symbols(c.table);
  report_oracle(ob, o, out);
  return kOk;
}

int cmd_coalesce_ml(const Options& o, std::ostream& out) {
  const Obligation ob = load_obligation(o);
  const MlCoalesced c = coalesce_obligation_ml(ob);
  for (const auto& h : c.hypotheses) out << "(assume " << to_string(h) << ")\n";
  out << "(goal " << to_string(c.goal) << ")\n(hypotheses";
  for (const auto& h : c.h) out << "\n  " << to_string(h);
  out << ")\n" << format_atoms(c.atoms);
  report_oracle(ob, o, out);
  return kOk;
}

bool looks_like_mlseq(const std::string& text) {
  for (const SExpr& s : read_sexprs(text)) return s.is_list && s.head() == "ml-sequent";
  return false;
}

int cmd_prove_ml(const Options& o, std::ostream& out) {
  const std::string text = read_file(o.file);
  MLSequent s;
  if (looks_like_mlseq(text)) {
    s = parse_ml_sequent(text);
    s.frame = frame_or(o.frame, s.frame);
    s.prime_frame = frame_or(o.prime_frame, s.prime_frame);
  } else {
    s = translate_ml(load_obligation(o), o);
  }
  const Verdict v = prove_ml(s, ProverLimits{o.max_nodes});
  out << status_name(v.status) << "\n";
  if (v.status == Verdict::Status::Countermodel) {
    out << print_model(as_kripke(*v.model)) << "; goal fails at "
        << v.model->states[static_cast<std::size_t>(v.state)] << "\n";
  }
  switch (v.status) {
    case Verdict::Status::Proved: return kOk;
    case Verdict::Status::Countermodel: return kNegative;
    case Verdict::Status::ResourceOut: return kResourceOut;
  }
  return kInternal;
}

int cmd_leibniz(const Options& o, std::ostream& out) {
  const ProblemFile pf = parse_problem_file(read_file(o.file));
  out << format_leibniz(compute_leibniz(pf.env), pf.env);
  return kOk;
}

int cmd_action(const Options& o, std::ostream& out) {
  Obligation ob = parse_problem(read_file(o.file));
  ob.mode = Mode::Action;
  const FolCoalesced c = translate_fol(ob, o);
  out << print_problem(Obligation{c.sequent.hypotheses, c.sequent.goal, coalesced_environment(ob.env, c.table),
                                  Mode::Fol})
      << format_symbols(c.table);
  report_oracle(ob, o, out);
  return kOk;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InputError("cannot write '" + path.string() + "'");
}

int cmd_safety(const Options& o, std::ostream& out) {
  const ProblemFile pf = parse_problem_file(read_file(o.file));
  if (!pf.safety) throw ParseError(ParseError::Code::Semantic, 1, 1, "no safety specification in " + o.file);
  const SafetyObligations so = safety_obligations(*pf.safety, pf.env);

  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  const std::filesystem::path dir(o.out_dir);
  static const char* const kNames[3] = {"init", "step", "inv"};
  int status = kOk;
  for (int i = 0; i < 3; ++i) {
    const auto path = dir / ("obligation" + std::to_string(i + 1) + "-" + kNames[i] + ".foml");
    write_file(path, print_problem(so.fol[i]));
    out << path.string() << ": " << to_string(so.fol[i].goal) << "\n";
    if (!o.check) continue;
    const std::size_t u = o.bounds.empty() ? 3 : parse_bounds(o.bounds).max_universe;
    const FolSearchResult r = find_fol_countermodel(so.fol[i].hypotheses, so.fol[i].goal, u);
    if (r.status == SearchStatus::Found) {
      out << "  countermodel:\n" << commented(print_fol_structure(*r.structure));
      status = kNegative;
    } else if (r.status == SearchStatus::ResourceOut) {
      out << "  search cap reached\n";
      if (status == kOk) status = kResourceOut;
    } else {
      out << "  no countermodel with universe <= " << u << "\n";
    }
  }
  std::string glue;
  for (const auto& [atom, source] : so.glue_atoms) glue += "; " + atom + " := " + source + "\n";
  glue += emit_ml(so.glue);
  const auto glue_path = dir / "glue.mlseq";
  write_file(glue_path, glue);
  out << glue_path.string() << ": " << to_string(so.glue.goal) << "\n" << format_symbols(so.action_symbols);
  return status;
}

int cmd_check_model(const Options& o, std::ostream& out) {
  const KripkeModel m = parse_model(read_file(o.model_file));
  const Obligation ob = parse_problem(read_file(o.file));
  m.validate();
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    const int wi = static_cast<int>(w);
    for (std::size_t i = 0; i < ob.hypotheses.size(); ++i) {
      if (!holds(m, wi, ob.hypotheses[i], ob.env)) {
        out << "hypothesis " << i + 1 << " fails at " << m.states[w] << "\n";
        return kNegative;
      }
    }
    if (!holds(m, wi, ob.goal, ob.env)) {
      out << "goal fails at " << m.states[w] << "\n";
      return kNegative;
    }
  }
  out << "satisfied\n";
  return kOk;
}

std::vector<Property> selected_properties(const Options& o) {
  if (o.properties.empty()) return all_properties();
  std::vector<Property> ps;
  for (const auto& name : o.properties) {
    auto p = parse_property(name);
    if (!p) throw UsageError("unknown property '" + name + "'");
    ps.push_back(*p);
  }
  return ps;
}

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << "0x" << std::hex << v;
  return ss.str();
}

int cmd_fuzz(const Options& o, std::ostream& out) {
  const std::vector<Property> props = selected_properties(o);
  if (!o.replay.empty()) {
    std::uint64_t cs = 0;
    try {
      cs = std::stoull(o.replay, nullptr, 0);
    } catch (const std::exception&) {
      throw UsageError("--replay expects a case seed, got '" + o.replay + "'");
    }
    int status = kOk;
    for (Property p : props) {
      const auto failure = check_case(p, cs);
      out << property_name(p) << " " << hex(cs) << ": " << (failure ? "discrepancy" : "ok") << "\n";
      if (failure) {
        out << *failure << "\n";
        status = kNegative;
      }
    }
    return status;
  }
  const FuzzReport r = run_fuzz(o.seed, o.iters, props);
  std::size_t discrepancies = r.failures.size();
  out << r.cases << " cases, " << discrepancies << " discrepancies\n";
  for (const auto& f : r.failures) {
    out << "discrepancy in " << property_name(f.property) << " at iteration " << f.iteration
        << " (replay: fuzz --property " << property_name(f.property) << " --replay " << hex(f.case_seed)
        << ")\n"
        << f.detail << "\n";
  }
  return discrepancies == 0 ? kOk : kNegative;
}

int cmd_emit(const Options& o, std::ostream& out, std::ostream& err) {
  const Obligation ob = load_obligation(o);
  std::string text;
  bool tptp = false;
  if (o.emit == "smt") {
    const FolCoalesced c = translate_fol(ob, o);
    text = emit_smt(c.sequent, &c.table);
  } else if (o.emit == "tptp") {
    const FolCoalesced c = translate_fol(ob, o);
    text = emit_tptp(c.sequent, &c.table);
    tptp = true;
  } else {
    text = emit_ml(translate_ml(ob, o));
  }
  if (!o.output.empty()) {
    write_file(o.output, text);
  } else if (o.solver.empty()) {
    out << text;
  }
  if (o.solver.empty()) return kOk;
  if (o.emit == "mlseq") throw UsageError("--solver needs --emit=smt or --emit=tptp");
  const auto answer = run_solver(o.solver, text, tptp, o.timeout);
  if (!answer) {
    err << "foml: could not run solver '" << o.solver << "'\n";
    return kUnavailable;
  }
  out << solver_answer_name(*answer) << "\n";
  switch (*answer) {
    case SolverAnswer::Valid: return kOk;
    case SolverAnswer::Invalid: return kNegative;
    case SolverAnswer::Unknown: return kResourceOut;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-order modal logic workbench: coalescing translations, models, and a modal prover", "foml"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Options o;

  auto frame_flags = [&](CLI::App* c) {
    const auto frames = CLI::IsMember({"k", "t", "k4", "s4"}, CLI::ignore_case);
    c->add_option("--frame", o.frame, "Frame class of nabla: k, t, k4, s4")->check(frames);
    c->add_option("--prime-frame", o.prime_frame, "Frame class of prime: k, t, k4, s4")->check(frames);
  };
  auto translation_flags = [&](CLI::App* c) {
    c->add_option("--canonical-order", o.order, "Binder order in coalescing keys: innermost or appearance")
        ->capture_default_str()
        ->check(CLI::IsMember({"innermost", "appearance"}));
    c->add_flag("--rewrite-rigid-box", o.rewrite_rigid_box,
                "Rewrite nabla over rigid expressions before translating");
    c->add_option("--bounds", o.bounds, "Also search Kripke countermodels up to universe U and S states (U,S)");
    frame_flags(c);
  };

  auto* coalesce_fol = app.add_subcommand("coalesce-fol", "Translate an obligation to first-order logic");
  coalesce_fol->add_option("file", o.file, "Problem file")->required();
  translation_flags(coalesce_fol);

  auto* coalesce_ml = app.add_subcommand("coalesce-ml", "Translate an obligation to propositional modal logic");
  coalesce_ml->add_option("file", o.file, "Problem file")->required();
  translation_flags(coalesce_ml);

  auto* prove = app.add_subcommand("prove-ml", "Decide a modal sequent (.mlseq) or a coalesced problem");
  prove->add_option("file", o.file, "Problem or ml-sequent file")->required();
  prove->add_option("--max-nodes", o.max_nodes, "Expansion step limit")->capture_default_str();
  frame_flags(prove);

  auto* leibniz = app.add_subcommand("leibniz", "Print the Leibniz positions of every definition");
  leibniz->add_option("file", o.file, "Problem file")->required();

  auto* action = app.add_subcommand("action", "Translate an action formula to first-order logic");
  action->add_option("file", o.file, "Problem file")->required();
  action->add_option("--bounds", o.bounds, "Also search countermodels with functional prime (U,S)");
  action->add_option("--canonical-order", o.order, "Binder order in coalescing keys")
      ->capture_default_str()
      ->check(CLI::IsMember({"innermost", "appearance"}));

  auto* safety = app.add_subcommand("safety", "Write the invariance obligations of a safety specification");
  safety->add_option("file", o.file, "Problem file with vars, init, next, inv, iinv")->required();
  safety->add_option("-d,--dir", o.out_dir, "Output directory")->capture_default_str();
  safety->add_flag("--check", o.check, "Search first-order countermodels of each obligation");
  safety->add_option("--bounds", o.bounds, "Universe bound for --check (U,S; S is ignored)");

  auto* check_model = app.add_subcommand("check-model", "Check that a model satisfies an obligation everywhere");
  check_model->add_option("model", o.model_file, "Model file")->required();
  check_model->add_option("file", o.file, "Problem file")->required();

  auto* fuzz = app.add_subcommand("fuzz", "Check the translation properties on random cases");
  fuzz->add_option("--seed", o.seed, "Run seed")->capture_default_str();
  fuzz->add_option("--iters", o.iters, "Iterations")->capture_default_str();
  fuzz->add_option("--property", o.properties, "Restrict to these properties (repeatable)");
  fuzz->add_option("--replay", o.replay, "Re-run one case seed reported by an earlier run");

  auto* emit = app.add_subcommand("emit", "Emit an obligation for an external prover");
  emit->add_option("file", o.file, "Problem file")->required();
  emit->add_option("--emit", o.emit, "Output format")->required()->check(CLI::IsMember({"smt", "tptp", "mlseq"}));
  emit->add_option("-o,--output", o.output, "Write to this file instead of standard output");
  emit->add_option("--solver", o.solver, "Run this solver on the emitted script");
  emit->add_option("--timeout", o.timeout, "Solver timeout in seconds")->capture_default_str();
  translation_flags(emit);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "foml: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (coalesce_fol->parsed()) return cmd_coalesce_fol(o, out);
    if (coalesce_ml->parsed()) return cmd_coalesce_ml(o, out);
    if (prove->parsed()) return cmd_prove_ml(o, out);
    if (leibniz->parsed()) return cmd_leibniz(o, out);
    if (action->parsed()) return cmd_action(o, out);
    if (safety->parsed()) return cmd_safety(o, out);
    if (check_model->parsed()) return cmd_check_model(o, out);
    if (fuzz->parsed()) return cmd_fuzz(o, out);
    if (emit->parsed()) return cmd_emit(o, out, err);
  } catch (const UsageError& e) {
    err << "foml: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "foml: " << e.what() << "\n";
    return kNoInput;
  } catch (const ParseError& e) {
    err << o.file << ":" << e.what() << "\n";
    return kDataError;
  } catch (const InvariantError& e) {
    err << "foml: internal invariant violated: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "foml: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace foml::cli
