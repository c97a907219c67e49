// Copyright 2026 The gadtparam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "gadtparam/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gadtparam/analyses.hpp"
#include "gadtparam/completion.hpp"
#include "gadtparam/error.hpp"
#include "gadtparam/kernel.hpp"
#include "gadtparam/lifting.hpp"
#include "gadtparam/parser.hpp"
#include "gadtparam/printer.hpp"
#include "gadtparam/relations.hpp"
#include "gadtparam/report.hpp"

namespace gadtparam {

const char *const kSeqSource = R"(data Seq : Set → Set where
  inj : ∀{α} → α → Seq α
  pairing : ∀{α₁ α₂} → Seq α₁ → Seq α₂ → Seq (α₁ × α₂)

let R = rel (Bool × Bool) (Bool × Bool) { eq }
let S = rel (Bool × Bool) (Bool × Bool) { all except ((false, false), (true, true)) }
)";

namespace {

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kType = 3, kCap = 4 };

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string file;
  std::string decl;
  std::string mode = "completion";
  int depth = -1;
  std::string format = "text";
  bool ascii = false;
  bool no_timings = false;
  bool witness = false;
  std::vector<std::string> rels;
  std::string rel2;
  std::string lhs, rhs;
  std::string fun, term;
  std::vector<std::string> funs;
  std::vector<std::string> universe;
  std::vector<std::string> instance;
  std::vector<std::string> extra;
  std::string domain;
  std::string functions = "all";
  std::string candidates = "examples";
  std::string demo;
  std::optional<int> max_carrier, max_depth;
  std::optional<std::int64_t> max_rel_enum;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --ascii: transliterate whatever the printers and input names left behind
std::string to_ascii(const std::string &s) {
  static const std::pair<const char *, const char *> table[] = {
      {"\xCC\x82", "^"}, {"→", "->"}, {"×", "*"}, {"∀", "forall"}, {"⊆", "<="},
      {"─", "-"},         {"α", "a"},  {"β", "b"}, {"γ", "g"},      {"δ", "d"},
      {"ι", "iota"},      {"₀", "0"},  {"₁", "1"}, {"₂", "2"},      {"₃", "3"},
      {"₄", "4"},         {"₅", "5"},  {"₆", "6"}, {"₇", "7"},      {"₈", "8"},
      {"₉", "9"},         {"′", "'"}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (static_cast<unsigned char>(s[i]) < 0x80) {
      out += s[i++];
      continue;
    }
    bool hit = false;
    for (const auto &[from, to] : table) {
      std::string_view f(from);
      if (s.compare(i, f.size(), f) == 0) {
        out += to;
        i += f.size();
        hit = true;
        break;
      }
    }
    if (!hit) out += s[i++];
  }
  return out;
}

Caps resolve_caps(const Options &o) {
  Caps c;
  if (const char *v = std::getenv("GADTPARAM_MAX_REL_ENUM")) {
    try {
      c.max_rel_enum = std::stoll(v);
    } catch (const std::exception &) {
      throw UsageError(fmt::format("GADTPARAM_MAX_REL_ENUM: not a number: {}", v));
    }
  }
  if (o.max_carrier) c.max_carrier = *o.max_carrier;
  if (o.max_depth) c.max_depth = *o.max_depth;
  if (o.max_rel_enum) c.max_rel_enum = *o.max_rel_enum;
  if (c.max_carrier < 1 || c.max_carrier > kHardCaps.max_carrier)
    throw UsageError(fmt::format("max-carrier must be in 1..{}", kHardCaps.max_carrier));
  if (c.max_depth < 0 || c.max_depth > kHardCaps.max_depth)
    throw UsageError(fmt::format("max-depth must be in 0..{}", kHardCaps.max_depth));
  if (c.max_rel_enum < 1 || c.max_rel_enum > kHardCaps.max_rel_enum)
    throw UsageError(fmt::format("max-rel-enum must be in 1..{}", kHardCaps.max_rel_enum));
  return c;
}

// Loaded input plus everything resolved from it.
struct Session {
  const Options &o;
  Env env;
  SourceFile file;
  Scope scope;
  PrintOptions popts;

  Session(const Options &opts, const std::string &text, const std::string &path)
      : o(opts), env(resolve_caps(opts)) {
    popts.ascii = o.ascii;
    file = parse_source(text, env, path);
    for (const auto &it : file.items) {
      if (auto *t = std::get_if<NamedTerm>(&it)) scope.terms.push_back(*t);
      if (auto *r = std::get_if<NamedRel>(&it)) scope.rels.push_back(*r);
    }
  }

  const CheckedDecl &decl() const {
    std::string name = o.decl;
    if (name.empty()) {
      auto ds = file.decls();
      if (ds.size() != 1)
        throw UsageError("--decl is required when the file declares several types");
      name = ds[0].name;
    }
    const CheckedDecl *d = env.find_decl(name);
    if (!d) throw UsageError(fmt::format("unknown declaration {}", name));
    return *d;
  }

  LiftMode mode() const {
    auto m = parse_mode(o.mode);
    if (!m) throw UsageError(fmt::format("unknown mode {}", o.mode));
    return *m;
  }

  int depth(int fallback) const {
    int d = o.depth < 0 ? fallback : o.depth;
    if (d > env.caps().max_depth)
      throw CapError(fmt::format("depth {} exceeds max_depth {}", d, env.caps().max_depth));
    return d;
  }

  // A binding name, a file holding a literal, or an inline literal.
  std::string literal(const std::string &arg) const {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
    return arg;
  }

  template <class F>
  auto parse_arg(const std::string &arg, F parse) const {
    try {
      return parse(literal(arg));
    } catch (const ParseError &e) {
      throw UsageError(fmt::format("in argument '{}': {}", arg, e.what()));
    }
  }

  Term term(const std::string &arg) const {
    if (arg.empty()) throw UsageError("missing term");
    if (auto *t = file.find_term(arg)) return *t;
    return parse_arg(arg, [&](const std::string &t) { return parse_term(t, env, scope); });
  }

  Term fun(const std::string &arg) const {
    if (arg.empty()) throw UsageError("missing function");
    if (auto *t = file.find_term(arg)) {
      if (!t->is(Term::Kind::Fun)) throw CheckError(fmt::format("{} is not a function", arg));
      return *t;
    }
    return parse_arg(arg, [&](const std::string &t) { return parse_fun(t, env, scope); });
  }

  Rel rel(const std::string &arg) const {
    if (arg.empty()) throw UsageError("missing relation");
    if (auto *r = file.find_rel(arg)) return *r;
    if (auto *t = file.find_term(arg); t && t->is(Term::Kind::Fun)) return graph(*t, env);
    return parse_arg(arg, [&](const std::string &t) { return parse_rel(t, env, scope); });
  }

  std::vector<Type> types(const std::vector<std::string> &args) const {
    std::vector<Type> out;
    for (const auto &a : args) out.push_back(parse_type(a, env));
    return out;
  }

  std::string str(const Term &t) const { return to_string(t, popts); }
  std::string str(const Type &t) const { return to_string(t, popts); }
  std::string str(const Rel &r) const { return to_string(r, popts); }
};

struct Output {
  Report report;
  std::string text;
  int code = kOk;
};

std::vector<std::string> type_names(const std::vector<Type> &ts) {
  std::vector<std::string> out;
  for (const auto &t : ts) out.push_back(to_string(t));
  return out;
}

int verdict_code(const std::string &v) {
  if (v == "FAIL") return kViolation;
  if (v == "INCONCLUSIVE") return kCap;
  return kOk;
}

// ---------------------------------------------------------------- commands

Output cmd_check(Session &s) {
  Output out;
  out.report.verdict = "PASS";
  Json decls = Json::array();
  for (const auto &d : s.file.decls()) {
    const CheckedDecl &cd = *s.env.find_decl(d.name);
    out.text += fmt::format("{}: {}, {} constructors, completion {}\n", d.name,
                            cd.is_adt() ? "ADT" : "GADT", cd.ctors.size(),
                            completed_name(d.name));
    decls.push_back({{"name", d.name}, {"adt", cd.is_adt()}, {"constructors", cd.ctors.size()}});
  }
  std::size_t bindings = s.scope.terms.size() + s.scope.rels.size();
  out.text += fmt::format("{} bindings checked\n", bindings);
  out.report.details = {{"decls", decls}, {"bindings", bindings}};
  return out;
}

Output cmd_complete(Session &s) {
  Output out;
  auto cd = complete(s.decl(), s.env);
  out.report.verdict = "PASS";
  out.text = to_string(cd.completed.decl, s.popts);
  Json ctors = Json::array();
  for (const auto &c : cd.ctor_map)
    ctors.push_back({{"original", c.original}, {"completed", c.completed}, {"rewritten", c.rewritten}});
  out.report.details = {{"completed", to_string(cd.completed.decl)}, {"ctor_map", ctors}};
  return out;
}

Output cmd_lift(Session &s) {
  Output out;
  const auto &decl = s.decl();
  auto mode = s.mode();
  out.report.verdict = "PASS";
  if (s.o.rels.empty()) {
    auto rs = derive_rules(decl, mode, s.env);
    out.text = print_rules(rs, s.popts);
    Json rules = Json::array();
    for (const auto &r : rs.rules) rules.push_back({{"ctor", r.ctor}, {"name", r.name}});
    out.report.details = {{"family", rs.family}, {"mode", to_string(mode)}, {"rules", rules}};
    return out;
  }
  if (s.o.rels.size() != 1) throw UsageError("lift --rel takes one relation");
  Rel r = s.rel(s.o.rels[0]);
  Rel lifted = lift_relation(decl, mode, r, s.depth(2), s.env);
  out.text = fmt::format("{}lift ({} mode) at depth {}: {} pairs\n", decl.name(), to_string(mode),
                         s.depth(2), lifted.size());
  for (const auto &[x, y] : lifted.pairs())
    out.text += fmt::format("  {}  ~  {}\n", s.str(x), s.str(y));
  out.report.universe = {to_string(r.src()), to_string(r.tgt())};
  out.report.details = {{"relation", to_json(r)}, {"lifted", to_json(lifted)}};
  return out;
}

Output cmd_relate(Session &s) {
  Output out;
  const auto &decl = s.decl();
  auto mode = s.mode();
  if (s.o.rels.empty()) throw UsageError("relate needs --rel");
  std::vector<Rel> rels;
  for (const auto &a : s.o.rels) rels.push_back(s.rel(a));
  Term x = s.term(s.o.lhs), y = s.term(s.o.rhs);
  Lifter l(decl, mode, s.env);
  auto res = l.check_with_witness(x, y, rels);
  out.report.verdict = to_string(res.verdict);
  out.text = fmt::format("{}\n", to_string(res.verdict));
  if (res.verdict == Verdict::Inconclusive) {
    out.code = kCap;
    if (!res.note.empty()) out.text += res.note + "\n";
  }
  if (res.witness) {
    auto rep = replay(*res.witness, s.env, l.rule_decl());
    if (s.o.witness) {
      out.text += print_witness(*res.witness, s.popts);
      out.text += rep.ok ? "replay: ok\n" : "replay: FAILED " + rep.error + "\n";
    }
    out.report.witnesses.push_back(to_json(*res.witness));
    out.report.details["replay"] = rep.ok;
  }
  for (const auto &r : rels) out.report.universe.push_back(to_string(r.src()));
  out.report.details["mode"] = to_string(mode);
  out.report.details["lhs"] = to_json(x);
  out.report.details["rhs"] = to_json(y);
  return out;
}

Output cmd_enumerate(Session &s) {
  Output out;
  const auto &decl = s.decl();
  auto inst = s.types(s.o.instance);
  if (static_cast<int>(inst.size()) != decl.arity())
    throw UsageError(fmt::format("{} expects {} instance types", decl.name(), decl.arity()));
  auto vs = enumerate_values(decl, inst, s.depth(2), s.env);
  out.report.verdict = "PASS";
  out.report.universe = type_names(inst);
  Json values = Json::array();
  for (const auto &v : vs) {
    out.text += s.str(v) + "\n";
    values.push_back(to_json(v));
  }
  out.report.details = {{"count", vs.size()}, {"values", values}};
  return out;
}

std::string preservation_text(const Session &s, const PreservationReport &rep) {
  std::vector<std::string> us;
  for (const auto &t : rep.universe) us.push_back(s.str(t));
  std::string out = fmt::format("preservation {} ({} mode) depth {} universe {{{}}}\n", rep.decl,
                                to_string(rep.mode), rep.depth, fmt::join(us, ", "));
  out += fmt::format("relations {}, pairs R ⊆ S {}, violations {}, inconclusive {}\n",
                     rep.relations, rep.pairs, rep.violations, rep.inconclusive);
  for (const auto &n : rep.notes) out += "note: " + n + "\n";
  auto show = [&](const PreservationWitness &w) {
    std::string t = fmt::format("  R = {}\n  S = {}\n  x = {}\n  y = {}\n", s.str(w.r),
                                s.str(w.s), s.str(w.x), s.str(w.y));
    t += "  related under R, not under S\n";
    if (w.related_under_r) {
      std::istringstream lines(print_witness(*w.related_under_r, s.popts));
      for (std::string line; std::getline(lines, line);) t += "    " + line + "\n";
    }
    return t;
  };
  for (std::size_t i = 0; i < rep.witnesses.size(); ++i)
    out += fmt::format("witness {}:\n", i + 1) + show(rep.witnesses[i]);
  if (rep.focus) {
    const auto &f = *rep.focus;
    out += fmt::format("focus: R ⊆ S {}, violations {}, inconclusive {}\n",
                       f.r_included ? "yes" : "no", f.violations.size(), f.inconclusive);
    if (f.first) out += show(*f.first);
  }
  out += fmt::format("verdict: {}\n", rep.verdict());
  return out;
}

Json preservation_details(const PreservationReport &rep) {
  Json j = {{"decl", rep.decl},
            {"mode", to_string(rep.mode)},
            {"depth", rep.depth},
            {"relations", rep.relations},
            {"pairs", rep.pairs},
            {"violations", rep.violations},
            {"inconclusive", rep.inconclusive},
            {"notes", rep.notes}};
  if (rep.focus) j["focus"] = to_json(*rep.focus);
  return j;
}

Output preservation_output(const Session &s, const PreservationReport &rep) {
  Output out;
  out.report.verdict = rep.verdict();
  out.report.universe = type_names(rep.universe);
  for (const auto &w : rep.witnesses) out.report.witnesses.push_back(to_json(w));
  out.report.details = preservation_details(rep);
  out.text = preservation_text(s, rep);
  out.code = verdict_code(rep.verdict());
  return out;
}

Output cmd_preservation(Session &s) {
  const auto &decl = s.decl();
  auto universe = s.types(s.o.universe.empty() ? std::vector<std::string>{"Bool"} : s.o.universe);
  PreservationOptions po;
  if (!s.o.rels.empty() || !s.o.rel2.empty()) {
    if (s.o.rels.size() != 1 || s.o.rel2.empty())
      throw UsageError("a focus pair needs both --rel and --rel2");
    po.focus = std::make_pair(s.rel(s.o.rels[0]), s.rel(s.o.rel2));
  }
  auto rep = check_preservation(decl, s.mode(), universe, s.depth(2), s.env, po);
  return preservation_output(s, rep);
}

Output cmd_gmap(Session &s) {
  Output out;
  const auto &decl = s.decl();
  Term f = s.fun(s.o.fun), x = s.term(s.o.term);
  auto res = gmap(decl, f, x, s.env, s.mode());
  out.report.verdict = to_string(res.status);
  out.report.universe = {to_string(f.dom()), to_string(f.cod())};
  out.report.details = to_json(res);
  if (res.witness) out.report.witnesses.push_back(to_json(*res.witness));
  if (res.other_witness) out.report.witnesses.push_back(to_json(*res.other_witness));
  switch (res.status) {
    case GmapStatus::Defined:
      out.text = fmt::format("Defined {}\n", s.str(*res.value));
      break;
    case GmapStatus::Undefined:
      out.text = fmt::format("Undefined ({} candidates)\n", res.candidates);
      break;
    case GmapStatus::NonUnique:
      out.text = fmt::format("NonUnique {} and {}\n", s.str(*res.value), s.str(*res.other));
      out.code = kViolation;
      break;
    case GmapStatus::Inconclusive:
      out.text = fmt::format("Inconclusive {}\n", res.note);
      out.code = kCap;
      break;
  }
  if (s.o.witness) {
    if (res.witness) out.text += print_witness(*res.witness, s.popts);
    if (res.other_witness) out.text += print_witness(*res.other_witness, s.popts);
  }
  return out;
}

std::vector<Term> all_functions(const Type &a, const Type &b, const Env &env) {
  auto dom = carrier(a, env), cod = carrier(b, env);
  double count = 1;
  for (std::size_t i = 0; i < dom.size(); ++i) count *= static_cast<double>(cod.size());
  if (count > static_cast<double>(env.caps().max_rel_enum))
    throw CapError(fmt::format("{} functions {} → {} exceed max_rel_enum", count,
                               to_string(a), to_string(b)));
  std::vector<Term> out;
  if (cod.empty() && !dom.empty()) return out;
  std::vector<std::size_t> idx(dom.size(), 0);
  while (true) {
    std::vector<Term::Row> rows;
    for (std::size_t i = 0; i < dom.size(); ++i) rows.emplace_back(dom[i], cod[idx[i]]);
    out.push_back(Term::fun(a, b, std::move(rows)));
    std::size_t p = dom.size();
    while (p > 0 && ++idx[p - 1] == cod.size()) idx[--p] = 0;
    if (p == 0) break;
  }
  return out;
}

// f₁ × f₂ for all endofunctions of the components.
std::vector<Term> product_functions(const Type &a, const Env &env) {
  if (!a.is(Type::Kind::Prod)) throw UsageError("--functions product needs a product domain");
  std::vector<Term> out;
  auto dom = carrier(a, env);
  for (const auto &f1 : all_functions(a.left(), a.left(), env))
    for (const auto &f2 : all_functions(a.right(), a.right(), env)) {
      std::vector<Term::Row> rows;
      for (const auto &v : dom)
        rows.emplace_back(v, Term::pair(*f1.apply(v.first()), *f2.apply(v.second())));
      out.push_back(Term::fun(a, a, std::move(rows)));
    }
  return out;
}

Output cmd_graphlemma(Session &s) {
  Output out;
  const auto &decl = s.decl();
  std::vector<Term> fs;
  for (const auto &f : s.o.funs) fs.push_back(s.fun(f));
  if (fs.empty()) {
    if (s.o.domain.empty()) throw UsageError("graphlemma needs --fun or --domain");
    Type a = parse_type(s.o.domain, s.env);
    if (s.o.functions == "all")
      fs = all_functions(a, a, s.env);
    else if (s.o.functions == "product")
      fs = product_functions(a, s.env);
    else
      throw UsageError(fmt::format("unknown function universe {}", s.o.functions));
  }
  std::vector<Term> extra;
  for (const auto &e : s.o.extra) extra.push_back(s.term(e));
  auto rep = check_graph_lemma(decl, fs, s.depth(2), s.env, extra);
  std::string verdict = rep.passed() ? "PASS" : rep.nonunique || rep.map_mismatches ? "FAIL"
                                                                                     : "INCONCLUSIVE";
  out.report.verdict = verdict;
  std::set<std::string> doms;
  for (const auto &f : fs) doms.insert(to_string(f.dom()));
  out.report.universe.assign(doms.begin(), doms.end());
  out.text = fmt::format(
      "graph lemma {} depth {}: {} functions, {} cases, {} defined, {} undefined, {} non-unique, "
      "{} inconclusive",
      rep.decl, rep.depth, rep.functions, rep.checked, rep.defined, rep.undefined, rep.nonunique,
      rep.inconclusive);
  if (decl.is_adt()) out.text += fmt::format(", {} map mismatches", rep.map_mismatches);
  out.text += "\n";
  for (const auto &n : rep.notes) out.text += "note: " + n + "\n";
  for (const auto &c : rep.failures) {
    out.text += fmt::format("  f = {}\n  x = {}\n  {}\n", s.str(c.f), s.str(c.x),
                            to_string(c.result.status));
    Json w = {{"f", to_json(c.f)}, {"x", to_json(c.x)}, {"result", to_json(c.result)}};
    if (c.expected) w["expected"] = to_json(*c.expected);
    out.report.witnesses.push_back(w);
  }
  out.text += fmt::format("verdict: {}\n", verdict);
  out.report.details = {{"decl", rep.decl},           {"depth", rep.depth},
                        {"functions", rep.functions}, {"checked", rep.checked},
                        {"defined", rep.defined},     {"undefined", rep.undefined},
                        {"nonunique", rep.nonunique}, {"inconclusive", rep.inconclusive},
                        {"map_mismatches", rep.map_mismatches}};
  out.code = verdict_code(verdict);
  return out;
}

Output cmd_mappable(Session &s) {
  Output out;
  Term f = s.fun(s.o.fun), x = s.term(s.o.term);
  auto res = mappable_structural(s.decl(), f, x, s.env);
  out.report.verdict = res.mappable ? "Defined" : "NotMappable";
  out.report.universe = {to_string(f.dom()), to_string(f.cod())};
  out.report.details = {{"mappable", res.mappable}, {"reason", res.reason}};
  if (res.result) out.report.details["value"] = to_json(*res.result);
  out.text = res.mappable ? fmt::format("Defined {}\n", s.str(*res.result))
                          : fmt::format("NotMappable: {}\n", res.reason);
  return out;
}

std::string free_theorem_text(const Session &s, const FreeTheoremReport &r) {
  std::string t = fmt::format("{}: {} ({} audited)\n", r.candidate, to_string(r.verdict), r.audited);
  if (r.failure) {
    const auto &f = *r.failure;
    t += fmt::format("  phase 1 fails{}: R = {}\n  a = {}, b = {}\n  f a = {}\n  f b = {}\n",
                     f.delta_instance ? " at a δ instance" : "", s.str(f.r), s.str(f.a),
                     s.str(f.b), s.str(f.fa), s.str(f.fb));
  }
  if (r.counterexample)
    t += fmt::format("  f {} = {} does not contain only {}\n", s.str(r.counterexample->first),
                     s.str(r.counterexample->second), s.str(r.counterexample->first));
  if (!r.note.empty()) t += "  note: " + r.note + "\n";
  return t;
}

Output cmd_freetheorem(Session &s) {
  Output out;
  const auto &seq = s.decl();
  if (s.o.candidates == "examples") {
    bool violated = false, inconclusive = false;
    std::set<std::string> us;
    for (const auto &c : example_candidates(seq, s.env)) {
      auto r = check_free_theorem(seq, c, s.env);
      out.text += free_theorem_text(s, r);
      violated |= r.verdict == FreeTheoremVerdict::Violated;
      inconclusive |= r.verdict == FreeTheoremVerdict::Inconclusive;
      for (const auto &t : c.universe()) us.insert(to_string(t));
      out.report.witnesses.push_back(to_json(r));
    }
    out.report.universe.assign(us.begin(), us.end());
    out.report.verdict = violated ? "FAIL" : inconclusive ? "INCONCLUSIVE" : "PASS";
  } else if (s.o.candidates == "sweep") {
    auto universe =
        s.types(s.o.universe.empty() ? std::vector<std::string>{"Unit", "Bool"} : s.o.universe);
    int depth = s.depth(1);
    auto sw = sweep_free_theorem(seq, universe, depth, s.env);
    out.report.universe = type_names(universe);
    out.report.verdict = !sw.violations.empty() ? "FAIL" : sw.inconclusive ? "INCONCLUSIVE" : "PASS";
    out.text = fmt::format(
        "sweep depth {}: {} candidates, {} parametric, {} satisfy contains_only, {} inconclusive\n",
        depth, sw.candidates, sw.parametric, sw.conclusion_holds, sw.inconclusive);
    for (const auto &v : sw.violations) {
      out.text += free_theorem_text(s, v);
      out.report.witnesses.push_back(to_json(v));
    }
    out.report.details = {{"candidates", sw.candidates},
                          {"parametric", sw.parametric},
                          {"conclusion_holds", sw.conclusion_holds},
                          {"inconclusive", sw.inconclusive}};
  } else {
    throw UsageError(fmt::format("unknown candidate set {}", s.o.candidates));
  }
  out.text += fmt::format("verdict: {}\n", out.report.verdict);
  out.code = verdict_code(out.report.verdict);
  return out;
}

Output cmd_demo(Session &s) {
  const auto &seq = *s.env.find_decl("Seq");
  Type bb = Type::prod(Type::boolean(), Type::boolean());
  PreservationOptions po;
  po.focus = std::make_pair(*s.file.find_rel("R"), *s.file.find_rel("S"));
  po.max_witnesses = 1;
  auto naive = check_preservation(seq, LiftMode::Naive, {bb}, 2, s.env, po);
  auto fixed = check_preservation(seq, LiftMode::Completion, {bb}, 2, s.env, po);
  Output out = preservation_output(s, naive);
  out.text += "\n" + preservation_text(s, fixed);
  out.report.details = {{"naive", preservation_details(naive)},
                        {"completion", preservation_details(fixed)}};
  out.report.verdict = naive.verdict() == "FAIL" && fixed.passed() ? "FAIL" : "INCONCLUSIVE";
  out.code = verdict_code(out.report.verdict);
  return out;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Relational liftings and parametricity checks for GADTs", "gadtparam"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--ascii", o.ascii, "ASCII output");
  app.add_flag("--no-timings", o.no_timings, "omit timings from JSON");
  app.add_option("--max-carrier", o.max_carrier);
  app.add_option("--max-depth", o.max_depth);
  app.add_option("--max-rel-enum", o.max_rel_enum);

  struct Cmd {
    CLI::App *app;
    Output (*run)(Session &);
  };
  std::vector<Cmd> cmds;
  auto sub = [&](const char *name, const char *help, Output (*run)(Session &)) {
    auto *c = app.add_subcommand(name, help);
    c->add_option("file", o.file, ".gadt source")->required();
    cmds.push_back({c, run});
    return c;
  };
  auto decl = [&](CLI::App *c) { c->add_option("--decl", o.decl, "declaration"); };
  auto mode = [&](CLI::App *c) {
    c->add_option("--mode", o.mode, "naive or completion")
        ->check(CLI::IsMember({"naive", "completion"}));
  };
  auto depth = [&](CLI::App *c) { c->add_option("--depth", o.depth, "recursion depth"); };

  sub("check", "parse and check a file", cmd_check);
  decl(sub("complete", "print the completion of a declaration", cmd_complete));
  {
    auto *c = sub("lift", "print lifting rules, or a lifted relation with --rel", cmd_lift);
    decl(c), mode(c), depth(c);
    c->add_option("--rel", o.rels, "relation");
    c->add_flag("--print-rules", "print the rules (default)");
  }
  {
    auto *c = sub("relate", "decide whether two values are related", cmd_relate);
    decl(c), mode(c);
    c->add_option("--rel", o.rels, "relation, one per index")->required();
    c->add_option("--lhs", o.lhs)->required();
    c->add_option("--rhs", o.rhs)->required();
    c->add_flag("--witness", o.witness, "print the derivation");
  }
  {
    auto *c = sub("enumerate", "list values up to a depth", cmd_enumerate);
    decl(c), depth(c);
    c->add_option("--instance", o.instance, "instance types")->delimiter(',')->required();
  }
  {
    auto *c = sub("preservation", "check that lifting preserves inclusion", cmd_preservation);
    decl(c), mode(c), depth(c);
    c->add_option("--universe", o.universe, "types")->delimiter(',');
    c->add_option("--rel", o.rels, "focus R");
    c->add_option("--rel2", o.rel2, "focus S");
  }
  {
    auto *c = sub("gmap", "map through the graph of a function", cmd_gmap);
    decl(c), mode(c);
    c->add_option("--fun", o.fun)->required();
    c->add_option("--term", o.term)->required();
    c->add_flag("--witness", o.witness, "print the derivation");
  }
  {
    auto *c = sub("graphlemma", "check that liftings of graphs are graphs", cmd_graphlemma);
    decl(c), depth(c);
    c->add_option("--fun", o.funs, "functions");
    c->add_option("--domain", o.domain, "domain type when no --fun is given");
    c->add_option("--functions", o.functions, "all or product")
        ->check(CLI::IsMember({"all", "product"}));
    c->add_option("--extra", o.extra, "additional values");
  }
  {
    auto *c = sub("mappable", "structural mappability over Seq", cmd_mappable);
    decl(c);
    c->add_option("--fun", o.fun)->required();
    c->add_option("--term", o.term)->required();
  }
  {
    auto *c = sub("freetheorem", "audit ∀α. α → Seq α candidates", cmd_freetheorem);
    decl(c), depth(c);
    c->add_option("--candidates", o.candidates, "examples or sweep")
        ->check(CLI::IsMember({"examples", "sweep"}));
    c->add_option("--universe", o.universe, "types for the sweep")->delimiter(',');
  }
  auto *demo = app.add_subcommand("demo", "naive lifting fails, completion repairs it");
  demo->add_option("name", o.demo)->required()->check(CLI::IsMember({"counterexample"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::string path = o.file.empty() ? "<demo>" : o.file;
  try {
    auto t0 = std::chrono::steady_clock::now();
    std::string text = demo->parsed() ? kSeqSource : read_file(o.file);
    Session s(o, text, path);
    Output result;
    if (demo->parsed()) {
      result = cmd_demo(s);
      result.report.command = "demo";
    } else {
      for (const auto &c : cmds)
        if (c.app->parsed()) {
          result = c.run(s);
          result.report.command = c.app->get_name();
        }
    }
    result.report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::string text_out = o.format == "json" ? to_json(result.report, !o.no_timings).dump(2) + "\n"
                                              : result.text;
    out << (o.ascii ? to_ascii(text_out) : text_out);
    return result.code;
  } catch (const ParseError &e) {
    err << fmt::format("{}:{}:{}: error: {}\n", path, e.pos().line, e.pos().column, e.message());
    return kUsage;
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CheckError &e) {
    for (const auto &d : e.diagnostics()) err << path << ": error: " << d << "\n";
    return kType;
  } catch (const CapError &e) {
    err << "inconclusive: " << e.what() << "\n";
    return kCap;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kType;
  }
}

}  // namespace gadtparam
