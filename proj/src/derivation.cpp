#include "spacekam/derivation.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <unordered_map>

namespace spacekam {

namespace {

struct RuleName {
  Rule rule;
  std::string_view name;
};

constexpr std::array<RuleName, 15> kRuleNames{{
    {Rule::TVar, "T-Var"},
    {Rule::TLamStar, "T-lambda*"},
    {Rule::TLam1, "T-lambda1"},
    {Rule::TLam2, "T-lambda2"},
    {Rule::TMany, "T-many"},
    {Rule::TNone, "T-none"},
    {Rule::TApp1, "T-@1"},
    {Rule::TApp2, "T-@2"},
    {Rule::TEnv, "T-env"},
    {Rule::TCl, "T-cl"},
    {Rule::TSt, "T-st"},
    {Rule::DC_TVar, "DC-Var"},
    {Rule::DC_TLam, "DC-lambda"},
    {Rule::DC_TLamStar, "DC-lambda*"},
    {Rule::DC_TApp, "DC-@"},
}};

}  // namespace

std::string_view to_string(Rule r) {
  for (const auto& rn : kRuleNames) {
    if (rn.rule == r) return rn.name;
  }
  return "?";
}

std::optional<Rule> rule_from_string(std::string_view s) {
  for (const auto& rn : kRuleNames) {
    if (rn.name == s) return rn.rule;
  }
  return std::nullopt;
}

bool is_plain_rule(Rule r) {
  return r == Rule::DC_TVar || r == Rule::DC_TLam || r == Rule::DC_TLamStar || r == Rule::DC_TApp;
}

DerivPtr make_derivation(Rule rule, Judgment conclusion, std::vector<DerivPtr> premises) {
  return std::make_shared<const Derivation>(
      Derivation{rule, std::move(conclusion), std::move(premises)});
}

std::string_view subject_kind(const Subject& s) {
  switch (s.index()) {
    case 0: return "term";
    case 1: return "env";
    case 2: return "closure";
    default: return "state";
  }
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Space: return "space";
    case Mode::Time: return "time";
    case Mode::Kam: return "kam";
  }
  return "?";
}

std::optional<Mode> mode_from_string(std::string_view s) {
  if (s == "space") return Mode::Space;
  if (s == "time") return Mode::Time;
  if (s == "kam") return Mode::Kam;
  return std::nullopt;
}

const TermPtr* subject_term(const Judgment& j) { return std::get_if<TermPtr>(&j.subject); }
const TypeContext* indexed_context(const Judgment& j) { return std::get_if<TypeContext>(&j.context); }
const PlainContext* plain_context(const Judgment& j) { return std::get_if<PlainContext>(&j.context); }
const LinearPtr* linear_type(const Judgment& j) { return std::get_if<LinearPtr>(&j.assigned); }
const ClosureMulti* closure_type(const Judgment& j) { return std::get_if<ClosureMulti>(&j.assigned); }
const TypeContext* env_type(const Judgment& j) { return std::get_if<TypeContext>(&j.assigned); }
const PlainPtr* plain_type(const Judgment& j) { return std::get_if<PlainPtr>(&j.assigned); }

std::uint64_t rule_weight(const Derivation& node, Mode mode,
                          const std::vector<std::uint64_t>& pw) {
  const Rule r = node.rule;
  if ((mode == Mode::Kam) != is_plain_rule(r)) {
    throw InvalidDerivation(std::string(to_string(r)) + " is not a rule of " +
                            std::string(to_string(mode)) + " mode");
  }
  auto sum = [&] {
    std::uint64_t s = 0;
    for (auto w : pw) s = checked_add(s, w);
    return s;
  };
  auto max = [&] {
    std::uint64_t m = 0;
    for (auto w : pw) m = std::max(m, w);
    return m;
  };
  switch (r) {
    case Rule::DC_TVar: return 1;
    case Rule::DC_TLamStar: return 0;
    case Rule::DC_TLam:
    case Rule::DC_TApp: return checked_add(sum(), 1);
    case Rule::TNone: return 0;
    case Rule::TMany:
    case Rule::TEnv:
    case Rule::TCl:
    case Rule::TSt: return mode == Mode::Space ? max() : sum();
    default: break;
  }
  // Term rules: the state size the judgment stands for is |Gamma| + |A|.
  const TypeContext* g = indexed_context(node.conclusion);
  const LinearPtr* a = linear_type(node.conclusion);
  if (!g || !a || !*a) throw InvalidDerivation("term rule without an indexed judgment");
  const std::uint64_t here = checked_add(size_context(*g), (*a)->size());
  if (mode == Mode::Time) {
    if (r == Rule::TVar || r == Rule::TLamStar) return here;
    return checked_add(sum(), here);
  }
  switch (r) {
    case Rule::TVar: return here;
    case Rule::TLamStar: return size_context(*g);
    case Rule::TLam2: return std::max(max(), here);
    default: return max();
  }
}

namespace {

struct RuleFailure {
  std::string message;
};

void require(bool cond, const std::string& message) {
  if (!cond) throw RuleFailure{message};
}

bool same_term(const TermPtr& a, const TermPtr& b) { return a == b || syntactic_eq(*a, *b); }

bool same_closure(const ClosurePtr& a, const ClosurePtr& b) {
  return a == b || closure_equal(*a, *b);
}

template <class Ctx>
VarSet domain(const Ctx& g) {
  VarSet out;
  for (const auto& kv : g) out.insert(kv.first);
  return out;
}

class Checker {
 public:
  Checker(Mode mode, bool full) : mode_(mode), full_(full) {}

  std::uint64_t visit(const Derivation& d, const std::string& path) {
    auto it = memo_.find(&d);
    if (it != memo_.end()) return it->second;
    std::vector<std::uint64_t> pw;
    pw.reserve(d.premises.size());
    bool broken = false;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      if (!d.premises[i]) {
        errors_.push_back({path, "missing premise " + std::to_string(i)});
        pw.push_back(0);
        broken = true;
        continue;
      }
      pw.push_back(visit(*d.premises[i], path + "." + std::to_string(i)));
    }
    std::uint64_t w = d.conclusion.weight;
    if (broken || (!full_ && !errors_.empty())) return w;
    try {
      require((mode_ == Mode::Kam) == is_plain_rule(d.rule),
              std::string(to_string(d.rule)) + " is not a rule of " + std::string(to_string(mode_)) +
                  " mode");
      if (is_plain_rule(d.rule)) {
        plain(d);
      } else {
        indexed(d);
      }
      w = rule_weight(d, mode_, pw);
      if (w != d.conclusion.weight) {
        errors_.push_back({path, std::string(to_string(d.rule)) + ": stored weight " +
                                     std::to_string(d.conclusion.weight) + ", recomputed " +
                                     std::to_string(w)});
      }
    } catch (const RuleFailure& f) {
      errors_.push_back({path, std::string(to_string(d.rule)) + ": " + f.message});
    } catch (const Error& e) {
      errors_.push_back({path, std::string(to_string(d.rule)) + ": " + e.what()});
    } catch (const std::overflow_error& e) {
      errors_.push_back({path, std::string(to_string(d.rule)) + ": " + e.what()});
    }
    memo_.emplace(&d, w);
    return w;
  }

  std::vector<CheckError> take_errors() { return std::move(errors_); }

 private:
  // Side conditions of the closure type system and of the machine rules.
  void indexed(const Derivation& d) {
    const Judgment& j = d.conclusion;
    const auto& ps = d.premises;
    auto arity = [&](std::size_t n) {
      require(ps.size() == n, "expected " + std::to_string(n) + " premises, got " +
                                  std::to_string(ps.size()));
    };
    const Rule r = d.rule;
    if (r == Rule::TEnv || r == Rule::TCl || r == Rule::TSt) {
      const TypeContext* g = indexed_context(j);
      require(g && g->empty(), "machine judgments have an empty context");
      machine(d);
      return;
    }
    const TermPtr* tp = subject_term(j);
    require(tp != nullptr, "subject must be a term");
    const TermPtr& t = *tp;
    const TypeContext* gp = indexed_context(j);
    require(gp != nullptr, "context must be indexed");
    const TypeContext& g = *gp;
    require(domain(g) == t->free_vars(), "dom of context differs from fv of " + print_term(*t));

    auto term_premise = [&](std::size_t i, const TermPtr& expect) -> const Judgment& {
      const Judgment& pj = ps[i]->conclusion;
      const TermPtr* pt = subject_term(pj);
      require(pt && same_term(*pt, expect), "premise " + std::to_string(i) + " types the wrong term");
      require(indexed_context(pj) != nullptr, "premise " + std::to_string(i) + " lacks an indexed context");
      return pj;
    };
    auto linear_premise = [&](const Judgment& pj) -> const LinearType& {
      const LinearPtr* a = linear_type(pj);
      require(a && *a, "premise must assign a linear type");
      return **a;
    };

    if (r == Rule::TMany || r == Rule::TNone) {
      const ClosureMulti* m = closure_type(j);
      require(m != nullptr, "assigned type must be a closure multi type");
      require(m->index() == 1 + size_context(g), "index " + std::to_string(m->index()) +
                                                     " differs from 1 + |context| = " +
                                                     std::to_string(1 + size_context(g)));
      if (r == Rule::TNone) {
        arity(0);
        require(m->is_empty(), "T-none assigns an empty multi type");
        require(is_dry(g), "context is not dry");
        return;
      }
      require(!ps.empty(), "T-many needs at least one premise");
      arity(m->elems().size());
      std::vector<LinearPtr> types;
      TypeContext u;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const Judgment& pj = term_premise(i, t);
        linear_premise(pj);
        types.push_back(std::get<LinearPtr>(pj.assigned));
        const TypeContext& pg = *indexed_context(pj);
        require(summable(u, pg), "premise contexts are not summable");
        u = context_union(u, pg);
      }
      require(ClosureMulti(types, m->index()) == *m, "premise types differ from the multi type");
      require(context_equal(u, g), "context is not the union of the premise contexts");
      return;
    }

    const LinearPtr* ap = linear_type(j);
    require(ap && *ap, "assigned type must be linear");
    const LinearType& a = **ap;
    switch (r) {
      case Rule::TVar: {
        arity(0);
        const Var* x = t->as_var();
        require(x != nullptr, "subject must be a variable");
        auto it = g.find(x->name);
        require(g.size() == 1 && it != g.end(), "context must bind exactly the variable");
        require(it->second.elems().size() == 1 && type_eq(*it->second.elems()[0], a),
                "context type is not [A]^k for the assigned A");
        return;
      }
      case Rule::TLamStar: {
        arity(0);
        require(t->is_abs(), "subject must be an abstraction");
        require(a.is_star(), "assigned type must be *");
        require(is_dry(g), "context is not dry");
        return;
      }
      case Rule::TLam1:
      case Rule::TLam2: {
        arity(1);
        const Abs* abs = t->as_abs();
        require(abs != nullptr, "subject must be an abstraction");
        const ArrowT* arr = a.as_arrow();
        require(arr != nullptr, "assigned type must be an arrow");
        const Judgment& pj = term_premise(0, abs->body);
        require(type_eq(linear_premise(pj), *arr->res), "premise type differs from the arrow result");
        const TypeContext& pg = *indexed_context(pj);
        if (r == Rule::TLam1) {
          auto it = pg.find(abs->binder);
          require(it != pg.end(), "binder missing from the premise context");
          require(it->second == arr->arg, "binder type differs from the arrow argument");
          TypeContext rest = pg;
          rest.erase(abs->binder);
          require(context_equal(rest, g), "context differs from the premise context without the binder");
        } else {
          require(arr->arg.is_empty(), "T-lambda2 assigns []^k -> A");
          require(!pg.contains(abs->binder), "binder occurs in the premise context");
          require(context_equal(pg, g), "context differs from the premise context");
        }
        return;
      }
      case Rule::TApp1:
      case Rule::TApp2: {
        const App* app = t->as_app();
        require(app != nullptr, "subject must be an application");
        const Var* xv = app->arg->as_var();
        arity(r == Rule::TApp1 ? 2 : 1);
        if (r == Rule::TApp1) {
          require(xv == nullptr, "T-@1 requires a non-variable argument");
        } else {
          require(xv != nullptr, "T-@2 requires a variable argument");
        }
        const Judgment& fj = term_premise(0, app->fun);
        const ArrowT* arr = linear_premise(fj).as_arrow();
        require(arr != nullptr, "function premise must have an arrow type");
        require(type_eq(*arr->res, a), "arrow result differs from the assigned type");
        TypeContext other;
        if (r == Rule::TApp1) {
          const Judgment& uj = term_premise(1, app->arg);
          const ClosureMulti* m = closure_type(uj);
          require(m != nullptr, "argument premise must assign a closure multi type");
          require(*m == arr->arg, "argument type differs from the arrow argument");
          other = *indexed_context(uj);
        } else {
          other.emplace(xv->name, arr->arg);
        }
        const TypeContext& fg = *indexed_context(fj);
        require(summable(fg, other), "premise contexts are not summable");
        require(context_equal(context_union(fg, other), g), "context is not the union of the premises");
        return;
      }
      default: require(false, "unexpected rule");
    }
  }

  void machine(const Derivation& d) {
    const Judgment& j = d.conclusion;
    const auto& ps = d.premises;
    switch (d.rule) {
      case Rule::TEnv: {
        const Env* e = std::get_if<Env>(&j.subject);
        require(e != nullptr, "subject must be an environment");
        const TypeContext* g = env_type(j);
        require(g != nullptr, "assigned type must be a type context");
        auto entries = e->entries();
        VarSet names;
        for (const auto& en : entries) {
          require(names.insert(en.var).second, "environment binds " + en.var + " twice");
        }
        require(names == domain(*g), "dom of the type context differs from dom of the environment");
        require(ps.size() == entries.size(), "one premise per environment entry expected");
        for (std::size_t i = 0; i < entries.size(); ++i) {
          const Judgment& pj = ps[i]->conclusion;
          const ClosurePtr* c = std::get_if<ClosurePtr>(&pj.subject);
          require(c && same_closure(*c, entries[i].closure),
                  "premise " + std::to_string(i) + " does not type e(" + entries[i].var + ")");
          const ClosureMulti* m = closure_type(pj);
          require(m && *m == g->at(entries[i].var),
                  "premise " + std::to_string(i) + " type differs from the context entry");
        }
        return;
      }
      case Rule::TCl: {
        const ClosurePtr* c = std::get_if<ClosurePtr>(&j.subject);
        require(c && *c, "subject must be a closure");
        const ClosureMulti* m = closure_type(j);
        require(m != nullptr, "assigned type must be a closure multi type");
        require(ps.size() == 2, "T-cl has an environment and a term premise");
        const Judgment& ej = ps[0]->conclusion;
        const Env* e = std::get_if<Env>(&ej.subject);
        require(e && env_equal(*e, (*c)->env), "premise 0 does not type the closure environment");
        const TypeContext* g = env_type(ej);
        require(g != nullptr, "premise 0 must assign a type context");
        const Judgment& tj = ps[1]->conclusion;
        const TermPtr* t = subject_term(tj);
        require(t && same_term(*t, (*c)->code), "premise 1 does not type the closure code");
        const TypeContext* tg = indexed_context(tj);
        require(tg && context_equal(*tg, *g), "term context differs from the environment type");
        const ClosureMulti* tm = closure_type(tj);
        require(tm && *tm == *m, "term type differs from the closure type");
        return;
      }
      case Rule::TSt: {
        const MachState* s = std::get_if<MachState>(&j.subject);
        require(s != nullptr, "subject must be a state");
        const LinearPtr* a = linear_type(j);
        require(a && *a && (*a)->is_star(), "states are typed *");
        auto items = s->stack.items();
        require(ps.size() == 2 + items.size(), "T-st has term, environment and one premise per stack item");
        const Judgment& tj = ps[0]->conclusion;
        const TermPtr* t = subject_term(tj);
        require(t && same_term(*t, s->code), "premise 0 does not type the code");
        const TypeContext* tg = indexed_context(tj);
        const LinearPtr* ta = linear_type(tj);
        require(tg && ta && *ta, "premise 0 must be an indexed linear judgment");
        const Judgment& ej = ps[1]->conclusion;
        const Env* e = std::get_if<Env>(&ej.subject);
        require(e && env_equal(*e, s->env), "premise 1 does not type the environment");
        const TypeContext* g = env_type(ej);
        require(g && context_equal(*g, *tg), "environment type differs from the term context");
        const LinearType* cur = ta->get();
        for (std::size_t i = 0; i < items.size(); ++i) {
          const ArrowT* arr = cur->as_arrow();
          require(arr != nullptr, "code type has fewer arrows than stack items");
          const Judgment& cj = ps[2 + i]->conclusion;
          const ClosurePtr* c = std::get_if<ClosurePtr>(&cj.subject);
          require(c && same_closure(*c, items[i]),
                  "premise " + std::to_string(2 + i) + " does not type stack item " + std::to_string(i));
          const ClosureMulti* m = closure_type(cj);
          require(m && *m == arr->arg,
                  "stack item " + std::to_string(i) + " type differs from the arrow argument");
          cur = arr->res.get();
        }
        require(cur->is_star(), "code type does not end in * after the stack");
        return;
      }
      default: require(false, "unexpected rule");
    }
  }

  void plain(const Derivation& d) {
    const Judgment& j = d.conclusion;
    const auto& ps = d.premises;
    const TermPtr* tp = subject_term(j);
    require(tp != nullptr, "subject must be a term");
    const TermPtr& t = *tp;
    const PlainContext* gp = plain_context(j);
    require(gp != nullptr, "context must be unindexed");
    const PlainContext& g = *gp;
    for (const auto& [x, m] : g) {
      require(!m.is_empty(), "context maps " + x + " to []");
      require(t->free_vars().contains(x), "context binds " + x + ", not free in the subject");
    }
    const PlainPtr* ap = plain_type(j);
    require(ap && *ap, "assigned type must be an unindexed linear type");
    const PlainType& a = **ap;
    auto premise = [&](std::size_t i, const TermPtr& expect) -> const Judgment& {
      const Judgment& pj = ps[i]->conclusion;
      const TermPtr* pt = subject_term(pj);
      require(pt && same_term(*pt, expect), "premise " + std::to_string(i) + " types the wrong term");
      require(plain_context(pj) && plain_type(pj) && *plain_type(pj),
              "premise " + std::to_string(i) + " is not an unindexed judgment");
      return pj;
    };
    switch (d.rule) {
      case Rule::DC_TVar: {
        require(ps.empty(), "DC-Var has no premises");
        const Var* x = t->as_var();
        require(x != nullptr, "subject must be a variable");
        auto it = g.find(x->name);
        require(g.size() == 1 && it != g.end(), "context must bind exactly the variable");
        require(it->second.elems().size() == 1 && compare(*it->second.elems()[0], a) == 0,
                "context type is not [A] for the assigned A");
        return;
      }
      case Rule::DC_TLamStar: {
        require(ps.empty(), "DC-lambda* has no premises");
        require(t->is_abs(), "subject must be an abstraction");
        require(g.empty(), "context must be empty");
        require(a.is_star(), "assigned type must be *");
        return;
      }
      case Rule::DC_TLam: {
        require(ps.size() == 1, "DC-lambda has one premise");
        const Abs* abs = t->as_abs();
        require(abs != nullptr, "subject must be an abstraction");
        const PlainArrow* arr = a.as_arrow();
        require(arr != nullptr, "assigned type must be an arrow");
        const Judgment& pj = premise(0, abs->body);
        require(compare(**plain_type(pj), *arr->res) == 0, "premise type differs from the arrow result");
        PlainContext pg = *plain_context(pj);
        auto it = pg.find(abs->binder);
        MultiType bound = it == pg.end() ? MultiType{} : it->second;
        require(bound == arr->arg, "binder type differs from the arrow argument");
        pg.erase(abs->binder);
        require(context_equal(pg, g), "context differs from the premise context without the binder");
        return;
      }
      case Rule::DC_TApp: {
        require(!ps.empty(), "DC-@ needs a function premise");
        const App* app = t->as_app();
        require(app != nullptr, "subject must be an application");
        const Judgment& fj = premise(0, app->fun);
        const PlainArrow* arr = (*plain_type(fj))->as_arrow();
        require(arr != nullptr, "function premise must have an arrow type");
        require(compare(*arr->res, a) == 0, "arrow result differs from the assigned type");
        require(ps.size() == 1 + arr->arg.elems().size(), "one argument premise per arrow argument expected");
        PlainContext u = *plain_context(fj);
        std::vector<PlainPtr> types;
        for (std::size_t i = 1; i < ps.size(); ++i) {
          const Judgment& uj = premise(i, app->arg);
          types.push_back(*plain_type(uj));
          u = context_union(u, *plain_context(uj));
        }
        require(MultiType(types) == arr->arg, "argument premise types differ from the arrow argument");
        require(context_equal(u, g), "context is not the union of the premise contexts");
        return;
      }
      default: require(false, "unexpected rule");
    }
  }

  Mode mode_;
  bool full_;
  std::vector<CheckError> errors_;
  std::unordered_map<const Derivation*, std::uint64_t> memo_;
};

}  // namespace

CheckResult check(const DerivPtr& pi, Mode mode, bool full_scan) {
  CheckResult res;
  if (!pi) {
    res.ok = false;
    res.errors.push_back({"$", "empty derivation"});
    return res;
  }
  Checker c(mode, full_scan);
  res.weight = c.visit(*pi, "$");
  res.errors = c.take_errors();
  res.ok = res.errors.empty();
  return res;
}

std::uint64_t weight_of(const DerivPtr& pi, Mode mode) {
  CheckResult r = check(pi, mode);
  if (!r.ok) throw InvalidDerivation(r.errors.front().path + ": " + r.errors.front().message);
  return r.weight;
}

std::uint64_t size_of(const DerivPtr& pi) {
  std::unordered_map<const Derivation*, std::uint64_t> memo;
  auto go = [&](auto&& self, const Derivation& d) -> std::uint64_t {
    auto it = memo.find(&d);
    if (it != memo.end()) return it->second;
    std::uint64_t n =
        (d.rule == Rule::TMany || d.rule == Rule::TNone || d.rule == Rule::TCl || d.rule == Rule::TEnv)
            ? 0
            : 1;
    for (const auto& p : d.premises) n = checked_add(n, self(self, *p));
    memo.emplace(&d, n);
    return n;
  };
  return go(go, *pi);
}

DerivPtr reweight(const DerivPtr& pi, Mode mode) {
  std::unordered_map<const Derivation*, DerivPtr> memo;
  auto go = [&](auto&& self, const DerivPtr& d) -> DerivPtr {
    auto it = memo.find(d.get());
    if (it != memo.end()) return it->second;
    std::vector<DerivPtr> ps;
    std::vector<std::uint64_t> pw;
    for (const auto& p : d->premises) {
      ps.push_back(self(self, p));
      pw.push_back(ps.back()->conclusion.weight);
    }
    Judgment j = d->conclusion;
    j.weight = rule_weight(*d, mode, pw);
    DerivPtr out = make_derivation(d->rule, std::move(j), std::move(ps));
    memo.emplace(d.get(), out);
    return out;
  };
  return go(go, pi);
}

std::map<Rule, std::size_t> rule_counts(const DerivPtr& pi) {
  std::map<Rule, std::size_t> counts;
  std::unordered_map<const Derivation*, std::map<Rule, std::size_t>> memo;
  auto go = [&](auto&& self, const Derivation& d) -> const std::map<Rule, std::size_t>& {
    auto it = memo.find(&d);
    if (it != memo.end()) return it->second;
    std::map<Rule, std::size_t> c;
    c[d.rule] = 1;
    for (const auto& p : d.premises) {
      for (const auto& [r, n] : self(self, *p)) c[r] += n;
    }
    return memo.emplace(&d, std::move(c)).first->second;
  };
  counts = go(go, *pi);
  return counts;
}

bool check_rule_transition_correspondence(const DerivPtr& pi, const SpaceRun& run) {
  if (!run.final_reached) return false;
  auto counts = rule_counts(pi);
  auto get = [&](Rule r) {
    auto it = counts.find(r);
    return it == counts.end() ? std::size_t{0} : it->second;
  };
  return get(Rule::TApp2) == run.count(SpaceLabel::SeaV) &&
         get(Rule::TApp1) == run.count(SpaceLabel::SeaNv) &&
         get(Rule::TLam1) == run.count(SpaceLabel::BetaNw) &&
         get(Rule::TLam2) == run.count(SpaceLabel::BetaW) &&
         get(Rule::TVar) == run.count(SpaceLabel::Sub) && get(Rule::TLamStar) == 1;
}

std::string print_judgment(const Judgment& j) {
  std::ostringstream out;
  if (const TypeContext* g = indexed_context(j)) {
    out << print_context(*g);
  } else {
    out << print_context(std::get<PlainContext>(j.context));
  }
  out << " |-" << j.weight << " ";
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, TermPtr>) {
          out << print_term(*s);
        } else if constexpr (std::is_same_v<S, Env>) {
          out << print_env(s);
        } else if constexpr (std::is_same_v<S, ClosurePtr>) {
          out << print_closure(*s);
        } else {
          out << print_state(s);
        }
      },
      j.subject);
  out << " : ";
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, LinearPtr> || std::is_same_v<A, PlainPtr>) {
          out << print_type(*a);
        } else if constexpr (std::is_same_v<A, ClosureMulti>) {
          out << print_multi(a);
        } else {
          out << "{" << print_context(a) << "}";
        }
      },
      j.assigned);
  return out.str();
}

std::string print_derivation(const DerivPtr& pi) {
  std::string out;
  auto go = [&](auto&& self, const Derivation& d, std::size_t depth) -> void {
    out.append(depth * 2, ' ');
    out += "(" + std::string(to_string(d.rule)) + ") " + print_judgment(d.conclusion) + "\n";
    for (const auto& p : d.premises) self(self, *p, depth + 1);
  };
  go(go, *pi, 0);
  return out;
}

}  // namespace spacekam
