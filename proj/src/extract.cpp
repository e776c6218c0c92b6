#include "spacekam/extract.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace spacekam {

namespace {

DerivPtr node(Rule rule, Subject subject, Context ctx, Assigned assigned, std::vector<DerivPtr> premises) {
  Derivation d{rule, Judgment{std::move(subject), std::move(ctx), std::move(assigned), 0},
               std::move(premises)};
  std::vector<std::uint64_t> pw;
  pw.reserve(d.premises.size());
  for (const auto& p : d.premises) pw.push_back(p->conclusion.weight);
  d.conclusion.weight = rule_weight(d, is_plain_rule(rule) ? Mode::Kam : Mode::Space, pw);
  return std::make_shared<const Derivation>(std::move(d));
}

const TypeContext& ctx_of(const DerivPtr& d) { return std::get<TypeContext>(d->conclusion.context); }
const ClosureMulti& multi_of(const DerivPtr& d) { return std::get<ClosureMulti>(d->conclusion.assigned); }
const LinearPtr& linear_of(const DerivPtr& d) { return std::get<LinearPtr>(d->conclusion.assigned); }
const TypeContext& envtype_of(const DerivPtr& d) { return std::get<TypeContext>(d->conclusion.assigned); }

void expect(bool cond, const std::string& what) {
  if (!cond) throw ShapeMismatch(what);
}

class DryTyper {
 public:
  DerivPtr closure(const ClosurePtr& c) {
    auto it = memo_.find(c.get());
    if (it != memo_.end()) return it->second;
    DerivPtr pe = env(c->env);
    const TypeContext& g = envtype_of(pe);
    ClosureMulti none = ClosureMulti::empty(1 + size_context(g));
    DerivPtr pt = node(Rule::TNone, c->code, g, none, {});
    DerivPtr out = node(Rule::TCl, c, TypeContext{}, none, {pe, pt});
    memo_.emplace(c.get(), out);
    return out;
  }

  DerivPtr env(const Env& e) {
    TypeContext g;
    std::vector<DerivPtr> ps;
    e.for_each([&](const Env::Entry& en) {
      ps.push_back(closure(en.closure));
      g.emplace(en.var, multi_of(ps.back()));
    });
    return node(Rule::TEnv, e, TypeContext{}, std::move(g), std::move(ps));
  }

 private:
  std::unordered_map<const Closure*, DerivPtr> memo_;
};

// Closure derivations keyed by variable, folded into one T-env over e.
DerivPtr assemble_env(const Env& e, const std::multimap<std::string, DerivPtr>& parts) {
  TypeContext g;
  std::vector<DerivPtr> ps;
  e.for_each([&](const Env::Entry& en) {
    auto [lo, hi] = parts.equal_range(en.var);
    expect(lo != hi, "no typing for environment entry " + en.var);
    DerivPtr acc = lo->second;
    for (auto it = std::next(lo); it != hi; ++it) acc = merge_closure_derivations(acc, it->second);
    g.emplace(en.var, multi_of(acc));
    ps.push_back(std::move(acc));
  });
  return node(Rule::TEnv, e, TypeContext{}, std::move(g), std::move(ps));
}

void add_parts(std::multimap<std::string, DerivPtr>& parts, const DerivPtr& env_deriv) {
  expect(env_deriv->rule == Rule::TEnv, "expected a T-env derivation");
  const Env& e = std::get<Env>(env_deriv->conclusion.subject);
  std::size_t i = 0;
  e.for_each([&](const Env::Entry& en) { parts.emplace(en.var, env_deriv->premises.at(i++)); });
}

DerivPtr state_node(const MachState& s, DerivPtr pt, DerivPtr pe, std::vector<DerivPtr> stack) {
  std::vector<DerivPtr> ps{std::move(pt), std::move(pe)};
  ps.insert(ps.end(), stack.begin(), stack.end());
  return node(Rule::TSt, s, TypeContext{}, star(), std::move(ps));
}

std::uint64_t time_weight(const DerivPtr& d, std::unordered_map<const Derivation*, std::uint64_t>& memo) {
  auto it = memo.find(d.get());
  if (it != memo.end()) return it->second;
  std::vector<std::uint64_t> pw;
  for (const auto& p : d->premises) pw.push_back(time_weight(p, memo));
  std::uint64_t w = rule_weight(*d, Mode::Time, pw);
  memo.emplace(d.get(), w);
  return w;
}

}  // namespace

DerivPtr dry_type_closure(const ClosurePtr& c) { return DryTyper().closure(c); }
DerivPtr dry_type_env(const Env& e) { return DryTyper().env(e); }

DerivPtr type_final_state(const MachState& s) {
  if (!s.code->is_abs() || !s.stack.empty()) {
    throw NotFinal("not a final state: " + print_state(s));
  }
  DerivPtr pe = dry_type_env(s.env);
  DerivPtr pt = node(Rule::TLamStar, s.code, envtype_of(pe), star(), {});
  return state_node(s, pt, pe, {});
}

DerivPtr merge_closure_derivations(const DerivPtr& a, const DerivPtr& b) {
  expect(a->rule == Rule::TCl && b->rule == Rule::TCl, "merging non-closure derivations");
  const ClosurePtr& c = std::get<ClosurePtr>(a->conclusion.subject);
  const ClosurePtr& c2 = std::get<ClosurePtr>(b->conclusion.subject);
  expect(c == c2 || closure_equal(*c, *c2), "merging typings of different closures");
  const DerivPtr& ta = a->premises[1];
  const DerivPtr& tb = b->premises[1];
  if (ta->rule == Rule::TNone) return b;
  if (tb->rule == Rule::TNone) return a;
  expect(multi_of(a).index() == multi_of(b).index(), "closure typings with different indices");
  ClosureMulti m = multi_union(multi_of(a), multi_of(b));
  std::vector<DerivPtr> uses = ta->premises;
  uses.insert(uses.end(), tb->premises.begin(), tb->premises.end());
  DerivPtr pe = merge_env_derivations(c->env, a->premises[0], b->premises[0]);
  DerivPtr pt = node(Rule::TMany, c->code, context_union(ctx_of(ta), ctx_of(tb)), m, std::move(uses));
  return node(Rule::TCl, c, TypeContext{}, m, {pe, pt});
}

DerivPtr merge_env_derivations(const Env& e, const DerivPtr& a, const DerivPtr& b) {
  std::multimap<std::string, DerivPtr> parts;
  add_parts(parts, a);
  add_parts(parts, b);
  return assemble_env(e, parts);
}

std::pair<DerivPtr, DerivPtr> split_closure_derivation(const DerivPtr& cl,
                                                       const std::vector<LinearPtr>& left) {
  if (cl->rule != Rule::TCl) throw BadSplit("not a closure derivation");
  const ClosurePtr& c = std::get<ClosurePtr>(cl->conclusion.subject);
  const DerivPtr& pt = cl->premises[1];
  const DerivPtr& pe = cl->premises[0];
  if (pt->rule == Rule::TNone) {
    if (!left.empty()) throw BadSplit("cannot take elements from an empty multi type");
    return {cl, cl};
  }
  const std::uint64_t k = multi_of(cl).index();
  std::vector<bool> in_left(pt->premises.size(), false);
  for (const auto& a : left) {
    bool found = false;
    for (std::size_t i = 0; i < pt->premises.size() && !found; ++i) {
      if (!in_left[i] && type_eq(*linear_of(pt->premises[i]), *a)) in_left[i] = found = true;
    }
    if (!found) throw BadSplit("type " + print_type(*a) + " not available in " + print_multi(multi_of(cl)));
  }
  std::vector<DerivPtr> ls, rs;
  std::vector<LinearPtr> lt, rt;
  TypeContext lg, rg;
  for (std::size_t i = 0; i < pt->premises.size(); ++i) {
    const DerivPtr& p = pt->premises[i];
    (in_left[i] ? ls : rs).push_back(p);
    (in_left[i] ? lt : rt).push_back(linear_of(p));
    TypeContext& g = in_left[i] ? lg : rg;
    g = context_union(g, ctx_of(p));
  }
  // Split every environment entry along the left contexts.
  std::vector<DerivPtr> lenv, renv;
  TypeContext lenv_t, renv_t;
  std::size_t i = 0;
  c->env.for_each([&](const Env::Entry& en) {
    std::vector<LinearPtr> want;
    if (auto it = lg.find(en.var); it != lg.end()) want = it->second.elems();
    auto [a, b] = split_closure_derivation(pe->premises.at(i++), want);
    lenv_t.emplace(en.var, multi_of(a));
    renv_t.emplace(en.var, multi_of(b));
    lenv.push_back(std::move(a));
    renv.push_back(std::move(b));
  });
  auto side = [&](std::vector<DerivPtr> ps, std::vector<LinearPtr> ts, TypeContext g,
                  std::vector<DerivPtr> env_ps, TypeContext env_t) {
    if (ps.empty()) return dry_type_closure(c);
    ClosureMulti m(std::move(ts), k);
    DerivPtr envd = node(Rule::TEnv, c->env, TypeContext{}, std::move(env_t), std::move(env_ps));
    DerivPtr many = node(Rule::TMany, c->code, std::move(g), m, std::move(ps));
    return node(Rule::TCl, c, TypeContext{}, m, {envd, many});
  };
  return {side(std::move(ls), std::move(lt), std::move(lg), std::move(lenv), std::move(lenv_t)),
          side(std::move(rs), std::move(rt), std::move(rg), std::move(renv), std::move(renv_t))};
}

DerivPtr expand(const DerivPtr& target, SpaceLabel label, const MachState& source) {
  expect(target && target->rule == Rule::TSt && target->premises.size() >= 2,
         "target derivation is not a state derivation");
  const MachState& ts = std::get<MachState>(target->conclusion.subject);
  auto step = skam_step(source);
  expect(step.has_value() && step->label == label,
         "source state does not take a " + std::string(to_string(label)) + " transition");
  expect(state_equal(step->state, ts), "derivation does not type the target of the transition");

  const DerivPtr& pt = target->premises[0];
  const DerivPtr& pe = target->premises[1];
  std::vector<DerivPtr> stack(target->premises.begin() + 2, target->premises.end());
  const LinearPtr& a = linear_of(pt);

  switch (label) {
    case SpaceLabel::Sub: {
      const Env::Entry& en = source.env.front();
      const TypeContext& g = ctx_of(pt);
      ClosureMulti m({a}, 1 + size_context(g));
      DerivPtr many = node(Rule::TMany, en.closure->code, g, m, {pt});
      DerivPtr cl = node(Rule::TCl, en.closure, TypeContext{}, m, {pe, many});
      DerivPtr env = node(Rule::TEnv, source.env, TypeContext{}, TypeContext{{en.var, m}}, {cl});
      DerivPtr var = node(Rule::TVar, source.code, TypeContext{{en.var, m}}, a, {});
      return state_node(source, var, env, std::move(stack));
    }
    case SpaceLabel::BetaNw: {
      const Abs& abs = *source.code->as_abs();
      TypeContext g = ctx_of(pt);
      auto it = g.find(abs.binder);
      expect(it != g.end(), "binder missing from the body context");
      ClosureMulti bound = it->second;
      g.erase(it);
      std::vector<DerivPtr> rest(pe->premises.begin() + 1, pe->premises.end());
      DerivPtr env = node(Rule::TEnv, source.env, TypeContext{}, g, std::move(rest));
      DerivPtr lam = node(Rule::TLam1, source.code, std::move(g), make_arrow(bound, a), {pt});
      stack.insert(stack.begin(), pe->premises.at(0));
      return state_node(source, lam, env, std::move(stack));
    }
    case SpaceLabel::BetaW: {
      const ClosurePtr& c = source.stack.top();
      DerivPtr lam = node(Rule::TLam2, source.code, ctx_of(pt),
                          make_arrow(ClosureMulti::empty(c->size()), a), {pt});
      stack.insert(stack.begin(), dry_type_closure(c));
      return state_node(source, lam, pe, std::move(stack));
    }
    case SpaceLabel::SeaV: {
      const App& app = *source.code->as_app();
      const std::string& x = app.arg->as_var()->name;
      expect(!stack.empty(), "sea_v target has an empty stack");
      const ArrowT* arr = a->as_arrow();
      expect(arr != nullptr, "function type is not an arrow");
      TypeContext g = context_union(ctx_of(pt), TypeContext{{x, arr->arg}});
      DerivPtr app_d = node(Rule::TApp2, source.code, std::move(g), arr->res, {pt});
      std::multimap<std::string, DerivPtr> parts;
      add_parts(parts, pe);
      parts.emplace(x, stack.front());
      DerivPtr env = assemble_env(source.env, parts);
      stack.erase(stack.begin());
      return state_node(source, app_d, env, std::move(stack));
    }
    case SpaceLabel::SeaNv: {
      expect(!stack.empty(), "sea_nv target has an empty stack");
      const DerivPtr& cl = stack.front();
      const ArrowT* arr = a->as_arrow();
      expect(arr != nullptr, "function type is not an arrow");
      const DerivPtr& pu = cl->premises.at(1);
      TypeContext g = context_union(ctx_of(pt), ctx_of(pu));
      DerivPtr app_d = node(Rule::TApp1, source.code, std::move(g), arr->res, {pt, pu});
      DerivPtr env = merge_env_derivations(source.env, pe, cl->premises.at(0));
      stack.erase(stack.begin());
      return state_node(source, app_d, env, std::move(stack));
    }
  }
  throw ShapeMismatch("unknown transition");
}

Extraction extract_detailed(const SpaceRun& run) {
  if (!run.final_reached) throw IncompleteRun("cannot extract from an incomplete run");
  const std::size_t n = run.transitions();
  Extraction out;
  out.states.resize(n + 1);
  out.states[n] = type_final_state(run.final_state());
  std::unordered_map<const Derivation*, std::uint64_t> tmemo;
  std::uint64_t time_after = time_weight(out.states[n], tmemo);
  for (std::size_t i = n; i-- > 0;) {
    out.states[i] = expand(out.states[i + 1], run.trace[i].label, run.state(i));
    const std::uint64_t size = run.size_at(i);
    const std::uint64_t sp = out.states[i]->conclusion.weight;
    const std::uint64_t sp_after = out.states[i + 1]->conclusion.weight;
    const std::uint64_t ti = time_weight(out.states[i], tmemo);
    if (sp != std::max(size, sp_after)) {
      out.violations.push_back("step " + std::to_string(i) + ": space " + std::to_string(sp) +
                               " != max(" + std::to_string(size) + ", " + std::to_string(sp_after) + ")");
    }
    if (ti != size + time_after) {
      out.violations.push_back("step " + std::to_string(i) + ": time " + std::to_string(ti) +
                               " != " + std::to_string(size) + " + " + std::to_string(time_after));
    }
    time_after = ti;
  }
  out.term = out.states[0]->premises[0];
  return out;
}

DerivPtr extract(const SpaceRun& run) { return extract_detailed(run).term; }

namespace {

// Unindexed typing of a KAM closure: one derivation per use of its code and
// a typing of its environment, by position (nullptr for unused entries, so
// shadowed bindings stay untyped).
struct ClosureTyping;
using CTPtr = std::shared_ptr<const ClosureTyping>;
using EnvTyping = std::vector<CTPtr>;
struct ClosureTyping {
  std::vector<DerivPtr> uses;
  EnvTyping env;
};

CTPtr merge_ct(const CTPtr& a, const CTPtr& b);

EnvTyping merge_et(const EnvTyping& a, const EnvTyping& b) {
  EnvTyping out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = merge_ct(i < a.size() ? a[i] : nullptr, i < b.size() ? b[i] : nullptr);
  }
  return out;
}

CTPtr merge_ct(const CTPtr& a, const CTPtr& b) {
  if (!a || a->uses.empty()) return b;
  if (!b || b->uses.empty()) return a;
  ClosureTyping out{a->uses, merge_et(a->env, b->env)};
  out.uses.insert(out.uses.end(), b->uses.begin(), b->uses.end());
  return std::make_shared<const ClosureTyping>(std::move(out));
}

const PlainContext& pctx(const DerivPtr& d) { return std::get<PlainContext>(d->conclusion.context); }
const PlainPtr& ptype(const DerivPtr& d) { return std::get<PlainPtr>(d->conclusion.assigned); }

}  // namespace

DerivPtr extract_kam(const Run& run) {
  if (!run.final_reached) throw IncompleteRun("cannot extract from an incomplete run");
  const MachState& fin = run.final_state();
  DerivPtr pi = node(Rule::DC_TLamStar, fin.code, PlainContext{}, plain_star(), {});
  EnvTyping et(fin.env.length());
  std::vector<CTPtr> st;
  for (std::size_t i = run.transitions(); i-- > 0;) {
    const MachState& s = run.state(i);
    switch (run.trace[i].label) {
      case KamLabel::Sub: {
        const std::string& x = s.code->as_var()->name;
        EnvTyping src(s.env.length());
        std::size_t pos = 0;
        for (const auto& en : s.env.entries()) {
          if (en.var == x) break;
          ++pos;
        }
        src.at(pos) = std::make_shared<const ClosureTyping>(ClosureTyping{{pi}, std::move(et)});
        PlainContext g{{x, MultiType({ptype(pi)})}};
        pi = node(Rule::DC_TVar, s.code, std::move(g), ptype(pi), {});
        et = std::move(src);
        break;
      }
      case KamLabel::Beta: {
        const Abs& abs = *s.code->as_abs();
        PlainContext g = pctx(pi);
        MultiType bound;
        if (auto it = g.find(abs.binder); it != g.end()) {
          bound = it->second;
          g.erase(it);
        }
        CTPtr head = et.empty() ? nullptr : et.front();
        if (!et.empty()) et.erase(et.begin());
        st.insert(st.begin(), head ? head : std::make_shared<const ClosureTyping>());
        pi = node(Rule::DC_TLam, s.code, std::move(g), make_plain_arrow(bound, ptype(pi)), {pi});
        break;
      }
      case KamLabel::Sea: {
        CTPtr arg = st.front();
        st.erase(st.begin());
        const PlainArrow* arr = ptype(pi)->as_arrow();
        if (!arr) throw InvalidDerivation("function derivation without an arrow type");
        PlainContext g = pctx(pi);
        std::vector<DerivPtr> ps{pi};
        for (const auto& u : arg->uses) {
          g = context_union(g, pctx(u));
          ps.push_back(u);
        }
        pi = node(Rule::DC_TApp, s.code, std::move(g), arr->res, std::move(ps));
        et = merge_et(et, arg->env);
        break;
      }
    }
  }
  return pi;
}

}  // namespace spacekam
