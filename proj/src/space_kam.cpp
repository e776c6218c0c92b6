#include "spacekam/space_kam.hpp"

#include <algorithm>
#include <unordered_set>

namespace spacekam {

std::string_view to_string(SpaceLabel l) {
  switch (l) {
    case SpaceLabel::SeaV: return "sea_v";
    case SpaceLabel::SeaNv: return "sea_nv";
    case SpaceLabel::BetaW: return "beta_w";
    case SpaceLabel::BetaNw: return "beta_nw";
    case SpaceLabel::Sub: return "sub";
  }
  return "?";
}

Env env_restrict(const Env& e, const VarSet& vars) {
  std::vector<Env::Entry> kept;
  e.for_each([&](const Env::Entry& entry) {
    if (vars.contains(entry.var)) kept.push_back(entry);
  });
  if (kept.size() == e.length()) return e;
  return Env::from_entries(kept);
}

namespace {

bool domain_matches(const Term& code, const Env& env) {
  const VarSet& fv = code.free_vars();
  if (env.length() != fv.size()) return false;
  bool ok = true;
  env.for_each([&](const Env::Entry& entry) { ok = ok && fv.contains(entry.var); });
  return ok;
}

SpaceStep make_step(SpaceLabel l, MachState s) {
  std::uint64_t sz = state_size(s);
  return SpaceStep{l, std::move(s), sz};
}

class DomainChecker {
 public:
  bool closure(const Closure& c) {
    if (seen_.contains(&c)) return true;
    if (!pair(*c.code, c.env)) return false;
    seen_.insert(&c);
    return true;
  }

  bool pair(const Term& code, const Env& env) {
    if (!domain_matches(code, env)) return false;
    bool ok = true;
    env.for_each([&](const Env::Entry& entry) { ok = ok && closure(*entry.closure); });
    return ok;
  }

 private:
  std::unordered_set<const Closure*> seen_;
};

}  // namespace

std::optional<SpaceStep> skam_step(const MachState& s) {
  const Term& code = *s.code;
  if (!domain_matches(code, s.env)) {
    throw InvariantViolation("environment domain differs from fv of " + print_term(code));
  }
  if (const App* app = code.as_app()) {
    Env fun_env = env_restrict(s.env, app->fun->free_vars());
    if (const Var* x = app->arg->as_var()) {
      const ClosurePtr* c = s.env.lookup(x->name);
      return make_step(SpaceLabel::SeaV, {app->fun, std::move(fun_env), s.stack.push(*c)});
    }
    ClosurePtr arg = make_closure(app->arg, env_restrict(s.env, app->arg->free_vars()));
    return make_step(SpaceLabel::SeaNv, {app->fun, std::move(fun_env), s.stack.push(std::move(arg))});
  }
  if (const Abs* abs = code.as_abs()) {
    if (s.stack.empty()) return std::nullopt;
    if (!abs->body->free_vars().contains(abs->binder)) {
      return make_step(SpaceLabel::BetaW, {abs->body, s.env, s.stack.pop()});
    }
    return make_step(SpaceLabel::BetaNw,
                     {abs->body, s.env.push(abs->binder, s.stack.top()), s.stack.pop()});
  }
  // The domain check above makes the environment exactly [x<-(u,e')].
  const ClosurePtr& c = s.env.front().closure;
  return make_step(SpaceLabel::Sub, {c->code, c->env, s.stack});
}

bool check_env_domain_invariant(const MachState& s) {
  DomainChecker checker;
  if (!checker.pair(*s.code, s.env)) return false;
  for (const ClosurePtr& c : s.stack.items()) {
    if (!checker.closure(*c)) return false;
  }
  return true;
}

std::size_t SpaceRun::count(SpaceLabel l) const {
  return static_cast<std::size_t>(
      std::count_if(trace.begin(), trace.end(), [l](const SpaceStep& st) { return st.label == l; }));
}

SpaceRun skam_run(MachState s, std::size_t fuel, bool check_invariant) {
  SpaceRun run;
  run.initial = std::move(s);
  run.initial_size = state_size(run.initial);
  run.space = run.initial_size;
  run.time = run.initial_size;
  if (check_invariant && !check_env_domain_invariant(run.initial)) {
    throw InvariantViolation("initial state violates the environment domain invariant");
  }
  const MachState* cur = &run.initial;
  while (run.trace.size() < fuel) {
    auto next = skam_step(*cur);
    if (!next) {
      run.final_reached = true;
      return run;
    }
    if (check_invariant && !check_env_domain_invariant(next->state)) {
      throw InvariantViolation("environment domain invariant broken after " +
                               std::string(to_string(next->label)) + " at step " +
                               std::to_string(run.trace.size() + 1));
    }
    run.space = std::max(run.space, next->size);
    run.time = checked_add(run.time, next->size);
    run.trace.push_back(std::move(*next));
    cur = &run.trace.back().state;
  }
  run.final_reached = !skam_step(*cur).has_value();
  return run;
}

}  // namespace spacekam
