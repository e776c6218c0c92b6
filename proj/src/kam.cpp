#include "spacekam/kam.hpp"

#include <algorithm>

namespace spacekam {

std::string_view to_string(KamLabel l) {
  switch (l) {
    case KamLabel::Sea: return "sea";
    case KamLabel::Beta: return "beta";
    case KamLabel::Sub: return "sub";
  }
  return "?";
}

MachState compile(const TermPtr& t) {
  if (!t->is_closed()) throw OpenTerm("cannot compile open term " + print_term(*t));
  return MachState{t, Env{}, Stack{}};
}

std::optional<KamStep> kam_step(const MachState& s) {
  const Term& code = *s.code;
  if (const App* app = code.as_app()) {
    return KamStep{KamLabel::Sea, {app->fun, s.env, s.stack.push(make_closure(app->arg, s.env))}};
  }
  if (const Abs* abs = code.as_abs()) {
    if (s.stack.empty()) return std::nullopt;
    return KamStep{KamLabel::Beta, {abs->body, s.env.push(abs->binder, s.stack.top()), s.stack.pop()}};
  }
  const Var& var = *code.as_var();
  const ClosurePtr* c = s.env.lookup(var.name);
  if (!c) throw StuckState("unbound variable " + var.name);
  return KamStep{KamLabel::Sub, {(*c)->code, (*c)->env, s.stack}};
}

std::size_t Run::count(KamLabel l) const {
  return static_cast<std::size_t>(
      std::count_if(trace.begin(), trace.end(), [l](const KamStep& st) { return st.label == l; }));
}

Run kam_run(MachState s, std::size_t fuel) {
  Run run{std::move(s), {}, false};
  const MachState* cur = &run.initial;
  while (run.trace.size() < fuel) {
    auto next = kam_step(*cur);
    if (!next) {
      run.final_reached = true;
      return run;
    }
    run.trace.push_back(std::move(*next));
    cur = &run.trace.back().state;
  }
  run.final_reached = !kam_step(*cur).has_value();
  return run;
}

}  // namespace spacekam
