#include "spacekam/json_io.hpp"

#include <sstream>

namespace spacekam {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

TermPtr term_from(const json& j) {
  if (!j.is_string()) throw FormatError("term must be a string");
  try {
    return parse_term(j.get<std::string>());
  } catch (const ParseError& e) {
    throw FormatError(std::string("bad term: ") + e.what());
  }
}

std::uint64_t nat_from(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw FormatError(std::string(what) + " must be a natural number");
  }
  return j.get<std::uint64_t>();
}

}  // namespace

json env_to_json(const Env& e) {
  json out = json::array();
  e.for_each([&](const Env::Entry& en) {
    out.push_back({{"var", en.var}, {"code", print_term(*en.closure->code)},
                   {"env", env_to_json(en.closure->env)}});
  });
  return out;
}

json closure_to_json(const Closure& c) {
  return {{"code", print_term(*c.code)}, {"env", env_to_json(c.env)}};
}

json state_to_json(const MachState& s) {
  json stack = json::array();
  for (const auto& c : s.stack.items()) stack.push_back(closure_to_json(*c));
  return {{"code", print_term(*s.code)}, {"env", env_to_json(s.env)}, {"stack", stack}};
}

Env env_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("environment must be an array");
  std::vector<Env::Entry> entries;
  for (const auto& en : j) {
    const json& var = field(en, "var");
    if (!var.is_string() || !is_identifier(var.get<std::string>())) {
      throw FormatError("environment entry needs an identifier \"var\"");
    }
    entries.push_back({var.get<std::string>(), make_closure(term_from(field(en, "code")),
                                                            env_from_json(field(en, "env")))});
  }
  return Env::from_entries(entries);
}

ClosurePtr closure_from_json(const json& j) {
  return make_closure(term_from(field(j, "code")), env_from_json(field(j, "env")));
}

MachState state_from_json(const json& j) {
  const json& stack = field(j, "stack");
  if (!stack.is_array()) throw FormatError("stack must be an array");
  std::vector<ClosurePtr> items;
  for (const auto& c : stack) items.push_back(closure_from_json(c));
  return MachState{term_from(field(j, "code")), env_from_json(field(j, "env")), Stack::from_items(items)};
}

json type_to_json(const LinearType& a) {
  const ArrowT* arr = a.as_arrow();
  if (!arr) return "*";
  return {{"arg", multi_to_json(arr->arg)}, {"res", type_to_json(*arr->res)}};
}

json multi_to_json(const ClosureMulti& m) {
  json elems = json::array();
  for (const auto& e : m.elems()) elems.push_back(type_to_json(*e));
  return {{"elems", elems}, {"k", m.index()}};
}

json context_to_json(const TypeContext& g) {
  json out = json::object();
  for (const auto& [x, m] : g) out[x] = multi_to_json(m);
  return out;
}

json type_to_json(const PlainType& a) {
  const PlainArrow* arr = a.as_arrow();
  if (!arr) return "*";
  return {{"arg", multi_to_json(arr->arg)}, {"res", type_to_json(*arr->res)}};
}

json multi_to_json(const MultiType& m) {
  json elems = json::array();
  for (const auto& e : m.elems()) elems.push_back(type_to_json(*e));
  return {{"elems", elems}};
}

json context_to_json(const PlainContext& g) {
  json out = json::object();
  for (const auto& [x, m] : g) out[x] = multi_to_json(m);
  return out;
}

LinearPtr type_from_json(const json& j) {
  if (j == "*") return star();
  return make_arrow(multi_from_json(field(j, "arg")), type_from_json(field(j, "res")));
}

ClosureMulti multi_from_json(const json& j) {
  const json& elems = field(j, "elems");
  if (!elems.is_array()) throw FormatError("\"elems\" must be an array");
  std::vector<LinearPtr> ts;
  for (const auto& e : elems) ts.push_back(type_from_json(e));
  try {
    return ClosureMulti(std::move(ts), nat_from(field(j, "k"), "index"));
  } catch (const TypeError& e) {
    throw FormatError(e.what());
  }
}

TypeContext context_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("context must be an object");
  TypeContext g;
  for (const auto& [x, m] : j.items()) g.emplace(x, multi_from_json(m));
  return g;
}

PlainPtr plain_type_from_json(const json& j) {
  if (j == "*") return plain_star();
  return make_plain_arrow(plain_multi_from_json(field(j, "arg")), plain_type_from_json(field(j, "res")));
}

MultiType plain_multi_from_json(const json& j) {
  const json& elems = field(j, "elems");
  if (!elems.is_array()) throw FormatError("\"elems\" must be an array");
  std::vector<PlainPtr> ts;
  for (const auto& e : elems) ts.push_back(plain_type_from_json(e));
  return MultiType(std::move(ts));
}

PlainContext plain_context_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("context must be an object");
  PlainContext g;
  for (const auto& [x, m] : j.items()) {
    MultiType mt = plain_multi_from_json(m);
    if (!mt.is_empty()) g.emplace(x, std::move(mt));
  }
  return g;
}

json derivation_to_json(const DerivPtr& pi) {
  const Judgment& jd = pi->conclusion;
  json subject = std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, TermPtr>) {
          return print_term(*s);
        } else if constexpr (std::is_same_v<S, Env>) {
          return env_to_json(s);
        } else if constexpr (std::is_same_v<S, ClosurePtr>) {
          return closure_to_json(*s);
        } else {
          return state_to_json(s);
        }
      },
      jd.subject);
  json context = std::visit([](const auto& g) { return context_to_json(g); }, jd.context);
  json type = std::visit(
      [](const auto& a) -> json {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, LinearPtr> || std::is_same_v<A, PlainPtr>) {
          return type_to_json(*a);
        } else if constexpr (std::is_same_v<A, ClosureMulti>) {
          return multi_to_json(a);
        } else {
          return context_to_json(a);
        }
      },
      jd.assigned);
  json premises = json::array();
  for (const auto& p : pi->premises) premises.push_back(derivation_to_json(p));
  return {{"rule", to_string(pi->rule)},
          {"judgment",
           {{"subject_kind", subject_kind(jd.subject)},
            {"subject", subject},
            {"context", context},
            {"type", type},
            {"weight", jd.weight}}},
          {"premises", premises}};
}

DerivPtr derivation_from_json(const json& j) {
  const json& rule_j = field(j, "rule");
  if (!rule_j.is_string()) throw FormatError("\"rule\" must be a string");
  auto rule = rule_from_string(rule_j.get<std::string>());
  if (!rule) throw FormatError("unknown rule " + rule_j.get<std::string>());
  const json& jd = field(j, "judgment");
  const json& kind_j = field(jd, "subject_kind");
  if (!kind_j.is_string()) throw FormatError("\"subject_kind\" must be a string");
  const std::string kind = kind_j.get<std::string>();
  const json& subj = field(jd, "subject");
  const json& type = field(jd, "type");
  const bool plain = is_plain_rule(*rule);

  Judgment out;
  out.weight = nat_from(field(jd, "weight"), "weight");
  if (plain) {
    out.context = plain_context_from_json(field(jd, "context"));
  } else {
    out.context = context_from_json(field(jd, "context"));
  }
  if (kind == "term") {
    out.subject = term_from(subj);
    if (plain) {
      out.assigned = plain_type_from_json(type);
    } else if (*rule == Rule::TMany || *rule == Rule::TNone) {
      out.assigned = multi_from_json(type);
    } else {
      out.assigned = type_from_json(type);
    }
  } else if (kind == "env") {
    out.subject = env_from_json(subj);
    out.assigned = context_from_json(type);
  } else if (kind == "closure") {
    out.subject = closure_from_json(subj);
    out.assigned = multi_from_json(type);
  } else if (kind == "state") {
    out.subject = state_from_json(subj);
    out.assigned = type_from_json(type);
  } else {
    throw FormatError("unknown subject kind " + kind);
  }
  const json& ps = field(j, "premises");
  if (!ps.is_array()) throw FormatError("\"premises\" must be an array");
  std::vector<DerivPtr> premises;
  for (const auto& p : ps) premises.push_back(derivation_from_json(p));
  return make_derivation(*rule, std::move(out), std::move(premises));
}

namespace {

template <class R, class Label>
std::string trace_lines(const R& run, Label label_of, bool sizes) {
  std::ostringstream out;
  for (std::size_t i = 0; i <= run.transitions(); ++i) {
    json line = state_to_json(run.state(i));
    line["step"] = i;
    line["label"] = i == 0 ? std::string("init") : std::string(label_of(run.trace[i - 1]));
    if constexpr (std::is_same_v<R, SpaceRun>) {
      if (sizes) line["size"] = run.size_at(i);
    }
    out << line.dump() << "\n";
  }
  return out.str();
}

}  // namespace

std::string trace_jsonl(const Run& run) {
  return trace_lines(run, [](const KamStep& s) { return to_string(s.label); }, false);
}

std::string trace_jsonl(const SpaceRun& run) {
  return trace_lines(run, [](const SpaceStep& s) { return to_string(s.label); }, true);
}

json run_summary(const Run& run) {
  json counts = json::object();
  for (KamLabel l : kAllKamLabels) counts[std::string(to_string(l))] = run.count(l);
  return {{"transitions", counts}, {"complete", run.final_reached}};
}

json run_summary(const SpaceRun& run) {
  json counts = json::object();
  for (SpaceLabel l : kAllSpaceLabels) counts[std::string(to_string(l))] = run.count(l);
  return {{"transitions", counts}, {"space", run.space}, {"time", run.time}, {"complete", run.final_reached}};
}

}  // namespace spacekam
