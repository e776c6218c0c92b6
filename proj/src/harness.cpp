#include "spacekam/harness.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <omp.h>

#include "spacekam/extract.hpp"
#include "spacekam/kam.hpp"
#include "spacekam/space_kam.hpp"

namespace spacekam {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Explicit mappings from raw 64-bit draws; the standard distributions are
// not specified bit-for-bit across library implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

class Generator {
 public:
  Generator(std::uint64_t seed, const GenWeights& w) : draw_(seed), w_(w) {}

  TermPtr gen(std::size_t budget) {
    if (budget <= 1) {
      if (!scope_.empty()) return pick_var();
      std::string x = binder();
      return make_abs(x, make_var(x));
    }
    // Without a binder in scope the smallest closed term is \x.x.
    const std::size_t leaf = scope_.empty() ? 2 : 1;
    double pa = budget >= 1 + 2 * leaf ? w_.app : 0.0;
    double pl = w_.abs;
    double pv = scope_.empty() ? 0.0 : w_.var;
    double r = draw_.unit() * (pa + pl + pv);
    if (r < pa) {
      std::size_t left = leaf + draw_.below(budget - 2 * leaf);
      TermPtr f = gen(left);
      TermPtr a = gen(budget - 1 - left);
      return make_app(std::move(f), std::move(a));
    }
    if (r < pa + pl) {
      std::string x = binder();
      scope_.push_back(x);
      TermPtr body = gen(budget - 1);
      scope_.pop_back();
      return make_abs(std::move(x), std::move(body));
    }
    return pick_var();
  }

 private:
  TermPtr pick_var() { return make_var(scope_[draw_.below(scope_.size())]); }

  std::string binder() {
    if (!scope_.empty() && draw_.unit() < w_.shadow) return scope_[draw_.below(scope_.size())];
    return "v" + std::to_string(next_++);
  }

  Draw draw_;
  GenWeights w_;
  std::vector<std::string> scope_;
  std::size_t next_ = 0;
};

std::map<std::string, std::size_t> label_counts(const Run& r) {
  std::map<std::string, std::size_t> out;
  for (KamLabel l : kAllKamLabels) out[std::string(to_string(l))] = r.count(l);
  return out;
}

std::map<std::string, std::size_t> label_counts(const SpaceRun& r) {
  std::map<std::string, std::size_t> out;
  for (SpaceLabel l : kAllSpaceLabels) out[std::string(to_string(l))] = r.count(l);
  return out;
}

std::string show(std::uint64_t a, std::uint64_t b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

}  // namespace

TermPtr random_closed_term(std::uint64_t seed, std::size_t budget, const GenWeights& w) {
  return Generator(seed, w).gen(std::max<std::size_t>(budget, 1));
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.pass; });
}

const CheckOutcome* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool operator==(const VerificationReport& a, const VerificationReport& b) {
  bool terms = (!a.term && !b.term) || (a.term && b.term && syntactic_eq(*a.term, *b.term));
  return terms && a.wh_steps == b.wh_steps && a.wh_exhausted == b.wh_exhausted && a.kam == b.kam &&
         a.skam == b.skam && a.checks == b.checks && a.complete == b.complete;
}

VerificationReport verify(const TermPtr& t, std::size_t fuel) {
  VerificationReport rep;
  rep.term = t;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  WhnfResult wh = whnf_eval(t, fuel);
  rep.wh_steps = wh.steps;
  rep.wh_exhausted = wh.exhausted;

  Run kam;
  SpaceRun skam;
  try {
    MachState init = compile(t);
    kam = kam_run(init, fuel);
    rep.kam.transitions = label_counts(kam);
    rep.kam.complete = kam.final_reached;
    try {
      skam = skam_run(init, fuel, true);
      add("env_invariant", true);
    } catch (const InvariantViolation& e) {
      add("env_invariant", false, e.what());
      return rep;
    }
  } catch (const std::overflow_error& e) {
    // Abstract sizes beyond 64 bits: reported like a diverging run.
    add("size_overflow", true, e.what());
    return rep;
  }
  rep.skam.transitions = label_counts(skam);
  rep.skam.complete = skam.final_reached;
  rep.skam.space = skam.space;
  rep.skam.time = skam.time;
  rep.complete = !wh.exhausted && kam.final_reached && skam.final_reached;
  if (!rep.complete) return rep;

  const std::size_t skam_beta = skam.beta_count();
  const std::size_t kam_beta = kam.count(KamLabel::Beta);
  add("beta_agreement", skam_beta == wh.steps && kam_beta == wh.steps,
      "wh " + std::to_string(wh.steps) + ", kam " + std::to_string(kam_beta) + ", skam " +
          std::to_string(skam_beta));
  add("kam_decode", alpha_eq(*decode(kam.final_state()), *wh.result));
  add("skam_decode", alpha_eq(*decode(skam.final_state()), *wh.result));

  try {
    Extraction ex = extract_detailed(skam);
    add("step_equations", ex.violations.empty(), ex.violations.empty() ? "" : ex.violations.front());
    CheckResult sp = check(ex.term, Mode::Space);
    add("space_valid", sp.ok, sp.ok ? "" : sp.errors.front().path + ": " + sp.errors.front().message);
    rep.skam.space_weight = sp.weight;
    add("space_weight", sp.weight == skam.space, show(sp.weight, skam.space));
    DerivPtr timed = reweight(ex.term, Mode::Time);
    CheckResult ti = check(timed, Mode::Time);
    add("time_valid", ti.ok, ti.ok ? "" : ti.errors.front().path + ": " + ti.errors.front().message);
    rep.skam.time_weight = ti.weight;
    add("time_weight", ti.weight == skam.time, show(ti.weight, skam.time));
    add("correspondence", check_rule_transition_correspondence(ex.term, skam));
  } catch (const Error& e) {
    add("extract", false, e.what());
  }

  try {
    DerivPtr dc = extract_kam(kam);
    CheckResult r = check(dc, Mode::Kam);
    add("kam_valid", r.ok, r.ok ? "" : r.errors.front().path + ": " + r.errors.front().message);
    rep.kam.decarvalho_weight = r.weight;
    add("kam_weight", r.weight == kam.transitions(), show(r.weight, kam.transitions()));
  } catch (const Error& e) {
    add("extract_kam", false, e.what());
  }
  return rep;
}

json report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {{"term", r.term ? print_term(*r.term) : ""},
          {"wh_steps", r.wh_steps},
          {"wh_exhausted", r.wh_exhausted},
          {"kam",
           {{"transitions", r.kam.transitions},
            {"complete", r.kam.complete},
            {"decarvalho_weight", r.kam.decarvalho_weight}}},
          {"skam",
           {{"transitions", r.skam.transitions},
            {"complete", r.skam.complete},
            {"space", r.skam.space},
            {"time", r.skam.time},
            {"space_weight", r.skam.space_weight},
            {"time_weight", r.skam.time_weight}}},
          {"checks", checks},
          {"complete", r.complete},
          {"passed", r.passed()}};
}

VerificationReport report_from_json(const json& j) {
  try {
    VerificationReport r;
    r.term = parse_term(j.at("term").get<std::string>());
    r.wh_steps = j.at("wh_steps").get<std::size_t>();
    r.wh_exhausted = j.at("wh_exhausted").get<bool>();
    const json& k = j.at("kam");
    r.kam.transitions = k.at("transitions").get<std::map<std::string, std::size_t>>();
    r.kam.complete = k.at("complete").get<bool>();
    r.kam.decarvalho_weight = k.at("decarvalho_weight").get<std::uint64_t>();
    const json& s = j.at("skam");
    r.skam.transitions = s.at("transitions").get<std::map<std::string, std::size_t>>();
    r.skam.complete = s.at("complete").get<bool>();
    r.skam.space = s.at("space").get<std::uint64_t>();
    r.skam.time = s.at("time").get<std::uint64_t>();
    r.skam.space_weight = s.at("space_weight").get<std::uint64_t>();
    r.skam.time_weight = s.at("time_weight").get<std::uint64_t>();
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                          c.at("detail").get<std::string>()});
    }
    r.complete = j.at("complete").get<bool>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad report: ") + e.what());
  } catch (const ParseError& e) {
    throw FormatError(std::string("bad report term: ") + e.what());
  }
}

namespace {

struct TermOutcome {
  bool complete = false;
  bool passed = true;
  std::vector<std::string> failed_checks;
  std::uint64_t space = 0;
  std::uint64_t transitions = 0;
};

TermOutcome run_one(const FuzzConfig& cfg, std::size_t i) {
  TermPtr t = random_closed_term(term_seed(cfg.seed, i), cfg.budget, cfg.weights);
  VerificationReport r = verify(t, cfg.fuel);
  TermOutcome o;
  o.complete = r.complete;
  o.passed = r.passed();
  for (const auto& c : r.checks) {
    if (!c.pass) o.failed_checks.push_back(c.name);
  }
  o.space = r.skam.space;
  for (const auto& [l, n] : r.skam.transitions) o.transitions += n;
  return o;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ v); }

FuzzSummary aggregate(const FuzzConfig& cfg, const std::vector<TermOutcome>& outs) {
  FuzzSummary s;
  s.count = cfg.count;
  std::uint64_t h = splitmix64(cfg.seed);
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const TermOutcome& o = outs[i];
    (o.complete ? s.complete : s.incomplete) += 1;
    if (!o.passed) {
      ++s.failed;
      s.failing_indices.push_back(i);
      for (const auto& c : o.failed_checks) ++s.failures_by_check[c];
    }
    s.max_space = std::max(s.max_space, o.space);
    s.total_transitions += o.transitions;
    h = mix(h, (o.complete ? 1u : 0u) | (o.passed ? 2u : 0u));
    h = mix(h, o.space);
    h = mix(h, o.transitions);
  }
  s.digest = h;
  return s;
}

}  // namespace

FuzzSummary fuzz_serial(const FuzzConfig& cfg) {
  std::vector<TermOutcome> outs(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) outs[i] = run_one(cfg, i);
  return aggregate(cfg, outs);
}

FuzzSummary fuzz_parallel(const FuzzConfig& cfg) {
  std::vector<TermOutcome> outs(cfg.count);
  const auto n = static_cast<std::int64_t>(cfg.count);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    outs[static_cast<std::size_t>(i)] = run_one(cfg, static_cast<std::size_t>(i));
  }
  return aggregate(cfg, outs);
}

json summary_to_json(const FuzzSummary& s) {
  return {{"count", s.count},
          {"complete", s.complete},
          {"incomplete", s.incomplete},
          {"failed", s.failed},
          {"failures_by_check", s.failures_by_check},
          {"failing_indices", s.failing_indices},
          {"max_space", s.max_space},
          {"total_transitions", s.total_transitions},
          {"digest", s.digest}};
}

}  // namespace spacekam
