#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "spacekam/harness.hpp"
#include "spacekam/kam.hpp"
#include "spacekam/space_kam.hpp"
#include "support/oracle.hpp"
#include "support/running_example.hpp"

using namespace spacekam;

namespace {

TermPtr P(const char* s) { return parse_term(s); }

std::vector<std::string> labels(const SpaceRun& r) {
  std::vector<std::string> out;
  for (const auto& s : r.trace) out.emplace_back(to_string(s.label));
  return out;
}

std::vector<std::string> labels(const Run& r) {
  std::vector<std::string> out;
  for (const auto& s : r.trace) out.emplace_back(to_string(s.label));
  return out;
}

std::vector<std::uint64_t> sizes(const SpaceRun& r) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < r.num_states(); ++i) out.push_back(r.size_at(i));
  return out;
}

ClosurePtr id_closure() { return make_closure(P("\\a.a"), Env{}); }

}  // namespace

TEST(Sizes, ClosureAndState) {
  ClosurePtr c = id_closure();
  EXPECT_EQ(c->size(), 1u);
  Env e = Env{}.push("x", c);
  ClosurePtr nested = make_closure(P("x"), e);
  EXPECT_EQ(nested->size(), 2u);
  Env e2 = e.push("y", nested);
  EXPECT_EQ(e2.size(), 3u);
  EXPECT_EQ(e2.length(), 2u);
  MachState s{P("x y"), e2, Stack{}.push(nested)};
  EXPECT_EQ(state_size(s), 5u);
  EXPECT_EQ(state_size(compile(P("\\a.a"))), 0u);
}

TEST(Sizes, CheckedAdd) {
  EXPECT_EQ(checked_add(2, 3), 5u);
  EXPECT_THROW(checked_add(~std::uint64_t{0}, 1), std::overflow_error);
}

TEST(Env, LookupFindsMostRecent) {
  ClosurePtr a = id_closure();
  ClosurePtr b = make_closure(P("\\b.b"), Env{});
  Env e = Env{}.push("x", a).push("x", b);
  ASSERT_NE(e.lookup("x"), nullptr);
  EXPECT_EQ(e.lookup("x")->get(), b.get());
  EXPECT_EQ(e.lookup("y"), nullptr);
  EXPECT_EQ(e.domain(), VarSet{"x"});
}

TEST(Env, RestrictKeepsOrder) {
  ClosurePtr c = id_closure();
  Env e = Env::from_entries({{"x", c}, {"y", c}, {"z", c}});
  Env r = env_restrict(e, VarSet{"z", "x"});
  auto entries = r.entries();
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].var, "x");
  EXPECT_EQ(entries[1].var, "z");
  EXPECT_TRUE(env_restrict(e, {}).empty());
}

TEST(Compile, RejectsOpenTerms) {
  EXPECT_THROW(compile(P("\\x.y")), OpenTerm);
  MachState s = compile(P("\\a.a"));
  EXPECT_TRUE(s.env.empty());
  EXPECT_TRUE(s.stack.empty());
}

TEST(Decode, Examples) {
  ClosurePtr c = id_closure();
  MachState s{P("x"), Env{}.push("x", c), Stack{}.push(make_closure(P("\\b.b"), Env{}))};
  EXPECT_TRUE(alpha_eq(*decode(s), *P("(\\a.a) (\\b.b)")));
  ClosurePtr inner = make_closure(P("\\y.x"), Env{}.push("x", c));
  EXPECT_TRUE(alpha_eq(*decode(*inner), *P("\\y.\\a.a")));
}

TEST(Kam, RunningExample) {
  spacekam::Run r = kam_run(compile(P(fixture::kRunningExample)), 100);
  EXPECT_TRUE(r.final_reached);
  EXPECT_EQ(r.transitions(), 7u);
  EXPECT_EQ(r.count(KamLabel::Sea), 3u);
  EXPECT_EQ(r.count(KamLabel::Beta), 3u);
  EXPECT_EQ(r.count(KamLabel::Sub), 1u);
  EXPECT_TRUE(alpha_eq(*decode(r.final_state()), *P("\\a.a")));
}

TEST(Kam, StuckOnUnboundVariable) {
  MachState s{P("x"), Env{}, Stack{}};
  EXPECT_THROW(kam_step(s), StuckState);
}

TEST(Kam, FinalStatesHaveNoStep) {
  EXPECT_FALSE(kam_step(compile(P("\\a.a"))).has_value());
  EXPECT_FALSE(skam_step(compile(P("\\a.a"))).has_value());
}

TEST(SpaceKam, RunningExampleTrace) {
  SpaceRun r = skam_run(compile(P(fixture::kRunningExample)), 100, true);
  ASSERT_TRUE(r.final_reached);
  EXPECT_EQ(labels(r),
            (std::vector<std::string>{"sea_nv", "beta_nw", "sea_v", "beta_nw", "sea_nv", "beta_w", "sub"}));
  EXPECT_EQ(sizes(r), (std::vector<std::uint64_t>{0, 1, 1, 2, 2, 4, 1, 0}));
  EXPECT_EQ(r.space, 4u);
  EXPECT_EQ(r.time, 11u);
  EXPECT_EQ(r.beta_count(), 3u);
  EXPECT_TRUE(alpha_eq(*decode(r.final_state()), *P("\\a.a")));
}

TEST(SpaceKam, SeaVPushesTheBoundClosure) {
  ClosurePtr c = id_closure();
  MachState s{P("(\\y.y) x"), Env{}.push("x", c), Stack{}};
  auto st = skam_step(s);
  ASSERT_TRUE(st.has_value());
  EXPECT_EQ(st->label, SpaceLabel::SeaV);
  EXPECT_TRUE(st->state.env.empty());
  EXPECT_EQ(st->state.stack.top().get(), c.get());
  EXPECT_EQ(st->size, 1u);
}

TEST(SpaceKam, BetaWDropsTheArgument) {
  MachState s{P("\\z.\\a.a"), Env{}, Stack{}.push(id_closure())};
  auto st = skam_step(s);
  ASSERT_TRUE(st.has_value());
  EXPECT_EQ(st->label, SpaceLabel::BetaW);
  EXPECT_TRUE(st->state.env.empty());
  EXPECT_TRUE(st->state.stack.empty());
}

TEST(SpaceKam, InvariantViolationThrows) {
  MachState bad{P("\\a.a"), Env{}.push("x", id_closure()), Stack{}.push(id_closure())};
  EXPECT_FALSE(check_env_domain_invariant(bad));
  EXPECT_THROW(skam_step(bad), InvariantViolation);
}

TEST(SpaceKam, FuelBoundsTheRun) {
  SpaceRun r = skam_run(compile(P(fixture::kRunningExample)), 3);
  EXPECT_FALSE(r.final_reached);
  EXPECT_EQ(r.transitions(), 3u);
  SpaceRun exact = skam_run(compile(P(fixture::kRunningExample)), 7);
  EXPECT_TRUE(exact.final_reached);
}

// Divergence on Omega: values recorded by the test-side oracle.
TEST(Omega, SpaceKamSizesArePeriodic) {
  SpaceRun r = skam_run(compile(P(fixture::kOmega)), 1000, true);
  EXPECT_FALSE(r.final_reached);
  EXPECT_EQ(r.transitions(), 1000u);
  EXPECT_EQ(r.space, 2u);
  std::vector<std::uint64_t> s = sizes(r);
  EXPECT_EQ(s[0], 0u);
  // From step 1 on the sizes cycle through 1, 1, 2.
  for (std::size_t i = 1; i < s.size(); ++i) {
    const std::uint64_t expect = (i % 3 == 0) ? 2 : 1;
    ASSERT_EQ(s[i], expect) << "step " << i;
  }
  oracle::Trace o = oracle::skam(*P(fixture::kOmega), 1000);
  EXPECT_EQ(o.sizes, s);
}

TEST(Omega, KamStateSizesPinned) {
  spacekam::Run r = kam_run(compile(P(fixture::kOmega)), 1000);
  EXPECT_FALSE(r.final_reached);
  oracle::Trace o = oracle::kam(*P(fixture::kOmega), 1000);
  ASSERT_EQ(o.sizes.size(), 1001u);
  for (std::size_t k = 0; k <= 1000; ++k) ASSERT_EQ(state_size(r.state(k)), o.sizes[k]) << "step " << k;
  // The environment chain grows without bound, but slowly.
  EXPECT_EQ(o.sizes[1000], 77u);
  EXPECT_EQ(*std::max_element(o.sizes.begin(), o.sizes.end()), 87u);
  EXPECT_GT(o.sizes[1000], o.sizes[100]);
}

// Agreement with the oracle over generated terms.

namespace {

constexpr std::size_t kCorpus = 300;

TermPtr corpus(std::size_t i) { return random_closed_term(term_seed(42, i), 25); }

}  // namespace

TEST(OracleAgreement, Kam) {
  for (std::size_t i = 0; i < kCorpus; ++i) {
    TermPtr t = corpus(i);
    spacekam::Run r = kam_run(compile(t), 500);
    oracle::Trace o = oracle::kam(*t, 500);
    ASSERT_EQ(labels(r), o.labels) << print_term(*t);
    EXPECT_EQ(r.final_reached, o.complete);
    for (std::size_t k = 0; k <= r.transitions(); ++k) {
      ASSERT_EQ(state_size(r.state(k)), o.sizes[k]) << print_term(*t) << " state " << k;
    }
  }
}

TEST(OracleAgreement, SpaceKam) {
  for (std::size_t i = 0; i < kCorpus; ++i) {
    TermPtr t = corpus(i);
    SpaceRun r = skam_run(compile(t), 500, true);
    oracle::Trace o = oracle::skam(*t, 500);
    ASSERT_EQ(labels(r), o.labels) << print_term(*t);
    EXPECT_EQ(r.final_reached, o.complete);
    EXPECT_EQ(sizes(r), o.sizes) << print_term(*t);
    EXPECT_EQ(r.space, *std::max_element(o.sizes.begin(), o.sizes.end()));
    EXPECT_EQ(r.time, std::accumulate(o.sizes.begin(), o.sizes.end(), std::uint64_t{0}));
  }
}

TEST(MachineProperties, EnvDomainInvariantAtEveryState) {
  for (std::size_t i = 0; i < kCorpus; ++i) {
    TermPtr t = corpus(i);
    SpaceRun r = skam_run(compile(t), 500);
    for (std::size_t k = 0; k < r.num_states(); ++k) {
      ASSERT_TRUE(check_env_domain_invariant(r.state(k))) << print_term(*t) << " state " << k;
    }
  }
}

TEST(MachineProperties, StoredSizesMatchStates) {
  for (std::size_t i = 0; i < kCorpus; ++i) {
    SpaceRun r = skam_run(compile(corpus(i)), 500);
    for (std::size_t k = 0; k < r.num_states(); ++k) ASSERT_EQ(r.size_at(k), state_size(r.state(k)));
  }
}

TEST(MachineProperties, DecodeIsStableAlongTheRun) {
  // Sea and sub steps do not change the decoded term; beta steps perform a
  // weak head step.
  for (std::size_t i = 0; i < kCorpus; ++i) {
    TermPtr t = corpus(i);
    SpaceRun r = skam_run(compile(t), 300);
    TermPtr cur = decode(r.state(0));
    for (std::size_t k = 1; k < r.num_states(); ++k) {
      TermPtr next = decode(r.state(k));
      SpaceLabel l = r.trace[k - 1].label;
      if (l == SpaceLabel::BetaW || l == SpaceLabel::BetaNw) {
        auto stepped = whnf_step(cur);
        ASSERT_TRUE(stepped.has_value());
        ASSERT_TRUE(alpha_eq(**stepped, *next)) << print_term(*t) << " step " << k;
      } else {
        ASSERT_TRUE(alpha_eq(*cur, *next)) << print_term(*t) << " step " << k;
      }
      cur = next;
    }
  }
}

TEST(MachineProperties, BetaCountsAgreeWithReduction) {
  for (std::size_t i = 0; i < kCorpus; ++i) {
    TermPtr t = corpus(i);
    SpaceRun sr = skam_run(compile(t), 2000);
    if (!sr.final_reached) continue;
    spacekam::Run kr = kam_run(compile(t), 10000);
    ASSERT_TRUE(kr.final_reached);
    WhnfResult w = whnf_eval(t, 10000);
    EXPECT_EQ(sr.beta_count(), w.steps);
    EXPECT_EQ(kr.count(KamLabel::Beta), w.steps);
    EXPECT_TRUE(alpha_eq(*decode(kr.final_state()), *w.result));
    EXPECT_TRUE(alpha_eq(*decode(sr.final_state()), *w.result));
  }
}

TEST(MachineProperties, SpaceKamNeverExceedsKam) {
  // Per completing run, the Space KAM uses at most the KAM's space.
  for (std::size_t i = 0; i < kCorpus; ++i) {
    TermPtr t = corpus(i);
    SpaceRun sr = skam_run(compile(t), 2000);
    if (!sr.final_reached) continue;
    oracle::Trace o = oracle::kam(*t, 10000);
    EXPECT_LE(sr.space, *std::max_element(o.sizes.begin(), o.sizes.end())) << print_term(*t);
  }
}
