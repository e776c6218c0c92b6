#include <gtest/gtest.h>

#include "spacekam/harness.hpp"
#include "spacekam/term.hpp"
#include "support/running_example.hpp"

using namespace spacekam;

namespace {

TermPtr P(const char* s) { return parse_term(s); }

bool same(const TermPtr& a, const char* b) { return alpha_eq(*a, *P(b)); }

}  // namespace

TEST(Parse, Identity) {
  TermPtr t = P("\\a.a");
  ASSERT_TRUE(t->is_abs());
  EXPECT_EQ(t->as_abs()->binder, "a");
  ASSERT_TRUE(t->as_abs()->body->is_var());
  EXPECT_EQ(t->as_abs()->body->as_var()->name, "a");
}

TEST(Parse, RunningExampleShape) {
  TermPtr t = P(fixture::kRunningExample);
  const App* top = t->as_app();
  ASSERT_NE(top, nullptr);
  EXPECT_TRUE(syntactic_eq(*top->arg, *make_abs("a", make_var("a"))));
  const Abs* lx = top->fun->as_abs();
  ASSERT_NE(lx, nullptr);
  EXPECT_EQ(lx->binder, "x");
  const App* inner = lx->body->as_app();
  ASSERT_NE(inner, nullptr);
  EXPECT_TRUE(syntactic_eq(*inner->arg, *make_var("x")));
  TermPtr ly = make_abs("y", make_app(make_abs("z", make_var("x")), make_app(make_var("x"), make_var("y"))));
  EXPECT_TRUE(syntactic_eq(*inner->fun, *ly));
}

TEST(Parse, ApplicationIsLeftAssociative) {
  TermPtr t = P("x y z");
  TermPtr expect = make_app(make_app(make_var("x"), make_var("y")), make_var("z"));
  EXPECT_TRUE(syntactic_eq(*t, *expect));
}

TEST(Parse, AbstractionExtendsRight) {
  EXPECT_TRUE(syntactic_eq(*P("\\x.x y"), *make_abs("x", make_app(make_var("x"), make_var("y")))));
  EXPECT_TRUE(syntactic_eq(*P("f \\x.x"), *make_app(make_var("f"), make_abs("x", make_var("x")))));
}

TEST(Parse, UnicodeLambdaAndComments) {
  EXPECT_TRUE(syntactic_eq(*P("λx.x -- identity\n"), *P("\\x.x")));
  EXPECT_TRUE(syntactic_eq(*P("-- lead\n(\\x'.x') y_1"), *make_app(P("\\x'.x'"), make_var("y_1"))));
}

TEST(Parse, ErrorsCarryOffset) {
  try {
    P("(\\x.x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(P(""), ParseError);
  EXPECT_THROW(P("\\.x"), ParseError);
  EXPECT_THROW(P("x )"), ParseError);
  EXPECT_THROW(P("x $"), ParseError);
}

TEST(Parse, UnboundVariablesAreAccepted) { EXPECT_EQ(P("\\x.y")->free_vars(), VarSet{"y"}); }

TEST(Identifiers, Alphabet) {
  EXPECT_TRUE(is_identifier("x'_9A"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("a-b"));
}

TEST(FreeVars, Examples) {
  EXPECT_TRUE(free_vars(*P("\\a.a")).empty());
  EXPECT_EQ(free_vars(*P("x y")), (VarSet{"x", "y"}));
  EXPECT_EQ(free_vars(*P("\\z.x")), VarSet{"x"});
}

TEST(Subst, Examples) {
  TermPtr id = P("\\a.a");
  EXPECT_TRUE(syntactic_eq(*subst(P("x"), "x", id), *id));
  TermPtr captured = subst(P("\\y.x"), "x", P("y"));
  const Abs* abs = captured->as_abs();
  ASSERT_NE(abs, nullptr);
  EXPECT_NE(abs->binder, "y");
  EXPECT_TRUE(syntactic_eq(*abs->body, *make_var("y")));
  EXPECT_TRUE(syntactic_eq(*subst(P("\\x.x"), "x", P("u")), *P("\\x.x")));
}

TEST(Whnf, Examples) {
  auto r = whnf_step(P("(\\x.\\y.x x) t"));
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(same(*r, "\\y.t t"));
  EXPECT_FALSE(whnf_step(P("\\a.a")).has_value());
  EXPECT_FALSE(whnf_step(P("x (\\a.a)")).has_value());
}

TEST(Whnf, RunningExampleTakesThreeSteps) {
  TermPtr t = P(fixture::kRunningExample);
  const char* expected[] = {"(\\y.(\\z.\\a.a) ((\\a.a) y)) (\\a.a)", "(\\z.\\a.a) ((\\a.a) (\\a.a))", "\\a.a"};
  for (const char* e : expected) {
    auto next = whnf_step(t);
    ASSERT_TRUE(next.has_value());
    EXPECT_TRUE(same(*next, e)) << print_term(**next);
    t = *next;
  }
  EXPECT_FALSE(whnf_step(t).has_value());

  WhnfResult res = whnf_eval(P(fixture::kRunningExample), 10);
  EXPECT_EQ(res.steps, 3u);
  EXPECT_FALSE(res.exhausted);
  EXPECT_TRUE(same(res.result, "\\a.a"));
}

TEST(Whnf, Fuel) {
  EXPECT_TRUE(whnf_eval(P(fixture::kOmega), 100).exhausted);
  WhnfResult r = whnf_eval(P("\\a.a"), 0);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_FALSE(r.exhausted);
  // Exactly enough fuel is not exhaustion.
  WhnfResult exact = whnf_eval(P(fixture::kRunningExample), 3);
  EXPECT_FALSE(exact.exhausted);
  EXPECT_TRUE(whnf_eval(P(fixture::kRunningExample), 2).exhausted);
}

TEST(Alpha, Examples) {
  EXPECT_TRUE(alpha_eq(*P("\\a.a"), *P("\\b.b")));
  EXPECT_FALSE(alpha_eq(*P("\\a.\\b.a"), *P("\\a.\\b.b")));
  EXPECT_TRUE(alpha_eq(*P("\\x.x x"), *P("\\y.y y")));
  EXPECT_FALSE(alpha_eq(*P("\\x.y"), *P("\\x.z")));
  EXPECT_FALSE(alpha_eq(*P("\\x.\\x.x"), *P("\\x.\\y.x")));
  EXPECT_FALSE(syntactic_eq(*P("\\a.a"), *P("\\b.b")));
}

TEST(Print, MinimalParentheses) {
  EXPECT_EQ(print_term(*P("(\\x.x) (\\y.y)")), "(\\x.x) (\\y.y)");
  EXPECT_EQ(print_term(*P("((x y) z)")), "x y z");
  EXPECT_EQ(print_term(*P("x (y z)")), "x (y z)");
  EXPECT_EQ(print_term(*P("\\x.(\\y.y)")), "\\x.\\y.y");
}

TEST(FreshName, AvoidsSet) {
  VarSet avoid{"x", "x_1", "x_2"};
  std::string n = fresh_name("x", avoid);
  EXPECT_FALSE(avoid.contains(n));
  EXPECT_TRUE(is_identifier(n));
}

// Properties over generated terms, closed and open.

namespace {

constexpr int kCases = 400;

TermPtr open_term(std::uint64_t seed) {
  // Closed term with its outer binders stripped off.
  TermPtr t = random_closed_term(seed, 14);
  while (t->is_abs() && seed % 3 != 0) {
    t = t->as_abs()->body;
    seed /= 3;
  }
  return t;
}

}  // namespace

TEST(TermProperties, PrintParseRoundTrip) {
  for (int i = 0; i < kCases; ++i) {
    TermPtr t = open_term(splitmix64(i));
    TermPtr back = parse_term(print_term(*t));
    EXPECT_TRUE(syntactic_eq(*t, *back)) << print_term(*t);
  }
}

TEST(TermProperties, SubstOfAbsentVariableIsIdentity) {
  for (int i = 0; i < kCases; ++i) {
    TermPtr t = open_term(splitmix64(i));
    TermPtr u = open_term(splitmix64(i + 7777));
    EXPECT_TRUE(alpha_eq(*subst(t, "absent", u), *t));
  }
}

TEST(TermProperties, FreeVariablesOfSubstitution) {
  for (int i = 0; i < kCases; ++i) {
    TermPtr t = open_term(splitmix64(i));
    TermPtr u = open_term(splitmix64(i + 99));
    if (t->free_vars().empty()) continue;
    const std::string x = *t->free_vars().begin();
    VarSet expect = t->free_vars();
    expect.erase(x);
    expect.insert(u->free_vars().begin(), u->free_vars().end());
    EXPECT_EQ(subst(t, x, u)->free_vars(), expect) << print_term(*t) << " [" << x << ":=" << print_term(*u) << "]";
    EXPECT_EQ(free_vars(*subst(t, x, u)), expect);
  }
}

TEST(TermProperties, WhnfStepIsDeterministicUpToAlpha) {
  for (int i = 0; i < kCases; ++i) {
    TermPtr t = random_closed_term(splitmix64(i), 20);
    // A renamed copy takes the same step.
    TermPtr renamed = parse_term(print_term(*t));
    auto a = whnf_step(t);
    auto b = whnf_step(renamed);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_TRUE(alpha_eq(**a, **b));
    }
  }
}

TEST(TermProperties, AlphaEquivalenceIgnoresBinderNames) {
  for (int i = 0; i < kCases; ++i) {
    TermPtr t = random_closed_term(splitmix64(i), 20);
    // Rename every binder through substitution of a fresh variable.
    auto rename = [](auto&& self, const TermPtr& s) -> TermPtr {
      if (const Abs* a = s->as_abs()) {
        std::string y = fresh_name(a->binder, s->free_vars());
        return make_abs(y, self(self, subst(a->body, a->binder, make_var(y))));
      }
      if (const App* p = s->as_app()) return make_app(self(self, p->fun), self(self, p->arg));
      return s;
    };
    EXPECT_TRUE(alpha_eq(*t, *rename(rename, t))) << print_term(*t);
  }
}
