#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "spacekam/extract.hpp"
#include "spacekam/harness.hpp"
#include "spacekam/json_io.hpp"
#include "support/running_example.hpp"

using namespace spacekam;

namespace {

TermPtr P(const char* s) { return parse_term(s); }

json load(const std::string& name) {
  std::ifstream in(std::string(SPACEKAM_TEST_DATA) + "/" + name);
  return json::parse(in);
}

std::vector<json> lines(const std::string& jsonl) {
  std::vector<json> out;
  std::istringstream in(jsonl);
  for (std::string l; std::getline(in, l);) out.push_back(json::parse(l));
  return out;
}

}  // namespace

TEST(DerivationJson, StoredExampleIsTheHandBuiltDerivation) {
  EXPECT_EQ(load("running_example.json"), derivation_to_json(fixture::space_derivation()));
}

TEST(DerivationJson, StoredTimeExample) {
  EXPECT_EQ(load("running_example_time.json"), derivation_to_json(fixture::time_derivation()));
}

TEST(DerivationJson, StoredForgeryDiffersOnlyInOneWeight) {
  json forged = load("forged_weight.json");
  json node = forged;
  for (int i = 0; i < 5; ++i) node = node["premises"][0];
  EXPECT_EQ(node["rule"], "T-lambda2");
  EXPECT_EQ(node["judgment"]["weight"], 5);
  json patch = json::diff(load("running_example.json"), forged);
  ASSERT_EQ(patch.size(), 1u);
  EXPECT_EQ(patch[0]["path"], "/premises/0/premises/0/premises/0/premises/0/premises/0/judgment/weight");
}

TEST(DerivationJson, RoundTrip) {
  for (const DerivPtr& d :
       {fixture::space_derivation(), fixture::time_derivation(), fixture::kam_derivation()}) {
    json j = derivation_to_json(d);
    DerivPtr back = derivation_from_json(j);
    EXPECT_EQ(derivation_to_json(back), j);
  }
}

TEST(DerivationJson, StateDerivationsRoundTrip) {
  Extraction ex = extract_detailed(skam_run(compile(P(fixture::kRunningExample)), 100));
  for (const auto& st : ex.states) {
    json j = derivation_to_json(st);
    DerivPtr back = derivation_from_json(j);
    EXPECT_EQ(derivation_to_json(back), j);
    EXPECT_EQ(weight_of(back, Mode::Space), weight_of(st, Mode::Space));
  }
}

TEST(DerivationJson, Layout) {
  json j = derivation_to_json(fixture::space_derivation());
  EXPECT_EQ(j["rule"], "T-@1");
  EXPECT_EQ(j["judgment"]["subject_kind"], "term");
  EXPECT_EQ(j["judgment"]["type"], "*");
  EXPECT_EQ(j["judgment"]["weight"], 4);
  EXPECT_EQ(j["premises"].size(), 2u);
  json many = j["premises"][1];
  EXPECT_EQ(many["rule"], "T-many");
  EXPECT_EQ(many["judgment"]["type"]["k"], 1);
}

TEST(DerivationJson, MalformedInputThrows) {
  json j = derivation_to_json(fixture::space_derivation());
  json a = j;
  a["rule"] = "T-bogus";
  EXPECT_THROW(derivation_from_json(a), FormatError);
  json b = j;
  b["judgment"].erase("weight");
  EXPECT_THROW(derivation_from_json(b), FormatError);
  json c = j;
  c["judgment"]["subject"] = "(\\x.";
  EXPECT_THROW(derivation_from_json(c), FormatError);
  json d = j;
  d["premises"][1]["judgment"]["type"]["k"] = 0;
  EXPECT_THROW(derivation_from_json(d), FormatError);
  EXPECT_THROW(derivation_from_json(json::array()), FormatError);
}

TEST(MachineJson, RoundTrip) {
  SpaceRun run = skam_run(compile(P(fixture::kRunningExample)), 100);
  for (std::size_t i = 0; i < run.num_states(); ++i) {
    json j = state_to_json(run.state(i));
    MachState back = state_from_json(j);
    EXPECT_TRUE(state_equal(back, run.state(i)));
    EXPECT_EQ(state_to_json(back), j);
  }
  EXPECT_THROW(state_from_json(json{{"code", 3}}), FormatError);
}

TEST(TypeJson, RoundTrip) {
  LinearPtr t = make_arrow(ClosureMulti({star(), make_arrow(ClosureMulti::empty(2), star())}, 3), star());
  EXPECT_TRUE(type_eq(*type_from_json(type_to_json(*t)), *t));
  TypeContext g{{"x", ClosureMulti({star()}, 1)}, {"y", ClosureMulti::empty(4)}};
  EXPECT_TRUE(context_equal(context_from_json(context_to_json(g)), g));
  PlainPtr p = make_plain_arrow(MultiType({plain_star(), plain_star()}), plain_star());
  EXPECT_EQ(compare(*plain_type_from_json(type_to_json(*p)), *p), 0);
  EXPECT_FALSE(type_to_json(*p)["arg"].contains("k"));
}

TEST(TraceJson, SpaceKam) {
  SpaceRun run = skam_run(compile(P(fixture::kRunningExample)), 100);
  std::vector<json> ls = lines(trace_jsonl(run));
  ASSERT_EQ(ls.size(), 8u);
  const char* labels[] = {"init", "sea_nv", "beta_nw", "sea_v", "beta_nw", "sea_nv", "beta_w", "sub"};
  const int sizes[] = {0, 1, 1, 2, 2, 4, 1, 0};
  for (std::size_t i = 0; i < ls.size(); ++i) {
    EXPECT_EQ(ls[i]["step"], i);
    EXPECT_EQ(ls[i]["label"], labels[i]);
    EXPECT_EQ(ls[i]["size"], sizes[i]);
    EXPECT_TRUE(state_equal(state_from_json(ls[i]), run.state(i)));
  }
}

TEST(TraceJson, Kam) {
  spacekam::Run run = kam_run(compile(P(fixture::kRunningExample)), 100);
  std::vector<json> ls = lines(trace_jsonl(run));
  ASSERT_EQ(ls.size(), 8u);
  EXPECT_EQ(ls[0]["label"], "init");
  EXPECT_EQ(ls[1]["label"], "sea");
  EXPECT_EQ(ls[7]["label"], "sub");
}

TEST(Summary, SpaceKam) {
  json s = run_summary(skam_run(compile(P(fixture::kRunningExample)), 100));
  EXPECT_EQ(s["space"], 4);
  EXPECT_EQ(s["time"], 11);
  EXPECT_EQ(s["complete"], true);
  EXPECT_EQ(s["transitions"]["beta_nw"], 2);
}

TEST(ReportJson, RoundTrip) {
  VerificationReport r = verify(P(fixture::kRunningExample), 1000);
  json j = report_to_json(r);
  EXPECT_TRUE(report_from_json(j) == r);
  EXPECT_EQ(j["skam"]["space"], 4);
  VerificationReport omega = verify(P(fixture::kOmega), 100);
  EXPECT_TRUE(report_from_json(report_to_json(omega)) == omega);
}
