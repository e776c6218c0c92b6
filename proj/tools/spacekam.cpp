// spacekam command line: run the machines, extract and check derivations,
// fuzz the correctness theorems.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "spacekam/extract.hpp"
#include "spacekam/harness.hpp"
#include "spacekam/json_io.hpp"
#include "spacekam/kam.hpp"
#include "spacekam/space_kam.hpp"

using namespace spacekam;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

TermPtr load_term(const std::string& path) {
  TermPtr t = parse_term(read_input(path));
  if (!t->is_closed()) throw UsageError("term is not closed: " + print_term(*t));
  return t;
}

template <class Labels, class R>
std::string counts_line(const Labels& labels, const R& run) {
  std::string out;
  for (auto l : labels) {
    if (!out.empty()) out += ", ";
    out += std::string(to_string(l)) + " " + std::to_string(run.count(l));
  }
  return out;
}

struct Args {
  std::string input;
  std::string output;
  std::string trace;
  std::string mode = "space";
  std::size_t fuel = 10000;
  bool json = false;
  bool full = false;
  bool serial = false;
  FuzzConfig fuzz;
};

int cmd_eval(const Args& a) {
  WhnfResult r = whnf_eval(load_term(a.input), a.fuel);
  std::cout << "result: " << print_term(*r.result) << "\n"
            << "steps: " << r.steps << (r.exhausted ? " (fuel exhausted)" : "") << "\n";
  return kOk;
}

int cmd_kam(const Args& a) {
  Run run = kam_run(compile(load_term(a.input)), a.fuel);
  if (!a.trace.empty()) write_output(a.trace, trace_jsonl(run));
  std::cout << "transitions: " << run.transitions() << " (" << counts_line(kAllKamLabels, run) << ")\n"
            << "complete: " << (run.final_reached ? "yes" : "no") << "\n";
  if (run.final_reached) std::cout << "result: " << print_term(*decode(run.final_state())) << "\n";
  return kOk;
}

int cmd_skam(const Args& a) {
  SpaceRun run = skam_run(compile(load_term(a.input)), a.fuel, true);
  if (!a.trace.empty()) write_output(a.trace, trace_jsonl(run));
  std::cout << "transitions: " << run.transitions() << " (" << counts_line(kAllSpaceLabels, run)
            << ")\n"
            << "complete: " << (run.final_reached ? "yes" : "no") << "\n"
            << "space: " << run.space << "\n"
            << "time: " << run.time << "\n";
  if (run.final_reached) std::cout << "result: " << print_term(*decode(run.final_state())) << "\n";
  return kOk;
}

Mode parse_mode(const std::string& s) {
  auto m = mode_from_string(s);
  if (!m) throw UsageError("unknown mode " + s);
  return *m;
}

int cmd_infer(const Args& a) {
  Mode mode = parse_mode(a.mode);
  MachState init = compile(load_term(a.input));
  DerivPtr pi;
  if (mode == Mode::Kam) {
    Run run = kam_run(init, a.fuel);
    if (!run.final_reached) {
      std::cerr << "run did not finish within " << a.fuel << " transitions\n";
      return kCheckFailed;
    }
    pi = extract_kam(run);
  } else {
    SpaceRun run = skam_run(init, a.fuel);
    if (!run.final_reached) {
      std::cerr << "run did not finish within " << a.fuel << " transitions\n";
      return kCheckFailed;
    }
    pi = extract(run);
    if (mode == Mode::Time) pi = reweight(pi, Mode::Time);
  }
  write_output(a.output, derivation_to_json(pi).dump(2) + "\n");
  std::cerr << to_string(mode) << " weight: " << pi->conclusion.weight << "\n";
  return kOk;
}

int cmd_check(const Args& a) {
  Mode mode = parse_mode(a.mode);
  json j;
  try {
    j = json::parse(read_input(a.input));
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("invalid JSON: ") + e.what());
  }
  DerivPtr pi = derivation_from_json(j);
  CheckResult r = check(pi, mode, a.full);
  if (r.ok) {
    std::cout << "ok, " << to_string(mode) << " weight " << r.weight << "\n";
    return kOk;
  }
  for (const auto& e : r.errors) std::cout << e.path << ": " << e.message << "\n";
  return kCheckFailed;
}

int cmd_verify(const Args& a) {
  VerificationReport r = verify(load_term(a.input), a.fuel);
  if (a.json) {
    std::cout << report_to_json(r).dump(2) << "\n";
  } else {
    std::cout << "term: " << print_term(*r.term) << "\n"
              << "complete: " << (r.complete ? "yes" : "no") << "\n"
              << "wh steps: " << r.wh_steps << "\n"
              << "kam decarvalho weight: " << r.kam.decarvalho_weight << "\n"
              << "skam space: " << r.skam.space << " (weight " << r.skam.space_weight << ")\n"
              << "skam time: " << r.skam.time << " (weight " << r.skam.time_weight << ")\n";
    for (const auto& c : r.checks) {
      std::cout << (c.pass ? "  pass " : "  FAIL ") << c.name;
      if (!c.detail.empty()) std::cout << ": " << c.detail;
      std::cout << "\n";
    }
  }
  return r.passed() ? kOk : kCheckFailed;
}

int cmd_fuzz(const Args& a) {
  FuzzConfig cfg = a.fuzz;
  cfg.fuel = a.fuel;
  FuzzSummary s = a.serial ? fuzz_serial(cfg) : fuzz_parallel(cfg);
  if (a.json) {
    std::cout << summary_to_json(s).dump(2) << "\n";
  } else {
    std::cout << "terms: " << s.count << ", complete: " << s.complete << ", incomplete: " << s.incomplete
              << ", failed: " << s.failed << "\n";
    for (const auto& [name, n] : s.failures_by_check) std::cout << "  " << name << ": " << n << "\n";
    if (!s.failing_indices.empty()) {
      std::cout << "first failing term: "
                << print_term(*random_closed_term(term_seed(cfg.seed, s.failing_indices.front()),
                                                  cfg.budget, cfg.weights))
                << "\n";
    }
  }
  return s.failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-certified evaluator for closed call-by-name lambda-terms"};
  app.require_subcommand(1);
  Args a;

  auto fuel = [&](CLI::App* sub) {
    sub->add_option("--fuel", a.fuel, "Maximum number of steps")->envname("SPACEKAM_FUEL");
  };
  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("file", a.input, what)->required();
  };
  auto mode = [&](CLI::App* sub) {
    sub->add_option("--mode", a.mode, "space, time or kam")
        ->required()
        ->check(CLI::IsMember({"space", "time", "kam"}));
  };

  auto* eval = app.add_subcommand("eval", "Weak head evaluation with the reference reducer");
  input(eval, "Term file, - for stdin");
  fuel(eval);
  auto* kam = app.add_subcommand("kam", "Run the KAM");
  input(kam, "Term file, - for stdin");
  fuel(kam);
  kam->add_option("--trace", a.trace, "Write the trace as JSON lines");
  auto* skam = app.add_subcommand("skam", "Run the Space KAM and report space and time");
  input(skam, "Term file, - for stdin");
  fuel(skam);
  skam->add_option("--trace", a.trace, "Write the trace as JSON lines");
  auto* infer = app.add_subcommand("infer", "Extract a weighted derivation from a complete run");
  input(infer, "Term file, - for stdin");
  mode(infer);
  fuel(infer);
  infer->add_option("-o,--output", a.output, "Derivation JSON output (default stdout)");
  auto* chk = app.add_subcommand("check", "Validate a derivation and recompute its weight");
  input(chk, "Derivation JSON file, - for stdin");
  mode(chk);
  chk->add_flag("--full", a.full, "Report every failing node");
  auto* ver = app.add_subcommand("verify", "Run everything and cross-check all weights");
  input(ver, "Term file, - for stdin");
  fuel(ver);
  ver->add_flag("--json", a.json, "JSON report");
  auto* fz = app.add_subcommand("fuzz", "Verify random closed terms");
  fz->add_option("--count", a.fuzz.count, "Number of terms")->required();
  fz->add_option("--seed", a.fuzz.seed, "Campaign seed")->required();
  fz->add_option("--budget", a.fuzz.budget, "Term size budget")->check(CLI::PositiveNumber);
  fuel(fz);
  fz->add_option("--p-app", a.fuzz.weights.app, "Weight of applications");
  fz->add_option("--p-abs", a.fuzz.weights.abs, "Weight of abstractions");
  fz->add_option("--p-var", a.fuzz.weights.var, "Weight of variables");
  fz->add_flag("--json", a.json, "JSON summary");
  fz->add_flag("--serial", a.serial, "Use the single-threaded reference loop");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) return cmd_eval(a);
    if (*kam) return cmd_kam(a);
    if (*skam) return cmd_skam(a);
    if (*infer) return cmd_infer(a);
    if (*chk) return cmd_check(a);
    if (*ver) return cmd_verify(a);
    if (*fz) return cmd_fuzz(a);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
