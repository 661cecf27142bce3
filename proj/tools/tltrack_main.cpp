// tltrack command line tool. Talks to the library exclusively through the
// C API in tltrack.h, same as any external consumer would.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tltrack.h"

namespace fs = std::filesystem;

namespace {

constexpr size_t kErrLen = 1024;

struct StringFree {
  void operator()(char* s) const { tlt_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringFree>;

struct MissionFree {
  void operator()(tlt_mission* m) const { tlt_mission_free(m); }
};
using MissionHandle = std::unique_ptr<tlt_mission, MissionFree>;

struct ResultFree {
  void operator()(tlt_result* r) const { tlt_result_free(r); }
};
using ResultHandle = std::unique_ptr<tlt_result, ResultFree>;

int exit_code_for(int err) { return err == TLT_ERR_INPUT ? 2 : 1; }

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const fs::path& path, const char* text) {
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return bool(out);
}

// Loads --spec / --config; on failure prints to stderr and returns an exit code > 0.
int load_inputs(const std::string& spec_path, const std::string& config_path,
                MissionHandle& mission, std::string& config_text) {
  if (!config_path.empty()) {
    if (!read_file(config_path, config_text)) {
      std::fprintf(stderr, "error: cannot read config '%s'\n", config_path.c_str());
      return 2;
    }
  }
  int err = TLT_OK;
  char errbuf[kErrLen] = {0};
  mission.reset(tlt_mission_load(spec_path.c_str(), &err, errbuf, kErrLen));
  if (!mission) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return exit_code_for(err);
  }
  return 0;
}

struct RunOutcome {
  int exit_code = 1;
  std::string line;
};

RunOutcome run_one(const tlt_mission* mission, const char* config_json, long long seed,
                   bool use_seed, const fs::path& out_dir) {
  RunOutcome out;
  int err = TLT_OK;
  char errbuf[kErrLen] = {0};
  ResultHandle res(
      tlt_run(mission, config_json, seed, use_seed ? 1 : 0, &err, errbuf, kErrLen));
  if (!res) {
    out.exit_code = exit_code_for(err);
    out.line = std::string("error: ") + errbuf;
    return out;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    out.exit_code = 2;
    out.line = "error: cannot create '" + out_dir.string() + "': " + ec.message();
    return out;
  }

  int rc = tlt_result_save_trace_csv(res.get(), (out_dir / "trace.csv").string().c_str(), errbuf,
                                     kErrLen);
  if (rc == TLT_OK)
    rc = tlt_result_write_plot_data(res.get(), out_dir.string().c_str(), errbuf, kErrLen);
  if (rc != TLT_OK) {
    out.exit_code = exit_code_for(rc);
    out.line = std::string("error: ") + errbuf;
    return out;
  }

  ApiString summary(tlt_result_summary_json(res.get()));
  ApiString manifest(tlt_result_manifest_json(res.get()));
  if (!summary || !manifest || !write_file(out_dir / "summary.json", summary.get()) ||
      !write_file(out_dir / "manifest.json", manifest.get())) {
    out.exit_code = 2;
    out.line = "error: cannot write summary/manifest under '" + out_dir.string() + "'";
    return out;
  }

  bool ok = tlt_result_verdict(res.get()) != 0;
  out.exit_code = ok ? 0 : 1;
  out.line = (ok ? "satisfied -> " : "failed -> ") + out_dir.string();
  return out;
}

bool parse_seed_range(const std::string& text, long long& lo, long long& hi) {
  auto pos = text.find("..");
  if (pos == std::string::npos) return false;
  try {
    size_t used = 0;
    lo = std::stoll(text.substr(0, pos), &used);
    if (used != pos) return false;
    std::string tail = text.substr(pos + 2);
    hi = std::stoll(tail, &used);
    if (used != tail.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return lo <= hi;
}

int cmd_plan(const std::string& spec_path, const std::string& config_path) {
  MissionHandle mission;
  std::string config_text;
  if (int rc = load_inputs(spec_path, config_path, mission, config_text)) return rc;

  int err = TLT_OK;
  char errbuf[kErrLen] = {0};
  ApiString plan(tlt_mission_plan_json(mission.get(),
                                       config_text.empty() ? nullptr : config_text.c_str(), &err,
                                       errbuf, kErrLen));
  if (!plan) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return exit_code_for(err);
  }
  std::printf("%s\n", plan.get());
  return 0;
}

int cmd_run(const std::string& spec_path, const std::string& config_path, long long seed,
            bool use_seed, const std::string& seeds_text, const std::string& out_dir) {
  MissionHandle mission;
  std::string config_text;
  if (int rc = load_inputs(spec_path, config_path, mission, config_text)) return rc;
  const char* config_json = config_text.empty() ? nullptr : config_text.c_str();

  if (seeds_text.empty()) {
    RunOutcome out = run_one(mission.get(), config_json, seed, use_seed, out_dir);
    if (out.exit_code == 0 || out.exit_code == 1)
      std::printf("%s\n", out.line.c_str());
    else
      std::fprintf(stderr, "%s\n", out.line.c_str());
    return out.exit_code;
  }

  if (use_seed) {
    std::fprintf(stderr, "error: --seed and --seeds are mutually exclusive\n");
    return 2;
  }
  long long lo = 0, hi = 0;
  if (!parse_seed_range(seeds_text, lo, hi)) {
    std::fprintf(stderr, "error: --seeds wants 'a..b' with a <= b, got '%s'\n",
                 seeds_text.c_str());
    return 2;
  }

  std::vector<long long> seeds;
  for (long long s = lo; s <= hi; ++s) seeds.push_back(s);
  std::vector<RunOutcome> outcomes(seeds.size());

  unsigned hw = std::thread::hardware_concurrency();
  size_t workers = std::min(seeds.size(), size_t(hw ? hw : 4));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1)) {
        fs::path dir = fs::path(out_dir) / ("seed_" + std::to_string(seeds[i]));
        outcomes[i] = run_one(mission.get(), config_json, seeds[i], true, dir);
      }
    });
  }
  for (auto& t : pool) t.join();

  int exit_code = 0;
  for (size_t i = 0; i < seeds.size(); ++i) {
    const auto& out = outcomes[i];
    if (out.exit_code == 0 || out.exit_code == 1)
      std::printf("seed %lld: %s\n", seeds[i], out.line.c_str());
    else
      std::fprintf(stderr, "seed %lld: %s\n", seeds[i], out.line.c_str());
    exit_code = std::max(exit_code, out.exit_code);
  }
  return exit_code;
}

int cmd_verify(const std::string& suite, bool as_json) {
  std::vector<std::string> suites;
  if (!suite.empty())
    suites.push_back(suite);
  else
    suites = {"barrier", "ltl", "trigger", "learning", "mission"};

  bool all_pass = true;
  if (as_json) std::printf("[");
  for (size_t i = 0; i < suites.size(); ++i) {
    int pass = 0, err = TLT_OK;
    char errbuf[kErrLen] = {0};
    ApiString report(
        tlt_verify_suite(suites[i].c_str(), as_json ? 1 : 0, &pass, &err, errbuf, kErrLen));
    if (!report) {
      if (as_json) std::printf("]\n");
      std::fprintf(stderr, "error: %s\n", errbuf);
      return exit_code_for(err);
    }
    if (as_json)
      std::printf("%s%s", i ? ",\n" : "", report.get());
    else
      std::printf("%s", report.get());
    all_pass = all_pass && pass != 0;
  }
  if (as_json) std::printf("]\n");
  return all_pass ? 0 : 1;
}

int cmd_replot(const std::string& trace_path, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create '%s': %s\n", out_dir.c_str(),
                 ec.message().c_str());
    return 2;
  }
  char errbuf[kErrLen] = {0};
  int rc = tlt_replot(trace_path.c_str(), out_dir.c_str(), errbuf, kErrLen);
  if (rc != TLT_OK) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return exit_code_for(rc);
  }
  std::printf("plot data -> %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tltrack: safety-constrained tracking missions from LTL objectives"};
  app.set_version_flag("--version", std::string(tlt_version()));
  app.require_subcommand(1);

  std::string spec_path, config_path, seeds_text, suite;
  std::string out_dir = "out";
  std::string trace_path;
  long long seed = 0;
  bool as_json = false;

  auto* plan = app.add_subcommand("plan", "Build the automaton and print the sub-problem list");
  plan->add_option("--spec", spec_path, "mission file")->required();
  plan->add_option("--config", config_path, "config JSON (defaults to built-in)");

  auto* run = app.add_subcommand("run", "Execute a mission and write artifacts");
  run->add_option("--spec", spec_path, "mission file")->required();
  run->add_option("--config", config_path, "config JSON (defaults to built-in)");
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--seeds", seeds_text, "seed sweep 'a..b', one output dir per seed");
  run->add_option("--out", out_dir, "output directory (default: out)");

  auto* verify = app.add_subcommand("verify", "Run property suites");
  verify->add_option("--suite", suite, "barrier|ltl|trigger|learning|mission (default: all)");
  verify->add_flag("--json", as_json, "machine-readable report");

  auto* replot = app.add_subcommand("replot", "Regenerate plot data from a saved trace");
  replot->add_option("--trace", trace_path, "trace.csv produced by run")->required();
  replot->add_option("--out", out_dir, "output directory (default: out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (plan->parsed()) return cmd_plan(spec_path, config_path);
  if (run->parsed())
    return cmd_run(spec_path, config_path, seed, seed_opt->count() > 0, seeds_text, out_dir);
  if (verify->parsed()) return cmd_verify(suite, as_json);
  if (replot->parsed()) return cmd_replot(trace_path, out_dir);
  return 2;
}
