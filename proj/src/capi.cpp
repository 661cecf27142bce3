#include "tltrack.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tltrack/builtin.hpp"
#include "tltrack/errors.hpp"
#include "tltrack/mission.hpp"
#include "tltrack/trace.hpp"
#include "tltrack/verify.hpp"
#include "tltrack/version.hpp"

struct tlt_mission {
  std::string text;
  tlt::mission::Mission m;
};

struct tlt_result {
  tlt::mission::MissionResult res;
  std::string summary;
  std::string manifest;
};

namespace {

void put_err(char* errbuf, size_t errlen, const std::string& msg) {
  if (!errbuf || errlen == 0) return;
  size_t n = std::min(errlen - 1, msg.size());
  std::memcpy(errbuf, msg.data(), n);
  errbuf[n] = '\0';
}

void set_err(int* err, int code) {
  if (err) *err = code;
}

int code_of(const tlt::Error& e) {
  switch (e.code()) {
    case tlt::ErrorCode::InvalidInput:
    case tlt::ErrorCode::Io:
      return TLT_ERR_INPUT;
    default:
      return TLT_ERR_MISSION;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tlt::engine::SimConfig parse_config(const char* config_json) {
  const char* text = config_json ? config_json : tlt::builtin::kDefaultConfig;
  return tlt::mission::config_from_json(
      nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true));
}

template <typename F>
auto guarded(F&& f, int* err, char* errbuf, size_t errlen, decltype(f()) fail_value)
    -> decltype(f()) {
  try {
    set_err(err, TLT_OK);
    return f();
  } catch (const tlt::Error& e) {
    set_err(err, code_of(e));
    put_err(errbuf, errlen, e.what());
  } catch (const nlohmann::json::exception& e) {
    set_err(err, TLT_ERR_INPUT);
    put_err(errbuf, errlen, e.what());
  } catch (const std::exception& e) {
    set_err(err, TLT_ERR_MISSION);
    put_err(errbuf, errlen, e.what());
  }
  return fail_value;
}

}  // namespace

extern "C" {

const char* tlt_version(void) { return tlt::kVersion; }

const char* tlt_default_config_json(void) { return tlt::builtin::kDefaultConfig; }

tlt_mission* tlt_mission_load(const char* path, int* err, char* errbuf, size_t errlen) {
  return guarded(
      [&]() -> tlt_mission* {
        if (!path) throw tlt::input_error("path is NULL");
        std::ifstream in(path);
        if (!in) throw tlt::Error(tlt::ErrorCode::Io, std::string("cannot open '") + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        auto h = std::make_unique<tlt_mission>();
        h->text = ss.str();
        h->m = tlt::mission::load_mission_file(path);
        return h.release();
      },
      err, errbuf, errlen, nullptr);
}

tlt_mission* tlt_mission_load_str(const char* text, int* err, char* errbuf, size_t errlen) {
  return guarded(
      [&]() -> tlt_mission* {
        if (!text) throw tlt::input_error("text is NULL");
        auto h = std::make_unique<tlt_mission>();
        h->text = text;
        h->m = tlt::mission::load_mission_text(h->text);
        return h.release();
      },
      err, errbuf, errlen, nullptr);
}

void tlt_mission_free(tlt_mission* m) { delete m; }

char* tlt_mission_plan_json(const tlt_mission* m, const char* config_json, int* err, char* errbuf,
                            size_t errlen) {
  return guarded(
      [&]() -> char* {
        if (!m) throw tlt::input_error("mission handle is NULL");
        auto cfg = parse_config(config_json);
        auto plan = tlt::mission::plan_mission(m->m, cfg);
        return dup_string(tlt::mission::plan_to_json(m->m, plan).dump(2));
      },
      err, errbuf, errlen, nullptr);
}

tlt_result* tlt_run(const tlt_mission* m, const char* config_json, long long seed, int use_seed,
                    int* err, char* errbuf, size_t errlen) {
  return guarded(
      [&]() -> tlt_result* {
        if (!m) throw tlt::input_error("mission handle is NULL");
        auto cfg = parse_config(config_json);
        if (use_seed) cfg.seed = static_cast<std::uint64_t>(seed);
        auto plan = tlt::mission::plan_mission(m->m, cfg);
        auto r = std::make_unique<tlt_result>();
        r->res = tlt::mission::run_mission(m->m, plan, cfg);
        r->summary = tlt::mission::summary_to_json(m->m, plan, r->res, cfg).dump(2);
        std::vector<std::string> artifacts = {"trace.csv", "summary.json", "manifest.json",
                                              "tracking_error.dat", "control.dat"};
        r->manifest = tlt::mission::manifest_to_json(m->text, cfg, artifacts).dump(2);
        return r.release();
      },
      err, errbuf, errlen, nullptr);
}

int tlt_result_verdict(const tlt_result* r) { return r && r->res.success ? 1 : 0; }

char* tlt_result_summary_json(const tlt_result* r) { return r ? dup_string(r->summary) : nullptr; }

char* tlt_result_manifest_json(const tlt_result* r) {
  return r ? dup_string(r->manifest) : nullptr;
}

int tlt_result_save_trace_csv(const tlt_result* r, const char* path, char* errbuf, size_t errlen) {
  int err = TLT_OK;
  guarded(
      [&]() -> int {
        if (!r || !path) throw tlt::input_error("NULL argument");
        r->res.trace.save_csv(path);
        return 0;
      },
      &err, errbuf, errlen, -1);
  return err;
}

int tlt_result_write_plot_data(const tlt_result* r, const char* out_dir, char* errbuf,
                               size_t errlen) {
  int err = TLT_OK;
  guarded(
      [&]() -> int {
        if (!r || !out_dir) throw tlt::input_error("NULL argument");
        tlt::engine::write_plot_data(r->res.trace, out_dir);
        return 0;
      },
      &err, errbuf, errlen, -1);
  return err;
}

void tlt_result_free(tlt_result* r) { delete r; }

char* tlt_verify_suite(const char* suite, int as_json, int* pass, int* err, char* errbuf,
                       size_t errlen) {
  if (pass) *pass = 0;
  return guarded(
      [&]() -> char* {
        if (!suite) throw tlt::input_error("suite is NULL");
        auto result = tlt::verify::run_suite(suite);
        if (pass) *pass = result.all_pass() ? 1 : 0;
        return dup_string(as_json ? tlt::verify::to_json(result).dump(2)
                                  : tlt::verify::to_text(result));
      },
      err, errbuf, errlen, nullptr);
}

int tlt_replot(const char* trace_csv, const char* out_dir, char* errbuf, size_t errlen) {
  int err = TLT_OK;
  guarded(
      [&]() -> int {
        if (!trace_csv || !out_dir) throw tlt::input_error("NULL argument");
        auto log = tlt::engine::TraceLog::load_csv(trace_csv);
        tlt::engine::write_plot_data(log, out_dir);
        return 0;
      },
      &err, errbuf, errlen, -1);
  return err;
}

void tlt_string_free(char* s) { std::free(s); }

}  // extern "C"
