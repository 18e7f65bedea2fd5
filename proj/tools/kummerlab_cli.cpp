// Batch front end for the kummerlab shared library.  Talks to the C API only.
//
// Exit codes: 0 all checks passed, 1 statistical failure, 2 usage or config
// error, 3 numeric error (domain, non-convergence, degenerate sampler).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kummerlab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitStatFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

int exit_code_of(klb_status s) {
  switch (s) {
    case KLB_OK: return kExitPass;
    case KLB_E_PARSE:
    case KLB_E_CONTRACT:
    case KLB_E_DOMAIN: return kExitUsage;  // bad argument values are usage errors
    default: return kExitNumeric;
  }
}

int fail(klb_status s, const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, klb_last_error());
  return exit_code_of(s);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ManifestArg {
  std::string key, value;  // value is pre-rendered JSON
};

// every output file is paired with <file>.manifest.json naming the command,
// full parameter set, seed, tool version, timestamps and produced outputs
int write_manifest(const std::string& for_file, const std::string& command,
                   const std::vector<ManifestArg>& args, std::uint64_t seed,
                   const std::string& started, const std::vector<std::string>& outputs) {
  const std::string path = for_file + ".manifest.json";
  std::ofstream f(path);
  if (!f) {
    std::fprintf(stderr, "error: cannot write manifest '%s'\n", path.c_str());
    return kExitUsage;
  }
  f << "{\"command\":\"" << command << "\",\"args\":{";
  for (std::size_t i = 0; i < args.size(); ++i) {
    f << (i ? "," : "") << "\"" << args[i].key << "\":" << args[i].value;
  }
  f << "},\"seed\":" << seed << ",\"version\":\"" << klb_version() << "\"";
  f << ",\"started\":\"" << started << "\",\"finished\":\"" << iso_now() << "\"";
  f << ",\"outputs\":[";
  for (std::size_t i = 0; i < outputs.size(); ++i)
    f << (i ? "," : "") << "\"" << outputs[i] << "\"";
  f << "]}\n";
  return kExitPass;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("KUMMERLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kummerlab: Kummer distributions, independence-preserving maps, verification"};
  app.require_subcommand(1);

  // ---- eval-u ----
  double ua = 0, ub = 0, uz = 0, rel_tol = 0;
  auto* eval_u = app.add_subcommand("eval-u", "evaluate the Kummer function U(a,b,z)");
  eval_u->add_option("--a", ua, "first parameter (a > 0)")->required();
  eval_u->add_option("--b", ub, "second parameter")->required();
  eval_u->add_option("--z", uz, "argument (z > 0)")->required();
  eval_u->add_option("--rel-tol", rel_tol, "relative tolerance (default 1e-10)");

  // ---- sample ----
  std::string law_spec, out_path;
  std::uint64_t seed = 0, stream = 0;
  std::uint64_t nsamp = 0;
  auto* sample = app.add_subcommand("sample", "draw from a law and write CSV");
  sample->add_option("--law", law_spec, "law spec, e.g. kummer:1,2,3,1")->required();
  sample->add_option("--n", nsamp, "number of draws")->required();
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--stream", stream, "RNG stream id");
  sample->add_option("--out", out_path, "output CSV path")->required();

  // ---- transform ----
  std::string map_spec;
  double tx = 0, ty = 0;
  auto* transform = app.add_subcommand("transform", "apply a map to a point");
  transform->add_option("--map", map_spec, "map spec, e.g. psi:1,0")->required();
  transform->add_option("--x", tx, "x coordinate")->required();
  transform->add_option("--y", ty, "y coordinate")->required();

  // ---- verify ----
  std::string suite, config_path, report_path;
  int threads_flag = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "balance|corollary|limits|identities|lattice")->required();
  verify->add_option("--config", config_path, "JSON config file")->required();
  verify->add_option("--out", report_path, "report JSON path")->required();
  verify->add_option("--threads", threads_flag,
                     "worker threads (default: KUMMERLAB_THREADS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string started = iso_now();

  if (*eval_u) {
    double value = 0, err = 0;
    const klb_status s = klb_kummer_u(ua, ub, uz, rel_tol, &value, &err);
    if (s != KLB_OK) return fail(s, "eval-u");
    std::printf("{\"value\":%s,\"rel_tol\":%s}\n", fmt17(value).c_str(), fmt17(err).c_str());
    return kExitPass;
  }

  if (*sample) {
    klb_law* law = nullptr;
    klb_status s = klb_law_parse(law_spec.c_str(), &law);
    if (s != KLB_OK) return fail(s, "sample: --law");
    std::vector<double> buf(nsamp);
    s = klb_law_sample(law, seed, stream, buf.size(), buf.data());
    klb_law_free(law);
    if (s != KLB_OK) return fail(s, "sample");

    std::ofstream f(out_path);
    if (!f) {
      std::fprintf(stderr, "error: cannot open '%s'\n", out_path.c_str());
      return kExitUsage;
    }
    for (double v : buf) f << fmt17(v) << "\n";
    f.close();

    double mean = 0, mn = buf.empty() ? 0 : buf[0], mx = mn;
    for (double v : buf) {
      mean += v;
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (!buf.empty()) mean /= static_cast<double>(buf.size());
    double var = 0;
    for (double v : buf) var += (v - mean) * (v - mean);
    if (buf.size() > 1) var /= static_cast<double>(buf.size() - 1);
    std::printf("{\"n\":%zu,\"mean\":%s,\"sd\":%s,\"min\":%s,\"max\":%s,\"out\":\"%s\"}\n",
                buf.size(), fmt17(mean).c_str(), fmt17(std::sqrt(var)).c_str(),
                fmt17(mn).c_str(), fmt17(mx).c_str(), out_path.c_str());
    return write_manifest(out_path, "sample",
                          {{"law", "\"" + law_spec + "\""},
                           {"n", std::to_string(nsamp)},
                           {"stream", std::to_string(stream)}},
                          seed, started, {out_path});
  }

  if (*transform) {
    klb_map* map = nullptr;
    klb_status s = klb_map_parse(map_spec.c_str(), &map);
    if (s != KLB_OK) return fail(s, "transform: --map");
    double u = 0, v = 0;
    s = klb_map_apply(map, tx, ty, &u, &v);
    klb_map_free(map);
    if (s != KLB_OK) return fail(s, "transform");
    std::printf("{\"u\":%s,\"v\":%s}\n", fmt17(u).c_str(), fmt17(v).c_str());
    return kExitPass;
  }

  if (*verify) {
    std::ifstream cf(config_path);
    if (!cf) {
      std::fprintf(stderr, "error: cannot read config '%s'\n", config_path.c_str());
      return kExitUsage;
    }
    std::stringstream ss;
    ss << cf.rdbuf();
    const std::string config = ss.str();

    char* report = nullptr;
    int all_pass = 0;
    const klb_status s =
        klb_verify(suite.c_str(), config.c_str(), resolve_threads(threads_flag), &report,
                   &all_pass);
    if (s != KLB_OK) return fail(s, "verify");

    std::ofstream rf(report_path);
    if (!rf) {
      std::fprintf(stderr, "error: cannot open '%s'\n", report_path.c_str());
      klb_string_free(report);
      return kExitUsage;
    }
    // keep the document deterministic; the manifest (with timestamps) is a
    // sidecar referenced here by name
    std::string text(report);
    klb_string_free(report);
    const std::string manifest_ref =
        ",\"manifest_file\":\"" + report_path + ".manifest.json\"}";
    text.replace(text.size() - 1, 1, manifest_ref);
    rf << text << "\n";
    rf.close();

    std::vector<std::string> outputs{report_path};
    const int mrc = write_manifest(
        report_path, "verify " + suite,
        {{"config", "\"" + config_path + "\""},
         {"config_json", config.empty() ? std::string("null") : config}},
        0, started, outputs);
    if (mrc != kExitPass) return mrc;
    std::printf("{\"all_pass\":%s,\"report\":\"%s\"}\n", all_pass ? "true" : "false",
                report_path.c_str());
    return all_pass ? kExitPass : kExitStatFail;
  }

  return kExitUsage;
}
