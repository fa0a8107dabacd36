#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "output.hpp"
#include "padyn/kernels.hpp"

using namespace padyn;
using namespace padyn::cli;

namespace {

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigParse: return kConfigParse;
    case ErrorKind::ExpansionViolated: return kExpansionViolated;
    default: return kModuleError;
  }
}

void record_error(const std::string& dir, const std::string& verb, const std::string& kind, const std::string& msg) {
  try {
    Json j{{"command", verb}, {"error", kind}, {"message", msg}};
    write_json(std::filesystem::path(dir) / ("error_" + verb + ".json"), j);
  } catch (...) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic dynamics toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "job config (YAML)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--out", out_dir, "output directory, overrides the config");
  app.add_option("--threads", threads, "worker threads for the parallel kernels")->check(CLI::Range(0, 4096));
  for (const char* v : {"analyze", "metric", "code", "stats", "report"}) app.add_subcommand(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigParse;
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  JobConfig c;
  try {
    c = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    record_error(out_dir.empty() ? "." : out_dir, verb, to_string(e.kind()), e.what());
    return kConfigParse;
  }
  if (*seed_opt) c.seed = seed;
  if (!out_dir.empty()) c.out = out_dir;
  set_threads(threads);

  const auto t0 = std::chrono::steady_clock::now();
  int rc = kOk;
  std::string status = "ok";
  try {
    if (verb == "analyze") rc = cmd_analyze(c);
    else if (verb == "metric") rc = cmd_metric(c);
    else if (verb == "code") rc = cmd_code(c);
    else if (verb == "stats") rc = cmd_stats(c);
    else rc = cmd_report(c);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    record_error(c.out, verb, to_string(e.kind()), e.what());
    rc = exit_for(e.kind());
    status = to_string(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    record_error(c.out, verb, "Internal", e.what());
    rc = kModuleError;
    status = "Internal";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_json(std::filesystem::path(c.out) / ("meta_" + verb + ".json"),
               Json{{"command", verb},
                    {"config", c.source},
                    {"seed", c.seed},
                    {"threads", max_threads()},
                    {"finished_utc", utc_now()},
                    {"seconds", secs},
                    {"status", status},
                    {"exit_code", rc}});
  } catch (...) {
  }
  return rc;
}
