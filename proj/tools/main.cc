#include <CLI11.hpp>

#include "tdk/runner.h"

int main(int argc, char** argv) {
  CLI::App app{"spectral laboratory for the lower-deck shear/displacement pair"};
  app.require_subcommand(1);

  tdk::CliOptions opts;
  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "configuration file");
    sub->add_option("--output", opts.output_dir, "output directory");
    sub->add_option("--threads", opts.threads, "worker thread count");
    sub->add_option("--preset", opts.preset, "initial-data preset");
    sub->add_option("--resume", opts.resume, "checkpoint to resume from");
    sub->add_flag("--certified", opts.certified,
                  "derive a guaranteed window from the initial size");
  };

  CLI::App* run = app.add_subcommand("run", "integrate the coupled pair");
  CLI::App* audit = app.add_subcommand("audit", "recheck a finished run");
  CLI::App* bo = app.add_subcommand("bo", "solitary-wave propagation study");
  CLI::App* blasius = app.add_subcommand("blasius", "base-profile tables");
  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "three-deck composite fields");
  CLI::App* selftest = app.add_subcommand("selftest", "fast built-in checks");
  for (CLI::App* sub : {run, audit, bo, blasius, reconstruct, selftest})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? tdk::kExitOk : tdk::kExitConfigError;
  }

  if (run->parsed()) return tdk::cmd_run(opts);
  if (audit->parsed()) return tdk::cmd_audit(opts);
  if (bo->parsed()) return tdk::cmd_bo(opts);
  if (blasius->parsed()) return tdk::cmd_blasius(opts);
  if (reconstruct->parsed()) return tdk::cmd_reconstruct(opts);
  if (selftest->parsed()) return tdk::cmd_selftest(opts);
  return tdk::kExitOk;
}
