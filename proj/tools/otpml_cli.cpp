// Command-line front end: generate | report | train | corr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "otpml/config.hpp"
#include "otpml/dataset.hpp"
#include "otpml/error.hpp"
#include "otpml/eval.hpp"
#include "otpml/pipeline.hpp"
#include "otpml/stats.hpp"
#include "otpml/synth.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value config file (defaults apply when omitted)");
  cmd->add_option("--set", args.overrides, "override a config key, e.g. --set knn.k=7")->take_all();
}

otpml::RunConfig resolve(const CommonArgs& args) {
  if (args.config_path.empty()) return otpml::parse_config("", args.overrides);
  return otpml::load_config(args.config_path, args.overrides);
}

int cmd_generate(const CommonArgs& args, const std::string& out, const std::string& config_out) {
  const otpml::RunConfig cfg = resolve(args);
  if (cfg.csv_path) {
    throw otpml::Error(otpml::ErrorKind::ConflictingSources, "generate needs generator settings, not input.csv");
  }
  const otpml::FeaturizedDataset d = otpml::generate(cfg.generator);
  const auto records = d.to_records();
  if (out.empty() || out == "-") {
    otpml::write_csv(std::cout, records);
  } else {
    otpml::write_csv(std::filesystem::path(out), records);
    std::cerr << fmt::format("wrote {} rows to {}\n", records.size(), out);
  }
  if (!config_out.empty()) {
    otpml::write_artifact(std::filesystem::path(config_out).parent_path().empty()
                              ? std::filesystem::path(".")
                              : std::filesystem::path(config_out).parent_path(),
                          {std::filesystem::path(config_out).filename().string(), otpml::to_config_text(cfg)});
  }
  return 0;
}

int cmd_report(const CommonArgs& args, const std::string& out) {
  const otpml::RunConfig cfg = resolve(args);
  const std::filesystem::path dir = out.empty() ? cfg.output_dir : std::filesystem::path(out);
  otpml::run_pipeline(cfg, [&dir](const otpml::ReportArtifact& a) {
    otpml::write_artifact(dir, a);
    std::cerr << fmt::format("wrote {}\n", (dir / a.name).string());
  });
  return 0;
}

int cmd_train(const CommonArgs& args) {
  const otpml::RunConfig cfg = resolve(args);
  const otpml::FeaturizedDataset d = otpml::load_input(cfg);
  const auto results =
      otpml::repeated_mean_accuracies(otpml::model_suite(cfg), d, cfg.n_runs, cfg.base_seed, cfg.test_fraction);
  for (const auto& r : results) std::cout << fmt::format("{:<18} {:.4f}\n", r.name, r.mean);
  return 0;
}

int cmd_corr(const CommonArgs& args) {
  const otpml::RunConfig cfg = resolve(args);
  const otpml::FeaturizedDataset d = otpml::load_input(cfg);
  const std::vector<std::string> names(otpml::kTelemetryColumns.begin(), otpml::kTelemetryColumns.end());
  std::cout << otpml::render_correlation(otpml::corr_matrix(d.table(), names));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bus on-time-performance analysis pipeline"};
  app.require_subcommand(1);

  CommonArgs gen_args, report_args, train_args, corr_args;
  std::string gen_out, gen_config_out, report_out;

  auto* gen = app.add_subcommand("generate", "write a synthetic route-day CSV");
  add_common(gen, gen_args);
  gen->add_option("--out", gen_out, "output CSV path ('-' or omitted = stdout)");
  gen->add_option("--config-out", gen_config_out, "also write the effective config here");

  auto* report = app.add_subcommand("report", "run the full pipeline and write the report files");
  add_common(report, report_args);
  report->add_option("--out", report_out, "report directory (default: report.output_dir)");

  auto* train = app.add_subcommand("train", "print mean accuracy per model");
  add_common(train, train_args);

  auto* corr = app.add_subcommand("corr", "print the telemetry correlation table");
  add_common(corr, corr_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_generate(gen_args, gen_out, gen_config_out);
    if (*report) return cmd_report(report_args, report_out);
    if (*train) return cmd_train(train_args);
    if (*corr) return cmd_corr(corr_args);
  } catch (const otpml::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return otpml::is_model_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
