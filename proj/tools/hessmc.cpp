// Command-line front end: run single experiments, parameter sweeps and the
// verification battery against the built-in model catalog.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hessmc/geometry/catalog.hpp"
#include "hessmc/harness/acceptance.hpp"
#include "hessmc/harness/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

hessmc::ExperimentConfig load_config(const std::string& path,
                                     const std::vector<std::string>& overrides) {
  hessmc::ExperimentConfig cfg = hessmc::parse_config_file(path);
  for (const std::string& entry : overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw hessmc::UsageError("--set expects key=value, got '" + entry + "'");
    }
    hessmc::apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
  }
  return cfg;
}

void emit_record(const hessmc::RunRecord& record,
                 const std::string& output_path) {
  const std::string text = hessmc::record_to_string(record);
  if (!output_path.empty()) {
    const std::string resolved = hessmc::resolve_output_path(output_path);
    hessmc::write_text_file(resolved, text + "\n");
    std::fprintf(stderr, "record written to %s\n", resolved.c_str());
  }
  std::printf("%s\n", text.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo engine for heat and Schrodinger semigroups on "
               "model manifolds"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string axis;
  std::vector<double> axis_values;
  std::string csv_out;
  bool mutate_ricci = false;
  long verify_paths = 100000;
  std::vector<int> verify_only;

  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--set", overrides, "override config entries (key=value)");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run an experiment across an axis");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  sweep_cmd->add_option("--axis", axis, "dt | n_paths | t")->required();
  sweep_cmd->add_option("--values", axis_values, "axis values")
      ->required()
      ->expected(-1);
  sweep_cmd->add_option("--set", overrides, "override config entries");
  sweep_cmd->add_option("--csv", csv_out, "write the sweep table to this file");

  auto* verify_cmd =
      app.add_subcommand("verify", "run the acceptance battery");
  verify_cmd->add_option("--n-paths", verify_paths, "paths per criterion");
  verify_cmd->add_option("--only", verify_only, "criterion indices to run");
  verify_cmd
      ->add_flag("--mutate-flip-ricci-sign", mutate_ricci,
                 "sensitivity hook: flip the Ricci sign (must fail)")
      ->group("");  // hidden

  auto* list_models = app.add_subcommand("list-models", "print model catalog");
  auto* list_estimators =
      app.add_subcommand("list-estimators", "print estimator catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const hessmc::ExperimentConfig cfg = load_config(config_path, overrides);
      const hessmc::RunRecord record = hessmc::run_experiment(cfg);
      emit_record(record, cfg.output);
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      const hessmc::ExperimentConfig cfg = load_config(config_path, overrides);
      const hessmc::SweepResult sweep =
          hessmc::run_sweep(cfg, axis, axis_values);
      std::printf("%s", sweep.csv.c_str());
      if (!csv_out.empty()) {
        hessmc::write_text_file(hessmc::resolve_output_path(csv_out),
                                sweep.csv);
      }
      return kExitOk;
    }
    if (verify_cmd->parsed()) {
      hessmc::AcceptanceOptions options;
      options.n_paths = verify_paths;
      options.mutate_flip_ricci_sign = mutate_ricci;
      options.only = verify_only;
      const auto results = hessmc::run_acceptance(options);
      return hessmc::print_acceptance(results) == 0 ? kExitOk
                                                    : kExitVerifyFailure;
    }
    if (list_models->parsed()) {
      for (const auto& id : hessmc::builtin_model_ids()) {
        std::printf("%s\n", id.c_str());
      }
      std::printf("h fields:");
      for (const auto& id : hessmc::builtin_h_ids()) std::printf(" %s", id.c_str());
      std::printf("\npotentials:");
      for (const auto& id : hessmc::builtin_potential_ids()) {
        std::printf(" %s", id.c_str());
      }
      std::printf("\ntest functions:");
      for (const auto& id : hessmc::builtin_function_ids()) {
        std::printf(" %s", id.c_str());
      }
      std::printf("\n");
      return kExitOk;
    }
    if (list_estimators->parsed()) {
      for (const auto& id : hessmc::estimator_ids()) {
        std::printf("%s\n", id.c_str());
      }
      return kExitOk;
    }
  } catch (const hessmc::UsageError& err) {
    std::fprintf(stderr, "usage error: %s\n", err.what());
    return kExitUsage;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
