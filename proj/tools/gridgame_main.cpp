// Copyright 2026 The gridgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end.
//
//   gridgame run --config cfg.json [--scenario kind] [--out dir]
//                [--eps v] [--max-rounds n] [--verify-inner]
//   gridgame export --run dir --series name
//   gridgame oracle --config cfg.json
//
// Exit codes: 0 success, 2 configuration or usage error, 3 non-convergence,
// 4 I/O failure, 1 anything else.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gridgame/gridgame.hpp"

namespace {

using gridgame::format_sig12;

int run_command(const std::string& config_path,
                const std::string& scenario_override,
                const std::string& out_override, bool eps_given, double eps,
                bool rounds_given, int max_rounds, bool verify_inner) {
  gridgame::ScenarioSpec spec = gridgame::load_config(config_path);
  if (!scenario_override.empty()) {
    spec.kind = gridgame::parse_scenario_kind(scenario_override);
  }
  if (!out_override.empty()) {
    spec.out_dir = out_override;
  }
  const bool leader_following = spec.kind == gridgame::ScenarioKind::kBasic ||
                                spec.kind == gridgame::ScenarioKind::kDfa;
  if (eps_given) {
    if (!leader_following) {
      throw gridgame::ConfigError(
          "eps: only valid for basic and dfa scenarios");
    }
    spec.eps = eps;
  }
  if (verify_inner) {
    if (!leader_following) {
      throw gridgame::ConfigError(
          "verify-inner: only valid for basic and dfa scenarios");
    }
    spec.verify_inner = true;
  }
  if (rounds_given) {
    if (spec.kind == gridgame::ScenarioKind::kBaseline) {
      throw gridgame::ConfigError(
          "max-rounds: not applicable to the baseline scenario");
    }
    spec.max_rounds = max_rounds;
  }
  gridgame::validate_spec(spec);
  const gridgame::RunArtifacts artifacts = gridgame::run_scenario(spec);
  std::cout << "scenario: " << gridgame::scenario_kind_name(spec.kind)
            << '\n';
  std::cout << "rounds: " << artifacts.rounds << '\n';
  std::cout << "converged: " << (artifacts.converged ? "true" : "false")
            << '\n';
  std::cout << "terminal_S: " << format_sig12(artifacts.terminal_social)
            << '\n';
  std::cout << "terminal_PoA: " << format_sig12(artifacts.terminal_poa)
            << '\n';
  std::cout << "artifacts: " << spec.out_dir << '\n';
  return 0;
}

int export_command(const std::string& run_dir, const std::string& series) {
  const gridgame::RunArtifacts artifacts =
      gridgame::artifacts_from_dir(run_dir);
  const auto written = gridgame::export_plot_data(artifacts, series);
  for (const auto& path : written) {
    std::cout << path.string() << '\n';
  }
  return 0;
}

int oracle_command(const std::string& config_path) {
  const gridgame::ScenarioSpec spec = gridgame::load_config(config_path);
  const gridgame::MarketConfig& config = spec.market;
  const gridgame::NashSystem system = gridgame::build_nash_system(config);
  const gridgame::PriceVector ne = gridgame::solve_full_ne(system);
  const double ne_social = gridgame::social_profit(config, ne);
  const gridgame::SocialOptimum optimum =
      gridgame::global_social_optimum(config);
  const double lipschitz = gridgame::gradient_lipschitz(config);
  const gridgame::Assumption1Report assumption1 =
      gridgame::check_assumption1(config);
  for (int k = 0; k < config.num_ucs; ++k) {
    std::cout << "ne_w_" << k + 1 << " = " << format_sig12(ne[k]) << '\n';
  }
  std::cout << "ne_S = " << format_sig12(ne_social) << '\n';
  for (int k = 0; k < config.num_ucs; ++k) {
    std::cout << "optimum_w_" << k + 1 << " = "
              << format_sig12(optimum.prices[k]) << '\n';
  }
  std::cout << "optimum_S = " << format_sig12(optimum.value) << '\n';
  std::cout << "gradient_lipschitz = " << format_sig12(lipschitz) << '\n';
  std::cout << "assumption1_holds = "
            << (assumption1.holds ? "true" : "false") << '\n';
  std::cout << "assumption1_margin = "
            << format_sig12(assumption1.worst_margin) << '\n';
  std::cout << "poa_ne = " << format_sig12(gridgame::price_of_anarchy(config))
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic price games for multi-utility electricity markets"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario_override;
  std::string out_override;
  double eps = 0.0;
  int max_rounds = 0;
  bool verify_inner = false;
  std::string run_dir;
  std::string series;

  CLI::App* run_cmd =
      app.add_subcommand("run", "Run a scenario from a JSON config");
  run_cmd->add_option("--config", config_path, "Path to the JSON config")
      ->required();
  run_cmd->add_option("--scenario", scenario_override,
                      "Override the scenario kind");
  run_cmd->add_option("--out", out_override,
                      "Override the output directory");
  CLI::Option* eps_opt = run_cmd->add_option(
      "--eps", eps, "Override the termination threshold");
  CLI::Option* rounds_opt = run_cmd->add_option(
      "--max-rounds", max_rounds, "Override the round cap");
  run_cmd->add_flag("--verify-inner", verify_inner,
                    "Re-verify follower equilibria every round");

  CLI::App* export_cmd =
      app.add_subcommand("export", "Export plot-ready series from a run");
  export_cmd->add_option("--run", run_dir, "Run directory to read")
      ->required();
  export_cmd
      ->add_option("--series", series,
                   "One of prices, profits, user-profits, poa, demands")
      ->required();

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Print equilibrium and optimum reference values");
  oracle_cmd->add_option("--config", config_path, "Path to the JSON config")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(run_cmd)) {
      return run_command(config_path, scenario_override, out_override,
                         eps_opt->count() > 0, eps, rounds_opt->count() > 0,
                         max_rounds, verify_inner);
    }
    if (app.got_subcommand(export_cmd)) {
      return export_command(run_dir, series);
    }
    return oracle_command(config_path);
  } catch (const gridgame::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const gridgame::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const gridgame::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
