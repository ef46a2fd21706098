// Copyright 2026 The samwinch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// samsim: runs a scenario file and writes the CSV log, a summary and a
// plot script.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sam/harness/scenario.hpp"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitRun = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate the crane-suspended aerial manipulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string file, out, winches, tier;
  run->add_option("scenario", file, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides the scenario's)");
  run->add_option("--winches", winches, "Winch enable flag")->check(CLI::IsMember({"on", "off"}));
  run->add_option("--tier", tier, "Model tier")->check(CLI::IsMember({"planar", "3d"}));

  auto* defaults = app.add_subcommand("defaults", "Print the default parameter file");

  CLI11_PARSE(app, argc, argv);

  if (defaults->parsed()) {
    std::cout << sam::format_params(sam::default_params());
    return 0;
  }

  sam::harness::Scenario s;
  try {
    s = sam::harness::load_scenario(file);
  } catch (const std::exception& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kExitSchema;
  }
  if (!out.empty()) s.output_dir = out;
  if (!winches.empty()) s.winches = winches == "on";
  if (!tier.empty()) s.tier = tier == "planar" ? sam::harness::Tier::kPlanar : sam::harness::Tier::k3d;

  try {
    const auto log = sam::harness::run_scenario(s);
    const auto paths = sam::harness::emit_outputs(log, s.output_dir);
    std::cout << sam::harness::summary_text(log);
    std::cout << "csv = " << paths.csv << "\nsummary_file = " << paths.summary
              << "\nplot = " << paths.plot << "\n";
  } catch (const sam::harness::ScenarioError& e) {
    std::cerr << s.name << ": " << e.what() << "\n";
    return kExitRun;
  } catch (const std::exception& e) {
    std::cerr << s.name << ": " << e.what() << "\n";
    return kExitRun;
  }
  return 0;
}
