// Copyright 2026 The krotov-lq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// krotov_lq: command-line front end.
//
//   krotov_lq solve     --scenario ex.scn [--dt 1e-3] [--out dir]
//   krotov_lq enumerate --scenario ex.scn --starts 500 --seed 7
//   krotov_lq example   ex2 --out runs/ex2
//
// Exit status: 0 ok, 1 validation or usage error, 2 solver failure,
// 3 numerical blowup.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "krotov/app.hpp"

namespace {

void add_common(CLI::App* sub, krotov::app::RunManifest& mf, double& dt, double& tol, double& truncate,
                double& t_end) {
  sub->add_option("--dt", dt, "integration step")->check(CLI::PositiveNumber);
  sub->add_option("--starts", mf.starts, "random Newton starts of the enumeration")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", mf.seed, "seed of the enumeration and sampling");
  sub->add_option("--tol", tol, "residual acceptance of the enumeration")->check(CLI::PositiveNumber);
  sub->add_option("--truncate", truncate, "truncation T of the steady-state integral")->check(CLI::PositiveNumber);
  sub->add_option("--t-end", t_end, "end of the simulated window");
  sub->add_option("--every", mf.every, "CSV row stride (0 picks one)");
  sub->add_option("--out", mf.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  using krotov::app::RunManifest;
  using krotov::app::Subcommand;

  CLI::App app{"Krotov-function synthesis of LQ regulators and trackers"};
  app.require_subcommand(1);
  RunManifest mf;
  double dt = 0.0;
  double tol = 0.0;
  double truncate = 0.0;
  double t_end = 0.0;

  const auto scenario_cmd = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", mf.scenario, "scenario file")->required();
    add_common(sub, mf, dt, tol, truncate, t_end);
    return sub;
  };
  scenario_cmd("solve", "synthesize, certify and simulate the optimal law");
  scenario_cmd("enumerate", "enumerate solutions of the generalized algebraic equation");
  scenario_cmd("certify", "convexity certificate of the synthesized Krotov function");
  scenario_cmd("track", "tracking feedforward and closed-loop tracking error");
  scenario_cmd("iterate", "iterative improvement from the zero law");
  CLI::App* sim = scenario_cmd("simulate", "simulate a zero or optimal law");
  sim->add_option("--gain", mf.gain, "zero | optimal")->check(CLI::IsMember({"zero", "optimal"}));
  CLI::App* example = app.add_subcommand("example", "run a built-in worked example");
  example->add_option("id", mf.scenario, "ex1..ex6 | krotov-demo")
      ->required()
      ->check(CLI::IsMember(krotov::builtin_ids()));
  add_common(example, mf, dt, tol, truncate, t_end);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  mf.subcommand = krotov::app::parse_subcommand(app.get_subcommands().front()->get_name());
  if (dt > 0.0) mf.dt = dt;
  if (tol > 0.0) mf.tol = tol;
  if (truncate > 0.0) mf.truncate = truncate;
  if (t_end != 0.0) mf.t_end = t_end;
  return krotov::app::run(mf, std::cout, std::cerr);
}
