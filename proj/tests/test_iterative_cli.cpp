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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "krotov/app.hpp"
#include "krotov/krotov.hpp"
#include "test_support.hpp"

using namespace krotov;
using krotov::oracles::max_abs_diff;
using krotov::oracles::scalar;
using krotov::oracles::vec1;

namespace {

namespace fs = std::filesystem;

ControlLaw zero_law(const LqProblem& p) {
  return {MatrixPath::constant(Eigen::MatrixXd::Zero(p.m(), p.n())), VectorPath::constant(Eigen::VectorXd::Zero(p.m()))};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("krotov_unit_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Iterative, DemoSequence) {
  const LqProblem p = builtin_example("krotov-demo").problem;
  const auto records = krotov_iterate(p, zero_law(p));
  ASSERT_GE(records.size(), 3u);
  EXPECT_LE(records.back().k, 10);
  EXPECT_EQ(records.front().delta, 0.0);
  // u = 0: x = 5 e^-t, J0 = 25 int_0^10 e^-2t dt.
  EXPECT_NEAR(records[0].J_k, 12.5 * (1.0 - std::exp(-20.0)), 1e-6);
  EXPECT_NEAR(records[1].J_k, 10.4167, 1e-3);
  EXPECT_NEAR(records[2].J_k, 10.3554, 1e-3);
  for (std::size_t i = 1; i < records.size(); ++i) {
    EXPECT_LE(records[i].J_k, records[i - 1].J_k + 1e-12);
    EXPECT_NEAR(records[i].delta, records[i - 1].J_k - records[i].J_k, 1e-15);
  }
  EXPECT_LT(std::abs(records.back().delta), 1e-6);
  const ControlLaw direct = gain_from_P(p, integrate_mdre(p, 1e-3));
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    worst = std::max(worst, max_abs_diff(records.back().gain_k.K(t), direct.K(t)));
  }
  EXPECT_LT(worst, 1e-4);
  // The optimum 25 p(0) with cost_scale 1.
  EXPECT_NEAR(records.back().J_k, 25.0 * direct.K(0.0)(0, 0), 1e-6);
}

TEST(Iterative, SweepSatisfiesPolicyEvaluationEquation) {
  const LqProblem p = builtin_example("krotov-demo").problem;
  const auto records = krotov_iterate(p, zero_law(p));
  const auto& rec = records[1];
  for (const double t : {0.5, 3.3, 9.0}) {
    EXPECT_LT(improving_function_residual(p, rec.P_k, rec.gain_k, t).cwiseAbs().maxCoeff(), 1e-5);
  }
  // K = 0 has cost-to-go P = (1 - e^{2(t-10)}) / 2.
  for (const double t : {0.0, 4.0, 9.5}) {
    EXPECT_NEAR(records[0].P_k(t)(0, 0), 0.5 * (1.0 - std::exp(2.0 * (t - 10.0))), 1e-10);
  }
}

TEST(Iterative, RandomProblemsConverge) {
  oracles::Rng rng(77);
  for (int trial = 0; trial < 3; ++trial) {
    const LqProblem p = oracles::random_lti(rng, rng.integer(1, 3), rng.integer(1, 2), Horizon::finite(0.0, 2.0));
    KrotovRunConfig cfg;
    cfg.dt = 1e-2;
    const auto records = krotov_iterate(p, zero_law(p), cfg);
    EXPECT_LE(records.back().k, 10) << trial;
    const ControlLaw direct = gain_from_P(p, integrate_mdre(p, 1e-2));
    EXPECT_LT(max_abs_diff(records.back().gain_k.K(0.0), direct.K(0.0)), 1e-4) << trial;
  }
}

TEST(Iterative, TrackingVariantReachesDirectLaw) {
  const LqProblem p = builtin_example("ex4").problem;
  KrotovRunConfig cfg;
  cfg.dt = 1e-3;
  const auto records = krotov_iterate(p, zero_law(p), cfg);
  const MatrixPath P = integrate_mdre(p, 1e-3);
  const FeedforwardSolution g = integrate_g(p, P, 1e-3);
  const ControlLaw direct = gain_from_P(p, P, g.g);
  const ControlLaw& last = records.back().gain_k;
  for (const double t : {0.0, 2.0, 4.9}) {
    EXPECT_NEAR(last.K(t)(0, 0), direct.K(t)(0, 0), 1e-4);
    EXPECT_NEAR(last.u_ff(t)(0), direct.u_ff(t)(0), 1e-3 * std::max(1.0, std::abs(direct.u_ff(t)(0))));
  }
}

TEST(Iterative, FailureModes) {
  const LqProblem unstable = oracles::regulation_problem(scalar(1), scalar(1), scalar(1), scalar(1), scalar(0),
                                                         Horizon::finite(0.0, 10.0), vec1(1.0));
  const ControlLaw pushing{MatrixPath::constant(scalar(-100.0)), VectorPath::constant(vec1(0.0))};
  try {
    krotov_iterate(unstable, pushing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unstabilizable);
  }
  try {
    krotov_iterate(builtin_example("ex1").problem, zero_law(unstable));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfiniteHorizon);
  }
  KrotovRunConfig bad;
  bad.epsilon = 0.0;
  EXPECT_THROW(krotov_iterate(unstable, zero_law(unstable), bad), Error);
}

TEST(Csv, FormatAndStride) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(1e300), "1e+300");
  EXPECT_EQ(std::stod(format_double(std::sqrt(2.0))), std::sqrt(2.0));
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(default_stride(400001), 41u);
  EXPECT_EQ(default_stride(10), 1u);
}

TEST(Csv, Writers) {
  const LqProblem p = builtin_example("ex1").problem;
  const Trajectory traj = simulate(p, gain_from_P(p, MatrixPath::constant(scalar(0.5))), 0.25, 1.0);
  std::ostringstream t;
  write_trajectory_csv(t, traj, 3);
  const std::string s = t.str();
  EXPECT_EQ(s.rfind("t,x_1,u_1,running_cost\n0,1,", 0), 0u);
  EXPECT_NE(s.find("\n1,"), std::string::npos);  // last node kept despite the stride
  EXPECT_NE(s.find("# total_cost="), std::string::npos);

  EnumerationOptions opts;
  opts.n_starts = 10;
  std::ostringstream sol;
  write_solutions_csv(sol, solve_algebraic(p, opts));
  EXPECT_EQ(sol.str().rfind("p_11,residual_norm,symmetric,spd_symmetric_part,closed_loop_stable\n", 0), 0u);

  std::ostringstream iters;
  write_iterations_csv(iters, {IterationRecord{}});
  EXPECT_EQ(iters.str(), "k,J_k,delta,max_gain_change\n0,0,0,0\n");

  const fs::path dir = fresh_dir("plot");
  fs::create_directories(dir);
  emit_plot_data(p, traj, dir / "plot.csv");
  EXPECT_EQ(slurp(dir / "plot.csv").rfind("t,x_1,u_1\n", 0), 0u);
  const LqProblem track = builtin_example("ex2").problem;
  emit_plot_data(track, simulate(track, zero_law(track), 0.5, 2.0), dir / "track.csv");
  EXPECT_EQ(slurp(dir / "track.csv").rfind("t,y,z\n", 0), 0u);
  EXPECT_THROW(emit_plot_data(p, traj, dir / "missing" / "x.csv"), Error);
}

TEST(Builtin, IdsAndUnknown) {
  for (const auto& id : builtin_ids()) EXPECT_NO_THROW(builtin_example(id)) << id;
  EXPECT_EQ(builtin_ids().size(), 7u);
  try {
    builtin_example("ex9");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(App, ExitCodes) {
  EXPECT_EQ(app::exit_code(ErrorCode::ParseError), 1);
  EXPECT_EQ(app::exit_code(ErrorCode::InvalidArgument), 1);
  EXPECT_EQ(app::exit_code(ErrorCode::NoSolutionFound), 2);
  EXPECT_EQ(app::exit_code(ErrorCode::NoStabilizingSolution), 2);
  EXPECT_EQ(app::exit_code(ErrorCode::DivergedIterate), 2);
  EXPECT_EQ(app::exit_code(ErrorCode::Blowup), 3);
  EXPECT_EQ(app::exit_code(ErrorCode::IntegrationBlowup), 3);
  EXPECT_EQ(app::parse_subcommand("track"), app::Subcommand::Track);
  EXPECT_THROW(app::parse_subcommand("dance"), Error);
}

TEST(App, RunWritesReportAndCsv) {
  app::RunManifest mf;
  mf.subcommand = app::Subcommand::Example;
  mf.scenario = "ex1";
  mf.starts = 20;
  mf.out_dir = fresh_dir("ex1");
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(app::run(mf, out, err), 0) << err.str();
  for (const char* f : {"report.txt", "solutions.csv", "certificate.csv", "trajectory.csv", "plot.csv"}) {
    EXPECT_TRUE(fs::exists(mf.out_dir / f)) << f;
  }
  const std::string report = slurp(mf.out_dir / "report.txt");
  EXPECT_EQ(report, out.str());
  EXPECT_NE(report.find("0.4142136"), std::string::npos);
}

TEST(App, RunIsDeterministic) {
  app::RunManifest mf;
  mf.subcommand = app::Subcommand::Enumerate;
  mf.scenario = (fs::path(KROTOV_SOURCE_DIR) / "scenarios" / "ex5.scn").string();
  mf.starts = 100;
  mf.seed = 3;
  std::ostringstream sink;
  mf.out_dir = fresh_dir("det_a");
  ASSERT_EQ(app::run(mf, sink, sink), 0);
  const std::string a = slurp(mf.out_dir / "solutions.csv");
  mf.out_dir = fresh_dir("det_b");
  ASSERT_EQ(app::run(mf, sink, sink), 0);
  EXPECT_EQ(a, slurp(mf.out_dir / "solutions.csv"));
  EXPECT_FALSE(a.empty());
}

TEST(App, ErrorsMapToStatus) {
  std::ostringstream out;
  std::ostringstream err;
  app::RunManifest mf;
  mf.out_dir = fresh_dir("errors");
  mf.subcommand = app::Subcommand::Solve;
  mf.scenario = "/nonexistent.scn";
  EXPECT_EQ(app::run(mf, out, err), 1);
  EXPECT_EQ(err.str().rfind("error: IoError", 0), 0u) << err.str();

  mf.scenario = (fs::path(KROTOV_SOURCE_DIR) / "tests" / "data" / "no_solution.scn").string();
  mf.starts = 5;
  EXPECT_EQ(app::run(mf, out, err), 2);

  mf.scenario = (fs::path(KROTOV_SOURCE_DIR) / "tests" / "data" / "explosive.scn").string();
  mf.subcommand = app::Subcommand::Simulate;
  EXPECT_EQ(app::run(mf, out, err), 3);

  mf.subcommand = app::Subcommand::Track;
  mf.scenario = (fs::path(KROTOV_SOURCE_DIR) / "scenarios" / "ex1.scn").string();
  EXPECT_EQ(app::run(mf, out, err), 1);

  mf.subcommand = app::Subcommand::Example;
  mf.scenario = "nope";
  EXPECT_EQ(app::run(mf, out, err), 1);
}
