#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "conic/bench.hpp"
#include "conic/errors.hpp"

namespace conic {
namespace {

double solve_objective(const ProblemData& p) {
  const auto res = solve(p);
  EXPECT_EQ(res.status, Status::Solved) << res.message;
  return res.primal_objective;
}

TEST(DrawAlpha, SimplexAndDeterministic) {
  const auto a = draw_alpha(50, 3);
  EXPECT_EQ(a, draw_alpha(50, 3));
  EXPECT_NE(a, draw_alpha(50, 4));
  EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-14);
  for (double v : a) EXPECT_GE(v, 1e-3 / 50.0);
}

TEST(DrawPrior, Distribution) {
  const Vector q = draw_prior(20, 5);
  EXPECT_NEAR(q.sum(), 1.0, 1e-14);
  EXPECT_GT(q.minCoeff(), 0.0);
}

// Stationarity gives x = α, so t* = ∏ αᵢ^{αᵢ}.
TEST(MaxLikelihood, AnalyticOptimumAllFormulations) {
  for (int n : {2, 7, 40}) {
    const auto alpha = draw_alpha(n, 11);
    double log_t = 0.0;
    for (double a : alpha) log_t += a * std::log(a);
    const double t_star = std::exp(log_t);
    for (auto f : {Formulation::Native, Formulation::Split3d, Formulation::PowMean}) {
      const double obj = solve_objective(gen_max_likelihood(n, 11, f));
      EXPECT_NEAR(-obj, t_star, 1e-6 * t_star) << "n=" << n << " " << to_string(f);
    }
  }
}

TEST(MaxLikelihood, SplitChainShape) {
  const auto p = gen_max_likelihood(6, 1, Formulation::Split3d);
  int powers = 0;
  for (const auto& k : p.cones) {
    if (k.kind() == ConeKind::GenPow) {
      ++powers;
      EXPECT_EQ(k.dim(), 3);
    }
  }
  EXPECT_EQ(powers, 5);
  EXPECT_TRUE(validate(p).empty());
}

TEST(MaxVolume, TwoDimensionalGrid) {
  // Brute force over the feasible square: max √(x₁x₂) s.t. |x₁|+|x₂| ≤ 1.
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x1 = i / 2000.0;
    best = std::max(best, std::sqrt(x1 * (1.0 - x1)));
  }
  EXPECT_NEAR(best, 0.5, 1e-12);
  for (auto f : {Formulation::Native, Formulation::Split3d, Formulation::PowMean}) {
    EXPECT_NEAR(-solve_objective(gen_max_volume(2, 1.0, 1, f)), 0.5, 1e-7) << to_string(f);
  }
}

TEST(MaxVolume, ScalesWithGamma) {
  for (int n : {5, 30}) {
    const double t1 = -solve_objective(gen_max_volume(n, 1.0, 2, Formulation::Native));
    const double t2 = -solve_objective(gen_max_volume(n, 2.0, 2, Formulation::Native));
    EXPECT_NEAR(t1, 1.0 / n, 1e-7);
    EXPECT_NEAR(t2, 2.0 * t1, 1e-7);
  }
}

TEST(EntropyMax, OptimumIsZero) {
  for (int d : {1, 2, 25}) {
    for (auto f : {Formulation::Native, Formulation::Split3d}) {
      const auto p = gen_entropy_max(d, 4, f);
      const auto res = solve(p);
      ASSERT_EQ(res.status, Status::Solved);
      EXPECT_NEAR(res.primal_objective, 0.0, 1e-6) << "d=" << d << " " << to_string(f);
    }
  }
}

TEST(Generate, DispatchesAndRejectsUnknownNames) {
  EXPECT_TRUE(identical(generate({Family::EntropyMax, Formulation::Native, 5, 3}),
                        gen_entropy_max(5, 3, Formulation::Native)));
  EXPECT_EQ(parse_family("max_volume"), Family::MaxVolume);
  EXPECT_EQ(parse_formulation("split3d"), Formulation::Split3d);
  EXPECT_THROW(parse_family("lasso"), std::invalid_argument);
  EXPECT_THROW(parse_formulation("socp"), std::invalid_argument);
  EXPECT_THROW(make_suite("nope", {10}, 1), std::invalid_argument);
}

TEST(RunBench, NativeMaxLikelihoodRows) {
  std::vector<BenchCase> cases;
  for (const auto& c : make_suite("max_likelihood", {50, 100}, 1)) {
    if (c.formulation == Formulation::Native) cases.push_back(c);
  }
  ASSERT_EQ(cases.size(), 2u);
  const auto report = run_bench(instantiate(cases), Settings{}, 1);
  ASSERT_EQ(report.rows.size(), 2u);
  for (const auto& row : report.rows) EXPECT_EQ(row.status, Status::Solved);
  EXPECT_TRUE(report.all_definitive());
  EXPECT_NE(report.markdown().find("| max_likelihood | native | 100 |"), std::string::npos);
}

TEST(RunBench, DeterministicWithoutTiming) {
  const auto inst = instantiate(make_suite("all", {20}, 7));
  const auto a = run_bench(inst, Settings{}, 1);
  const auto b = run_bench(instantiate(make_suite("all", {20}, 7)), Settings{}, 1);
  EXPECT_EQ(a.csv(false), b.csv(false));
  EXPECT_EQ(a.csv(false).substr(0, a.csv(false).find('\n')),
            "family,formulation,size,iterations,status,objective");
  EXPECT_EQ(a.csv(true).substr(0, a.csv(true).find('\n')),
            "family,formulation,size,iterations,solve_ms,status,objective");
}

TEST(RunBench, InfeasibleCaseRecorded) {
  auto inst = instantiate({BenchCase{Family::MaxLikelihood, Formulation::Native, 10, 1}});
  // Σx = −1 with x in the power cone has no solution.
  inst[0].problem.h *= -1.0;
  inst.push_back(instantiate({BenchCase{Family::EntropyMax, Formulation::Native, 10, 1}})[0]);
  const auto report = run_bench(inst, Settings{}, 1);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].status, Status::PrimalInfeasible);
  EXPECT_EQ(report.rows[1].status, Status::Solved);
  EXPECT_TRUE(report.all_definitive());
}

TEST(RunBench, ThrowingCaseDoesNotStopRun) {
  auto inst = instantiate({BenchCase{Family::MaxVolume, Formulation::Native, 5, 1},
                           BenchCase{Family::MaxVolume, Formulation::Native, 6, 1}});
  inst[0].problem.b.resize(1);
  const auto report = run_bench(inst, Settings{}, 1);
  EXPECT_EQ(report.rows[0].status, Status::NumericalError);
  EXPECT_FALSE(report.rows[0].error.empty());
  EXPECT_EQ(report.rows[1].status, Status::Solved);
  EXPECT_FALSE(report.all_definitive());
}

TEST(Checks, AllPass) {
  for (const auto& c : run_checks(1)) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

}  // namespace
}  // namespace conic
