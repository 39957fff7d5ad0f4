// Command-line driver: solve a JSON problem file, run benchmark suites, or
// run the invariant checks.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "conic/bench.hpp"
#include "conic/errors.hpp"
#include "conic/ipm.hpp"
#include "conic/problem_io.hpp"

namespace {

void add_settings(CLI::App* cmd, conic::Settings& s) {
  cmd->add_option("--max-iter", s.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eps", s.eps, "Feasibility and gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--reg", s.static_reg, "Static regularization")->check(CLI::PositiveNumber);
  cmd->add_flag("-v,--verbose", s.verbose, "Print one line per iteration");
}

int run_solve(const std::string& path, const conic::Settings& settings) {
  const conic::ProblemData pd = conic::read_problem(path);
  const conic::SolveResult res = conic::solve(pd, settings);
  fmt::print("status      {}\n", conic::to_string(res.status));
  fmt::print("iterations  {}\n", res.iterations);
  fmt::print("primal obj  {:.10g}\n", res.primal_objective);
  fmt::print("dual obj    {:.10g}\n", res.dual_objective);
  if (res.status == conic::Status::PrimalInfeasible ||
      res.status == conic::Status::DualInfeasible) {
    fmt::print("cert. res.  {:.3e}\n", res.certificate_residual);
  }
  if (!res.message.empty()) fmt::print("message     {}\n", res.message);
  return conic::is_definitive(res.status) ? 0 : 1;
}

int run_bench(const std::string& suite, const std::vector<int>& sizes, std::uint64_t seed,
              const std::string& out, int repeats, const conic::Settings& settings) {
  const auto cases = conic::make_suite(suite, sizes, seed);
  const auto report = conic::run_bench(conic::instantiate(cases), settings, repeats);
  std::cout << report.markdown();
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", out));
    f << report.csv();
  }
  return report.all_definitive() ? 0 : 1;
}

int run_check(std::uint64_t seed) {
  bool ok = true;
  for (const auto& c : conic::run_checks(seed)) {
    fmt::print("[{}] {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior-point solver for power and relative entropy cone programs"};
  app.require_subcommand(1);

  conic::Settings settings;

  std::string path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a JSON problem file");
  solve_cmd->add_option("file", path, "Problem file")->required()->check(CLI::ExistingFile);
  add_settings(solve_cmd, settings);

  std::string suite;
  std::vector<int> sizes{50, 100};
  std::uint64_t seed = 1;
  std::string out;
  int repeats = 3;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  bench_cmd->add_option("suite", suite, "max_likelihood, max_volume, entropy_max or all")
      ->required()
      ->check(CLI::IsMember({"max_likelihood", "max_volume", "entropy_max", "all"}));
  bench_cmd->add_option("--sizes", sizes, "Problem sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", seed, "Generator seed");
  bench_cmd->add_option("--out", out, "CSV report path");
  bench_cmd->add_option("--repeats", repeats, "Timed repeats per case")
      ->check(CLI::PositiveNumber);
  add_settings(bench_cmd, settings);

  std::uint64_t check_seed = 1;
  auto* check_cmd = app.add_subcommand("check", "Run the invariant checks");
  check_cmd->add_option("--seed", check_seed, "Sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(path, settings);
    if (bench_cmd->parsed()) return run_bench(suite, sizes, seed, out, repeats, settings);
    if (check_cmd->parsed()) return run_check(check_seed);
  } catch (const conic::ParseError& e) {
    fmt::print(stderr, "parse error: {}\n", e.what());
    return 2;
  } catch (const conic::ValidationError& e) {
    fmt::print(stderr, "{}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
