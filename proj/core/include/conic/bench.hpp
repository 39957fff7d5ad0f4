#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conic/ipm.hpp"
#include "conic/problem.hpp"

namespace conic {

enum class Family { MaxLikelihood, MaxVolume, EntropyMax };

/// Native uses the multi-dimensional cone, Split3d the chain of small cones,
/// PowMean swaps GenPow(α, n, 1) for PowMean(α) (power families only).
enum class Formulation { Native, Split3d, PowMean };

const char* to_string(Family family);
const char* to_string(Formulation formulation);
Family parse_family(const std::string& name);
Formulation parse_formulation(const std::string& name);

struct BenchCase {
  Family family = Family::MaxLikelihood;
  Formulation formulation = Formulation::Native;
  int size = 0;
  std::uint64_t seed = 1;
  /// Norm-ball radius, max_volume only.
  double gamma = 1.0;
};

/// Exponents uniform(0,1), floored at 1e-3, then normalized.
std::vector<double> draw_alpha(int n, std::uint64_t seed);

/// max t s.t. Σxᵢ = 1, t ≤ ∏ xᵢ^{αᵢ}, written as min −t.
ProblemData gen_max_likelihood(int n, std::uint64_t seed, Formulation formulation);

/// max t s.t. t ≤ ∏ xᵢ^{1/n}, ‖x‖₁ ≤ γ, ‖x‖∞ ≤ γ, written as min −t.
ProblemData gen_max_volume(int n, double gamma, std::uint64_t seed, Formulation formulation);

/// Prior used by gen_entropy_max.
Vector draw_prior(int d, std::uint64_t seed);

/// min Σ pᵢ ln(pᵢ/qᵢ) s.t. Σpᵢ = 1 with q a seeded prior.
ProblemData gen_entropy_max(int d, std::uint64_t seed, Formulation formulation);

ProblemData generate(const BenchCase& bench_case);

struct BenchInstance {
  BenchCase meta;
  ProblemData problem;
};

struct BenchRow {
  BenchCase meta;
  int iterations = 0;
  double solve_ms = 0.0;
  Status status = Status::NumericalError;
  double objective = 0.0;
  std::string error;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  /// Columns family, formulation, size, iterations, solve_ms, status,
  /// objective. Without timing the solve_ms column is dropped.
  std::string csv(bool with_timing = true) const;
  std::string markdown() const;
  bool all_definitive() const;
};

/// Solves every instance `repeats` times and reports the median time. A
/// case that throws is recorded with NumericalError and the run continues.
BenchReport run_bench(const std::vector<BenchInstance>& instances, const Settings& settings,
                      int repeats = 3);

/// Named suites: max_likelihood, max_volume, entropy_max, all. Each size
/// yields native and split3d cases (plus powmean for the power families).
std::vector<BenchCase> make_suite(const std::string& name, const std::vector<int>& sizes,
                                  std::uint64_t seed);

std::vector<BenchInstance> instantiate(const std::vector<BenchCase>& cases);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Quick invariant suite behind the `check` verb.
std::vector<CheckResult> run_checks(std::uint64_t seed = 1);

}  // namespace conic
