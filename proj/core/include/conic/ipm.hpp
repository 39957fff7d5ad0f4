#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conic/kkt.hpp"
#include "conic/problem.hpp"
#include "conic/sparse.hpp"

namespace conic {

enum class Status {
  Solved,
  PrimalInfeasible,
  DualInfeasible,
  AlmostSolved,
  MaxIterations,
  NumericalError,
};

const char* to_string(Status status);

/// True for Solved, PrimalInfeasible and DualInfeasible.
bool is_definitive(Status status);

struct SolverState;

struct Settings {
  int max_iter = 200;
  double eps = 1e-8;
  double static_reg = kStaticReg;
  bool verbose = false;
  HessianAssembly assembly = HessianAssembly::Augmented;
  /// Loosened tolerance factor for AlmostSolved.
  double inaccurate_factor = 1e4;
  /// Smallest accepted step before giving up.
  double step_floor = 1e-6;
  /// Accepted iterates satisfy Φ ≤ proximity_bound + proximity_per_degree · ν_n,
  /// ν_n the total degree of the nonsymmetric blocks. proximity_per_degree = 0
  /// gives the plain Φ ≤ 1 neighborhood, which stalls on large power cones.
  double proximity_bound = 1.0;
  double proximity_per_degree = 1.0;
  /// Below this combined step length larger σ values and a pure centering
  /// step are tried as well; the one with the best μ reduction wins.
  double sigma_retry_below = 0.1;
  /// Called with each iterate before it is factored.
  std::function<void(const SolverState&)> on_iterate;
};

/// Right-hand side of the proximity gate for this problem.
double proximity_gate(const ProblemData& problem, const Settings& settings);

struct SolverState {
  Vector x, y, z, s;
  double tau = 1.0;
  double kappa = 1.0;
  double mu = 1.0;
  Vector rx, ry, rz;
  double rtau = 0.0;
  int iteration = 0;
};

struct Residuals {
  Vector rx, ry, rz;
  double rtau = 0.0;
  double mu = 0.0;
};

/// Newton direction for every variable of the embedding.
struct Direction {
  Vector dx, dy, dz, ds;
  double dtau = 0.0;
  double dkappa = 0.0;
};

/// Right-hand side of one Newton system.
struct StepRhs {
  Vector dx, dy, dz, ds;
  double dtau = 0.0;
  double dkappa = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
  double pres = 0.0;
  double dres = 0.0;
  double gap = 0.0;
  double sigma = 0.0;
  double alpha_affine = 0.0;
  double alpha = 0.0;
  double proximity = 0.0;
  double refine_residual = 0.0;
  Inertia inertia;
  bool inertia_ok = true;
  int dynamic_bumps = 0;
};

struct SolveResult {
  Status status = Status::NumericalError;
  /// Solution scaled by 1/τ, or the normalized certificate rays.
  Vector x, y, z, s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  /// Certificate residual: ‖Gᵀy + Aᵀz‖∞ for PrimalInfeasible after scaling
  /// to hᵀy + bᵀz = −1, max(‖Gx‖∞, ‖Ax + s‖∞) for DualInfeasible after
  /// scaling to cᵀx = −1. Zero otherwise.
  double certificate_residual = 0.0;
  std::vector<IterationRecord> trace;
  int nnz_l = 0;
  int kkt_order = 0;
  std::string message;
};

SolveResult solve(const ProblemData& problem, const Settings& settings = {});

/// r_x = −Gᵀy − Aᵀz − cτ, r_y = Gx − hτ, r_z = s + Ax − bτ,
/// r_τ = κ + cᵀx + hᵀy + bᵀz, μ = (sᵀz + κτ)/(ν + 1).
Residuals compute_residuals(const SolverState& state, const ProblemData& problem);

/// x = 0, y = 0, τ = κ = 1 and (s, z) from each block's unit point.
SolverState initial_state(const ProblemData& problem);

/// Reduced KKT system for the current iterate: assembles once, then
/// refactors values each iteration.
class NewtonSystem {
 public:
  NewtonSystem(const ProblemData& problem, const Settings& settings);

  /// Refactor at the iterate. NonNeg blocks use H_s = diag(s/z), the other
  /// cones H_s = μ H*(z).
  void factor(const SolverState& state);

  /// Solves the linearized embedding for the given right-hand side.
  Direction solve(const SolverState& state, const StepRhs& rhs);

  const KktSystem& kkt() const { return kkt_; }
  const LdlFactorization& factorization() const { return factor_; }
  const std::vector<AugmentedHessian>& hessians() const { return hessians_; }
  /// Solves K (x, y, z) = rhs for a right-hand side stacked by kkt_rhs and
  /// returns the unexpanded part. Throws RefinementStall.
  Vector solve_kkt(const Vector& rhs);
  /// H_s v for the cone block structure.
  Vector apply_hs(const VectorRef& v) const;
  /// Largest relative residual of the unexpanded system since the last
  /// factor().
  double refine_residual() const { return refine_residual_; }

 private:
  std::vector<AugmentedHessian> build_hessians(const SolverState& state) const;
  /// Unexpanded K v on (x, y, z) with H_s applied directly.
  Vector apply_reduced(const VectorRef& v) const;

  const ProblemData& problem_;
  Settings settings_;
  std::vector<int> offsets_;
  std::vector<AugmentedHessian> hessians_;
  KktSystem kkt_;
  SymbolicFactor symbolic_;
  LdlFactorization factor_;
  /// Solution for the fixed right-hand side (−c, h, b).
  Vector sol2_;
  double refine_residual_ = 0.0;
  bool assembled_ = false;
};

/// Affine direction: d = r, d_s = s, d_κ = τκ.
StepRhs affine_rhs(const SolverState& state);

/// Centering-corrector right-hand side with σ = (1 − α_a)³ and the Mehrotra
/// term on NonNeg blocks.
StepRhs combined_rhs(const SolverState& state, const ProblemData& problem,
                     const NewtonSystem& system, const Direction& affine, double sigma);

/// Largest α ≤ 1 keeping (s, z, τ, κ) strictly interior along the direction.
double max_step(const SolverState& state, const ProblemData& problem, const Direction& d);

SolverState take_step(const SolverState& state, const Direction& d, double alpha);

enum class Termination { Continue, Solved, PrimalInfeasible, DualInfeasible };

struct TerminationInfo {
  Termination outcome = Termination::Continue;
  double pres = 0.0;
  double dres = 0.0;
  double gap = 0.0;
  double certificate_residual = 0.0;
};

/// Convergence and certificate tests on the current residuals, with the
/// tolerance ε.
TerminationInfo check_termination(const SolverState& state, const ProblemData& problem,
                                  double eps);

}  // namespace conic
