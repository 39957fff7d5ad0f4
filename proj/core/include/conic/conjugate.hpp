#pragma once

#include <functional>
#include <span>
#include <vector>

#include "conic/cone.hpp"

namespace conic {

enum class Monotonicity { Increasing, Decreasing };
enum class Curvature { Convex, Concave };

/// Scalar root problem h(x) = 0 with a known shape, started on the side from
/// which Newton's method converges monotonically: decreasing+convex needs
/// h(x0) ≥ 0, increasing+concave needs h(x0) ≤ 0.
struct RootProblem {
  std::function<double(double)> h;
  std::function<double(double)> h_prime;
  double x0 = 0.0;
  Monotonicity monotonicity = Monotonicity::Increasing;
  Curvature curvature = Curvature::Concave;
  /// Iterates must stay strictly above this bound.
  double domain_lower = 0.0;
  /// Converged when |h(x)| ≤ tol · max(1, |x|) · h_scale.
  double tol = 1e-12;
  double h_scale = 1.0;
  int max_iter = 100;
};

struct RootResult {
  double root = 0.0;
  int iterations = 0;
  /// Newton step lengths in order; the tail exposes the quadratic rate.
  std::vector<double> steps;
};

/// True when sign(h(x0)) lies on the convergent side for the declared shape,
/// or h(x0) already passes the residual test.
bool convergent_start(const RootProblem& problem);

/// Safeguarded Newton–Raphson. Iterates that leave the domain are pulled back
/// by bisecting toward the domain bound. Throws NoConvergence when the
/// iteration budget runs out.
RootResult newton_root(const RootProblem& problem);

/// Root problem whose root determines the conjugate gradient of a
/// nonsymmetric cone at s. closed_form is set when s lies on a branch that
/// needs no root (‖r‖ ≈ 0 for the power cones).
struct ConjugateRootBranch {
  bool closed_form = false;
  RootProblem problem;
};
ConjugateRootBranch conjugate_root_problem(const ConeSpec& cone, const VectorRef& s);

/// Gradient g(s) of the primal barrier recovered from the dual barrier by
/// conjugacy; satisfies −g*(−g(s)) = s. Throws DomainError when s is not in
/// the primal interior.
Vector conj_gradient(const ConeSpec& cone, const VectorRef& s);

/// Exact conjugate of the dual barrier: f(s) = −ν − f*(−g(s)).
double primal_barrier(const ConeSpec& cone, const VectorRef& s);

/// Offsets of each block in the stacked vector; size cones.size() + 1.
std::vector<int> block_offsets(std::span<const ConeSpec> cones);

/// Total barrier degree of a product cone.
double total_degree(std::span<const ConeSpec> cones);

/// Functional proximity to the central path with the (τ, κ) pair treated as
/// one extra orthant block whose barrier pair is (−ln τ, −1 − ln κ):
///   Φ = ν̄ ln(sᵀz + τκ) + f(s) + f*(z) − ln τ − 1 − ln κ − ν̄ ln ν̄ + ν̄,
/// ν̄ = ν + 1. Φ ≥ 0 with equality exactly on the central path.
double proximity(std::span<const ConeSpec> cones, const VectorRef& s,
                 const VectorRef& z, double tau, double kappa);

}  // namespace conic
