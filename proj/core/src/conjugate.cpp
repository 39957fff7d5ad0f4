#include "conic/conjugate.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "conic/errors.hpp"

namespace conic {

namespace {

/// ‖r‖ below this fraction of ‖p‖ is treated as r = 0.
constexpr double kZeroBranchRatio = 1e-14;

/// Positive root of a x² + b x + c with a > 0, c < 0, without cancellation.
double positive_quadratic_root(double a, double b, double c) {
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  return b > 0.0 ? (-2.0 * c) / (b + disc) : (-b + disc) / (2.0 * a);
}

RootProblem genpow_root_problem(const GenPowCone& k, const VectorRef& s) {
  const int d1 = static_cast<int>(k.alpha.size());
  const auto p = s.head(d1);
  const double rn = s.tail(k.d2).norm();
  double log_chi = 0.0;
  double alpha_sq = 0.0;
  for (int i = 0; i < d1; ++i) {
    log_chi += 2.0 * k.alpha[i] * std::log(p[i]);
    alpha_sq += k.alpha[i] * k.alpha[i];
  }
  const double chi = std::exp(log_chi);
  const double psi = 1.0 / alpha_sq;

  RootProblem rp;
  const std::vector<double> alpha = k.alpha;
  rp.h = [alpha, rn, log_chi](double x) {
    double acc = 0.0;
    for (double a : alpha) acc += 2.0 * a * std::log(rn * x + (1.0 + a) / a);
    return acc - std::log(x) - std::log(2.0 / rn + x) - log_chi;
  };
  rp.h_prime = [alpha, rn](double x) {
    double acc = 0.0;
    for (double a : alpha) acc += 2.0 * a * rn / (rn * x + (1.0 + a) / a);
    return acc - (2.0 / rn + 2.0 * x) / (x * (2.0 / rn + x));
  };
  // Root of the Jensen lower bound 2 ln(‖r‖x + ψ + 1) − ln(2x/‖r‖ + x²) − ln χ,
  // rearranged as (χ − ‖r‖²)x² + (2χ/‖r‖ − 2‖r‖(ψ+1))x − (ψ+1)² = 0.
  rp.x0 = positive_quadratic_root(chi - rn * rn, 2.0 * chi / rn - 2.0 * rn * (psi + 1.0),
                                  -(psi + 1.0) * (psi + 1.0));
  rp.monotonicity = Monotonicity::Decreasing;
  rp.curvature = Curvature::Convex;
  rp.domain_lower = 0.0;
  rp.h_scale = 1.0 + std::abs(log_chi);
  return rp;
}

Vector genpow_conj_gradient(const GenPowCone& k, const VectorRef& s) {
  const int d1 = static_cast<int>(k.alpha.size());
  const auto p = s.head(d1);
  const auto r = s.tail(k.d2);
  const double rn = r.norm();
  Vector g(s.size());
  if (rn <= kZeroBranchRatio * p.norm()) {
    for (int i = 0; i < d1; ++i) g[i] = -(1.0 + k.alpha[i]) / p[i];
    g.tail(k.d2).setZero();
    return g;
  }
  const double x = newton_root(genpow_root_problem(k, s)).root;
  for (int i = 0; i < d1; ++i) {
    g[i] = -(1.0 + k.alpha[i] + k.alpha[i] * x * rn) / p[i];
  }
  g.tail(k.d2) = (x / rn) * r;
  return g;
}

double log_weighted_product(const std::vector<double>& alpha, const VectorRef& u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) acc += alpha[i] * std::log(u[i] / alpha[i]);
  return acc;
}

RootProblem powmean_root_problem(const PowMeanCone& k, const VectorRef& s) {
  const int d = static_cast<int>(k.alpha.size());
  const Vector p = s.head(d);
  const double r = s[d];
  const std::vector<double> alpha = k.alpha;
  RootProblem rp;
  rp.domain_lower = 0.0;
  rp.monotonicity = Monotonicity::Increasing;
  rp.curvature = Curvature::Concave;
  double scale = 1.0;
  for (int i = 0; i < d; ++i) scale += alpha[i] * std::abs(std::log(p[i]));
  rp.h_scale = scale;
  if (r > 0.0) {
    // x = 1/g_r; φ(−g_p) = g_r (2 + r g_r)/(1 + r g_r) becomes
    // Σ αᵢ ln(((1+αᵢ)/(αᵢpᵢ)) x + r/pᵢ) = ln(1 + x/(r + x)).
    rp.h = [alpha, p, r](double x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        acc += a * std::log((1.0 + a) / (a * p[i]) * x + r / p[i]);
      }
      return acc - std::log1p(x / (r + x));
    };
    rp.h_prime = [alpha, p, r](double x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        const double slope = (1.0 + a) / (a * p[i]);
        acc += a * slope / (slope * x + r / p[i]);
      }
      return acc - 2.0 / (r + 2.0 * x) + 1.0 / (r + x);
    };
    rp.x0 = 0.0;
    // x0 = 0 is admissible here; only x < 0 leaves the domain.
    rp.domain_lower = -std::numeric_limits<double>::min();
  } else {
    // x = 1/φ(−g_p). r + √(r² + 4x²) is evaluated as 4x²/(√(r² + 4x²) − r).
    rp.h = [alpha, p, r](double x) {
      const double root = std::sqrt(r * r + 4.0 * x * x);
      const double shifted = 4.0 * x * x / (root - r);
      double acc = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        acc += a * std::log(x / (a * p[i]) + shifted / (2.0 * p[i]));
      }
      return acc;
    };
    rp.h_prime = [alpha, p, r](double x) {
      const double root = std::sqrt(r * r + 4.0 * x * x);
      const double shifted = 4.0 * x * x / (root - r);
      double acc = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        acc += a * (1.0 + 2.0 * a * x / root) / (x + 0.5 * a * shifted);
      }
      return acc;
    };
    double log_x0 = 0.0;
    for (int i = 0; i < d; ++i) {
      log_x0 += alpha[i] * std::log(alpha[i] * p[i] / (1.0 + alpha[i]));
    }
    rp.x0 = std::exp(log_x0);
  }
  return rp;
}

Vector powmean_conj_gradient(const PowMeanCone& k, const VectorRef& s) {
  const int d = static_cast<int>(k.alpha.size());
  const auto p = s.head(d);
  const double r = s[d];
  Vector g(d + 1);
  if (std::abs(r) <= kZeroBranchRatio * p.norm()) {
    for (int i = 0; i < d; ++i) g[i] = -(1.0 + k.alpha[i]) / p[i];
    g[d] = 0.5 * std::exp(log_weighted_product(k.alpha, -g.head(d)));
    return g;
  }
  const double x = newton_root(powmean_root_problem(k, s)).root;
  double one_plus_rg = 0.0;
  if (r > 0.0) {
    g[d] = 1.0 / x;
    one_plus_rg = 1.0 + r / x;
  } else {
    const double phi = 1.0 / x;
    const double root = std::sqrt(phi * phi + 4.0 / (r * r));
    one_plus_rg = -(2.0 / r) / (phi + root);
    g[d] = (one_plus_rg - 1.0) / r;
  }
  for (int i = 0; i < d; ++i) g[i] = -(1.0 + k.alpha[i] * one_plus_rg) / p[i];
  return g;
}

RootProblem relentropy_root_problem(const RelEntropyCone& k, const VectorRef& s) {
  const int d = k.d;
  const double p = s[0];
  const Vector q = s.segment(1, d);
  const Vector r = s.segment(1 + d, d);
  RootProblem rp;
  rp.h = [d, p, q, r](double x) {
    double acc = d * x - p;
    for (int i = 0; i < d; ++i) acc += r[i] * std::log((r[i] + x) / q[i]);
    return acc;
  };
  rp.h_prime = [d, r](double x) {
    double acc = d;
    for (int i = 0; i < d; ++i) acc += r[i] / (r[i] + x);
    return acc;
  };
  rp.x0 = 0.0;
  rp.domain_lower = -std::numeric_limits<double>::min();
  rp.monotonicity = Monotonicity::Increasing;
  rp.curvature = Curvature::Concave;
  double scale = 1.0 + std::abs(p);
  for (int i = 0; i < d; ++i) scale += std::abs(r[i] * std::log(r[i] / q[i]));
  rp.h_scale = scale;
  return rp;
}

Vector relentropy_conj_gradient(const RelEntropyCone& k, const VectorRef& s) {
  const int d = k.d;
  const auto q = s.segment(1, d);
  const auto r = s.segment(1 + d, d);
  const double x = newton_root(relentropy_root_problem(k, s)).root;
  Vector g(2 * d + 1);
  const double gp = -1.0 / x;
  g[0] = gp;
  for (int i = 0; i < d; ++i) {
    const double gq = (gp * r[i] - 1.0) / q[i];
    g[1 + i] = gq;
    g[1 + d + i] = gp * std::log(gp / gq) - gp - 1.0 / r[i];
  }
  return g;
}

}  // namespace

bool convergent_start(const RootProblem& problem) {
  const double h0 = problem.h(problem.x0);
  // A start already at the root up to rounding is fine on either side.
  if (std::abs(h0) <= problem.tol * std::max(1.0, std::abs(problem.x0)) * problem.h_scale) {
    return true;
  }
  if (problem.monotonicity == Monotonicity::Decreasing &&
      problem.curvature == Curvature::Convex) {
    return h0 >= 0.0;
  }
  if (problem.monotonicity == Monotonicity::Increasing &&
      problem.curvature == Curvature::Concave) {
    return h0 <= 0.0;
  }
  // Increasing+convex and decreasing+concave converge from the other side.
  return h0 >= 0.0 ? problem.monotonicity == Monotonicity::Increasing
                   : problem.monotonicity == Monotonicity::Decreasing;
}

RootResult newton_root(const RootProblem& problem) {
  RootResult result;
  double x = problem.x0;
  if (!(x > problem.domain_lower) || !std::isfinite(x)) {
    throw NoConvergence(fmt::format("newton_root: x0 = {} outside the domain", x));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  // A small residual alone is not enough: near the cone boundary h is flat
  // and x is large, so the residual test is loose in x. The relative Newton
  // step must reach kStepTol, or stop shrinking once rounding noise
  // dominates with the residual already small.
  constexpr double kStepTol = 1e-14;
  constexpr double kNoiseStep = 1e-6;
  double prev_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= problem.max_iter; ++it) {
    const double hx = problem.h(x);
    if (!std::isfinite(hx)) {
      throw NoConvergence(fmt::format("newton_root: h({}) is not finite", x));
    }
    if (hx == 0.0) {
      result.root = x;
      result.iterations = it;
      return result;
    }
    if (it == problem.max_iter) break;
    const double dh = problem.h_prime(x);
    if (!(std::abs(dh) > 0.0) || !std::isfinite(dh)) {
      throw NoConvergence(fmt::format("newton_root: h'({}) = {}", x, dh));
    }
    double next = x - hx / dh;
    if (!(next > problem.domain_lower)) {
      const double bound = std::max(problem.domain_lower, 0.0);
      next = 0.5 * (x + bound);
    }
    const double step = std::abs(next - x);
    const bool small_residual =
        std::abs(hx) <= problem.tol * std::max(1.0, std::abs(x)) * problem.h_scale;
    if (small_residual && step <= kNoiseStep * std::abs(x) && step >= 0.5 * prev_step) {
      result.root = x;
      result.iterations = it;
      return result;
    }
    result.steps.push_back(next - x);
    if (step <= kStepTol * std::abs(next) || step <= 4.0 * kEps * std::max(1.0, std::abs(x))) {
      result.root = next;
      result.iterations = it + 1;
      return result;
    }
    prev_step = step;
    x = next;
  }
  throw NoConvergence(
      fmt::format("newton_root: no convergence after {} iterations (x = {})",
                  problem.max_iter, x));
}

ConjugateRootBranch conjugate_root_problem(const ConeSpec& cone, const VectorRef& s) {
  ConjugateRootBranch branch;
  switch (cone.kind()) {
    case ConeKind::GenPow: {
      const auto& k = cone.as<GenPowCone>();
      const int d1 = static_cast<int>(k.alpha.size());
      if (s.tail(k.d2).norm() <= kZeroBranchRatio * s.head(d1).norm()) {
        branch.closed_form = true;
      } else {
        branch.problem = genpow_root_problem(k, s);
      }
      return branch;
    }
    case ConeKind::PowMean: {
      const auto& k = cone.as<PowMeanCone>();
      const int d = static_cast<int>(k.alpha.size());
      if (std::abs(s[d]) <= kZeroBranchRatio * s.head(d).norm()) {
        branch.closed_form = true;
      } else {
        branch.problem = powmean_root_problem(k, s);
      }
      return branch;
    }
    case ConeKind::RelEntropy:
      branch.problem = relentropy_root_problem(cone.as<RelEntropyCone>(), s);
      return branch;
    default:
      branch.closed_form = true;
      return branch;
  }
}

Vector conj_gradient(const ConeSpec& cone, const VectorRef& s) {
  if (!in_primal_interior(cone, s)) {
    throw DomainError(fmt::format("point is not in the interior of the primal {} cone",
                                  to_string(cone.kind())));
  }
  switch (cone.kind()) {
    case ConeKind::Zero:
      return Vector::Zero(s.size());
    case ConeKind::NonNeg:
      return -s.array().inverse().matrix();
    case ConeKind::GenPow:
      return genpow_conj_gradient(cone.as<GenPowCone>(), s);
    case ConeKind::PowMean:
      return powmean_conj_gradient(cone.as<PowMeanCone>(), s);
    case ConeKind::RelEntropy:
      return relentropy_conj_gradient(cone.as<RelEntropyCone>(), s);
  }
  return {};
}

double primal_barrier(const ConeSpec& cone, const VectorRef& s) {
  switch (cone.kind()) {
    case ConeKind::Zero:
      if (!in_primal_interior(cone, s)) throw DomainError("zero cone slack must be 0");
      return 0.0;
    case ConeKind::NonNeg:
      if (!in_primal_interior(cone, s)) {
        throw DomainError("point is not in the interior of the nonnegative orthant");
      }
      return -static_cast<double>(s.size()) - s.array().log().sum();
    default:
      break;
  }
  const Vector g = conj_gradient(cone, s);
  return -degree(cone) - dual_barrier(cone, -g).value;
}

std::vector<int> block_offsets(std::span<const ConeSpec> cones) {
  std::vector<int> off(cones.size() + 1, 0);
  for (std::size_t i = 0; i < cones.size(); ++i) off[i + 1] = off[i] + cones[i].dim();
  return off;
}

double total_degree(std::span<const ConeSpec> cones) {
  double nu = 0.0;
  for (const auto& c : cones) nu += degree(c);
  return nu;
}

double proximity(std::span<const ConeSpec> cones, const VectorRef& s,
                 const VectorRef& z, double tau, double kappa) {
  if (!(tau > 0.0) || !(kappa > 0.0)) {
    throw DomainError("proximity requires tau > 0 and kappa > 0");
  }
  const auto off = block_offsets(cones);
  if (s.size() != off.back() || z.size() != off.back()) {
    throw DomainError("proximity: s and z must match the cone dimensions");
  }
  const double nu_bar = total_degree(cones) + 1.0;
  // −ln τ and its conjugate −1 − ln κ.
  double barriers = -std::log(tau) - 1.0 - std::log(kappa);
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const int n = cones[i].dim();
    if (cones[i].kind() == ConeKind::Zero) continue;
    barriers += primal_barrier(cones[i], s.segment(off[i], n));
    barriers += dual_barrier(cones[i], z.segment(off[i], n)).value;
  }
  const double gap = s.dot(z) + tau * kappa;
  return nu_bar * std::log(gap) + barriers - nu_bar * std::log(nu_bar) + nu_bar;
}

}  // namespace conic
