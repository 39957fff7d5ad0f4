#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "conic/bench.hpp"
#include "conic/conjugate.hpp"
#include "conic/errors.hpp"
#include "conic/ipm.hpp"
#include "test_util.hpp"

namespace conic {
namespace {

SparseMatrix dense_to_sparse(const Matrix& m) { return m.sparseView(); }

/// min x  s.t.  x ≥ lo (one NonNeg slack).
ProblemData lp_lower_bound(double lo) {
  ProblemData p;
  p.c = Vector::Ones(1);
  p.G = SparseMatrix(0, 1);
  p.h = Vector(0);
  p.A = dense_to_sparse(-Matrix::Ones(1, 1));
  p.b = Vector::Constant(1, -lo);
  p.cones = {ConeSpec::nonneg(1)};
  return p;
}

/// max t  s.t.  Σx = 1, (x, t) ∈ GenPow(α, n, 1), written with A = −I.
ProblemData max_likelihood(const std::vector<double>& alpha) {
  const int n = static_cast<int>(alpha.size());
  ProblemData p;
  p.c = Vector::Zero(n + 1);
  p.c[n] = -1.0;
  Matrix g = Matrix::Zero(1, n + 1);
  g.leftCols(n).setOnes();
  p.G = dense_to_sparse(g);
  p.h = Vector::Ones(1);
  p.A = dense_to_sparse(-Matrix::Identity(n + 1, n + 1));
  p.b = Vector::Zero(n + 1);
  p.cones = {ConeSpec::genpow(alpha, 1)};
  return p;
}

/// An LP block attached to a nonsymmetric block. The LP rows alone decide
/// feasibility.
ProblemData with_power_block(ProblemData lp) {
  const int n = lp.n();
  const int m = lp.m();
  ProblemData p;
  p.c = Vector::Zero(n + 3);
  p.c.head(n) = lp.c;
  p.G = SparseMatrix(lp.p(), n + 3);
  Matrix g = Matrix::Zero(lp.p(), n + 3);
  g.leftCols(n) = Matrix(lp.G);
  p.G = dense_to_sparse(g);
  p.h = lp.h;
  Matrix a = Matrix::Zero(m + 3, n + 3);
  a.topLeftCorner(m, n) = Matrix(lp.A);
  a.bottomRightCorner(3, 3) = -Matrix::Identity(3, 3);
  p.A = dense_to_sparse(a);
  p.b = Vector::Zero(m + 3);
  p.b.head(m) = lp.b;
  p.b[m] = 1.0;
  p.b[m + 1] = 1.0;
  p.cones = lp.cones;
  p.cones.push_back(ConeSpec::powmean({0.5, 0.5}));
  return p;
}

/// Block w with s = s⁰ + w ∈ K and cost z⁰ᵀw, bounded and feasible alone.
ProblemData with_block(const ProblemData& lp, const ConeSpec& cone) {
  const InitPoint init = unit_init(cone);
  const int n = lp.n(), m = lp.m(), d = cone.dim();
  ProblemData p;
  p.c = Vector::Zero(n + d);
  p.c.head(n) = lp.c;
  p.c.tail(d) = init.z;
  Matrix g = Matrix::Zero(lp.p(), n + d);
  g.leftCols(n) = Matrix(lp.G);
  p.G = dense_to_sparse(g);
  p.h = lp.h;
  Matrix a = Matrix::Zero(m + d, n + d);
  a.topLeftCorner(m, n) = Matrix(lp.A);
  a.bottomRightCorner(d, d) = -Matrix::Identity(d, d);
  p.A = dense_to_sparse(a);
  p.b = Vector::Zero(m + d);
  p.b.head(m) = lp.b;
  p.b.tail(d) = init.s;
  p.cones = lp.cones;
  p.cones.push_back(cone);
  return p;
}

std::vector<ProblemData> block_variants(const ProblemData& lp) {
  return {lp, with_power_block(lp), with_block(lp, ConeSpec::genpow({0.3, 0.7}, 2)),
          with_block(lp, ConeSpec::relentropy(2))};
}

TEST(Solve, LpLowerBound) {
  const auto res = solve(lp_lower_bound(1.0));
  ASSERT_EQ(res.status, Status::Solved) << res.message;
  EXPECT_NEAR(res.x[0], 1.0, 1e-7);
  EXPECT_LE(res.iterations, 10);
}

TEST(Solve, MaxLikelihoodEqualWeights) {
  const auto res = solve(max_likelihood({0.25, 0.25, 0.25, 0.25}));
  ASSERT_EQ(res.status, Status::Solved) << res.message;
  EXPECT_NEAR(-res.primal_objective, 0.25, 1e-7);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(res.x[i], 0.25, 1e-6);
}

TEST(Solve, MaxLikelihoodAgainstGrid) {
  // Brute-force grid over the simplex for α = (0.3, 0.7).
  double best = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double x = k / 100000.0;
    best = std::max(best, std::pow(x, 0.3) * std::pow(1.0 - x, 0.7));
  }
  const auto res = solve(max_likelihood({0.3, 0.7}));
  ASSERT_EQ(res.status, Status::Solved) << res.message;
  EXPECT_NEAR(-res.primal_objective, best, 1e-7);
  EXPECT_NEAR(res.x[0], 0.3, 1e-5);
}

TEST(Solve, PrimalInfeasibleLp) {
  // x ≥ 1 and −x ≥ 0.
  ProblemData p;
  p.c = Vector::Ones(1);
  p.G = SparseMatrix(0, 1);
  p.h = Vector(0);
  Matrix a(2, 1);
  a << -1.0, 1.0;
  p.A = dense_to_sparse(a);
  p.b = Vector(2);
  p.b << -1.0, 0.0;
  p.cones = {ConeSpec::nonneg(2)};
  for (const auto& prob : block_variants(p)) {
    const auto res = solve(prob);
    ASSERT_EQ(res.status, Status::PrimalInfeasible) << res.message;
    EXPECT_LE(res.certificate_residual, 1e-8);
    // Independent check of the returned ray.
    const Vector aty = prob.A.transpose() * res.z;
    EXPECT_LE(aty.lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_NEAR(prob.b.dot(res.z), -1.0, 1e-12);
    EXPECT_TRUE(in_dual_interior(prob.cones[0], res.z.head(2)) || res.z.head(2).minCoeff() >= 0);
  }
}

TEST(Solve, DualInfeasibleLp) {
  // min −x  s.t.  x ≥ 0.
  ProblemData p = lp_lower_bound(0.0);
  p.c[0] = -1.0;
  // The relentropy block drives its dual Hessian to 1e10 before the ray is
  // accurate enough.
  for (const auto& prob : block_variants(p)) {
    const auto res = solve(prob);
    ASSERT_EQ(res.status, Status::DualInfeasible) << res.message;
    EXPECT_LE(res.certificate_residual, 1e-8);
    EXPECT_NEAR(prob.c.dot(res.x), -1.0, 1e-12);
    const Vector axs = prob.A * res.x + res.s;
    EXPECT_LE(axs.lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(Solve, ZeroIterationBudget) {
  Settings s;
  s.max_iter = 0;
  const auto res = solve(lp_lower_bound(1.0), s);
  EXPECT_EQ(res.status, Status::MaxIterations);
  EXPECT_EQ(res.iterations, 0);
  EXPECT_EQ(res.trace.size(), 1u);
}

TEST(Solve, ObserverSeesEveryFactoredIterate) {
  Settings s;
  std::vector<double> mus;
  s.on_iterate = [&](const SolverState& st) { mus.push_back(st.mu); };
  const auto res = solve(lp_lower_bound(1.0), s);
  ASSERT_EQ(res.status, Status::Solved);
  EXPECT_EQ(static_cast<int>(mus.size()), res.iterations);
  EXPECT_NEAR(mus.front(), 1.0, 1e-14);
}

TEST(Solve, InvalidProblemThrows) {
  auto p = lp_lower_bound(1.0);
  p.b = Vector::Zero(2);
  EXPECT_THROW(solve(p), ValidationError);
}

TEST(Residuals, UnitInit) {
  std::mt19937_64 rng(1);
  auto p = with_power_block(lp_lower_bound(2.0));
  p.G = dense_to_sparse(Matrix::Ones(1, p.n()));
  p.h = Vector::Constant(1, 3.0);
  const SolverState st = initial_state(p);
  const Residuals r = compute_residuals(st, p);
  EXPECT_LT((r.rx - (-(p.A.transpose() * st.z) - p.c)).norm(), 1e-15);
  EXPECT_LT((r.ry + p.h).norm(), 1e-15);
  EXPECT_LT((r.rz - (st.s - p.b)).norm(), 1e-15);
  EXPECT_NEAR(r.rtau, 1.0 + p.b.dot(st.z), 1e-15);
  EXPECT_NEAR(r.mu, 1.0, 1e-14);
}

TEST(Residuals, ZeroAtScaledKktPoint) {
  const auto p = lp_lower_bound(1.0);
  // x = 1, s = 0, z = 1 (dual: −z − ... c = z), times τ = 3.
  SolverState st;
  st.tau = 3.0;
  st.kappa = 0.0;
  st.x = Vector::Constant(1, 3.0);
  st.y = Vector(0);
  st.s = Vector::Zero(1);
  st.z = Vector::Constant(1, 3.0);
  const Residuals r = compute_residuals(st, p);
  EXPECT_EQ(r.rx.norm() + r.ry.norm() + r.rz.norm() + std::abs(r.rtau), 0.0);
  st.rx = r.rx;
  st.ry = r.ry;
  st.rz = r.rz;
  EXPECT_EQ(check_termination(st, p, 1e-8).outcome, Termination::Solved);
}

TEST(Termination, RayIsPrimalInfeasible) {
  // x ≥ 1, −x ≥ 0: z = (1, 1) gives Aᵀz = 0, bᵀz = −1.
  ProblemData p = lp_lower_bound(1.0);
  Matrix a(2, 1);
  a << -1.0, 1.0;
  p.A = dense_to_sparse(a);
  p.b = Vector(2);
  p.b << -1.0, 0.0;
  p.cones = {ConeSpec::nonneg(2)};
  SolverState st;
  st.tau = 1e-9;
  st.kappa = 1.0;
  st.x = Vector::Zero(1);
  st.y = Vector(0);
  st.s = Vector::Ones(2);
  st.z = Vector::Ones(2);
  const Residuals r = compute_residuals(st, p);
  st.rx = r.rx;
  st.ry = r.ry;
  st.rz = r.rz;
  const auto info = check_termination(st, p, 1e-8);
  EXPECT_EQ(info.outcome, Termination::PrimalInfeasible);
  EXPECT_EQ(info.certificate_residual, 0.0);
}

TEST(Termination, HomogeneousInScale) {
  const auto p = max_likelihood({0.2, 0.3, 0.5});
  Settings s;
  s.max_iter = 4;
  // Take a few iterations to get a generic iterate, then scale it.
  SolverState st = initial_state(p);
  NewtonSystem sys(p, s);
  for (int k = 0; k < 3; ++k) {
    const Residuals r = compute_residuals(st, p);
    st.rx = r.rx;
    st.ry = r.ry;
    st.rz = r.rz;
    st.rtau = r.rtau;
    st.mu = r.mu;
    sys.factor(st);
    const Direction d = sys.solve(st, affine_rhs(st));
    st = take_step(st, d, 0.5 * max_step(st, p, d));
  }
  auto with_res = [&](SolverState v) {
    const Residuals r = compute_residuals(v, p);
    v.rx = r.rx;
    v.ry = r.ry;
    v.rz = r.rz;
    return v;
  };
  const auto a = check_termination(with_res(st), p, 1e-8);
  SolverState scaled = st;
  const double t = 7.5;
  scaled.x *= t;
  scaled.y *= t;
  scaled.z *= t;
  scaled.s *= t;
  scaled.tau *= t;
  scaled.kappa *= t;
  const auto b = check_termination(with_res(scaled), p, 1e-8);
  EXPECT_NEAR(a.pres, b.pres, 1e-13 * std::max(1.0, a.pres));
  EXPECT_NEAR(a.dres, b.dres, 1e-13 * std::max(1.0, a.dres));
  EXPECT_NEAR(a.gap, b.gap, 1e-13 * std::max(1.0, a.gap));
  EXPECT_DOUBLE_EQ(st.kappa / st.tau, scaled.kappa / scaled.tau);
}

TEST(CombinedRhs, SigmaLimits) {
  const auto p = with_power_block(lp_lower_bound(1.0));
  SolverState st = initial_state(p);
  const Residuals r = compute_residuals(st, p);
  st.rx = r.rx;
  st.ry = r.ry;
  st.rz = r.rz;
  st.rtau = r.rtau;
  st.mu = r.mu;
  NewtonSystem sys(p, Settings{});
  sys.factor(st);
  const Direction aff = sys.solve(st, affine_rhs(st));
  const StepRhs pure_newton = combined_rhs(st, p, sys, aff, 0.0);
  EXPECT_EQ(pure_newton.dx, st.rx);
  EXPECT_EQ(pure_newton.dtau, st.rtau);
  const StepRhs centering = combined_rhs(st, p, sys, aff, 1.0);
  EXPECT_EQ(centering.dx.norm() + centering.dy.norm() + centering.dz.norm(), 0.0);
  EXPECT_EQ(centering.dtau, 0.0);
  // At unit init s = −μ g*(z), so the nonsymmetric centering target vanishes.
  EXPECT_LT(centering.ds.tail(3).norm(), 1e-12);
}

// Random problem mixing every cone type, with a random interior iterate.
struct Instance {
  ProblemData p;
  SolverState st;
};

Instance random_instance(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.2, 3.0);
  Instance in;
  auto& p = in.p;
  p.cones = {ConeSpec::nonneg(2), ConeSpec::zero(1)};
  for (auto kind : testing::kNonsymmetric) p.cones.push_back(random_cone(kind, 7, rng));
  int m = 0;
  for (const auto& k : p.cones) m += k.dim();
  const int n = 5;
  const int q = 2;
  auto rnd = [&](int r, int c) {
    Matrix a(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) a(i, j) = g(rng);
    }
    return a;
  };
  p.c = rnd(n, 1);
  p.G = dense_to_sparse(rnd(q, n));
  p.h = rnd(q, 1);
  p.A = dense_to_sparse(rnd(m, n));
  p.b = rnd(m, 1);
  auto& st = in.st;
  st.x = rnd(n, 1);
  st.y = rnd(q, 1);
  st.s = Vector::Zero(m);
  st.z = Vector::Zero(m);
  int off = 0;
  for (const auto& k : p.cones) {
    if (k.kind() == ConeKind::Zero) {
      st.z.segment(off, k.dim()) = rnd(k.dim(), 1);
    } else {
      st.s.segment(off, k.dim()) = random_interior(k, Side::Primal, rng);
      st.z.segment(off, k.dim()) = random_interior(k, Side::Dual, rng);
    }
    off += k.dim();
  }
  st.tau = u(rng);
  st.kappa = u(rng);
  const Residuals r = compute_residuals(st, p);
  st.rx = r.rx;
  st.ry = r.ry;
  st.rz = r.rz;
  st.rtau = r.rtau;
  st.mu = r.mu;
  return in;
}

// Two-solve Δτ recovery against one dense solve of the full linearized
// embedding in (Δx, Δy, Δz, Δs, Δτ, Δκ).
TEST(NewtonDirection, MatchesFullDenseSystem) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    const auto in = random_instance(rng);
    const auto& p = in.p;
    const auto& st = in.st;
    NewtonSystem sys(p, Settings{});
    sys.factor(st);
    StepRhs d = affine_rhs(st);
    if (trial % 2 == 1) {
      const Direction aff = sys.solve(st, d);
      d = combined_rhs(st, p, sys, aff, 0.4);
    }
    const Direction dir = sys.solve(st, d);

    const int n = p.n(), q = p.p(), m = p.m();
    ASSERT_LE(n + q + 2 * m + 2, 60);
    Matrix h(m, m);
    for (int j = 0; j < m; ++j) h.col(j) = sys.apply_hs(Vector::Unit(m, j));
    const Matrix gm(p.G), am(p.A);
    const int ix = 0, iy = n, iz = n + q, is = n + q + m, it = n + q + 2 * m, ik = it + 1;
    const int order = ik + 1;
    Matrix k = Matrix::Zero(order, order);
    Vector rhs(order);
    // Gᵀ Δy + Aᵀ Δz + c Δτ = d_x
    k.block(ix, iy, n, q) = gm.transpose();
    k.block(ix, iz, n, m) = am.transpose();
    k.block(ix, it, n, 1) = p.c;
    rhs.segment(ix, n) = d.dx;
    // G Δx − h Δτ = −d_y
    k.block(iy, ix, q, n) = gm;
    k.block(iy, it, q, 1) = -p.h;
    rhs.segment(iy, q) = -d.dy;
    // A Δx + Δs − b Δτ = −d_z
    k.block(iz, ix, m, n) = am;
    k.block(iz, is, m, m) = Matrix::Identity(m, m);
    k.block(iz, it, m, 1) = -p.b;
    rhs.segment(iz, m) = -d.dz;
    // Δs + H_s Δz = −d_s
    k.block(is, is, m, m) = Matrix::Identity(m, m);
    k.block(is, iz, m, m) = h;
    rhs.segment(is, m) = -d.ds;
    // cᵀΔx + hᵀΔy + bᵀΔz + Δκ = −d_τ
    k.block(it, ix, 1, n) = p.c.transpose();
    k.block(it, iy, 1, q) = p.h.transpose();
    k.block(it, iz, 1, m) = p.b.transpose();
    k(it, ik) = 1.0;
    rhs[it] = -d.dtau;
    // κ Δτ + τ Δκ = −d_κ
    k(ik, it) = st.kappa;
    k(ik, ik) = st.tau;
    rhs[ik] = -d.dkappa;

    const Vector oracle = k.fullPivLu().solve(rhs);
    Vector got(order);
    got << dir.dx, dir.dy, dir.dz, dir.ds, dir.dtau, dir.dkappa;
    const double scale = std::max(1.0, oracle.norm());
    EXPECT_LE((got - oracle).norm(), 1e-8 * scale) << "trial " << trial;
    // Recovery identities.
    EXPECT_LE((dir.ds + d.ds + h * dir.dz).norm(), 1e-10 * scale);
    EXPECT_NEAR(dir.dkappa, -(d.dkappa + st.kappa * dir.dtau) / st.tau, 1e-12 * scale);
  }
}

class Regression : public ::testing::TestWithParam<BenchCase> {};

TEST_P(Regression, TraceInvariants) {
  const auto p = generate(GetParam());
  const auto res = solve(p);
  ASSERT_EQ(res.status, Status::Solved) << res.message;
  const double gate = proximity_gate(p, Settings{});
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const auto& rec = res.trace[i];
    EXPECT_TRUE(rec.inertia_ok || i + 1 == res.trace.size());
    EXPECT_GT(rec.tau, 0.0);
    EXPECT_GT(rec.kappa, 0.0);
    EXPECT_LE(rec.proximity, gate + 1e-9);
    EXPECT_GE(rec.proximity, -1e-9);
    if (i >= 5) EXPECT_LT(rec.mu, res.trace[i - 5].mu) << "iteration " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Suite, Regression,
    ::testing::Values(BenchCase{Family::MaxLikelihood, Formulation::Native, 50, 1},
                      BenchCase{Family::MaxLikelihood, Formulation::Split3d, 50, 1},
                      BenchCase{Family::MaxLikelihood, Formulation::PowMean, 50, 1},
                      BenchCase{Family::MaxVolume, Formulation::Native, 50, 1},
                      BenchCase{Family::MaxVolume, Formulation::Split3d, 50, 1},
                      BenchCase{Family::EntropyMax, Formulation::Native, 50, 1},
                      BenchCase{Family::EntropyMax, Formulation::Split3d, 50, 1}));

TEST(Solve, NativeMatchesExtendedFormulation) {
  for (std::uint64_t seed : {1, 2}) {
    const auto a = solve(gen_max_likelihood(30, seed, Formulation::Native));
    const auto b = solve(gen_max_likelihood(30, seed, Formulation::Split3d));
    ASSERT_EQ(a.status, Status::Solved);
    ASSERT_EQ(b.status, Status::Solved);
    EXPECT_NEAR(a.primal_objective, b.primal_objective,
                1e-6 * (1.0 + std::abs(a.primal_objective)));
  }
}

TEST(Solve, DenseAssemblyGivesSameAnswer) {
  const auto p = gen_max_volume(20, 1.0, 3, Formulation::Native);
  Settings dense;
  dense.assembly = HessianAssembly::Dense;
  const auto a = solve(p);
  const auto b = solve(p, dense);
  ASSERT_EQ(a.status, Status::Solved);
  ASSERT_EQ(b.status, Status::Solved);
  EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-7);
  EXPECT_GT(b.nnz_l, a.nnz_l);
}

}  // namespace
}  // namespace conic
