#include "conic/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "conic/conjugate.hpp"
#include "conic/errors.hpp"
#include "reduced_operator.hpp"

namespace conic {

const char* to_string(Status status) {
  switch (status) {
    case Status::Solved:
      return "Solved";
    case Status::PrimalInfeasible:
      return "PrimalInfeasible";
    case Status::DualInfeasible:
      return "DualInfeasible";
    case Status::AlmostSolved:
      return "AlmostSolved";
    case Status::MaxIterations:
      return "MaxIterations";
    case Status::NumericalError:
      return "NumericalError";
  }
  return "?";
}

bool is_definitive(Status status) {
  return status == Status::Solved || status == Status::PrimalInfeasible ||
         status == Status::DualInfeasible;
}

namespace {

double inf_norm(const VectorRef& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

bool interior(const ProblemData& pd, const std::vector<int>& off, const SolverState& st) {
  if (!(st.tau > 0.0) || !(st.kappa > 0.0)) return false;
  for (std::size_t k = 0; k < pd.cones.size(); ++k) {
    const int n = pd.cones[k].dim();
    if (!in_primal_interior(pd.cones[k], st.s.segment(off[k], n))) return false;
    if (!in_dual_interior(pd.cones[k], st.z.segment(off[k], n))) return false;
  }
  return true;
}

}  // namespace

SolverState initial_state(const ProblemData& pd) {
  SolverState st;
  st.x = Vector::Zero(pd.n());
  st.y = Vector::Zero(pd.p());
  st.s = Vector::Zero(pd.m());
  st.z = Vector::Zero(pd.m());
  const auto off = block_offsets(pd.cones);
  for (std::size_t k = 0; k < pd.cones.size(); ++k) {
    const InitPoint ip = unit_init(pd.cones[k]);
    st.s.segment(off[k], ip.s.size()) = ip.s;
    st.z.segment(off[k], ip.z.size()) = ip.z;
  }
  st.tau = 1.0;
  st.kappa = 1.0;
  return st;
}

Residuals compute_residuals(const SolverState& st, const ProblemData& pd) {
  Residuals r;
  r.rx = -(pd.G.transpose() * st.y) - pd.A.transpose() * st.z - pd.c * st.tau;
  r.ry = pd.G * st.x - pd.h * st.tau;
  r.rz = st.s + pd.A * st.x - pd.b * st.tau;
  r.rtau = st.kappa + pd.c.dot(st.x) + pd.h.dot(st.y) + pd.b.dot(st.z);
  r.mu = (st.s.dot(st.z) + st.kappa * st.tau) / (total_degree(pd.cones) + 1.0);
  return r;
}

NewtonSystem::NewtonSystem(const ProblemData& problem, const Settings& settings)
    : problem_(problem), settings_(settings), offsets_(block_offsets(problem.cones)) {}

std::vector<AugmentedHessian> NewtonSystem::build_hessians(const SolverState& st) const {
  std::vector<AugmentedHessian> hs;
  hs.reserve(problem_.cones.size());
  for (std::size_t k = 0; k < problem_.cones.size(); ++k) {
    const auto& cone = problem_.cones[k];
    const int n = cone.dim();
    const auto zk = st.z.segment(offsets_[k], n);
    if (cone.kind() == ConeKind::Zero) {
      AugmentedHessian h;
      h.kind = ConeKind::Zero;
      h.dim = n;
      hs.push_back(std::move(h));
    } else if (cone.kind() == ConeKind::NonNeg) {
      // Symmetric scaling diag(s/z) for the orthant.
      const auto sk = st.s.segment(offsets_[k], n);
      AugmentedHessian h;
      h.kind = ConeKind::NonNeg;
      h.dim = n;
      h.mu = 1.0;
      for (int i = 0; i < n; ++i) h.d_entries.push_back({i, i, sk[i] / zk[i]});
      hs.push_back(std::move(h));
    } else {
      hs.push_back(augmented_hessian(cone, zk, st.mu));
    }
  }
  return hs;
}

void NewtonSystem::factor(const SolverState& st) {
  hessians_ = build_hessians(st);
  if (!assembled_) {
    kkt_ = assemble_kkt(problem_, hessians_, settings_.assembly);
    symbolic_ = symbolic_factor(kkt_.matrix);
    assembled_ = true;
  } else {
    update_kkt(kkt_, hessians_);
  }
  factor_ = numeric_factor(kkt_.matrix, symbolic_, kkt_.reg_signs, settings_.static_reg);
  refine_residual_ = 0.0;
  sol2_ = solve_kkt(kkt_rhs(kkt_.layout, -problem_.c, problem_.h, problem_.b));
}

Vector NewtonSystem::apply_reduced(const VectorRef& v) const {
  const KktLayout& lay = kkt_.layout;
  const auto x = v.head(lay.n_x);
  const auto y = v.segment(lay.y_begin(), lay.n_y);
  const auto z = v.segment(lay.z_begin(), lay.n_z);
  Vector out(lay.ext_begin());
  out.head(lay.n_x) = problem_.G.transpose() * y + problem_.A.transpose() * z;
  out.segment(lay.y_begin(), lay.n_y) = problem_.G * x;
  out.segment(lay.z_begin(), lay.n_z) = problem_.A * x - apply_hs(z);
  return out;
}

Vector NewtonSystem::solve_kkt(const Vector& rhs) {
  const int base = kkt_.layout.ext_begin();
  const Vector b = rhs.head(base);
  const double scale = std::max(1.0, inf_norm(rhs));
  Vector sol = solve_refined(factor_, kkt_.matrix, rhs).x.head(base);
  Vector r = b - apply_reduced(sol);
  double res = inf_norm(r);
  // Eliminating the extension unknowns amplifies the expanded residual, and
  // the regularization can exceed the smallest true pivot near a
  // certificate. GMRES on the unexpanded system recovers both. The
  // regularized factors precondition from the right so that GMRES minimizes
  // the true residual; near a certificate M⁻¹ is huge and a left
  // preconditioned residual says nothing about K x − b.
  if (res > 1e-12 * scale) {
    auto precondition = [this, base](const Vector& v) {
      Vector full = Vector::Zero(kkt_.layout.order());
      full.head(base) = v;
      return Vector(factor_.apply_inverse(full).head(base));
    };
    detail::ReducedOperator op(
        base, [this, &precondition](const Vector& v) { return apply_reduced(precondition(v)); });
    Eigen::GMRES<detail::ReducedOperator, Eigen::IdentityPreconditioner> gmres;
    gmres.set_restart(30);
    gmres.setMaxIterations(60);
    gmres.setTolerance(1e-12);
    gmres.compute(op);
    for (int round = 0; round < 3 && res > 1e-12 * scale; ++round) {
      const Vector cand = sol + precondition(gmres.solve(r));
      Vector cand_r = b - apply_reduced(cand);
      const double cand_res = inf_norm(cand_r);
      if (!(cand_res < res)) break;
      sol = cand;
      r = std::move(cand_r);
      res = cand_res;
    }
  }
  refine_residual_ = std::max(refine_residual_, res / scale);
  if (res > 1e-6 * scale) {
    throw RefinementStall(
        fmt::format("KKT refinement stalled at relative residual {:.3e}", res / scale), res);
  }
  return sol;
}

Vector NewtonSystem::apply_hs(const VectorRef& v) const {
  Vector out = Vector::Zero(v.size());
  for (std::size_t k = 0; k < hessians_.size(); ++k) {
    const int n = hessians_[k].dim;
    if (n == 0 || hessians_[k].kind == ConeKind::Zero) continue;
    out.segment(offsets_[k], n) = hessians_[k].apply(v.segment(offsets_[k], n));
  }
  return out;
}

Direction NewtonSystem::solve(const SolverState& st, const StepRhs& d) {
  const KktLayout& lay = kkt_.layout;
  const Vector sol1 = solve_kkt(kkt_rhs(lay, d.dx, -d.dy, d.ds - d.dz));
  const auto x1 = sol1.head(lay.n_x);
  const auto y1 = sol1.segment(lay.y_begin(), lay.n_y);
  const auto z1 = sol1.segment(lay.z_begin(), lay.n_z);
  const auto x2 = sol2_.head(lay.n_x);
  const auto y2 = sol2_.segment(lay.y_begin(), lay.n_y);
  const auto z2 = sol2_.segment(lay.z_begin(), lay.n_z);
  const auto& pd = problem_;
  const double num =
      d.dtau - d.dkappa / st.tau + pd.c.dot(x1) + pd.h.dot(y1) + pd.b.dot(z1);
  const double den = st.kappa / st.tau - pd.c.dot(x2) - pd.h.dot(y2) - pd.b.dot(z2);
  Direction out;
  out.dtau = num / den;
  out.dx = x1 + out.dtau * x2;
  out.dy = y1 + out.dtau * y2;
  out.dz = z1 + out.dtau * z2;
  out.ds = -d.ds - apply_hs(out.dz);
  out.dkappa = -(d.dkappa + st.kappa * out.dtau) / st.tau;
  return out;
}

StepRhs affine_rhs(const SolverState& st) {
  StepRhs d;
  d.dx = st.rx;
  d.dy = st.ry;
  d.dz = st.rz;
  d.dtau = st.rtau;
  d.ds = st.s;
  d.dkappa = st.tau * st.kappa;
  return d;
}

StepRhs combined_rhs(const SolverState& st, const ProblemData& pd, const NewtonSystem&,
                     const Direction& aff, double sigma) {
  StepRhs d;
  d.dx = (1.0 - sigma) * st.rx;
  d.dy = (1.0 - sigma) * st.ry;
  d.dz = (1.0 - sigma) * st.rz;
  d.dtau = (1.0 - sigma) * st.rtau;
  d.ds = Vector::Zero(st.s.size());
  const auto off = block_offsets(pd.cones);
  for (std::size_t k = 0; k < pd.cones.size(); ++k) {
    const auto& cone = pd.cones[k];
    const int n = cone.dim();
    const auto sk = st.s.segment(off[k], n);
    const auto zk = st.z.segment(off[k], n);
    switch (cone.kind()) {
      case ConeKind::Zero:
        break;
      case ConeKind::NonNeg:
        d.ds.segment(off[k], n) =
            (sk.array() - sigma * st.mu / zk.array() +
             aff.ds.segment(off[k], n).array() * aff.dz.segment(off[k], n).array() / zk.array())
                .matrix();
        break;
      default:
        d.ds.segment(off[k], n) = sk + sigma * st.mu * dual_barrier(cone, zk).gradient;
        break;
    }
  }
  d.dkappa = st.tau * st.kappa - sigma * st.mu + aff.dtau * aff.dkappa;
  return d;
}

double max_step(const SolverState& st, const ProblemData& pd, const Direction& d) {
  double alpha = 1.0;
  const auto off = block_offsets(pd.cones);
  for (std::size_t k = 0; k < pd.cones.size(); ++k) {
    const int n = pd.cones[k].dim();
    alpha = std::min(alpha, step_to_boundary(pd.cones[k], st.s.segment(off[k], n),
                                             d.ds.segment(off[k], n), Side::Primal));
    alpha = std::min(alpha, step_to_boundary(pd.cones[k], st.z.segment(off[k], n),
                                             d.dz.segment(off[k], n), Side::Dual));
  }
  if (d.dtau < 0.0) alpha = std::min(alpha, -st.tau / d.dtau);
  if (d.dkappa < 0.0) alpha = std::min(alpha, -st.kappa / d.dkappa);
  return alpha;
}

SolverState take_step(const SolverState& st, const Direction& d, double alpha) {
  SolverState out = st;
  out.x += alpha * d.dx;
  out.y += alpha * d.dy;
  out.z += alpha * d.dz;
  out.s += alpha * d.ds;
  out.tau += alpha * d.dtau;
  out.kappa += alpha * d.dkappa;
  return out;
}

TerminationInfo check_termination(const SolverState& st, const ProblemData& pd, double eps) {
  TerminationInfo info;
  const double scale =
      std::max({1.0, inf_norm(pd.c), inf_norm(pd.h), inf_norm(pd.b)});
  info.pres = std::max(inf_norm(st.ry), inf_norm(st.rz)) / st.tau;
  info.dres = inf_norm(st.rx) / st.tau;
  const double cx = pd.c.dot(st.x);
  const double hy_bz = pd.h.dot(st.y) + pd.b.dot(st.z);
  info.gap = std::abs(cx + hy_bz) / st.tau;
  if (info.pres <= eps * scale && info.dres <= eps * scale &&
      info.gap <= eps * (1.0 + std::abs(cx / st.tau))) {
    info.outcome = Termination::Solved;
    return info;
  }
  if (st.kappa > st.tau && hy_bz < 0.0) {
    const Vector aty = pd.G.transpose() * st.y + pd.A.transpose() * st.z;
    const double res = inf_norm(aty) / -hy_bz;
    if (res <= eps) {
      info.outcome = Termination::PrimalInfeasible;
      info.certificate_residual = res;
      return info;
    }
  }
  if (st.kappa > st.tau && cx < 0.0) {
    const Vector gx = pd.G * st.x;
    const Vector axs = pd.A * st.x + st.s;
    const double res = std::max(inf_norm(gx), inf_norm(axs)) / -cx;
    if (res <= eps) {
      info.outcome = Termination::DualInfeasible;
      info.certificate_residual = res;
      return info;
    }
  }
  return info;
}

namespace {

void set_residuals(SolverState& st, const ProblemData& pd) {
  Residuals r = compute_residuals(st, pd);
  st.rx = std::move(r.rx);
  st.ry = std::move(r.ry);
  st.rz = std::move(r.rz);
  st.rtau = r.rtau;
  st.mu = r.mu;
}

void finalize(SolveResult& res, const SolverState& st, const ProblemData& pd,
              const TerminationInfo& info) {
  res.certificate_residual = info.certificate_residual;
  const double cx = pd.c.dot(st.x);
  const double hy_bz = pd.h.dot(st.y) + pd.b.dot(st.z);
  if (res.status == Status::PrimalInfeasible) {
    const double t = 1.0 / -hy_bz;
    res.y = st.y * t;
    res.z = st.z * t;
    res.x = Vector::Zero(pd.n());
    res.s = Vector::Zero(pd.m());
    res.primal_objective = std::numeric_limits<double>::infinity();
    res.dual_objective = std::numeric_limits<double>::infinity();
    return;
  }
  if (res.status == Status::DualInfeasible) {
    const double t = 1.0 / -cx;
    res.x = st.x * t;
    res.s = st.s * t;
    res.y = Vector::Zero(pd.p());
    res.z = Vector::Zero(pd.m());
    res.primal_objective = -std::numeric_limits<double>::infinity();
    res.dual_objective = -std::numeric_limits<double>::infinity();
    return;
  }
  res.x = st.x / st.tau;
  res.y = st.y / st.tau;
  res.z = st.z / st.tau;
  res.s = st.s / st.tau;
  res.primal_objective = cx / st.tau;
  res.dual_objective = -hy_bz / st.tau;
}

/// Downgrades a failed run to AlmostSolved when the loose tolerance holds.
void classify_failure(SolveResult& res, Status failure, const SolverState& st,
                      const ProblemData& pd, const Settings& settings) {
  const TerminationInfo loose =
      check_termination(st, pd, settings.eps * settings.inaccurate_factor);
  res.status = loose.outcome == Termination::Solved ? Status::AlmostSolved : failure;
  finalize(res, st, pd, loose);
}

}  // namespace

double proximity_gate(const ProblemData& pd, const Settings& settings) {
  double nu = 0.0;
  for (const auto& cone : pd.cones) {
    if (cone.kind() != ConeKind::NonNeg) nu += degree(cone);
  }
  return settings.proximity_bound + settings.proximity_per_degree * nu;
}

SolveResult solve(const ProblemData& pd, const Settings& settings) {
  SolveResult res;
  const auto errors = validate(pd);
  if (!errors.empty()) {
    throw ValidationError(fmt::format("invalid problem: {}", fmt::join(errors, "; ")));
  }
  const auto off = block_offsets(pd.cones);
  SolverState st = initial_state(pd);
  NewtonSystem system(pd, settings);
  const double gate = proximity_gate(pd, settings);

  for (int iter = 0;; ++iter) {
    st.iteration = iter;
    set_residuals(st, pd);
    const TerminationInfo info = check_termination(st, pd, settings.eps);

    IterationRecord rec;
    rec.iteration = iter;
    rec.mu = st.mu;
    rec.tau = st.tau;
    rec.kappa = st.kappa;
    rec.pres = info.pres;
    rec.dres = info.dres;
    rec.gap = info.gap;
    try {
      rec.proximity = proximity(pd.cones, st.s, st.z, st.tau, st.kappa);
    } catch (const std::exception&) {
      rec.proximity = std::numeric_limits<double>::quiet_NaN();
    }
    if (settings.verbose) {
      fmt::print(stderr, "{:3d}  mu {:.3e}  pres {:.3e}  dres {:.3e}  gap {:.3e}  tau {:.3e}  kappa {:.3e}\n",
                 iter, st.mu, info.pres, info.dres, info.gap, st.tau, st.kappa);
    }

    if (info.outcome != Termination::Continue) {
      res.trace.push_back(rec);
      res.iterations = iter;
      res.status = info.outcome == Termination::Solved            ? Status::Solved
                   : info.outcome == Termination::PrimalInfeasible ? Status::PrimalInfeasible
                                                                   : Status::DualInfeasible;
      finalize(res, st, pd, info);
      break;
    }
    if (iter >= settings.max_iter) {
      res.trace.push_back(rec);
      res.iterations = iter;
      res.message = "iteration limit reached";
      classify_failure(res, Status::MaxIterations, st, pd, settings);
      break;
    }

    if (settings.on_iterate) settings.on_iterate(st);
    try {
      system.factor(st);
      const auto& f = system.factorization();
      rec.inertia = f.inertia;
      rec.inertia_ok = f.inertia == system.kkt().predicted_inertia();
      rec.dynamic_bumps = f.dynamic_bumps;
      res.nnz_l = f.nnz_l();
      res.kkt_order = system.kkt().layout.order();

      const Direction aff = system.solve(st, affine_rhs(st));
      rec.alpha_affine = std::min(1.0, max_step(st, pd, aff));
      const double sigma = std::pow(1.0 - rec.alpha_affine, 3);
      rec.sigma = sigma;

      // Backtracking from 0.99 α_max until the trial point is interior and
      // passes the proximity gate; 0 when the floor is reached.
      SolverState trial;
      auto search = [&](const Direction& dir, SolverState& out) {
        double alpha = 0.99 * std::min(1.0, max_step(st, pd, dir));
        while (alpha >= settings.step_floor) {
          out = take_step(st, dir, alpha);
          if (interior(pd, off, out)) {
            double phi = std::numeric_limits<double>::infinity();
            try {
              phi = proximity(pd.cones, out.s, out.z, out.tau, out.kappa);
            } catch (const std::exception&) {
            }
            if (phi <= gate) return alpha;
          }
          alpha *= 0.9;
        }
        return 0.0;
      };
      double alpha = search(system.solve(st, combined_rhs(st, pd, system, aff, sigma)), trial);
      if (alpha < settings.sigma_retry_below) {
        Direction no_correction = aff;
        no_correction.ds.setZero();
        no_correction.dz.setZero();
        no_correction.dtau = 0.0;
        no_correction.dkappa = 0.0;
        double best = alpha > 0.0 ? 1.0 - alpha * (1.0 - sigma) : 2.0;
        for (double sg : {std::max(sigma, 0.3), std::max(sigma, 0.7), 1.0}) {
          const Direction& base = sg < 1.0 ? aff : no_correction;
          SolverState candidate;
          const double a = search(system.solve(st, combined_rhs(st, pd, system, base, sg)),
                                  candidate);
          if (a > 0.0 && 1.0 - a * (1.0 - sg) < best) {
            best = 1.0 - a * (1.0 - sg);
            alpha = a;
            rec.sigma = sg;
            trial = std::move(candidate);
          }
        }
      }
      rec.refine_residual = system.refine_residual();
      if (alpha <= 0.0) {
        res.trace.push_back(rec);
        res.iterations = iter;
        res.message = "step size fell below the floor";
        classify_failure(res, Status::NumericalError, st, pd, settings);
        break;
      }
      rec.alpha = alpha;
      res.trace.push_back(rec);
      st = std::move(trial);
    } catch (const std::exception& e) {
      res.trace.push_back(rec);
      res.iterations = iter;
      res.message = e.what();
      classify_failure(res, Status::NumericalError, st, pd, settings);
      break;
    }
  }
  return res;
}

}  // namespace conic
