#include "conic/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "conic/conjugate.hpp"
#include "conic/errors.hpp"
#include "conic/sampling.hpp"

namespace conic {

const char* to_string(Family family) {
  switch (family) {
    case Family::MaxLikelihood:
      return "max_likelihood";
    case Family::MaxVolume:
      return "max_volume";
    case Family::EntropyMax:
      return "entropy_max";
  }
  return "?";
}

const char* to_string(Formulation formulation) {
  switch (formulation) {
    case Formulation::Native:
      return "native";
    case Formulation::Split3d:
      return "split3d";
    case Formulation::PowMean:
      return "powmean";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::MaxLikelihood, Family::MaxVolume, Family::EntropyMax}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument(fmt::format("unknown family '{}'", name));
}

Formulation parse_formulation(const std::string& name) {
  for (Formulation f : {Formulation::Native, Formulation::Split3d, Formulation::PowMean}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument(fmt::format("unknown formulation '{}'", name));
}

namespace {

/// One affine expression Σ coef·x + constant.
struct Affine {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
};

Affine var(int i, double coef = 1.0) { return Affine{{{i, coef}}, 0.0}; }

class Builder {
 public:
  int new_var(double cost = 0.0) {
    c_.push_back(cost);
    return static_cast<int>(c_.size()) - 1;
  }
  void set_cost(int i, double cost) { c_[i] = cost; }

  /// Σ coef·x = rhs.
  void equality(const std::vector<std::pair<int, double>>& terms, double rhs) {
    const int row = static_cast<int>(h_.size());
    for (const auto& [j, v] : terms) g_.emplace_back(row, j, v);
    h_.push_back(rhs);
  }

  /// The stacked expressions lie in the cone: s = b − Ax with s = expr.
  void cone(ConeSpec spec, const std::vector<Affine>& rows) {
    if (static_cast<int>(rows.size()) != spec.dim()) {
      throw DimensionMismatch("cone rows do not match the cone dimension");
    }
    for (const auto& r : rows) {
      const int row = static_cast<int>(b_.size());
      for (const auto& [j, v] : r.terms) a_.emplace_back(row, j, -v);
      b_.push_back(r.constant);
    }
    cones_.push_back(std::move(spec));
  }

  ProblemData build() const {
    ProblemData pd;
    const int n = static_cast<int>(c_.size());
    pd.c = Eigen::Map<const Vector>(c_.data(), n);
    pd.h = Eigen::Map<const Vector>(h_.data(), static_cast<Eigen::Index>(h_.size()));
    pd.b = Eigen::Map<const Vector>(b_.data(), static_cast<Eigen::Index>(b_.size()));
    pd.G.resize(static_cast<int>(h_.size()), n);
    pd.G.setFromTriplets(g_.begin(), g_.end());
    pd.A.resize(static_cast<int>(b_.size()), n);
    pd.A.setFromTriplets(a_.begin(), a_.end());
    pd.G.makeCompressed();
    pd.A.makeCompressed();
    pd.cones = cones_;
    return pd;
  }

 private:
  std::vector<double> c_;
  std::vector<double> h_;
  std::vector<double> b_;
  std::vector<Eigen::Triplet<double>> g_;
  std::vector<Eigen::Triplet<double>> a_;
  std::vector<ConeSpec> cones_;
};

/// t ≤ ∏ xᵢ^{αᵢ} in the requested form.
void add_geomean(Builder& bld, const std::vector<double>& alpha, const std::vector<int>& x, int t,
                 Formulation form) {
  const int n = static_cast<int>(x.size());
  if (form != Formulation::Split3d) {
    std::vector<Affine> rows;
    for (int i : x) rows.push_back(var(i));
    rows.push_back(var(t));
    bld.cone(form == Formulation::Native ? ConeSpec::genpow(alpha, 1) : ConeSpec::powmean(alpha),
             rows);
    return;
  }
  // w₂ = x₁, w_{i+1} ≤ w_i^{1−pᵢ} x_i^{pᵢ}, w_{n+1} = t, pᵢ = αᵢ / Σ_{j≤i} αⱼ.
  int prev = x[0];
  double partial = alpha[0];
  for (int i = 1; i < n; ++i) {
    partial += alpha[i];
    const double p = alpha[i] / partial;
    const int out = i == n - 1 ? t : bld.new_var();
    bld.cone(ConeSpec::genpow({1.0 - p, p}, 1), {var(prev), var(x[i]), var(out)});
    prev = out;
  }
  std::vector<Affine> nonneg;
  for (int i : x) nonneg.push_back(var(i));
  bld.cone(ConeSpec::nonneg(n), nonneg);
}

std::vector<double> simplex_draw(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_simplex(n, rng);
}

}  // namespace

std::vector<double> draw_alpha(int n, std::uint64_t seed) { return simplex_draw(n, seed); }

Vector draw_prior(int d, std::uint64_t seed) {
  const auto q = simplex_draw(d, seed ^ 0x5bd1e9955bd1e995ULL);
  return Eigen::Map<const Vector>(q.data(), d);
}

ProblemData gen_max_likelihood(int n, std::uint64_t seed, Formulation form) {
  if (n < 2) throw std::invalid_argument("max_likelihood needs n >= 2");
  const auto alpha = draw_alpha(n, seed);
  Builder bld;
  std::vector<int> x;
  for (int i = 0; i < n; ++i) x.push_back(bld.new_var());
  const int t = bld.new_var(-1.0);
  std::vector<std::pair<int, double>> sum;
  for (int i : x) sum.emplace_back(i, 1.0);
  bld.equality(sum, 1.0);
  add_geomean(bld, alpha, x, t, form);
  return bld.build();
}

ProblemData gen_max_volume(int n, double gamma, std::uint64_t /*seed*/, Formulation form) {
  if (n < 2) throw std::invalid_argument("max_volume needs n >= 2");
  if (!(gamma > 0.0)) throw std::invalid_argument("max_volume needs gamma > 0");
  const std::vector<double> alpha(n, 1.0 / n);
  Builder bld;
  std::vector<int> x;
  std::vector<int> u;
  for (int i = 0; i < n; ++i) x.push_back(bld.new_var());
  for (int i = 0; i < n; ++i) u.push_back(bld.new_var());
  const int t = bld.new_var(-1.0);
  add_geomean(bld, alpha, x, t, form);
  std::vector<Affine> rows;
  // u − x ≥ 0, u + x ≥ 0, γ − Σu ≥ 0, γ − x ≥ 0, γ + x ≥ 0.
  for (int i = 0; i < n; ++i) rows.push_back(Affine{{{u[i], 1.0}, {x[i], -1.0}}, 0.0});
  for (int i = 0; i < n; ++i) rows.push_back(Affine{{{u[i], 1.0}, {x[i], 1.0}}, 0.0});
  Affine budget{{}, gamma};
  for (int i : u) budget.terms.emplace_back(i, -1.0);
  rows.push_back(budget);
  for (int i = 0; i < n; ++i) rows.push_back(Affine{{{x[i], -1.0}}, gamma});
  for (int i = 0; i < n; ++i) rows.push_back(Affine{{{x[i], 1.0}}, gamma});
  bld.cone(ConeSpec::nonneg(4 * n + 1), rows);
  return bld.build();
}

ProblemData gen_entropy_max(int d, std::uint64_t seed, Formulation form) {
  if (d < 1) throw std::invalid_argument("entropy_max needs d >= 1");
  if (form == Formulation::PowMean) {
    throw std::invalid_argument("entropy_max has no powmean formulation");
  }
  const Vector q = draw_prior(d, seed);
  Builder bld;
  const int t = bld.new_var(1.0);
  std::vector<int> p;
  for (int i = 0; i < d; ++i) p.push_back(bld.new_var());
  std::vector<std::pair<int, double>> sum;
  for (int i : p) sum.emplace_back(i, 1.0);
  bld.equality(sum, 1.0);
  if (form == Formulation::Native) {
    std::vector<Affine> rows{var(t)};
    for (int i = 0; i < d; ++i) rows.push_back(Affine{{}, q[i]});
    for (int i : p) rows.push_back(var(i));
    bld.cone(ConeSpec::relentropy(d), rows);
    return bld.build();
  }
  // rᵢ ≥ pᵢ ln(pᵢ/qᵢ) per coordinate, t ≥ Σ rᵢ.
  std::vector<int> r;
  for (int i = 0; i < d; ++i) r.push_back(bld.new_var());
  for (int i = 0; i < d; ++i) {
    bld.cone(ConeSpec::relentropy(1), {var(r[i]), Affine{{}, q[i]}, var(p[i])});
  }
  Affine slack = var(t);
  for (int i : r) slack.terms.emplace_back(i, -1.0);
  bld.cone(ConeSpec::nonneg(1), {slack});
  return bld.build();
}

ProblemData generate(const BenchCase& bc) {
  switch (bc.family) {
    case Family::MaxLikelihood:
      return gen_max_likelihood(bc.size, bc.seed, bc.formulation);
    case Family::MaxVolume:
      return gen_max_volume(bc.size, bc.gamma, bc.seed, bc.formulation);
    case Family::EntropyMax:
      return gen_entropy_max(bc.size, bc.seed, bc.formulation);
  }
  throw std::invalid_argument("unknown family");
}

std::vector<BenchCase> make_suite(const std::string& name, const std::vector<int>& sizes,
                                  std::uint64_t seed) {
  std::vector<Family> families;
  if (name == "all") {
    families = {Family::MaxLikelihood, Family::MaxVolume, Family::EntropyMax};
  } else {
    families = {parse_family(name)};
  }
  std::vector<BenchCase> cases;
  for (Family f : families) {
    std::vector<Formulation> forms{Formulation::Native, Formulation::Split3d};
    if (f != Family::EntropyMax) forms.push_back(Formulation::PowMean);
    for (int size : sizes) {
      for (Formulation form : forms) cases.push_back({f, form, size, seed, 1.0});
    }
  }
  return cases;
}

std::vector<BenchInstance> instantiate(const std::vector<BenchCase>& cases) {
  std::vector<BenchInstance> out;
  out.reserve(cases.size());
  for (const auto& c : cases) out.push_back({c, generate(c)});
  return out;
}

BenchReport run_bench(const std::vector<BenchInstance>& instances, const Settings& settings,
                      int repeats) {
  BenchReport report;
  repeats = std::max(1, repeats);
  for (const auto& inst : instances) {
    BenchRow row;
    row.meta = inst.meta;
    std::vector<double> times;
    try {
      for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult res = solve(inst.problem, settings);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (r == 0) {
          row.iterations = res.iterations;
          row.status = res.status;
          row.objective = res.primal_objective;
          row.error = res.message;
        }
      }
      std::sort(times.begin(), times.end());
      row.solve_ms = times[times.size() / 2];
    } catch (const std::exception& e) {
      row.status = Status::NumericalError;
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string BenchReport::csv(bool with_timing) const {
  std::string out = with_timing
                        ? "family,formulation,size,iterations,solve_ms,status,objective\n"
                        : "family,formulation,size,iterations,status,objective\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},", to_string(r.meta.family), to_string(r.meta.formulation),
                       r.meta.size, r.iterations);
    if (with_timing) out += fmt::format("{:.3f},", r.solve_ms);
    out += fmt::format("{},{:.10g}\n", to_string(r.status), r.objective);
  }
  return out;
}

std::string BenchReport::markdown() const {
  std::string out =
      "| family | formulation | size | iterations | solve_ms | status | objective |\n"
      "|---|---|---:|---:|---:|---|---:|\n";
  for (const auto& r : rows) {
    out += fmt::format("| {} | {} | {} | {} | {:.3f} | {} | {:.10g} |\n",
                       to_string(r.meta.family), to_string(r.meta.formulation), r.meta.size,
                       r.iterations, r.solve_ms, to_string(r.status), r.objective);
  }
  return out;
}

bool BenchReport::all_definitive() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const BenchRow& r) { return is_definitive(r.status); });
}

std::vector<CheckResult> run_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const ConeKind kinds[] = {ConeKind::GenPow, ConeKind::PowMean, ConeKind::RelEntropy};

  for (ConeKind kind : kinds) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ConeSpec cone = random_cone(kind, 8, rng);
      const Vector s = random_interior(cone, Side::Primal, rng);
      const Vector g = conj_gradient(cone, s);
      const Vector back = -dual_barrier(cone, -g).gradient;
      worst = std::max(worst, (back - s).norm() / s.norm());
    }
    out.push_back({fmt::format("conjugate identity ({})", to_string(kind)), worst <= 1e-9,
                   fmt::format("max relative error {:.2e}", worst)});
  }

  for (ConeKind kind : kinds) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ConeSpec cone = random_cone(kind, 8, rng);
      const Vector z = random_interior(cone, Side::Dual, rng);
      const Matrix dense = dense_dual_hessian(cone, z);
      const Matrix aug = augmented_hessian(cone, z, 1.0).dense();
      worst = std::max(worst, (aug - dense).norm() / std::max(1.0, dense.norm()));
    }
    out.push_back({fmt::format("augmented Hessian ({})", to_string(kind)), worst <= 1e-10,
                   fmt::format("max relative error {:.2e}", worst)});
  }

  {
    const auto pd = gen_max_likelihood(10, seed, Formulation::Native);
    const SolverState st = initial_state(pd);
    const double phi = proximity(pd.cones, st.s, st.z, st.tau, st.kappa);
    out.push_back({"proximity at unit init", std::abs(phi) <= 1e-8,
                   fmt::format("phi = {:.2e}", phi)});
  }

  for (Family f : {Family::MaxLikelihood, Family::MaxVolume, Family::EntropyMax}) {
    const auto a = solve(generate({f, Formulation::Native, 20, seed, 1.0}));
    const auto b = solve(generate({f, Formulation::Split3d, 20, seed, 1.0}));
    const double rel = std::abs(a.primal_objective - b.primal_objective) /
                       std::max(1.0, std::abs(a.primal_objective));
    const bool ok = a.status == Status::Solved && b.status == Status::Solved && rel <= 1e-6;
    out.push_back({fmt::format("native vs split3d ({})", to_string(f)), ok,
                   fmt::format("{} / {}, relative difference {:.2e}", to_string(a.status),
                               to_string(b.status), rel)});
  }

  {
    // x ≥ 1 and −x ≥ 0.
    ProblemData pd;
    pd.c = Vector::Ones(1);
    pd.G.resize(0, 1);
    pd.h.resize(0);
    pd.A.resize(2, 1);
    pd.A.insert(0, 0) = -1.0;
    pd.A.insert(1, 0) = 1.0;
    pd.b = Vector::Zero(2);
    pd.b[0] = -1.0;
    pd.cones = {ConeSpec::nonneg(2)};
    const auto res = solve(pd);
    out.push_back({"infeasible LP detection", res.status == Status::PrimalInfeasible,
                   fmt::format("{} after {} iterations", to_string(res.status), res.iterations)});
  }
  return out;
}

}  // namespace conic
