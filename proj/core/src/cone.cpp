#include "conic/cone.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "conic/errors.hpp"

namespace conic {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool all_finite(const VectorRef& v) { return v.allFinite(); }

void check_length(const ConeSpec& cone, const VectorRef& v) {
  if (v.size() != cone.dim()) {
    throw DomainError(fmt::format("{} cone expects {} coordinates, got {}",
                                  to_string(cone.kind()), cone.dim(), v.size()));
  }
}

/// Σ αᵢ ln(uᵢ/αᵢ); the log of ∏ (uᵢ/αᵢ)^{αᵢ}.
double log_weighted_product(const std::vector<double>& alpha,
                            const VectorRef& u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    acc += alpha[i] * std::log(u[i] / alpha[i]);
  }
  return acc;
}

/// Σ αᵢ ln(uᵢ); the log of ∏ uᵢ^{αᵢ}.
double log_plain_product(const std::vector<double>& alpha, const VectorRef& u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    acc += alpha[i] * std::log(u[i]);
  }
  return acc;
}

bool positive(const VectorRef& v) { return (v.array() > 0.0).all(); }

// ---------------------------------------------------------------------------
// Generalized power cone. z = (u, w), u ∈ R^{d1}, w ∈ R^{d2}.
//   φ = ∏ (uᵢ/αᵢ)^{2αᵢ},  ζ = φ − ‖w‖²,  τᵢ = 2αᵢ/uᵢ.

struct GenPowTerms {
  double phi;
  double zeta;
  double wnorm2;
  Vector tau;
};

GenPowTerms genpow_terms(const GenPowCone& k, const VectorRef& z) {
  const int d1 = static_cast<int>(k.alpha.size());
  const auto u = z.head(d1);
  const auto w = z.tail(k.d2);
  GenPowTerms t;
  const double root = std::exp(log_weighted_product(k.alpha, u));
  const double wn = w.norm();
  t.phi = root * root;
  t.wnorm2 = wn * wn;
  t.zeta = (root - wn) * (root + wn);
  t.tau.resize(d1);
  for (int i = 0; i < d1; ++i) t.tau[i] = 2.0 * k.alpha[i] / u[i];
  return t;
}

bool genpow_dual_interior(const GenPowCone& k, const VectorRef& z) {
  const int d1 = static_cast<int>(k.alpha.size());
  if (!positive(z.head(d1))) return false;
  return std::exp(log_weighted_product(k.alpha, z.head(d1))) > z.tail(k.d2).norm();
}

bool genpow_primal_interior(const GenPowCone& k, const VectorRef& s) {
  const int d1 = static_cast<int>(k.alpha.size());
  if (!positive(s.head(d1))) return false;
  return std::exp(log_plain_product(k.alpha, s.head(d1))) > s.tail(k.d2).norm();
}

BarrierInfo genpow_barrier(const GenPowCone& k, const VectorRef& z) {
  const int d1 = static_cast<int>(k.alpha.size());
  const auto t = genpow_terms(k, z);
  const auto u = z.head(d1);
  BarrierInfo info;
  info.nu = d1 + 1;
  info.value = -std::log(t.zeta);
  info.gradient.resize(z.size());
  for (int i = 0; i < d1; ++i) {
    const double a = k.alpha[i];
    info.value -= (1.0 - a) * std::log(u[i] / a);
    info.gradient[i] = -t.tau[i] * t.phi / t.zeta - (1.0 - a) / u[i];
  }
  info.gradient.tail(k.d2) = 2.0 * z.tail(k.d2) / t.zeta;
  return info;
}

Matrix genpow_hessian(const GenPowCone& k, const VectorRef& z) {
  const int d1 = static_cast<int>(k.alpha.size());
  const int n = d1 + k.d2;
  const auto t = genpow_terms(k, z);
  const auto u = z.head(d1);
  const auto w = z.tail(k.d2);
  const double pz = t.phi / t.zeta;
  Matrix h(n, n);
  h.topLeftCorner(d1, d1) = (t.phi / t.zeta * (pz - 1.0)) * t.tau * t.tau.transpose();
  for (int i = 0; i < d1; ++i) {
    h(i, i) += t.tau[i] * pz / u[i] + (1.0 - k.alpha[i]) / (u[i] * u[i]);
  }
  const double z2 = t.zeta * t.zeta;
  h.topRightCorner(d1, k.d2) = (-2.0 * t.phi / z2) * t.tau * w.transpose();
  h.bottomLeftCorner(k.d2, d1) = h.topRightCorner(d1, k.d2).transpose();
  h.bottomRightCorner(k.d2, k.d2) = (4.0 / z2) * w * w.transpose();
  h.bottomRightCorner(k.d2, k.d2).diagonal().array() += 2.0 / t.zeta;
  return h;
}

AugmentedHessian genpow_augmented(const GenPowCone& k, const VectorRef& z) {
  const int d1 = static_cast<int>(k.alpha.size());
  const auto t = genpow_terms(k, z);
  const auto u = z.head(d1);
  const auto w = z.tail(k.d2);
  AugmentedHessian aug;
  aug.kind = ConeKind::GenPow;
  aug.dim = d1 + k.d2;
  aug.d_entries.reserve(aug.dim);
  for (int i = 0; i < d1; ++i) {
    aug.d_entries.push_back(
        {i, i, t.tau[i] * t.phi / (t.zeta * u[i]) + (1.0 - k.alpha[i]) / (u[i] * u[i])});
  }
  for (int j = 0; j < k.d2; ++j) aug.d_entries.push_back({d1 + j, d1 + j, 2.0 / t.zeta});

  const double sum = t.phi + t.wnorm2;
  const double p0 = std::sqrt(t.phi * sum / 2.0);
  const double p1 = -2.0 * std::sqrt(2.0 * t.phi / sum);
  const double q0 = std::sqrt(t.zeta * t.phi / 2.0);
  const double r1 = 2.0 * std::sqrt(t.zeta / sum);

  ExpansionColumn q{-1, 0, (q0 / t.zeta) * t.tau};
  ExpansionColumn r{-1, d1, (r1 / t.zeta) * w};
  ExpansionColumn p{+1, 0, Vector(aug.dim)};
  p.values.head(d1) = (p0 / t.zeta) * t.tau;
  p.values.tail(k.d2) = (p1 / t.zeta) * w;
  aug.columns = {std::move(q), std::move(r), std::move(p)};
  return aug;
}

// ---------------------------------------------------------------------------
// Power mean cone. z = (u, w), u ∈ R^d, w < 0.
//   φ = ∏ (uᵢ/αᵢ)^{αᵢ},  ζ = φ + w,  τᵢ = αᵢ/(uᵢ ζ).

struct PowMeanTerms {
  double phi;
  double zeta;
  Vector tau;
};

PowMeanTerms powmean_terms(const PowMeanCone& k, const VectorRef& z) {
  const int d = static_cast<int>(k.alpha.size());
  PowMeanTerms t;
  t.phi = std::exp(log_weighted_product(k.alpha, z.head(d)));
  t.zeta = t.phi + z[d];
  t.tau.resize(d);
  for (int i = 0; i < d; ++i) t.tau[i] = k.alpha[i] / (z[i] * t.zeta);
  return t;
}

bool powmean_dual_interior(const PowMeanCone& k, const VectorRef& z) {
  const int d = static_cast<int>(k.alpha.size());
  if (!positive(z.head(d)) || !(z[d] < 0.0)) return false;
  return std::exp(log_weighted_product(k.alpha, z.head(d))) > -z[d];
}

bool powmean_primal_interior(const PowMeanCone& k, const VectorRef& s) {
  const int d = static_cast<int>(k.alpha.size());
  if (!positive(s.head(d)) || !std::isfinite(s[d])) return false;
  return std::exp(log_plain_product(k.alpha, s.head(d))) > s[d];
}

BarrierInfo powmean_barrier(const PowMeanCone& k, const VectorRef& z) {
  const int d = static_cast<int>(k.alpha.size());
  const auto t = powmean_terms(k, z);
  const double w = z[d];
  BarrierInfo info;
  info.nu = d + 1;
  info.value = -std::log(t.zeta) - std::log(-w);
  info.gradient.resize(d + 1);
  for (int i = 0; i < d; ++i) {
    const double a = k.alpha[i];
    info.value -= (1.0 - a) * std::log(z[i] / a);
    info.gradient[i] = -t.tau[i] * t.phi - (1.0 - a) / z[i];
  }
  info.gradient[d] = -1.0 / t.zeta - 1.0 / w;
  return info;
}

Matrix powmean_hessian(const PowMeanCone& k, const VectorRef& z) {
  const int d = static_cast<int>(k.alpha.size());
  const auto t = powmean_terms(k, z);
  const double w = z[d];
  Matrix h(d + 1, d + 1);
  h.topLeftCorner(d, d) = (-t.phi * w) * t.tau * t.tau.transpose();
  for (int i = 0; i < d; ++i) {
    h(i, i) += t.tau[i] * t.phi / z[i] + (1.0 - k.alpha[i]) / (z[i] * z[i]);
  }
  h.col(d).head(d) = (t.phi / t.zeta) * t.tau;
  h.row(d).head(d) = h.col(d).head(d).transpose();
  h(d, d) = 1.0 / (t.zeta * t.zeta) + 1.0 / (w * w);
  return h;
}

AugmentedHessian powmean_augmented(const PowMeanCone& k, const VectorRef& z) {
  const int d = static_cast<int>(k.alpha.size());
  const auto t = powmean_terms(k, z);
  const double w = z[d];
  AugmentedHessian aug;
  aug.kind = ConeKind::PowMean;
  aug.dim = d + 1;
  aug.d_entries.reserve(d + 1);
  for (int i = 0; i < d; ++i) {
    aug.d_entries.push_back(
        {i, i, t.tau[i] * t.phi / z[i] + (1.0 - k.alpha[i]) / (z[i] * z[i])});
  }
  aug.d_entries.push_back({d, d, 1.0 + 1.0 / (w * w)});

  // p₀ = φ, p₁ = 1, q₀ = √(ζφ), r₁ = ζ.
  ExpansionColumn q{-1, 0, std::sqrt(t.zeta * t.phi) * t.tau};
  ExpansionColumn r{-1, d, Vector::Constant(1, 1.0)};
  ExpansionColumn p{+1, 0, Vector(d + 1)};
  p.values.head(d) = t.phi * t.tau;
  p.values[d] = 1.0 / t.zeta;
  aug.columns = {std::move(q), std::move(r), std::move(p)};
  return aug;
}

// ---------------------------------------------------------------------------
// Relative entropy cone. z = (u, v, w), u > 0, v ∈ R₊₊^d, w ∈ R^d.
//   γᵢ = wᵢ − u ln(u/vᵢ) + u,  τᵢ = ln(u/vᵢ).

bool relentropy_dual_interior(const RelEntropyCone& k, const VectorRef& z) {
  const int d = k.d;
  const double u = z[0];
  if (!(u > 0.0) || !positive(z.segment(1, d))) return false;
  for (int i = 0; i < d; ++i) {
    if (!(z[1 + d + i] > u * (std::log(u / z[1 + i]) - 1.0))) return false;
  }
  return true;
}

bool relentropy_primal_interior(const RelEntropyCone& k, const VectorRef& s) {
  const int d = k.d;
  const auto v = s.segment(1, d);
  const auto w = s.segment(1 + d, d);
  if (!positive(v) || !positive(w) || !std::isfinite(s[0])) return false;
  double rhs = 0.0;
  for (int i = 0; i < d; ++i) rhs += w[i] * std::log(w[i] / v[i]);
  return s[0] > rhs;
}

void relentropy_terms(const RelEntropyCone& k, const VectorRef& z, Vector& gamma,
                      Vector& tau) {
  const int d = k.d;
  const double u = z[0];
  gamma.resize(d);
  tau.resize(d);
  for (int i = 0; i < d; ++i) {
    tau[i] = std::log(u / z[1 + i]);
    gamma[i] = z[1 + d + i] - u * tau[i] + u;
  }
}

BarrierInfo relentropy_barrier(const RelEntropyCone& k, const VectorRef& z) {
  const int d = k.d;
  const double u = z[0];
  Vector gamma, tau;
  relentropy_terms(k, z, gamma, tau);
  BarrierInfo info;
  info.nu = 3.0 * d;
  info.value = -d * std::log(u);
  info.gradient.resize(2 * d + 1);
  double gu = -d / u;
  for (int i = 0; i < d; ++i) {
    const double v = z[1 + i];
    info.value -= std::log(gamma[i]) + std::log(v);
    gu += tau[i] / gamma[i];
    info.gradient[1 + i] = -u / (gamma[i] * v) - 1.0 / v;
    info.gradient[1 + d + i] = -1.0 / gamma[i];
  }
  info.gradient[0] = gu;
  return info;
}

/// Upper triangle of H*(z) in the fixed order (0,0), then per i:
/// (0,vᵢ), (0,wᵢ), (vᵢ,vᵢ), (vᵢ,wᵢ), (wᵢ,wᵢ).
std::vector<SymEntry> relentropy_entries(const RelEntropyCone& k,
                                         const VectorRef& z) {
  const int d = k.d;
  const double u = z[0];
  Vector gamma, tau;
  relentropy_terms(k, z, gamma, tau);
  std::vector<SymEntry> e;
  e.reserve(5 * d + 1);
  double huu = d / (u * u);
  for (int i = 0; i < d; ++i) {
    huu += 1.0 / (u * gamma[i]) + (tau[i] / gamma[i]) * (tau[i] / gamma[i]);
  }
  e.push_back({0, 0, huu});
  for (int i = 0; i < d; ++i) {
    const int vi = 1 + i;
    const int wi = 1 + d + i;
    const double v = z[vi];
    const double g = gamma[i];
    const double g2 = g * g;
    e.push_back({0, vi, -1.0 / (g * v) - u * tau[i] / (g2 * v)});
    e.push_back({0, wi, -tau[i] / g2});
    e.push_back({vi, vi, u * (g + u) / (g2 * v * v) + 1.0 / (v * v)});
    e.push_back({vi, wi, u / (g2 * v)});
    e.push_back({wi, wi, 1.0 / g2});
  }
  return e;
}

Matrix entries_to_dense(int n, const std::vector<SymEntry>& entries) {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& e : entries) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

// ---------------------------------------------------------------------------

double step_ratio_test(const VectorRef& v, const VectorRef& dv) {
  double alpha = kInfStep;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

}  // namespace

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Zero:
      return "zero";
    case ConeKind::NonNeg:
      return "nonneg";
    case ConeKind::GenPow:
      return "genpow";
    case ConeKind::PowMean:
      return "powmean";
    case ConeKind::RelEntropy:
      return "relentropy";
  }
  return "unknown";
}

ConeKind ConeSpec::kind() const { return static_cast<ConeKind>(cone_.index()); }

int ConeSpec::dim() const {
  return std::visit(
      Overloaded{
          [](const ZeroCone& k) { return k.n; },
          [](const NonNegCone& k) { return k.n; },
          [](const GenPowCone& k) { return static_cast<int>(k.alpha.size()) + k.d2; },
          [](const PowMeanCone& k) { return static_cast<int>(k.alpha.size()) + 1; },
          [](const RelEntropyCone& k) { return 2 * k.d + 1; },
      },
      cone_);
}

int ConeSpec::expansion_columns() const {
  const auto k = kind();
  return (k == ConeKind::GenPow || k == ConeKind::PowMean) ? 3 : 0;
}

bool ConeSpec::is_nonsymmetric() const {
  const auto k = kind();
  return k == ConeKind::GenPow || k == ConeKind::PowMean || k == ConeKind::RelEntropy;
}

bool operator==(const ConeSpec& a, const ConeSpec& b) {
  if (a.kind() != b.kind()) return false;
  return std::visit(
      Overloaded{
          [&](const ZeroCone& k) { return k.n == b.as<ZeroCone>().n; },
          [&](const NonNegCone& k) { return k.n == b.as<NonNegCone>().n; },
          [&](const GenPowCone& k) {
            const auto& o = b.as<GenPowCone>();
            return k.alpha == o.alpha && k.d2 == o.d2;
          },
          [&](const PowMeanCone& k) { return k.alpha == b.as<PowMeanCone>().alpha; },
          [&](const RelEntropyCone& k) { return k.d == b.as<RelEntropyCone>().d; },
      },
      a.variant());
}

std::vector<std::string> validate_cone(const ConeSpec& cone) {
  std::vector<std::string> errors;
  auto check_alpha = [&](const std::vector<double>& alpha, const char* name) {
    if (alpha.empty()) {
      errors.push_back(fmt::format("{}: alpha must be non-empty", name));
      return;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (!std::isfinite(alpha[i]) || alpha[i] < kAlphaMin) {
        errors.push_back(fmt::format("{}: alpha[{}] = {} is below {}", name, i,
                                     alpha[i], kAlphaMin));
      }
      sum += alpha[i];
    }
    if (std::abs(sum - 1.0) > kAlphaSumTol) {
      errors.push_back(fmt::format("{}: alpha sum {} {} tolerance", name, sum,
                                   sum > 1.0 ? "exceeds" : "falls short of"));
    }
  };
  std::visit(Overloaded{
                 [&](const ZeroCone& k) {
                   if (k.n < 0) errors.push_back("zero: n must be >= 0");
                 },
                 [&](const NonNegCone& k) {
                   if (k.n < 0) errors.push_back("nonneg: n must be >= 0");
                 },
                 [&](const GenPowCone& k) {
                   check_alpha(k.alpha, "genpow");
                   if (k.d2 < 1) errors.push_back("genpow: d2 must be >= 1");
                 },
                 [&](const PowMeanCone& k) { check_alpha(k.alpha, "powmean"); },
                 [&](const RelEntropyCone& k) {
                   if (k.d < 1) errors.push_back("relentropy: d must be >= 1");
                 },
             },
             cone.variant());
  return errors;
}

Vector ExpansionColumn::dense(int dim) const {
  Vector v = Vector::Zero(dim);
  v.segment(first, values.size()) = values;
  return v;
}

Matrix AugmentedHessian::d_dense() const { return entries_to_dense(dim, d_entries); }

Matrix AugmentedHessian::dense_raw() const {
  Matrix m = d_dense();
  for (const auto& c : columns) {
    const Vector v = c.dense(dim);
    m.noalias() += c.sign * (v * v.transpose());
  }
  return m;
}

Matrix AugmentedHessian::schur_block() const {
  Matrix m = d_dense();
  for (const auto& c : columns) {
    if (c.sign < 0) {
      const Vector v = c.dense(dim);
      m.noalias() -= v * v.transpose();
    }
  }
  return m;
}

Vector AugmentedHessian::apply(const VectorRef& v) const {
  Vector out = Vector::Zero(dim);
  for (const auto& e : d_entries) {
    out[e.row] += e.value * v[e.col];
    if (e.row != e.col) out[e.col] += e.value * v[e.row];
  }
  for (const auto& c : columns) {
    const int len = static_cast<int>(c.values.size());
    const double w = c.values.dot(v.segment(c.first, len));
    out.segment(c.first, len) += (c.sign * w) * c.values;
  }
  return mu * out;
}

double degree(const ConeSpec& cone) {
  return std::visit(
      Overloaded{
          [](const ZeroCone&) { return 0.0; },
          [](const NonNegCone& k) { return static_cast<double>(k.n); },
          [](const GenPowCone& k) { return static_cast<double>(k.alpha.size() + 1); },
          [](const PowMeanCone& k) { return static_cast<double>(k.alpha.size() + 1); },
          [](const RelEntropyCone& k) { return 3.0 * k.d; },
      },
      cone.variant());
}

bool in_dual_interior(const ConeSpec& cone, const VectorRef& z) {
  if (z.size() != cone.dim() || !all_finite(z)) return false;
  return std::visit(
      Overloaded{
          [](const ZeroCone&) { return true; },
          [&](const NonNegCone&) { return positive(z); },
          [&](const GenPowCone& k) { return genpow_dual_interior(k, z); },
          [&](const PowMeanCone& k) { return powmean_dual_interior(k, z); },
          [&](const RelEntropyCone& k) { return relentropy_dual_interior(k, z); },
      },
      cone.variant());
}

bool in_primal_interior(const ConeSpec& cone, const VectorRef& s) {
  if (s.size() != cone.dim() || !all_finite(s)) return false;
  return std::visit(
      Overloaded{
          // {0} is its own relative interior.
          [&](const ZeroCone&) { return (s.array() == 0.0).all(); },
          [&](const NonNegCone&) { return positive(s); },
          [&](const GenPowCone& k) { return genpow_primal_interior(k, s); },
          [&](const PowMeanCone& k) { return powmean_primal_interior(k, s); },
          [&](const RelEntropyCone& k) { return relentropy_primal_interior(k, s); },
      },
      cone.variant());
}

BarrierInfo dual_barrier(const ConeSpec& cone, const VectorRef& z) {
  check_length(cone, z);
  if (!in_dual_interior(cone, z)) {
    throw DomainError(fmt::format("point is not in the interior of the dual {} cone",
                                  to_string(cone.kind())));
  }
  return std::visit(
      Overloaded{
          [&](const ZeroCone&) {
            return BarrierInfo{0.0, 0.0, Vector::Zero(z.size())};
          },
          [&](const NonNegCone& k) {
            return BarrierInfo{static_cast<double>(k.n), -z.array().log().sum(),
                               (-z.array().inverse()).matrix()};
          },
          [&](const GenPowCone& k) { return genpow_barrier(k, z); },
          [&](const PowMeanCone& k) { return powmean_barrier(k, z); },
          [&](const RelEntropyCone& k) { return relentropy_barrier(k, z); },
      },
      cone.variant());
}

Matrix dense_dual_hessian(const ConeSpec& cone, const VectorRef& z) {
  check_length(cone, z);
  if (!in_dual_interior(cone, z)) {
    throw DomainError(fmt::format("point is not in the interior of the dual {} cone",
                                  to_string(cone.kind())));
  }
  return std::visit(
      Overloaded{
          [&](const ZeroCone&) { return Matrix(Matrix::Zero(z.size(), z.size())); },
          [&](const NonNegCone&) {
            return Matrix(z.array().square().inverse().matrix().asDiagonal());
          },
          [&](const GenPowCone& k) { return genpow_hessian(k, z); },
          [&](const PowMeanCone& k) { return powmean_hessian(k, z); },
          [&](const RelEntropyCone& k) {
            return entries_to_dense(z.size(), relentropy_entries(k, z));
          },
      },
      cone.variant());
}

AugmentedHessian augmented_hessian(const ConeSpec& cone, const VectorRef& z,
                                   double mu) {
  constexpr double kSchurSlack = 1e-12;
  check_length(cone, z);
  if (!(mu > 0.0)) throw DomainError("augmented_hessian requires mu > 0");
  if (!in_dual_interior(cone, z)) {
    throw DomainError(fmt::format("point is not in the interior of the dual {} cone",
                                  to_string(cone.kind())));
  }
  AugmentedHessian aug = std::visit(
      Overloaded{
          [&](const ZeroCone& k) {
            AugmentedHessian a;
            a.kind = ConeKind::Zero;
            a.dim = k.n;
            return a;
          },
          [&](const NonNegCone& k) {
            AugmentedHessian a;
            a.kind = ConeKind::NonNeg;
            a.dim = k.n;
            a.d_entries.reserve(k.n);
            for (int i = 0; i < k.n; ++i) a.d_entries.push_back({i, i, 1.0 / (z[i] * z[i])});
            return a;
          },
          [&](const GenPowCone& k) { return genpow_augmented(k, z); },
          [&](const PowMeanCone& k) { return powmean_augmented(k, z); },
          [&](const RelEntropyCone& k) {
            AugmentedHessian a;
            a.kind = ConeKind::RelEntropy;
            a.dim = 2 * k.d + 1;
            a.d_entries = relentropy_entries(k, z);
            return a;
          },
      },
      cone.variant());
  aug.mu = mu;

  // D is diagonal and the V columns have disjoint supports for the power
  // cones, so D − VVᵀ ≻ 0 reduces to 1 − vᵀD⁻¹v > 0 per column. A single
  // exponent α = (1) makes the q column exactly critical (value 0), so only
  // a clearly negative value is rejected.
  if (aug.kind == ConeKind::GenPow || aug.kind == ConeKind::PowMean) {
    for (const auto& c : aug.columns) {
      if (c.sign > 0) continue;
      double quad = 0.0;
      for (Eigen::Index i = 0; i < c.values.size(); ++i) {
        quad += c.values[i] * c.values[i] / aug.d_entries[c.first + i].value;
      }
      if (!(1.0 - quad > -kSchurSlack)) {
        throw DecompositionError(fmt::format(
            "{} block: 1 - v'D^-1 v = {} is not positive", to_string(aug.kind),
            1.0 - quad));
      }
    }
  }
  return aug;
}

InitPoint unit_init(const ConeSpec& cone) {
  const int n = cone.dim();
  InitPoint p;
  switch (cone.kind()) {
    case ConeKind::Zero:
      p.s = Vector::Zero(n);
      p.z = Vector::Zero(n);
      return p;
    case ConeKind::NonNeg:
      p.s = Vector::Ones(n);
      p.z = Vector::Ones(n);
      return p;
    case ConeKind::GenPow: {
      const auto& k = cone.as<GenPowCone>();
      p.z = Vector::Zero(n);
      for (std::size_t i = 0; i < k.alpha.size(); ++i) p.z[i] = std::sqrt(1.0 + k.alpha[i]);
      p.s = p.z;
      return p;
    }
    case ConeKind::PowMean: {
      p.z = Vector::Ones(n);
      p.z[n - 1] = -0.5;
      p.s = -dual_barrier(cone, p.z).gradient;
      return p;
    }
    case ConeKind::RelEntropy: {
      const int d = cone.as<RelEntropyCone>().d;
      p.z = Vector::Zero(n);
      p.z.head(d + 1).setOnes();
      p.s = -dual_barrier(cone, p.z).gradient;
      return p;
    }
  }
  return p;
}

double step_to_boundary(const ConeSpec& cone, const VectorRef& v,
                        const VectorRef& dv, Side side) {
  check_length(cone, v);
  check_length(cone, dv);
  auto interior = [&](const VectorRef& x) {
    return side == Side::Primal ? in_primal_interior(cone, x) : in_dual_interior(cone, x);
  };
  if (!interior(v)) {
    throw DomainError(fmt::format("step_to_boundary: start point is not interior to the {} {} cone",
                                  side == Side::Primal ? "primal" : "dual",
                                  to_string(cone.kind())));
  }
  switch (cone.kind()) {
    case ConeKind::Zero:
      return kInfStep;
    case ConeKind::NonNeg:
      return step_ratio_test(v, dv);
    default:
      break;
  }
  constexpr double kShrink = 0.9;
  constexpr double kFloor = 1e-7;
  Vector trial(v.size());
  for (double alpha = 1.0; alpha >= kFloor; alpha *= kShrink) {
    trial = v + alpha * dv;
    if (interior(trial)) return alpha == 1.0 ? kInfStep : alpha;
  }
  return 0.0;
}

}  // namespace conic
