#include "conic/sampling.hpp"

#include <cmath>

namespace conic {

namespace {

double lognormal(std::mt19937_64& rng, double sd = 1.0) {
  return std::exp(std::normal_distribution<double>(0.0, sd)(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector unit_direction(int n, std::mt19937_64& rng) {
  Vector v(n);
  std::normal_distribution<double> g(0.0, 1.0);
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

double weighted_product(const std::vector<double>& alpha, const VectorRef& u, bool over_alpha) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    acc += alpha[i] * std::log(over_alpha ? u[i] / alpha[i] : u[i]);
  }
  return std::exp(acc);
}

}  // namespace

std::vector<double> random_simplex(int n, std::mt19937_64& rng) {
  std::vector<double> a(n);
  double sum = 0.0;
  for (auto& v : a) {
    v = std::max(1e-3, uniform(rng, 0.0, 1.0));
    sum += v;
  }
  for (auto& v : a) v /= sum;
  return a;
}

ConeSpec random_cone(ConeKind kind, int max_dim, std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  switch (kind) {
    case ConeKind::Zero:
      return ConeSpec::zero(pick(1, max_dim));
    case ConeKind::NonNeg:
      return ConeSpec::nonneg(pick(1, max_dim));
    case ConeKind::GenPow: {
      const int d1 = pick(1, max_dim - 1);
      const int d2 = pick(1, max_dim - d1);
      return ConeSpec::genpow(random_simplex(d1, rng), d2);
    }
    case ConeKind::PowMean:
      return ConeSpec::powmean(random_simplex(pick(1, max_dim - 1), rng));
    case ConeKind::RelEntropy:
      return ConeSpec::relentropy(pick(1, (max_dim - 1) / 2));
  }
  return {};
}

Vector random_interior(const ConeSpec& cone, Side side, std::mt19937_64& rng) {
  const int n = cone.dim();
  Vector v(n);
  // Fraction of the way to the boundary.
  const double frac = uniform(rng, 0.02, 0.98);
  switch (cone.kind()) {
    case ConeKind::Zero:
      if (side == Side::Primal) return Vector::Zero(n);
      for (int i = 0; i < n; ++i) v[i] = uniform(rng, -2.0, 2.0);
      return v;
    case ConeKind::NonNeg:
      for (int i = 0; i < n; ++i) v[i] = lognormal(rng);
      return v;
    case ConeKind::GenPow: {
      const auto& k = cone.as<GenPowCone>();
      const int d1 = static_cast<int>(k.alpha.size());
      for (int i = 0; i < d1; ++i) v[i] = lognormal(rng);
      const double bound = weighted_product(k.alpha, v.head(d1), side == Side::Dual);
      v.tail(k.d2) = frac * bound * unit_direction(k.d2, rng);
      return v;
    }
    case ConeKind::PowMean: {
      const auto& k = cone.as<PowMeanCone>();
      const int d = static_cast<int>(k.alpha.size());
      for (int i = 0; i < d; ++i) v[i] = lognormal(rng);
      if (side == Side::Primal) {
        const double bound = weighted_product(k.alpha, v.head(d), false);
        // Both signs of the last coordinate.
        v[d] = bound * uniform(rng, -3.0, 0.98);
      } else {
        v[d] = -frac * weighted_product(k.alpha, v.head(d), true);
      }
      return v;
    }
    case ConeKind::RelEntropy: {
      const int d = cone.as<RelEntropyCone>().d;
      if (side == Side::Primal) {
        double rhs = 0.0;
        for (int i = 0; i < d; ++i) {
          v[1 + i] = lognormal(rng);
          v[1 + d + i] = lognormal(rng);
          rhs += v[1 + d + i] * std::log(v[1 + d + i] / v[1 + i]);
        }
        v[0] = rhs + lognormal(rng);
      } else {
        const double u = lognormal(rng);
        v[0] = u;
        for (int i = 0; i < d; ++i) {
          v[1 + i] = lognormal(rng);
          v[1 + d + i] = u * (std::log(u / v[1 + i]) - 1.0) + lognormal(rng);
        }
      }
      return v;
    }
  }
  return v;
}

}  // namespace conic
