#include "conic/problem.hpp"

#include <cmath>
#include <cstring>

#include <fmt/format.h>

namespace conic {

namespace {

bool all_finite(const SparseMatrix& m) {
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      if (!std::isfinite(it.value())) return false;
    }
  }
  return true;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

bool identical(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!bit_equal(a[i], b[i])) return false;
  }
  return true;
}

bool identical(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) {
    return false;
  }
  SparseMatrix ca = a;
  SparseMatrix cb = b;
  ca.makeCompressed();
  cb.makeCompressed();
  for (int j = 0; j < ca.outerSize(); ++j) {
    SparseMatrix::InnerIterator ia(ca, j);
    SparseMatrix::InnerIterator ib(cb, j);
    for (; ia && ib; ++ia, ++ib) {
      if (ia.row() != ib.row() || !bit_equal(ia.value(), ib.value())) return false;
    }
    if (ia || ib) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> validate(const ProblemData& pd) {
  std::vector<std::string> errors;
  const int n = pd.n();
  const int p = pd.p();
  const int m = pd.m();
  if (pd.G.rows() != p || pd.G.cols() != n) {
    errors.push_back(fmt::format("G is {}x{}, expected {}x{}", pd.G.rows(), pd.G.cols(), p, n));
  }
  if (pd.A.rows() != m || pd.A.cols() != n) {
    errors.push_back(fmt::format("A is {}x{}, expected {}x{}", pd.A.rows(), pd.A.cols(), m, n));
  }
  if (!pd.c.allFinite()) errors.emplace_back("c has non-finite entries");
  if (!pd.h.allFinite()) errors.emplace_back("h has non-finite entries");
  if (!pd.b.allFinite()) errors.emplace_back("b has non-finite entries");
  if (!all_finite(pd.G)) errors.emplace_back("G has non-finite entries");
  if (!all_finite(pd.A)) errors.emplace_back("A has non-finite entries");
  if (m > 0 && pd.cones.empty()) errors.emplace_back("cone list is empty but m > 0");
  int rows = 0;
  for (std::size_t i = 0; i < pd.cones.size(); ++i) {
    for (const auto& e : validate_cone(pd.cones[i])) {
      errors.push_back(fmt::format("cone {}: {}", i, e));
    }
    rows += pd.cones[i].dim();
  }
  if (rows != m) {
    errors.push_back(fmt::format("cone dimensions sum to {}, A has {} rows", rows, m));
  }
  return errors;
}

bool identical(const ProblemData& a, const ProblemData& b) {
  return identical(a.c, b.c) && identical(a.h, b.h) && identical(a.b, b.b) &&
         identical(a.G, b.G) && identical(a.A, b.A) && a.cones == b.cones;
}

}  // namespace conic
