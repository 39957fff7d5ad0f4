#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "conic/cone.hpp"

namespace conic {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// min cᵀx  s.t.  Gx = h,  Ax + s = b,  s ∈ K = K₁ × … × K_k.
struct ProblemData {
  Vector c;
  SparseMatrix G;
  Vector h;
  SparseMatrix A;
  Vector b;
  std::vector<ConeSpec> cones;

  int n() const { return static_cast<int>(c.size()); }
  int p() const { return static_cast<int>(h.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

/// Every violated invariant, in a stable order. Empty means valid.
std::vector<std::string> validate(const ProblemData& problem);

/// Structural and bitwise numeric equality, including explicit zeros.
bool identical(const ProblemData& a, const ProblemData& b);

}  // namespace conic
