#pragma once

#include <vector>

#include "conic/cone.hpp"

namespace conic {

/// Symmetric matrix stored as its upper triangle in compressed columns.
/// Row indices are strictly increasing within a column.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> col_ptr;
  std::vector<int> row_idx;
  std::vector<double> values;

  /// Builds from upper-triangle triplets (row ≤ col). Duplicates are summed.
  /// Every diagonal entry is stored, explicitly zero if absent.
  static SparseSymMatrix from_triplets(int n, const std::vector<SymEntry>& entries);

  int nnz() const { return static_cast<int>(row_idx.size()); }
  /// Position of (row, col) in values, or -1. Either triangle is accepted.
  int find(int row, int col) const;
  Vector multiply(const VectorRef& x) const;
  Matrix to_dense() const;
  bool same_pattern(const SparseSymMatrix& other) const;
};

struct Inertia {
  int n_pos = 0;
  int n_neg = 0;
  int n_zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Fill-reducing ordering and elimination tree for one sparsity pattern.
/// Immutable once built; shared by every numeric factorization of matrices
/// with that pattern.
struct SymbolicFactor {
  int n = 0;
  /// perm[k] is the original index placed at position k.
  std::vector<int> perm;
  std::vector<int> iperm;
  std::vector<int> parent;
  /// Column counts of L (strictly lower part).
  std::vector<int> col_counts;
  std::vector<int> l_col_ptr;
  /// Permuted upper triangle pattern, and for each entry of the original
  /// matrix its position in the permuted value array.
  std::vector<int> c_col_ptr;
  std::vector<int> c_row_idx;
  std::vector<int> value_map;
  /// Pattern signature of the analysed matrix.
  std::vector<int> src_col_ptr;
  std::vector<int> src_row_idx;

  int nnz_l() const { return l_col_ptr.empty() ? 0 : l_col_ptr.back(); }
};

enum class OrderingMethod { Amd, Natural };

SymbolicFactor symbolic_factor(const SparseSymMatrix& k,
                               OrderingMethod ordering = OrderingMethod::Amd);

inline constexpr double kStaticReg = 1e-7;
inline constexpr double kDynamicReg = 1e-13;

struct LdlFactorization {
  std::vector<int> perm;
  /// Strictly lower part of L in compressed columns (permuted indices).
  std::vector<int> l_col_ptr;
  std::vector<int> l_row_idx;
  std::vector<double> l_values;
  Vector d;
  Inertia inertia;
  /// Expected sign per original row.
  std::vector<int> reg_signs;
  double static_reg = kStaticReg;
  /// Number of pivots replaced by the dynamic regularization.
  int dynamic_bumps = 0;

  int nnz_l() const { return static_cast<int>(l_row_idx.size()); }
  /// Solves (K + diag(δ·signs)) x = b with the factors.
  Vector apply_inverse(const VectorRef& b) const;
};

/// P (K + diag(δ·reg_signs)) Pᵀ = L D Lᵀ. A pivot whose value is not at
/// least 1e-13 in its expected sign is replaced by sign·1e-13. Throws
/// FactorError when K's pattern differs from the analysed one.
LdlFactorization numeric_factor(const SparseSymMatrix& k, const SymbolicFactor& sym,
                                const std::vector<int>& reg_signs,
                                double static_reg = kStaticReg);

struct RefineOptions {
  double tol = 1e-10;
  int max_rounds = 10;
};

struct SolveOutput {
  Vector x;
  /// ‖K x − rhs‖∞ against the unregularized K.
  double residual = 0.0;
  int rounds = 0;
  bool converged = false;
  /// Residual history, initial solve first.
  std::vector<double> history;
};

/// Solve with iterative refinement against the unregularized K. Never throws
/// on lack of progress; returns the best iterate seen.
SolveOutput solve_refined(const LdlFactorization& f, const SparseSymMatrix& k,
                          const VectorRef& rhs, const RefineOptions& opts = {});

/// As solve_refined, but throws RefinementStall when the residual stops
/// decreasing before reaching tolerance.
SolveOutput solve(const LdlFactorization& f, const SparseSymMatrix& k, const VectorRef& rhs,
                  const RefineOptions& opts = {});

}  // namespace conic
