#include "conic/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "conic/errors.hpp"

namespace conic {

SparseSymMatrix SparseSymMatrix::from_triplets(int n, const std::vector<SymEntry>& entries) {
  std::vector<std::tuple<int, int, double>> t;
  t.reserve(entries.size() + n);
  for (const auto& e : entries) {
    if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
      throw DimensionMismatch(fmt::format("entry ({}, {}) outside order {}", e.row, e.col, n));
    }
    if (e.row > e.col) {
      throw DimensionMismatch(fmt::format("entry ({}, {}) below the diagonal", e.row, e.col));
    }
    t.emplace_back(e.col, e.row, e.value);
  }
  for (int j = 0; j < n; ++j) t.emplace_back(j, j, 0.0);
  std::stable_sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });

  SparseSymMatrix m;
  m.n = n;
  m.col_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto [col, row, v] = t[i];
    if (!m.row_idx.empty() && i > 0 && std::get<0>(t[i - 1]) == col &&
        std::get<1>(t[i - 1]) == row) {
      m.values.back() += v;
      continue;
    }
    m.row_idx.push_back(row);
    m.values.push_back(v);
    ++m.col_ptr[col + 1];
  }
  for (int j = 0; j < n; ++j) m.col_ptr[j + 1] += m.col_ptr[j];
  return m;
}

int SparseSymMatrix::find(int row, int col) const {
  if (row > col) std::swap(row, col);
  const auto first = row_idx.begin() + col_ptr[col];
  const auto last = row_idx.begin() + col_ptr[col + 1];
  const auto it = std::lower_bound(first, last, row);
  if (it == last || *it != row) return -1;
  return static_cast<int>(it - row_idx.begin());
}

Vector SparseSymMatrix::multiply(const VectorRef& x) const {
  if (x.size() != n) throw DimensionMismatch("multiply: vector length differs from order");
  Vector y = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
      const int i = row_idx[p];
      y[i] += values[p] * x[j];
      if (i != j) y[j] += values[p] * x[i];
    }
  }
  return y;
}

Matrix SparseSymMatrix::to_dense() const {
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
      m(row_idx[p], j) = values[p];
      m(j, row_idx[p]) = values[p];
    }
  }
  return m;
}

bool SparseSymMatrix::same_pattern(const SparseSymMatrix& other) const {
  return n == other.n && col_ptr == other.col_ptr && row_idx == other.row_idx;
}

namespace {

std::vector<int> amd_permutation(const SparseSymMatrix& k) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * k.nnz());
  for (int j = 0; j < k.n; ++j) {
    for (int p = k.col_ptr[j]; p < k.col_ptr[j + 1]; ++p) {
      t.emplace_back(k.row_idx[p], j, 1.0);
      if (k.row_idx[p] != j) t.emplace_back(j, k.row_idx[p], 1.0);
    }
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> full(k.n, k.n);
  full.setFromTriplets(t.begin(), t.end());
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p;
  Eigen::AMDOrdering<int> amd;
  amd(full, p);
  return {p.indices().data(), p.indices().data() + p.indices().size()};
}

}  // namespace

SymbolicFactor symbolic_factor(const SparseSymMatrix& k, OrderingMethod ordering) {
  SymbolicFactor s;
  const int n = k.n;
  s.n = n;
  if (ordering == OrderingMethod::Amd && n > 0) {
    s.perm = amd_permutation(k);
  } else {
    s.perm.resize(n);
    std::iota(s.perm.begin(), s.perm.end(), 0);
  }
  s.iperm.assign(n, 0);
  for (int i = 0; i < n; ++i) s.iperm[s.perm[i]] = i;

  // Permuted upper triangle C = P K Pᵀ with a map from K's value slots.
  struct Item {
    int col, row, src;
  };
  std::vector<Item> items;
  items.reserve(k.nnz());
  for (int j = 0; j < n; ++j) {
    for (int p = k.col_ptr[j]; p < k.col_ptr[j + 1]; ++p) {
      const int a = s.iperm[k.row_idx[p]];
      const int b = s.iperm[j];
      items.push_back({std::max(a, b), std::min(a, b), p});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return std::tie(x.col, x.row) < std::tie(y.col, y.row);
  });
  s.c_col_ptr.assign(n + 1, 0);
  s.c_row_idx.resize(items.size());
  s.value_map.assign(items.size(), 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    s.c_row_idx[i] = items[i].row;
    s.value_map[items[i].src] = static_cast<int>(i);
    ++s.c_col_ptr[items[i].col + 1];
  }
  for (int j = 0; j < n; ++j) s.c_col_ptr[j + 1] += s.c_col_ptr[j];

  // Elimination tree and column counts of L.
  s.parent.assign(n, -1);
  s.col_counts.assign(n, 0);
  std::vector<int> flag(n, -1);
  for (int col = 0; col < n; ++col) {
    flag[col] = col;
    for (int p = s.c_col_ptr[col]; p < s.c_col_ptr[col + 1]; ++p) {
      for (int i = s.c_row_idx[p]; flag[i] != col; i = s.parent[i]) {
        if (s.parent[i] == -1) s.parent[i] = col;
        ++s.col_counts[i];
        flag[i] = col;
      }
    }
  }
  s.l_col_ptr.assign(n + 1, 0);
  for (int j = 0; j < n; ++j) s.l_col_ptr[j + 1] = s.l_col_ptr[j] + s.col_counts[j];
  s.src_col_ptr = k.col_ptr;
  s.src_row_idx = k.row_idx;
  return s;
}

LdlFactorization numeric_factor(const SparseSymMatrix& k, const SymbolicFactor& sym,
                                const std::vector<int>& reg_signs, double static_reg) {
  const int n = sym.n;
  if (k.n != n || k.col_ptr != sym.src_col_ptr || k.row_idx != sym.src_row_idx) {
    throw FactorError("matrix pattern differs from the symbolic analysis");
  }
  if (static_cast<int>(reg_signs.size()) != n) {
    throw FactorError(fmt::format("reg_signs has {} entries, order is {}", reg_signs.size(), n));
  }

  std::vector<double> cx(sym.c_row_idx.size(), 0.0);
  for (std::size_t p = 0; p < k.values.size(); ++p) cx[sym.value_map[p]] = k.values[p];
  std::vector<int> sign(n);
  for (int j = 0; j < n; ++j) {
    sign[j] = reg_signs[sym.perm[j]] >= 0 ? 1 : -1;
    // The diagonal is stored last in each permuted column.
    cx[sym.c_col_ptr[j + 1] - 1] += sign[j] * static_reg;
  }

  LdlFactorization f;
  f.perm = sym.perm;
  f.reg_signs = reg_signs;
  f.static_reg = static_reg;
  f.l_col_ptr = sym.l_col_ptr;
  f.l_row_idx.assign(sym.nnz_l(), 0);
  f.l_values.assign(sym.nnz_l(), 0.0);
  f.d = Vector::Zero(n);

  std::vector<double> y(n, 0.0);
  std::vector<int> pattern(n), flag(n, -1), lnz(n, 0);
  for (int col = 0; col < n; ++col) {
    int top = n;
    flag[col] = col;
    for (int p = sym.c_col_ptr[col]; p < sym.c_col_ptr[col + 1]; ++p) {
      int i = sym.c_row_idx[p];
      y[i] += cx[p];
      int len = 0;
      for (; flag[i] != col; i = sym.parent[i]) {
        pattern[len++] = i;
        flag[i] = col;
      }
      while (len > 0) pattern[--top] = pattern[--len];
    }
    double dk = y[col];
    y[col] = 0.0;
    for (; top < n; ++top) {
      const int i = pattern[top];
      const double yi = y[i];
      y[i] = 0.0;
      const int end = f.l_col_ptr[i] + lnz[i];
      for (int p = f.l_col_ptr[i]; p < end; ++p) y[f.l_row_idx[p]] -= f.l_values[p] * yi;
      const double lki = yi / f.d[i];
      dk -= lki * yi;
      f.l_row_idx[end] = col;
      f.l_values[end] = lki;
      ++lnz[i];
    }
    if (!(sign[col] * dk >= kDynamicReg)) {
      dk = sign[col] * kDynamicReg;
      ++f.dynamic_bumps;
    }
    f.d[col] = dk;
    if (dk > 0.0) {
      ++f.inertia.n_pos;
    } else if (dk < 0.0) {
      ++f.inertia.n_neg;
    } else {
      ++f.inertia.n_zero;
    }
  }
  return f;
}

Vector LdlFactorization::apply_inverse(const VectorRef& b) const {
  const int n = static_cast<int>(d.size());
  if (b.size() != n) throw DimensionMismatch("solve: rhs length differs from order");
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (int j = 0; j < n; ++j) {
    const double xj = x[j];
    for (int p = l_col_ptr[j]; p < l_col_ptr[j + 1]; ++p) x[l_row_idx[p]] -= l_values[p] * xj;
  }
  x.array() /= d.array();
  for (int j = n - 1; j >= 0; --j) {
    double acc = x[j];
    for (int p = l_col_ptr[j]; p < l_col_ptr[j + 1]; ++p) acc -= l_values[p] * x[l_row_idx[p]];
    x[j] = acc;
  }
  Vector out(n);
  for (int i = 0; i < n; ++i) out[perm[i]] = x[i];
  return out;
}

SolveOutput solve_refined(const LdlFactorization& f, const SparseSymMatrix& k,
                          const VectorRef& rhs, const RefineOptions& opts) {
  if (rhs.size() != k.n) throw DimensionMismatch("solve: rhs length differs from order");
  const double target = opts.tol * std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  SolveOutput out;
  Vector x = f.apply_inverse(rhs);
  Vector r = rhs - k.multiply(x);
  double res = r.lpNorm<Eigen::Infinity>();
  out.history.push_back(res);
  out.x = x;
  out.residual = res;
  while (res > target && out.rounds < opts.max_rounds) {
    x += f.apply_inverse(r);
    r = rhs - k.multiply(x);
    const double next = r.lpNorm<Eigen::Infinity>();
    ++out.rounds;
    out.history.push_back(next);
    if (!(next < res)) break;
    res = next;
    out.x = x;
    out.residual = res;
  }
  out.converged = out.residual <= target;
  return out;
}

SolveOutput solve(const LdlFactorization& f, const SparseSymMatrix& k, const VectorRef& rhs,
                  const RefineOptions& opts) {
  SolveOutput out = solve_refined(f, k, rhs, opts);
  if (!out.converged && out.rounds < opts.max_rounds) {
    throw RefinementStall(
        fmt::format("refinement stalled at residual {:.3e} after {} rounds", out.residual,
                    out.rounds),
        out.residual);
  }
  return out;
}

}  // namespace conic
