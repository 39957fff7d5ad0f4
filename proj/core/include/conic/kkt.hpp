#pragma once

#include <vector>

#include "conic/cone.hpp"
#include "conic/problem.hpp"
#include "conic/sparse.hpp"

namespace conic {

/// Unknowns are ordered [x | y | z | extension]. Each power-cone block adds
/// three extension unknowns in the order q, r, p.
struct KktLayout {
  int n_x = 0;
  int n_y = 0;
  int n_z = 0;
  int n_ext = 0;
  /// Start of each cone block inside z, and of its extension columns inside
  /// the extension segment.
  std::vector<int> z_offsets;
  std::vector<int> ext_offsets;

  int order() const { return n_x + n_y + n_z + n_ext; }
  int y_begin() const { return n_x; }
  int z_begin() const { return n_x + n_y; }
  int ext_begin() const { return n_x + n_y + n_z; }
};

enum class HessianAssembly {
  /// Sparse D block plus extension columns.
  Augmented,
  /// Nonsymmetric blocks written as their full dense Hessian, no extension.
  Dense,
};

/// Value positions of one cone block inside the assembled matrix.
struct BlockSlots {
  std::vector<int> d_slots;
  std::vector<std::pair<int, int>> d_pattern;
  std::vector<std::vector<int>> column_slots;
  std::vector<int> ext_diag_slots;
  /// Dense mode: upper triangle of the block, column by column.
  std::vector<int> dense_slots;
};

struct KktSystem {
  SparseSymMatrix matrix;
  KktLayout layout;
  HessianAssembly mode = HessianAssembly::Augmented;
  /// Expected pivot sign per unknown: + for x and p columns, − otherwise.
  std::vector<int> reg_signs;
  std::vector<BlockSlots> slots;

  /// (n_x + #p columns, n_y + n_z + #q,r columns, 0).
  Inertia predicted_inertia() const;
};

/// K = [[0, Gᵀ, Aᵀ, 0], [G, 0, 0, 0], [A, 0, −μD, −√μ Q], [0, 0, −√μ Qᵀ, E]]
/// with E = diag(−1, −1, +1) per power-cone block. Throws DimensionMismatch
/// when the Hessians do not match the cone list.
KktSystem assemble_kkt(const ProblemData& problem, const std::vector<AugmentedHessian>& hessians,
                       HessianAssembly mode = HessianAssembly::Augmented);

/// Rewrites the Hessian values in place through the slot map.
void update_kkt(KktSystem& kkt, const std::vector<AugmentedHessian>& hessians);

/// Stacks (rx, ry, rz) and zero extension entries.
Vector kkt_rhs(const KktLayout& layout, const VectorRef& rx, const VectorRef& ry,
               const VectorRef& rz);

}  // namespace conic
