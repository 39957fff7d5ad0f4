#include "conic/kkt.hpp"

#include <cmath>

#include <fmt/format.h>

#include "conic/errors.hpp"

namespace conic {

namespace {

bool dense_block(HessianAssembly mode, const AugmentedHessian& h) {
  return mode == HessianAssembly::Dense &&
         (h.kind == ConeKind::GenPow || h.kind == ConeKind::PowMean ||
          h.kind == ConeKind::RelEntropy);
}

void check_hessians(const ProblemData& pd, const std::vector<AugmentedHessian>& hs) {
  if (hs.size() != pd.cones.size()) {
    throw DimensionMismatch(
        fmt::format("{} Hessians for {} cone blocks", hs.size(), pd.cones.size()));
  }
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (hs[k].dim != pd.cones[k].dim() || hs[k].kind != pd.cones[k].kind()) {
      throw DimensionMismatch(fmt::format("Hessian {} does not match its cone block", k));
    }
  }
}

int ext_count(HessianAssembly mode, const AugmentedHessian& h) {
  return dense_block(mode, h) ? 0 : static_cast<int>(h.columns.size());
}

}  // namespace

Inertia KktSystem::predicted_inertia() const {
  Inertia in;
  for (int s : reg_signs) (s > 0 ? in.n_pos : in.n_neg) += 1;
  return in;
}

KktSystem assemble_kkt(const ProblemData& pd, const std::vector<AugmentedHessian>& hessians,
                       HessianAssembly mode) {
  check_hessians(pd, hessians);
  KktSystem kkt;
  kkt.mode = mode;
  KktLayout& lay = kkt.layout;
  lay.n_x = pd.n();
  lay.n_y = pd.p();
  lay.n_z = pd.m();
  int z_off = 0;
  int e_off = 0;
  for (const auto& h : hessians) {
    lay.z_offsets.push_back(z_off);
    lay.ext_offsets.push_back(e_off);
    z_off += h.dim;
    e_off += ext_count(mode, h);
  }
  lay.n_ext = e_off;
  if (z_off != lay.n_z) {
    throw DimensionMismatch(fmt::format("cone blocks cover {} rows, A has {}", z_off, lay.n_z));
  }
  if (pd.G.cols() != lay.n_x || pd.A.cols() != lay.n_x) {
    throw DimensionMismatch("G and A must have n columns");
  }

  std::vector<SymEntry> t;
  for (int j = 0; j < pd.G.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(pd.G, j); it; ++it) {
      t.push_back({j, lay.y_begin() + static_cast<int>(it.row()), it.value()});
    }
  }
  for (int j = 0; j < pd.A.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(pd.A, j); it; ++it) {
      t.push_back({j, lay.z_begin() + static_cast<int>(it.row()), it.value()});
    }
  }
  // Hessian pattern with zero values; update_kkt writes the numbers.
  for (std::size_t k = 0; k < hessians.size(); ++k) {
    const auto& h = hessians[k];
    const int o = lay.z_begin() + lay.z_offsets[k];
    if (dense_block(mode, h)) {
      for (int j = 0; j < h.dim; ++j) {
        for (int i = 0; i <= j; ++i) t.push_back({o + i, o + j, 0.0});
      }
      continue;
    }
    for (const auto& e : h.d_entries) {
      t.push_back({o + std::min(e.row, e.col), o + std::max(e.row, e.col), 0.0});
    }
    for (std::size_t c = 0; c < h.columns.size(); ++c) {
      const int col = lay.ext_begin() + lay.ext_offsets[k] + static_cast<int>(c);
      const auto& ec = h.columns[c];
      for (int i = 0; i < ec.values.size(); ++i) t.push_back({o + ec.first + i, col, 0.0});
    }
  }
  kkt.matrix = SparseSymMatrix::from_triplets(lay.order(), t);

  kkt.reg_signs.assign(lay.order(), -1);
  for (int i = 0; i < lay.n_x; ++i) kkt.reg_signs[i] = 1;

  kkt.slots.resize(hessians.size());
  for (std::size_t k = 0; k < hessians.size(); ++k) {
    const auto& h = hessians[k];
    BlockSlots& s = kkt.slots[k];
    const int o = lay.z_begin() + lay.z_offsets[k];
    if (dense_block(mode, h)) {
      for (int j = 0; j < h.dim; ++j) {
        for (int i = 0; i <= j; ++i) s.dense_slots.push_back(kkt.matrix.find(o + i, o + j));
      }
      continue;
    }
    for (const auto& e : h.d_entries) {
      s.d_slots.push_back(kkt.matrix.find(o + e.row, o + e.col));
      s.d_pattern.emplace_back(e.row, e.col);
    }
    for (std::size_t c = 0; c < h.columns.size(); ++c) {
      const int col = lay.ext_begin() + lay.ext_offsets[k] + static_cast<int>(c);
      const auto& ec = h.columns[c];
      std::vector<int> cs;
      for (int i = 0; i < ec.values.size(); ++i) cs.push_back(kkt.matrix.find(o + ec.first + i, col));
      s.column_slots.push_back(std::move(cs));
      s.ext_diag_slots.push_back(kkt.matrix.find(col, col));
      kkt.reg_signs[col] = ec.sign > 0 ? 1 : -1;
    }
  }
  update_kkt(kkt, hessians);
  return kkt;
}

void update_kkt(KktSystem& kkt, const std::vector<AugmentedHessian>& hessians) {
  if (hessians.size() != kkt.slots.size()) {
    throw DimensionMismatch("Hessian count changed since assembly");
  }
  auto& v = kkt.matrix.values;
  for (std::size_t k = 0; k < hessians.size(); ++k) {
    const auto& h = hessians[k];
    const BlockSlots& s = kkt.slots[k];
    if (!s.dense_slots.empty() || (dense_block(kkt.mode, h) && h.dim == 0)) {
      const Matrix hd = h.dense();
      if (hd.rows() * (hd.rows() + 1) / 2 != static_cast<Eigen::Index>(s.dense_slots.size())) {
        throw DimensionMismatch(fmt::format("Hessian {} changed size", k));
      }
      int idx = 0;
      for (int j = 0; j < h.dim; ++j) {
        for (int i = 0; i <= j; ++i) v[s.dense_slots[idx++]] = -hd(i, j);
      }
      continue;
    }
    if (h.d_entries.size() != s.d_slots.size() || h.columns.size() != s.column_slots.size()) {
      throw DimensionMismatch(fmt::format("Hessian {} changed pattern", k));
    }
    // Diagonal slots may be shared with entries written below; clear first.
    for (int slot : s.d_slots) v[slot] = 0.0;
    for (std::size_t e = 0; e < h.d_entries.size(); ++e) {
      const auto& de = h.d_entries[e];
      if (s.d_pattern[e] != std::make_pair(de.row, de.col)) {
        throw DimensionMismatch(fmt::format("Hessian {} changed pattern", k));
      }
      v[s.d_slots[e]] += -h.mu * de.value;
    }
    const double root_mu = std::sqrt(h.mu);
    for (std::size_t c = 0; c < h.columns.size(); ++c) {
      const auto& ec = h.columns[c];
      if (static_cast<std::size_t>(ec.values.size()) != s.column_slots[c].size()) {
        throw DimensionMismatch(fmt::format("Hessian {} column {} changed support", k, c));
      }
      for (int i = 0; i < ec.values.size(); ++i) v[s.column_slots[c][i]] = -root_mu * ec.values[i];
      v[s.ext_diag_slots[c]] = ec.sign > 0 ? 1.0 : -1.0;
    }
  }
}

Vector kkt_rhs(const KktLayout& layout, const VectorRef& rx, const VectorRef& ry,
               const VectorRef& rz) {
  if (rx.size() != layout.n_x || ry.size() != layout.n_y || rz.size() != layout.n_z) {
    throw DimensionMismatch("kkt_rhs: block lengths differ from the layout");
  }
  Vector r = Vector::Zero(layout.order());
  r.head(layout.n_x) = rx;
  r.segment(layout.y_begin(), layout.n_y) = ry;
  r.segment(layout.z_begin(), layout.n_z) = rz;
  return r;
}

}  // namespace conic
