#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace conic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ConeKind { Zero, NonNeg, GenPow, PowMean, RelEntropy };

const char* to_string(ConeKind kind);

struct ZeroCone {
  int n = 0;
};

struct NonNegCone {
  int n = 0;
};

/// {(u, w) ∈ R₊^{d1} × R^{d2} : ∏ uᵢ^{αᵢ} ≥ ‖w‖}, d1 = alpha.size().
struct GenPowCone {
  std::vector<double> alpha;
  int d2 = 0;
};

/// {(u, w) ∈ R₊^d × R : ∏ uᵢ^{αᵢ} ≥ w}, d = alpha.size().
struct PowMeanCone {
  std::vector<double> alpha;
};

/// cl{(u, v, w) ∈ R × R₊₊^d × R₊₊^d : u ≥ Σ wᵢ ln(wᵢ/vᵢ)}.
struct RelEntropyCone {
  int d = 0;
};

/// One block of a product cone. Coordinates are laid out as (u, w) for the
/// power cones and (u, v, w) for the relative entropy cone.
class ConeSpec {
 public:
  using Variant =
      std::variant<ZeroCone, NonNegCone, GenPowCone, PowMeanCone, RelEntropyCone>;

  ConeSpec() = default;
  explicit ConeSpec(Variant v) : cone_(std::move(v)) {}

  static ConeSpec zero(int n) { return ConeSpec(ZeroCone{n}); }
  static ConeSpec nonneg(int n) { return ConeSpec(NonNegCone{n}); }
  static ConeSpec genpow(std::vector<double> alpha, int d2) {
    return ConeSpec(GenPowCone{std::move(alpha), d2});
  }
  static ConeSpec powmean(std::vector<double> alpha) {
    return ConeSpec(PowMeanCone{std::move(alpha)});
  }
  static ConeSpec relentropy(int d) { return ConeSpec(RelEntropyCone{d}); }

  ConeKind kind() const;
  int dim() const;
  /// Number of expansion columns the cone adds to the KKT system.
  int expansion_columns() const;
  bool is_nonsymmetric() const;

  const Variant& variant() const { return cone_; }
  template <typename T>
  const T& as() const {
    return std::get<T>(cone_);
  }

  friend bool operator==(const ConeSpec& a, const ConeSpec& b);

 private:
  Variant cone_;
};

/// Tolerance on |Σα − 1| and lower bound on each αᵢ.
inline constexpr double kAlphaSumTol = 1e-10;
inline constexpr double kAlphaMin = 1e-10;

/// Returns every violated invariant of the cone parameters; empty when valid.
std::vector<std::string> validate_cone(const ConeSpec& cone);

struct BarrierInfo {
  double nu = 0.0;
  double value = 0.0;
  Vector gradient;
};

/// Upper-triangle entry in block-local coordinates.
struct SymEntry {
  int row;
  int col;
  double value;
};

/// One low-rank column of an augmented-sparse Hessian, stored on its
/// structural support rows [first, first + values.size()).
struct ExpansionColumn {
  /// +1 for a U column (added), -1 for a V column (subtracted).
  int sign = 1;
  int first = 0;
  Vector values;

  Vector dense(int dim) const;
};

/// H = μ (D + Σ uuᵀ − Σ vvᵀ) for one cone block. D and the columns are stored
/// unscaled; μ scales D and √μ scales the columns when assembled.
struct AugmentedHessian {
  ConeKind kind = ConeKind::Zero;
  int dim = 0;
  double mu = 1.0;
  /// Upper triangle of D in a pattern that depends only on the cone.
  std::vector<SymEntry> d_entries;
  /// Columns in KKT order: q, r (V columns) then p (U column).
  std::vector<ExpansionColumn> columns;

  Matrix d_dense() const;
  /// D + Σ uuᵀ − Σ vvᵀ.
  Matrix dense_raw() const;
  /// μ (D + Σ uuᵀ − Σ vvᵀ).
  Matrix dense() const { return mu * dense_raw(); }
  /// D − Σ vvᵀ.
  Matrix schur_block() const;
  /// μ (D + Σ uuᵀ − Σ vvᵀ) v without forming the dense matrix.
  Vector apply(const VectorRef& v) const;
};

/// Barrier degree ν; zero cones contribute 0.
double degree(const ConeSpec& cone);

bool in_dual_interior(const ConeSpec& cone, const VectorRef& z);
bool in_primal_interior(const ConeSpec& cone, const VectorRef& s);

/// Value and gradient of the dual barrier f*. Throws DomainError when z is
/// not in the dual interior.
BarrierInfo dual_barrier(const ConeSpec& cone, const VectorRef& z);

/// Dense Hessian of f* at z.
Matrix dense_dual_hessian(const ConeSpec& cone, const VectorRef& z);

/// μ H*(z) in augmented-sparse form. Throws DomainError for non-interior z
/// and DecompositionError when D − VVᵀ is not positive definite.
AugmentedHessian augmented_hessian(const ConeSpec& cone, const VectorRef& z,
                                   double mu);

struct InitPoint {
  Vector s;
  Vector z;
};

/// Initial point with s = −g*(z) and ⟨s, z⟩ = ν.
InitPoint unit_init(const ConeSpec& cone);

enum class Side { Primal, Dual };

/// Largest step along dv that keeps v + α dv strictly interior. Exact for
/// orthants, backtracked over {1, 0.9, 0.9², ...} for the nonsymmetric
/// cones. Returns +∞ when the step is unbounded (orthant) or α = 1 is
/// interior (nonsymmetric), and 0 when no tested α ≥ 1e-7 is interior.
double step_to_boundary(const ConeSpec& cone, const VectorRef& v,
                        const VectorRef& dv, Side side);

inline constexpr double kInfStep = std::numeric_limits<double>::infinity();

}  // namespace conic
