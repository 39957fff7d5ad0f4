#pragma once

// Matrix-free operator adaptor for Eigen's GMRES.

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/IterativeSolvers>

namespace conic::detail {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

class ReducedOperator;

}  // namespace conic::detail

namespace Eigen::internal {
template <>
struct traits<conic::detail::ReducedOperator>
    : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace conic::detail {

class ReducedOperator : public Eigen::EigenBase<ReducedOperator> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic,
    IsRowMajor = false
  };

  ReducedOperator(int n, LinearMap apply) : n_(n), apply_(std::move(apply)) {}

  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return n_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return apply_(v); }

  template <typename Rhs>
  Eigen::Product<ReducedOperator, Rhs, Eigen::AliasFreeProduct> operator*(
      const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<ReducedOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

 private:
  int n_;
  LinearMap apply_;
};

}  // namespace conic::detail

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<conic::detail::ReducedOperator, Rhs, SparseShape, DenseShape,
                            GemvProduct>
    : generic_product_impl_base<
          conic::detail::ReducedOperator, Rhs,
          generic_product_impl<conic::detail::ReducedOperator, Rhs>> {
  using Scalar = typename Product<conic::detail::ReducedOperator, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const conic::detail::ReducedOperator& lhs,
                            const Rhs& rhs, const Scalar& alpha) {
    dst.noalias() += alpha * lhs.apply(rhs);
  }
};
}  // namespace Eigen::internal
