#pragma once

#include <Eigen/Core>

namespace smotenn {

/// Squared Euclidean distance, summed strictly left to right.
///
/// Every engine calls this exact routine, so neighbor orderings agree to the
/// last bit regardless of the alignment of the rows passed in.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Scalar sum(0);
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const Scalar d = a(j) - b(j);
    sum += d * d;
  }
  return sum;
}

/// parent + u * (neighbor - parent), coordinatewise.
template <typename DerivedA, typename DerivedB>
auto interpolate(const Eigen::MatrixBase<DerivedA>& parent, const Eigen::MatrixBase<DerivedB>& neighbor,
                 typename DerivedA::Scalar u) {
  return (parent + u * (neighbor - parent)).eval();
}

}  // namespace smotenn
