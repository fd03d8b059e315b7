#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace pfw {

namespace mp = boost::multiprecision;

// Expression templates are disabled: they do not survive being stored inside
// Eigen expressions.
using Integer = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;
using Quad = mp::number<
    mp::cpp_bin_float<113, mp::digit_base_2, void, std::int16_t, -16382, 16383>,
    mp::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
using RatMatrix = Matrix<Rational>;

// Lattice points and index arithmetic in machine integers.
using Point = Vector<std::int64_t>;
using Mat64 = Matrix<std::int64_t>;

struct LexLess {
  bool operator()(const Point& a, const Point& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  }
};

/// Exact product for multiprecision scalars. Eigen's product kernels trip
/// over Boost's byte-container detection for cpp_int, so this is a plain loop.
template <typename A, typename B>
Matrix<typename A::Scalar> exact_product(const Eigen::MatrixBase<A>& a,
                                         const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Matrix<Scalar> out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Scalar s(0);
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

/// Shape-checked exact equality.
template <typename A, typename B>
bool same(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

inline IntMatrix identity(Eigen::Index d) { return IntMatrix::Identity(d, d); }

IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
Point make_point(std::initializer_list<std::int64_t> xs);
Point unit_point(Eigen::Index d, Eigen::Index i);

/// Narrowing to machine integers; throws std::overflow_error if any entry does
/// not fit.
Mat64 to_int64(const IntMatrix& m);
Point to_point(const IntVector& v);
IntVector to_integer(const Point& p);
Matrix<double> to_double(const IntMatrix& m);
Matrix<double> to_double(const RatMatrix& m);

}  // namespace pfw
