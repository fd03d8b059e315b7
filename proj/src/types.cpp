#include "pfw/types.hpp"

#include <limits>
#include <stdexcept>

namespace pfw {

IntMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  IntMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d)
      throw std::invalid_argument("from_rows: matrix is not square");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Integer(rows[i][j]);
  }
  return m;
}

Point make_point(std::initializer_list<std::int64_t> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) p(i++) = x;
  return p;
}

Point unit_point(Eigen::Index d, Eigen::Index i) {
  Point p = Point::Zero(d);
  p(i) = 1;
  return p;
}

namespace {
std::int64_t narrow(const Integer& x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(x);
}
}  // namespace

Mat64 to_int64(const IntMatrix& m) {
  Mat64 out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = narrow(m(i, j));
  return out;
}

Point to_point(const IntVector& v) {
  Point p(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) p(i) = narrow(v(i));
  return p;
}

IntVector to_integer(const Point& p) {
  IntVector v(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) v(i) = Integer(p(i));
  return v;
}

Matrix<double> to_double(const IntMatrix& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

Matrix<double> to_double(const RatMatrix& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

}  // namespace pfw
