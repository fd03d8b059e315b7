#include "pfw/dilation.hpp"

#include <limits>
#include <stdexcept>

#include "pfw/errors.hpp"
#include "pfw/lattice_algebra.hpp"

namespace pfw {

namespace {

std::int64_t narrow(__int128 x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("lattice index arithmetic overflowed 64 bits");
  return static_cast<std::int64_t>(x);
}

__int128 checked_add(__int128 a, __int128 b) {
  __int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("128-bit overflow");
  return out;
}

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("128-bit overflow");
  return out;
}

}  // namespace

std::int64_t floor_div(__int128 a, std::int64_t b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return narrow(q);
}

Mat64 checked_product(const Mat64& a, const Mat64& b) {
  Mat64 out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      __int128 s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k)
        s = checked_add(s, static_cast<__int128>(a(i, k)) * b(k, j));
      out(i, j) = narrow(s);
    }
  return out;
}

Point checked_apply(const Mat64& a, const Point& x) {
  Point out(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    __int128 s = 0;
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      s = checked_add(s, static_cast<__int128>(a(i, k)) * x(k));
    out(i) = narrow(s);
  }
  return out;
}

DilationPowers::DilationPowers(const IntMatrix& a)
    : DilationPowers(a, Mat64::Identity(a.rows(), a.rows())) {}

DilationPowers::DilationPowers(const IntMatrix& a, const Mat64& tile) : d_(a.rows()) {
  const Integer det = det_exact(a);
  if (det == 0) throw PreconditionError("dilation matrix is singular");
  det_ = static_cast<std::int64_t>(det);
  pow_.push_back(Mat64::Identity(d_, d_));
  pow_.push_back(to_int64(a));
  adj_pow_.push_back(Mat64::Identity(d_, d_));
  adj_pow_.push_back(to_int64(adjugate(a)));
  if (tile.rows() != d_ || tile.cols() != d_) throw PreconditionError("tile dimension mismatch");
  tile_ = tile;
  unit_tile_ = tile == Mat64::Identity(d_, d_);
  IntMatrix t(d_, d_);
  for (Eigen::Index i = 0; i < d_; ++i)
    for (Eigen::Index j = 0; j < d_; ++j) t(i, j) = Integer(tile(i, j));
  tile_inv_ = to_int64(inverse_unimodular(t));
}

const Mat64& DilationPowers::power(int r) const {
  if (r < 0) throw std::invalid_argument("negative power");
  while (static_cast<int>(pow_.size()) <= r) pow_.push_back(checked_product(pow_.back(), pow_[1]));
  return pow_[r];
}

const Mat64& DilationPowers::adjugate_power(int r) const {
  if (r < 0) throw std::invalid_argument("negative power");
  while (static_cast<int>(adj_pow_.size()) <= r)
    adj_pow_.push_back(checked_product(adj_pow_.back(), adj_pow_[1]));
  return adj_pow_[r];
}

std::int64_t DilationPowers::det_power(int r) const {
  __int128 p = 1;
  for (int i = 0; i < r; ++i) p = checked_mul(p, det_);
  return narrow(p);
}

Point DilationPowers::apply(int r, const Point& x) const { return checked_apply(power(r), x); }

std::optional<Point> DilationPowers::exact_inverse(int r, const Point& x) const {
  const Point y = checked_apply(adjugate_power(r), x);
  const std::int64_t n = det_power(r);
  Point out(d_);
  for (Eigen::Index i = 0; i < d_; ++i) {
    if (y(i) % n != 0) return std::nullopt;
    out(i) = y(i) / n;
  }
  return out;
}

Point DilationPowers::cell_index(int r, const Point& x) const {
  const Point y = checked_apply(adjugate_power(r), x);
  const std::int64_t n = det_power(r);
  Point f(d_);
  for (Eigen::Index i = 0; i < d_; ++i) {
    __int128 s = 0;
    if (unit_tile_) {
      s = y(i);
    } else {
      for (Eigen::Index k = 0; k < d_; ++k)
        s = checked_add(s, static_cast<__int128>(tile_inv_(i, k)) * y(k));
    }
    f(i) = floor_div(s, n);
  }
  return unit_tile_ ? f : checked_apply(tile_, f);
}

const std::vector<Point>& DilationPowers::coset_representatives(int r) const {
  if (det_ != 2 && det_ != -2)
    throw PreconditionError("coset representatives need |det A| = 2");
  if (reps_.empty()) reps_.push_back({Point::Zero(d_)});
  while (static_cast<int>(reps_.size()) <= r) {
    Point estar;
    for (Eigen::Index i = 0; i < d_ && estar.size() == 0; ++i)
      if (!in_image(1, unit_point(d_, i))) estar = unit_point(d_, i);
    if (estar.size() == 0) throw InvariantError("A Z^d contains every unit vector");
    // R_{r+1} = {0, e*} + A R_r
    std::vector<Point> next;
    for (const Point& x : reps_.back()) {
      const Point ax = apply(1, x);
      next.push_back(ax);
      next.push_back(ax + estar);
    }
    reps_.push_back(std::move(next));
  }
  return reps_[r];
}

std::vector<Point> DilationPowers::digits(int r) const {
  std::vector<Point> out;
  const auto& reps = coset_representatives(r);
  out.reserve(reps.size());
  for (const Point& x : reps) out.push_back(x - apply(r, cell_index(r, x)));
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

}  // namespace pfw
