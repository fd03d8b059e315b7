#pragma once

#include <optional>
#include <vector>

#include "pfw/types.hpp"

namespace pfw {

/// Machine-integer index arithmetic for a fixed dilation A and cell tile T.
///
/// Level-r cells are A^{-r}(m + T[0,1)^d) with T unimodular (the identity
/// unless a function has been conjugated). Powers are cached on demand; an
/// instance is cheap and meant to be local to one computation, so it is not
/// shared between threads. Every routine throws std::overflow_error rather
/// than wrapping.
class DilationPowers {
 public:
  explicit DilationPowers(const IntMatrix& a);
  DilationPowers(const IntMatrix& a, const Mat64& tile);

  Eigen::Index dim() const { return d_; }
  std::int64_t det() const { return det_; }
  const Mat64& tile() const { return tile_; }
  bool unit_tile() const { return unit_tile_; }

  /// A^r for r >= 0.
  const Mat64& power(int r) const;
  /// adj(A)^r = det^r A^{-r}.
  const Mat64& adjugate_power(int r) const;
  std::int64_t det_power(int r) const;

  /// A^r x.
  Point apply(int r, const Point& x) const;
  /// A^{-r} x if it is integral.
  std::optional<Point> exact_inverse(int r, const Point& x) const;
  bool in_image(int r, const Point& x) const { return exact_inverse(r, x).has_value(); }
  /// Index m of the level-r cell containing the point A^{-r} x, i.e.
  /// T floor(T^{-1} A^{-r} x).
  Point cell_index(int r, const Point& x) const;

  /// Complete residue system of Z^d / A^r Z^d built as sums of A^i e with e in
  /// {0, e*} and e* a unit vector outside A Z^d. Requires |det A| = 2.
  const std::vector<Point>& coset_representatives(int r) const;
  /// Z^d ∩ A^r T[0,1)^d: the 2^r anchors of the level-r sub-cells of the unit
  /// cell, in lexicographic order.
  std::vector<Point> digits(int r) const;

 private:
  Eigen::Index d_;
  std::int64_t det_;
  Mat64 tile_, tile_inv_;
  bool unit_tile_ = true;
  mutable std::vector<Mat64> pow_, adj_pow_;
  mutable std::vector<std::vector<Point>> reps_;
};

/// floor(a / b) for b != 0.
std::int64_t floor_div(__int128 a, std::int64_t b);
/// Product with overflow detection.
Mat64 checked_product(const Mat64& a, const Mat64& b);
Point checked_apply(const Mat64& a, const Point& x);

}  // namespace pfw
