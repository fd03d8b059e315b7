#pragma once

#include <cmath>

#include "pfw/lattice_algebra.hpp"
#include "pfw/lawton.hpp"
#include "pfw/partition.hpp"

namespace fixtures {

using namespace pfw;

inline PartitionData example1_paper() {
  PartitionData pd;
  pd.a0 = from_rows({{0, 1, 0}, {0, 0, 1}, {2, 0, 0}});
  pd.a = from_rows({{0, 2, -1}, {0, 0, 1}, {1, 1, 0}});
  pd.s = from_rows({{-1, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  pd.s_inv = inverse_unimodular(pd.s);
  pd.ell = to_integer(make_point({1, 0, 0}));
  pd.q = to_integer(make_point({1, 1, 0}));
  return pd;
}

// Example 1 read directly over A0: ell = S^{-1} e1 = e3, q = S^T (1,1,0) = e3.
inline PartitionData example1_a0() {
  PartitionData pd;
  pd.a0 = pd.a = from_rows({{0, 1, 0}, {0, 0, 1}, {2, 0, 0}});
  pd.s = pd.s_inv = identity(3);
  pd.ell = pd.q = to_integer(make_point({0, 0, 1}));
  return pd;
}

inline PartitionData example2() {
  PartitionData pd;
  pd.a0 = pd.a = from_rows({{-2, 1, -2}, {1, 0, 0}, {2, 0, 2}});
  pd.s = pd.s_inv = identity(3);
  pd.ell = pd.q = to_integer(make_point({0, 0, 1}));
  return pd;
}

// Dyadic dilation on the line; the Haar case.
inline PartitionData dyadic() {
  PartitionData pd;
  pd.a0 = pd.a = from_rows({{2}});
  pd.s = pd.s_inv = identity(1);
  pd.ell = pd.q = to_integer(make_point({1}));
  return pd;
}

// Two-point mask {0, e_axis}; with Example 1's reduced matrix (axis 0) it is the
// 3-d Haar fixture.
inline Mask haar(Eigen::Index d, Eigen::Index axis = 0) {
  Mask m;
  m.dim = d;
  m.support = {Point::Zero(d), unit_point(d, axis)};
  m.coeffs = {std::sqrt(2.0) / 2, std::sqrt(2.0) / 2};
  return m;
}

// Table 1 support order: alpha fastest, then beta, then gamma.
inline Mask table1(int set) {
  static const double s1[16] = {
      0.00000000000000003754, 0.08378339374280850000, 0.49453510790101500000,
      0.00000000000000024969, 0.00000000000000002218, 0.35330635188230000000,
      -0.22451807131547000000, 0.00000000000000011746, 0.00000000000000007270,
      0.16226597620431900000, -0.25534514772672400000, -0.00000000000000012892,
      0.00000000000000004295, 0.68425970262500800000, 0.11592624905984000000,
      -0.00000000000000006065};
  static const double s2[16] = {
      -0.00000000000000000294, 0.03292120287539430000, -0.13290357845020300000,
      0.00000000000000017890, 0.00000000000000004947, 0.55716952051625900000,
      0.24991965790058100000, -0.00000000000000000691, -0.00000000000000000396,
      0.04430091724524290000, 0.09876422297993930000, -0.00000000000000013295,
      0.00000000000000006657, 0.74976363753740400000, -0.18572201823152200000,
      0.00000000000000000514};
  Mask m;
  m.dim = 3;
  m.support = support_box(make_point({0, 0, 0}), make_point({3, 1, 1}));
  const double* c = set == 1 ? s1 : s2;
  m.coeffs.assign(c, c + 16);
  return m;
}

// Value of chi_{Q+} - chi_{Q-} at the anchor A0^{-L} m, exactly.
inline int example1_psi_at(const IntMatrix& a0, int level, const Point& m) {
  const RatMatrix inv = inverse_exact(a0);
  RatMatrix p = RatMatrix::Identity(3, 3);
  for (int i = 0; i < level; ++i) p = exact_product(p, inv);
  Vector<Rational> x(3);
  for (int i = 0; i < 3; ++i) {
    Rational s = 0;
    for (int j = 0; j < 3; ++j) s += p(i, j) * Rational(m(j));
    x(i) = s;
  }
  for (int i = 0; i < 3; ++i)
    if (x(i) < 0 || x(i) >= 1) return 0;
  return x(0) < Rational(1, 2) ? 1 : -1;
}

}  // namespace fixtures
