#include "pfw/partition.hpp"

#include <sstream>

#include "pfw/dilation.hpp"
#include "pfw/errors.hpp"
#include "pfw/lattice_algebra.hpp"

namespace pfw {

namespace {

constexpr std::size_t kMaxStoredViolations = 100;

void require_det2(const IntMatrix& a) {
  const Integer det = det_exact(a);
  if (det != 2 && det != -2) throw PreconditionError("|det A| must equal 2");
}

bool divisible(const IntMatrix& m, const Integer& n) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) % n != 0) return false;
  return true;
}

Integer dot(const IntVector& a, const Point& b) {
  Integer s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

// Visits every integer point of [-r, r]^d in lexicographic order.
template <class F>
void for_each_in_box(Eigen::Index d, int r, F&& f) {
  Point v = Point::Constant(d, -r);
  for (;;) {
    f(v);
    Eigen::Index i = d - 1;
    while (i >= 0 && v(i) == r) v(i--) = -r;
    if (i < 0) return;
    ++v(i);
  }
}

std::string point_str(const Point& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

Coset coset_of(const IntVector& v, const IntMatrix& a) {
  require_det2(a);
  if (v.size() != a.rows()) throw PreconditionError("vector dimension mismatch");
  const Integer det = det_exact(a);
  const IntVector y = exact_product(adjugate(a), v);
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) % det != 0) return Coset::InShiftedCoset;
  return Coset::InAZd;
}

Coset coset_of(const Point& v, const IntMatrix& a) { return coset_of(to_integer(v), a); }

void coset_vectors(const IntMatrix& a, IntVector& ell, IntVector& q) {
  const Det2Factorization f = det2_factorize(a);
  const Eigen::Index d = a.rows();
  ell = IntVector::Zero(d);
  q = IntVector::Zero(d);
  ell(f.pivot) = 1;
  q(f.pivot) = 1;
  for (Eigen::Index j = 0; j < d; ++j)
    if (f.r[j]) q(j) = 1;
}

PartitionReport verify_partition(const PartitionData& pd, int radius) {
  PartitionReport rep;
  auto fail = [&](std::string prop, const Point& v, std::string detail) {
    rep.pass = false;
    ++rep.violation_count;
    if (rep.violations.size() < kMaxStoredViolations)
      rep.violations.push_back({std::move(prop), v, std::move(detail)});
  };

  const Eigen::Index d = pd.a.rows();
  const Point origin = Point::Zero(d);
  if (pd.a.cols() != d || pd.a0.rows() != d || pd.a0.cols() != d || pd.s.rows() != d ||
      pd.s.cols() != d || pd.s_inv.rows() != d || pd.s_inv.cols() != d ||
      pd.ell.size() != d || pd.q.size() != d) {
    fail("shape", origin, "inconsistent dimensions");
    return rep;
  }
  const Integer det = det_exact(pd.a);
  if (det != 2 && det != -2) {
    fail("shape", origin, "|det A| != 2");
    return rep;
  }
  if (exact_product(pd.s, pd.s_inv) != identity(d)) fail("conjugation", origin, "S S_inv != I");
  if (exact_product(exact_product(pd.s_inv, pd.a), pd.s) != pd.a0)
    fail("conjugation", origin, "S_inv A S != A0");

  // (1): A^{-1} A^T integral.
  IntMatrix at(d, d);
  at = pd.a.transpose();
  if (!divisible(exact_product(adjugate(pd.a), at), det))
    fail("lattice", origin, "A^{-1} A^T is not integral");

  const DilationPowers dp(pd.a);
  const Point ell = to_point(pd.ell);
  auto in_a = [&](const Point& v) { return dp.in_image(1, v); };

  if (in_a(ell)) fail("coset", ell, "ell lies in A Z^d");

  for_each_in_box(d, radius, [&](const Point& v) {
    const bool a_side = in_a(v);
    const bool shifted = in_a(v - ell);
    if (a_side == shifted)
      fail("coset", v, a_side ? "in both cosets" : "in neither coset");
    const bool even = dot(pd.q, v) % 2 == 0;
    if (even != a_side)
      fail("parity", v, std::string("q.v is ") + (even ? "even" : "odd") + " but v is " +
                            (a_side ? "in A Z^d" : "in ell + A Z^d"));
  });

  // |det A| = 2 gives 2 Z^d ⊆ A Z^d, so membership only depends on v mod 2.
  std::vector<char> by_parity(std::size_t{1} << d);
  for (std::size_t bits = 0; bits < by_parity.size(); ++bits) {
    Point v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = (bits >> i) & 1;
    by_parity[bits] = in_a(v);
  }
  auto in_a_fast = [&](const Point& v) {
    std::size_t bits = 0;
    for (Eigen::Index i = 0; i < d; ++i) bits |= std::size_t(v(i) & 1) << i;
    return by_parity[bits] != 0;
  };

  const int sample = std::min(radius, 1);
  for_each_in_box(d, sample, [&](const Point& m) {
    const bool m_in_a = in_a(m);
    for_each_in_box(d, sample, [&](const Point& n) {
      const Point shift = ell - m - n;
      for_each_in_box(d, radius, [&](const Point& v) {
        const bool first = in_a_fast(n - v);
        const bool second = in_a_fast(v - shift);
        if (m_in_a && first == second)
          fail("split", v, "m=" + point_str(m) + " n=" + point_str(n));
        if (!m_in_a && first != second)
          fail("shift", v, "m=" + point_str(m) + " n=" + point_str(n));
      });
    });
  });
  return rep;
}

PartitionData reduce(const IntMatrix& a0) {
  if (a0.rows() != a0.cols() || a0.rows() == 0)
    throw PreconditionError("matrix must be square and non-empty");
  require_det2(a0);
  const Eigen::Index d = a0.rows();

  const Det2Factorization f1 = det2_factorize(a0);
  const IntMatrix u1 = f1.u_matrix(d);
  const IntMatrix u1_inv = inverse_unimodular(u1);
  const IntMatrix c1 = exact_product(exact_product(u1, a0), u1_inv);

  const Det2Factorization f2 = det2_factorize(c1);
  const IntMatrix p = f2.swap_shear(d);
  const IntMatrix p_inv = inverse_unimodular(p);
  const IntMatrix c2 = exact_product(exact_product(p_inv, c1), p);

  IntMatrix x = identity(d), x_inv = identity(d);
  if (f2.pivot != d - 1) {
    x(d - 1, f2.pivot) = -1;
    x_inv(d - 1, f2.pivot) = 1;
  }

  PartitionData pd;
  pd.a0 = a0;
  pd.a = exact_product(exact_product(x, c2), x_inv);
  pd.s = exact_product(exact_product(x, p_inv), u1);
  pd.s_inv = exact_product(exact_product(u1_inv, p), x_inv);
  coset_vectors(pd.a, pd.ell, pd.q);

  const PartitionReport rep = verify_partition(pd, 1);
  if (!rep.pass) {
    const auto& v = rep.violations.front();
    throw InvariantError("reduce produced an invalid partition: " + v.property + " at " +
                         point_str(v.v) + " " + v.detail);
  }
  return pd;
}

}  // namespace pfw
