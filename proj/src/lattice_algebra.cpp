#include "pfw/lattice_algebra.hpp"

#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "pfw/errors.hpp"

namespace pfw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_index(Eigen::Index k, Eigen::Index d) {
  if (k < 0 || k >= d) throw std::out_of_range("factor index out of range");
}

void check_square(const IntMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw PreconditionError("matrix must be square and non-empty");
}

}  // namespace

bool operator==(const ElementaryFactor& a, const ElementaryFactor& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const Swap& x) {
            const auto& y = std::get<Swap>(b);
            return (x.i == y.i && x.j == y.j) || (x.i == y.j && x.j == y.i);
          },
          [&](const SignFlip& x) { return x.p == std::get<SignFlip>(b).p; },
          [&](const Shear& x) {
            const auto& y = std::get<Shear>(b);
            return x.i == y.i && x.j == y.j && x.sign == y.sign;
          },
          [&](const Dilate& x) { return x.p == std::get<Dilate>(b).p; },
      },
      a);
}

std::string to_string(const ElementaryFactor& f) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Swap& x) { os << "I(" << x.i + 1 << "," << x.j + 1 << ")"; },
                 [&](const SignFlip& x) { os << "J(" << x.p + 1 << ")"; },
                 [&](const Shear& x) {
                   os << "(I" << (x.sign > 0 ? "+" : "-") << "E" << x.i + 1 << x.j + 1 << ")";
                 },
                 [&](const Dilate& x) { os << "D(" << x.p + 1 << ")"; },
             },
             f);
  return os.str();
}

IntMatrix apply_factor_right(IntMatrix m, const ElementaryFactor& f) {
  const Eigen::Index d = m.cols();
  std::visit(overloaded{
                 [&](const Swap& x) {
                   check_index(x.i, d);
                   check_index(x.j, d);
                   if (x.i != x.j) m.col(x.i).swap(m.col(x.j));
                 },
                 [&](const SignFlip& x) {
                   check_index(x.p, d);
                   for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, x.p) = -m(r, x.p);
                 },
                 [&](const Shear& x) {
                   check_index(x.i, d);
                   check_index(x.j, d);
                   if (x.i == x.j) throw std::out_of_range("shear with i == j");
                   if (x.sign != 1 && x.sign != -1)
                     throw std::out_of_range("shear sign must be +1 or -1");
                   for (Eigen::Index r = 0; r < m.rows(); ++r)
                     m(r, x.j) += x.sign > 0 ? m(r, x.i) : Integer(-m(r, x.i));
                 },
                 [&](const Dilate& x) {
                   check_index(x.p, d);
                   for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, x.p) *= 2;
                 },
             },
             f);
  return m;
}

IntMatrix factor_matrix(const ElementaryFactor& f, Eigen::Index d) {
  return apply_factor_right(identity(d), f);
}

std::optional<ElementaryFactor> inverse(const ElementaryFactor& f) {
  return std::visit(overloaded{
                        [](const Swap& x) -> std::optional<ElementaryFactor> { return x; },
                        [](const SignFlip& x) -> std::optional<ElementaryFactor> { return x; },
                        [](const Shear& x) -> std::optional<ElementaryFactor> {
                          return Shear{x.i, x.j, -x.sign};
                        },
                        [](const Dilate&) -> std::optional<ElementaryFactor> {
                          return std::nullopt;
                        },
                    },
                    f);
}

IntMatrix compose(const FactorList& factors, Eigen::Index d) {
  IntMatrix m = identity(d);
  for (const auto& f : factors) m = apply_factor_right(std::move(m), f);
  return m;
}

Integer det_exact(const IntMatrix& m0) {
  check_square(m0);
  const Eigen::Index n = m0.rows();
  IntMatrix m = m0;
  Integer prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      m.row(k).swap(m.row(piv));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

RatMatrix inverse_exact(const IntMatrix& m) {
  check_square(m);
  const Eigen::Index n = m.rows();
  RatMatrix a(n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = Rational(m(i, j));
      a(i, n + j) = Rational(i == j ? 1 : 0);
    }
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) throw PreconditionError("matrix is singular");
    if (piv != k) a.row(k).swap(a.row(piv));
    const Rational p = a(k, k);
    for (Eigen::Index j = 0; j < 2 * n; ++j) a(k, j) /= p;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const Rational f = a(i, k);
      for (Eigen::Index j = 0; j < 2 * n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return a.rightCols(n);
}

IntMatrix adjugate(const IntMatrix& m) {
  const Integer det = det_exact(m);
  if (det == 0) throw PreconditionError("adjugate of a singular matrix");
  const RatMatrix inv = inverse_exact(m);
  IntMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Rational x = inv(i, j) * Rational(det);
      if (mp::denominator(x) != 1) throw InvariantError("adjugate is not integral");
      out(i, j) = mp::numerator(x);
    }
  return out;
}

IntMatrix inverse_unimodular(const IntMatrix& m) {
  const Integer det = det_exact(m);
  if (det != 1 && det != -1) throw PreconditionError("matrix is not unimodular");
  IntMatrix adj = adjugate(m);
  if (det == -1) adj = -adj;
  return adj;
}

Eigen::VectorXd eigenvalue_moduli(const IntMatrix& m) {
  check_square(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_double(m), false);
  return es.eigenvalues().cwiseAbs();
}

Expansiveness classify_expansive(const IntMatrix& m, double tol) {
  const Eigen::VectorXd mod = eigenvalue_moduli(m);
  bool borderline = false;
  for (Eigen::Index i = 0; i < mod.size(); ++i) {
    if (mod(i) < 1.0 - tol) return Expansiveness::NotExpansive;
    if (mod(i) <= 1.0 + tol) borderline = true;
  }
  return borderline ? Expansiveness::Indeterminate : Expansiveness::Expansive;
}

bool is_expansive(const IntMatrix& m, double tol) {
  return classify_expansive(m, tol) == Expansiveness::Expansive;
}

namespace {

// cur = B * F_1 ... F_n for the recorded column operations F_k, so that
// B = cur * F_n^{-1} ... F_1^{-1}.
struct ColumnReducer {
  IntMatrix cur;
  FactorList applied;

  void apply(const ElementaryFactor& f) {
    cur = apply_factor_right(std::move(cur), f);
    applied.push_back(f);
  }

  // Elementary factors whose product undoes every recorded operation.
  FactorList undo() const {
    FactorList out;
    out.reserve(applied.size());
    for (auto it = applied.rbegin(); it != applied.rend(); ++it) out.push_back(*inverse(*it));
    return out;
  }

  // Clears cur(row, col) with |cur(row, col)| unit shears using column `src`.
  // Requires cur(row, src) == 1.
  void clear_with_unit(Eigen::Index row, Eigen::Index src, Eigen::Index col) {
    while (cur(row, col) != 0)
      apply(Shear{src, col, cur(row, col) > 0 ? -1 : 1});
  }
};

}  // namespace

LVFactorization lv_factorize(const IntMatrix& b) {
  check_square(b);
  const Eigen::Index d = b.rows();
  ColumnReducer red{b, {}};
  for (Eigen::Index r = 0; r < d; ++r) {
    for (;;) {
      for (Eigen::Index j = r; j < d; ++j)
        if (red.cur(r, j) < 0) red.apply(SignFlip{j});
      Eigen::Index jmin = -1;
      for (Eigen::Index j = r; j < d; ++j)
        if (red.cur(r, j) > 0 && (jmin < 0 || red.cur(r, j) < red.cur(r, jmin))) jmin = j;
      if (jmin < 0) throw PreconditionError("matrix is singular");
      if (jmin != r) red.apply(Swap{r, jmin});
      bool done = true;
      for (Eigen::Index j = r + 1; j < d; ++j) {
        while (red.cur(r, j) >= red.cur(r, r)) red.apply(Shear{r, j, -1});
        if (red.cur(r, j) != 0) done = false;
      }
      if (done) break;
    }
  }
  return {red.cur, red.undo()};
}

FactorList unimodular_factorize(const IntMatrix& u) {
  check_square(u);
  const Integer det = det_exact(u);
  if (det != 1 && det != -1) throw PreconditionError("matrix is not unimodular");
  const Eigen::Index d = u.rows();
  LVFactorization lv = lv_factorize(u);
  ColumnReducer red{lv.lower, {}};
  for (Eigen::Index i = d - 1; i >= 1; --i)
    for (Eigen::Index j = 0; j < i; ++j) red.clear_with_unit(i, i, j);
  if (red.cur != identity(d)) throw InvariantError("unimodular reduction did not reach I");
  FactorList out = red.undo();
  out.insert(out.end(), lv.right.begin(), lv.right.end());
  return out;
}

IntMatrix FactorChain::recompose(Eigen::Index d) const {
  IntMatrix m = compose(left, d);
  m = apply_factor_right(std::move(m), center);
  for (const auto& f : right) m = apply_factor_right(std::move(m), f);
  return m;
}

Det2Factorization det2_factorize(const IntMatrix& b) {
  check_square(b);
  const Integer det = det_exact(b);
  if (det != 2 && det != -2) throw PreconditionError("|det| must equal 2");
  const Eigen::Index d = b.rows();
  LVFactorization lv = lv_factorize(b);

  Eigen::Index p = -1;
  for (Eigen::Index i = 0; i < d; ++i)
    if (lv.lower(i, i) == 2) p = i;
  if (p < 0) throw InvariantError("no diagonal entry equal to 2");

  ColumnReducer red{lv.lower, {}};
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    if (i == p) continue;
    for (Eigen::Index j = 0; j < i; ++j) red.clear_with_unit(i, i, j);
  }
  // Row p: reduce below-diagonal entries modulo 2 with column p = 2 e_p.
  for (Eigen::Index j = 0; j < p; ++j) {
    while (red.cur(p, j) >= 2) red.apply(Shear{p, j, -1});
    while (red.cur(p, j) < 0) red.apply(Shear{p, j, 1});
  }

  Det2Factorization out;
  out.pivot = p;
  out.r.assign(static_cast<std::size_t>(d), 0);
  for (Eigen::Index j = 0; j < p; ++j) out.r[j] = red.cur(p, j) == 1 ? 1 : 0;

  FactorList v = red.undo();
  v.insert(v.end(), lv.right.begin(), lv.right.end());

  out.lower.center = Dilate{p};
  for (Eigen::Index j = 0; j < p; ++j)
    if (out.r[j]) out.lower.left.push_back(Shear{p, j, 1});
  out.lower.right = v;

  const Eigen::Index last = d - 1;
  if (p != last) out.swapped.left.push_back(Swap{p, last});
  for (Eigen::Index j = 0; j < p; ++j)
    if (out.r[j]) out.swapped.left.push_back(Shear{last, j, 1});
  out.swapped.center = Dilate{last};
  if (p != last) out.swapped.right.push_back(Swap{p, last});
  out.swapped.right.insert(out.swapped.right.end(), v.begin(), v.end());

  out.elementary = out.swapped.left;
  out.elementary.push_back(out.swapped.center);
  out.elementary.insert(out.elementary.end(), out.swapped.right.begin(),
                        out.swapped.right.end());

  if (out.lower.recompose(d) != b || out.swapped.recompose(d) != b ||
      compose(out.elementary, d) != b)
    throw InvariantError("det2 factorization does not recompose");
  return out;
}

}  // namespace pfw
