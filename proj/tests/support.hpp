#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pfw/lattice_algebra.hpp"
#include "pfw/types.hpp"

namespace testing {

using LL = long long;
using Dense = std::vector<std::vector<LL>>;

inline Dense to_dense(const pfw::IntMatrix& m) {
  Dense out(m.rows(), std::vector<LL>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = static_cast<LL>(m(i, j));
  return out;
}

// Cofactor expansion; independent of the Bareiss implementation.
inline LL cofactor_det(const Dense& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  LL s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    Dense minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<LL> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    s += (c % 2 ? -1 : 1) * m[0][c] * cofactor_det(minor);
  }
  return s;
}

inline Dense dense_mul(const Dense& a, const Dense& b) {
  Dense out(a.size(), std::vector<LL>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Random integer matrix with entries in [-r, r] whose determinant lies in dets.
inline pfw::IntMatrix random_matrix_with_det(std::mt19937_64& rng, int d, int r,
                                             const std::vector<LL>& dets) {
  std::uniform_int_distribution<int> entry(-r, r);
  for (;;) {
    Dense m(d, std::vector<LL>(d));
    for (auto& row : m)
      for (auto& x : row) x = entry(rng);
    const LL det = cofactor_det(m);
    for (LL t : dets)
      if (det == t) return pfw::from_rows(m);
  }
}

// Factor matrices written out from the definitions, without apply_factor_right.
inline Dense oracle_matrix(const pfw::ElementaryFactor& f, int d) {
  Dense m(d, std::vector<long long>(d, 0));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  if (auto* s = std::get_if<pfw::Swap>(&f)) {
    m[s->i][s->i] = m[s->j][s->j] = 0;
    m[s->i][s->j] = m[s->j][s->i] = 1;
  } else if (auto* g = std::get_if<pfw::SignFlip>(&f)) {
    m[g->p][g->p] = -1;
  } else if (auto* h = std::get_if<pfw::Shear>(&f)) {
    m[h->i][h->j] = h->sign;
  } else {
    m[std::get<pfw::Dilate>(f).p][std::get<pfw::Dilate>(f).p] = 2;
  }
  return m;
}

inline Dense oracle_product(const pfw::FactorList& fs, int d) {
  Dense m(d, std::vector<long long>(d, 0));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  for (const auto& f : fs) m = dense_mul(m, oracle_matrix(f, d));
  return m;
}

inline pfw::FactorList flatten(const pfw::FactorChain& c) {
  pfw::FactorList out = c.left;
  out.push_back(c.center);
  out.insert(out.end(), c.right.begin(), c.right.end());
  return out;
}

}  // namespace testing
