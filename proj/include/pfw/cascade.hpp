#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "pfw/dilation.hpp"
#include "pfw/errors.hpp"
#include "pfw/lattice_algebra.hpp"
#include "pfw/lawton.hpp"
#include "pfw/types.hpp"

namespace pfw {

/// A function constant on the level-k cells A^{-k}(m + T[0,1)^d), stored
/// sparsely by cell index m. T is unimodular (the identity unless the function
/// was conjugated), so every cell has measure 2^{-k}.
template <class Scalar>
struct BasicSampledFunction {
  IntMatrix matrix;
  Mat64 tile;
  int level = 0;
  std::map<Point, Scalar, LexLess> values;

  Eigen::Index dim() const { return matrix.rows(); }
  double cell_measure() const { return std::ldexp(1.0, -level); }
  bool unit_tile() const { return tile == Mat64::Identity(tile.rows(), tile.cols()); }
  Scalar at(const Point& m) const {
    auto it = values.find(m);
    return it == values.end() ? Scalar(0) : it->second;
  }
};

using SampledFunction = BasicSampledFunction<double>;
using ExactSampledFunction = BasicSampledFunction<Rational>;

/// Cascade weights w_n = sqrt(2) h_n.
template <class Scalar>
struct CascadeWeights {
  std::vector<Point> support;
  std::vector<Scalar> w;
};

/// sqrt(2) h_n evaluated in quad precision and rounded once, so the Haar
/// weights come out as exactly 1.
CascadeWeights<double> cascade_weights(const Mask& mask);
/// The same weights as exact dyadic rationals.
CascadeWeights<Rational> exact_cascade_weights(const Mask& mask);

namespace detail {
template <class Scalar>
bool negligible(const Scalar& v) {
  if constexpr (std::is_floating_point_v<Scalar>)
    return std::abs(v) <= 1e-300;
  else
    return v == 0;
}

inline void require_same_matrix(const IntMatrix& a, const IntMatrix& b) {
  if (!same(a, b)) throw PreconditionError("functions live over different matrices");
}
}  // namespace detail

template <class Scalar = double>
BasicSampledFunction<Scalar> init_indicator(const IntMatrix& a, const Mat64& tile) {
  BasicSampledFunction<Scalar> f;
  f.matrix = a;
  f.tile = tile;
  f.level = 0;
  f.values.emplace(Point::Zero(a.rows()), Scalar(1));
  return f;
}

template <class Scalar = double>
BasicSampledFunction<Scalar> init_indicator(const IntMatrix& a) {
  return init_indicator<Scalar>(a, Mat64::Identity(a.rows(), a.rows()));
}

/// Psi f(t) = sum_n w_n f(A t - n). On level-(k+1) cell m the value is
/// sum_n w_n f_k[m - A^k n]; computed here as a scatter from each occupied cell.
template <class Scalar>
BasicSampledFunction<Scalar> cascade_step(const BasicSampledFunction<Scalar>& phi,
                                          const CascadeWeights<Scalar>& weights) {
  const DilationPowers dp(phi.matrix);
  std::vector<Point> shifts;
  shifts.reserve(weights.support.size());
  for (const Point& n : weights.support) {
    if (n.size() != phi.dim()) throw PreconditionError("mask dimension mismatch");
    shifts.push_back(dp.apply(phi.level, n));
  }
  BasicSampledFunction<Scalar> out;
  out.matrix = phi.matrix;
  out.tile = phi.tile;
  out.level = phi.level + 1;
  for (const auto& [j, v] : phi.values)
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      if (weights.w[i] == Scalar(0)) continue;
      out.values[Point(j + shifts[i])] += weights.w[i] * v;
    }
  std::erase_if(out.values, [](const auto& kv) { return detail::negligible(kv.second); });
  return out;
}

BasicSampledFunction<double> cascade_step(const SampledFunction& phi, const Mask& mask);

/// Point samples of phi at the anchors A^{-L} m of all level-L cells meeting
/// its support (L >= phi.level). The result is again a sampled function at
/// level L; when the tilings nest it is the same function.
template <class Scalar>
BasicSampledFunction<Scalar> refine(const BasicSampledFunction<Scalar>& phi, int level) {
  if (level < phi.level) throw PreconditionError("refine to a coarser level");
  const DilationPowers dp(phi.matrix, phi.tile);
  const int r = level - phi.level;
  const auto digits = dp.digits(r);
  BasicSampledFunction<Scalar> out;
  out.matrix = phi.matrix;
  out.tile = phi.tile;
  out.level = level;
  for (const auto& [j, v] : phi.values) {
    const Point base = dp.apply(r, j);
    for (const Point& dl : digits) out.values.emplace(Point(base + dl), v);
  }
  return out;
}

/// Samples of the k-th iterate Psi^k chi on the level-L anchors (L >= k) by
/// V^{(j, l)}[m] = sum_n w_n V^{(j-1, l-1)}[m - A^{l-1} n], starting from the
/// indicator samples at level L - k.
SampledFunction sample_at_level(const Mask& mask, const IntMatrix& a, int k, int level);

template <class Scalar>
Scalar l2_norm_sq(const BasicSampledFunction<Scalar>& f) {
  Scalar s(0);
  for (const auto& [m, v] : f.values) s += v * v;
  if constexpr (std::is_floating_point_v<Scalar>)
    return std::ldexp(s, -f.level);
  else
    return s / Scalar(Integer(1) << f.level);
}

inline double l2_norm(const SampledFunction& f) { return std::sqrt(l2_norm_sq(f)); }

/// Gram[a][b] = <T_a f, T_b f> = 2^{-k} sum_m f[m - A^k a] f[m - A^k b].
template <class Scalar>
Matrix<Scalar> translates_gram(const BasicSampledFunction<Scalar>& f,
                               const std::vector<Point>& offsets) {
  const DilationPowers dp(f.matrix);
  const auto n = static_cast<Eigen::Index>(offsets.size());
  Matrix<Scalar> g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b) {
      const Point shift = dp.apply(f.level, Point(offsets[a] - offsets[b]));
      Scalar s(0);
      for (const auto& [j, v] : f.values) {
        auto it = f.values.find(Point(j + shift));
        if (it != f.values.end()) s += v * it->second;
      }
      if constexpr (std::is_floating_point_v<Scalar>)
        s = std::ldexp(s, -f.level);
      else
        s /= Scalar(Integer(1) << f.level);
      g(a, b) = s;
      g(b, a) = s;
    }
  return g;
}

/// L2 distance of two functions sampled on the same level and tile. Exact for
/// cell functions; for point samples it is the anchor quadrature.
double l2_distance(const SampledFunction& f, const SampledFunction& g);

struct IterateResult {
  SampledFunction phi;
  /// diffs[k] approximates |phi_{k+1} - phi_k|, both sampled at level k + 3.
  std::vector<double> diffs;
  bool converged = false;
};

/// Runs up to k_max cascade steps from chi_{[0,1)^d}. Stops early once a diff
/// drops below eps; eps <= 0 disables the early stop.
IterateResult iterate(const Mask& mask, const IntMatrix& a, int k_max = 8, double eps = 1e-6);
/// Same, from an arbitrary cell function (e.g. a conjugated cube).
IterateResult iterate(const Mask& mask, const SampledFunction& seed, int k_max = 8,
                      double eps = 1e-6);

/// Closed-form Fourier transform (2 pi)^{-d/2} ∫ f(x) e^{-i xi·x} dx of a cell
/// function.
std::complex<double> fourier_transform(const SampledFunction& f, const Eigen::VectorXd& xi);

/// prod_j (1 - e^{-i s_j}) / (i s_j), the transform of the unit cube without
/// the (2 pi)^{-d/2} factor.
std::complex<double> cube_transform(const Eigen::VectorXd& s);

/// Axis-aligned window [-r, r]^d of integer offsets in lexicographic order.
std::vector<Point> offset_window(Eigen::Index d, int r);

}  // namespace pfw
