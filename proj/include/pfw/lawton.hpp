#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfw/partition.hpp"
#include "pfw/types.hpp"

namespace pfw {

/// Finite real filter {h_n : n in support}.
struct Mask {
  Eigen::Index dim = 0;
  std::vector<Point> support;
  std::vector<double> coeffs;
  std::string role = "scaling";
  /// Set only by verify/solve, to the tolerance the Lawton residual met.
  std::optional<double> verified_tol;

  std::size_t size() const { return support.size(); }
  /// Smallest N0 with support ⊆ [-N0, N0]^d.
  std::int64_t n0() const;
  /// Coefficient at n, 0 if n is outside the support.
  double at(const Point& n) const;
};

/// Points of the box prod_i [lo_i, hi_i], first coordinate varying fastest.
std::vector<Point> support_box(const Point& lo, const Point& hi);

/// Quadratic constraints sum_n h_n h_{n+k} = delta_{0k} for k ∈ A Z^d, plus
/// sum_n h_n = sqrt 2. Only shifts that are differences of support points give
/// non-vacuous equations, and k, -k give the same equation for real masks, so
/// each unordered pair appears once (k = 0 first, then canonical
/// representatives with first nonzero coordinate positive).
struct LawtonSystem {
  IntMatrix a;
  std::vector<Point> support;
  std::vector<Point> shifts;
  /// pairs[s] lists (i, j) with support[j] = support[i] + shifts[s].
  std::vector<std::vector<std::pair<int, int>>> pairs;

  std::size_t rows() const { return shifts.size() + 1; }
  std::size_t unknowns() const { return support.size(); }
};

LawtonSystem build_system(const std::vector<Point>& support, const IntMatrix& a);
inline LawtonSystem build_system(const std::vector<Point>& support, const PartitionData& pd) {
  return build_system(support, pd.a);
}

/// One entry per constraint row, the normalization row last.
Eigen::VectorXd residual(const Mask& mask, const LawtonSystem& sys);

struct SolveConfig {
  double tol = 1e-10;
  int max_iter = 200;
  int restarts = 64;
  std::uint64_t seed = 1;
};

/// Levenberg–Marquardt from seeded uniform[-1, 1] starts, each converged start
/// polished by Gauss–Newton in quad precision. Returns distinct masks
/// (ℓ∞ distance > 1e-6) with max residual <= tol, ordered by residual then
/// lexicographically by coefficients. Empty if nothing converges.
std::vector<Mask> solve(const LawtonSystem& sys, const SolveConfig& cfg = {});

struct VerifyResult {
  bool pass = false;
  double max_residual = 0;
};

/// Residual check with the system built from the mask's own support. On
/// success the mask's verified_tol is set.
VerifyResult verify(Mask& mask, const IntMatrix& a, double tol);
inline VerifyResult verify(Mask& mask, const PartitionData& pd, double tol) {
  return verify(mask, pd.a, tol);
}

}  // namespace pfw
