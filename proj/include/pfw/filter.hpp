#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pfw/lawton.hpp"
#include "pfw/partition.hpp"

namespace pfw {

using Complex = std::complex<double>;

/// m0(t) = 2^{-1/2} sum_n h_n exp(-i n·t). eval_m0_complex evaluates the
/// entire extension.
Complex eval_m0(const Mask& mask, const Eigen::VectorXd& t);
Complex eval_m0_complex(const Mask& mask, const Eigen::VectorXcd& t);

struct QmfReport {
  double max_dev = 0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// max | |m0(t)|^2 + |m0(t + pi q)|^2 - 1 | over a shifted Kronecker sequence
/// in [-pi, pi)^d plus the points 0, pi q and pi e_j.
QmfReport check_qmf(const Mask& mask, const PartitionData& pd, int samples = 1000,
                    std::uint64_t seed = 1);

/// Truncated product (2 pi)^{-d/2} prod_{j=1..J} m0((A^T)^{-j} xi). The powers
/// (A^T)^{-j} are formed exactly and rounded once.
class ProductEvaluator {
 public:
  ProductEvaluator(const Mask& mask, const IntMatrix& a, int J);
  Complex operator()(const Eigen::VectorXd& xi) const;
  int depth() const { return static_cast<int>(powers_.size()); }
  /// (A^T)^{-j} in double, j = 1..J.
  const Eigen::MatrixXd& inverse_transpose_power(int j) const { return powers_[j - 1]; }

 private:
  const Mask* mask_;
  std::vector<Eigen::MatrixXd> powers_;
};

Complex eval_g(const Mask& mask, const IntMatrix& a, const Eigen::VectorXd& xi, int J);

/// A ball around the origin containing supp(phi) and every cascade iterate
/// seeded with the unit cube.
struct SupportBound {
  double radius = 0;            // R
  std::vector<double> terms;    // |A^{-j}|_2 max_n |n|_2 for j = 1..tail_start-1
  int tail_start = 1;           // first j covered by the geometric tail
  double tail = 0;
  int block = 1;                // p with |A^{-p}|_2 <= contraction
  double contraction = 0;       // |A^{-p}|_2
  double max_shift = 0;         // max_n |n|_2
  double b0 = 0;                // 2 sqrt(d) N0
  std::int64_t n0 = 0;
  Eigen::Index dim = 0;
  std::vector<double> inverse_norms;  // |A^{-j}|_2 for j = 0..tail_start-1+block

  /// Radius covering whole level-k cells of the k-th iterate:
  /// R + |A^{-k}|_2 sqrt(d).
  double iterate_radius(int k) const;
};

/// supp phi ⊆ sum_{j>=1} A^{-j} support, bounded with explicit operator norms
/// of A^{-j} and a geometric tail once some power contracts by 0.9. Throws
/// PreconditionError if A is not expansive.
SupportBound support_bound(const Mask& mask, const IntMatrix& a);

/// Exact powers (A^{-1})^j and (A^T)^{-j} as doubles, j = 0..count-1.
std::vector<Eigen::MatrixXd> inverse_powers(const IntMatrix& a, int count, bool transpose);

}  // namespace pfw
