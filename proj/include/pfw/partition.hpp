#pragma once

#include <string>
#include <vector>

#include "pfw/types.hpp"

namespace pfw {

/// A0 = S^{-1} A S with A carrying the coset vector ell and parity vector q:
///   A Z^d = A^T Z^d,  Z^d = A Z^d ⊍ (ell + A Z^d),
///   (-1)^{q·v} = +1 exactly on A Z^d.
struct PartitionData {
  IntMatrix a0, a, s, s_inv;
  IntVector ell, q;

  Eigen::Index dim() const { return a.rows(); }
};

enum class Coset { InAZd, InShiftedCoset };

/// Exact membership test: v ∈ A Z^d iff adj(A) v ≡ 0 mod det A. Requires
/// |det A| = 2.
Coset coset_of(const IntVector& v, const IntMatrix& a);
Coset coset_of(const Point& v, const IntMatrix& a);

struct PartitionViolation {
  std::string property;
  Point v;
  std::string detail;
};

struct PartitionReport {
  bool pass = true;
  std::size_t violation_count = 0;
  /// First violations in traversal order (lexicographic in v); capped.
  std::vector<PartitionViolation> violations;
};

/// Checks the conjugation, the lattice identity A Z^d = A^T Z^d, the coset
/// split and parity on Z^d ∩ [-radius, radius]^d, and the two translated coset
/// identities
///   (n + A Z^d) ⊍ (ell - m - n + A Z^d) = Z^d   for m ∈ A Z^d,
///   n + A Z^d = ell - m - n + A Z^d             for m ∈ ell + A Z^d,
/// with m, n drawn from [-1, 1]^d (which already meets every residue mod 2).
PartitionReport verify_partition(const PartitionData& pd, int radius = 3);

/// Constructs PartitionData for any |det| = 2 matrix by two rounds of
/// det2_factorize and a final shear conjugation. Throws PreconditionError for
/// |det| != 2 and InvariantError if the result fails its own checks.
PartitionData reduce(const IntMatrix& a0);

/// ell and q read off a matrix already of the form I_pd M_r D_d U:
/// ell = e_p, q = e_p + sum_j r_j e_j.
void coset_vectors(const IntMatrix& a, IntVector& ell, IntVector& q);

}  // namespace pfw
