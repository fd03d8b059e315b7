#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pfw/types.hpp"

namespace pfw {

// Elementary integer matrices. Indices are 0-based; the JSON interchange
// format shifts them to 1-based.

/// Interchange columns i and j of the identity.
struct Swap {
  Eigen::Index i, j;
};
/// I - 2 e_p e_p^T.
struct SignFlip {
  Eigen::Index p;
};
/// I + sign * e_i e_j^T with i != j and sign in {+1, -1}.
struct Shear {
  Eigen::Index i, j;
  int sign;
};
/// I + e_p e_p^T. Not invertible over the integers.
struct Dilate {
  Eigen::Index p;
};

using ElementaryFactor = std::variant<Swap, SignFlip, Shear, Dilate>;
using FactorList = std::vector<ElementaryFactor>;

bool operator==(const ElementaryFactor& a, const ElementaryFactor& b);
std::string to_string(const ElementaryFactor& f);

IntMatrix factor_matrix(const ElementaryFactor& f, Eigen::Index d);

/// Returns m * F as a column operation. Throws std::out_of_range for indices
/// outside [0, d) or a shear with i == j.
IntMatrix apply_factor_right(IntMatrix m, const ElementaryFactor& f);

/// Inverse inside the elementary set; std::nullopt for Dilate.
std::optional<ElementaryFactor> inverse(const ElementaryFactor& f);

/// Ordered product F_1 F_2 ... F_n (identity for an empty list).
IntMatrix compose(const FactorList& factors, Eigen::Index d);

Integer det_exact(const IntMatrix& m);

/// Exact inverse over the rationals. Throws PreconditionError if singular.
RatMatrix inverse_exact(const IntMatrix& m);
/// det(m) * m^{-1}, always integral.
IntMatrix adjugate(const IntMatrix& m);
/// Inverse of a matrix with |det| = 1.
IntMatrix inverse_unimodular(const IntMatrix& m);

enum class Expansiveness { Expansive, NotExpansive, Indeterminate };

/// Classifies the spectrum numerically. Any |lambda| < 1 - tol is decisive;
/// otherwise a modulus within tol of 1 yields Indeterminate.
Expansiveness classify_expansive(const IntMatrix& m, double tol = 1e-9);
/// True only for Expansiveness::Expansive.
bool is_expansive(const IntMatrix& m, double tol = 1e-9);
Eigen::VectorXd eigenvalue_moduli(const IntMatrix& m);

struct LVFactorization {
  IntMatrix lower;    // integral, lower triangular, positive diagonal
  FactorList right;   // elementary factors whose product V satisfies lower * V = B
};

/// Column-reduces each row in turn: sign flips make the trailing row
/// non-negative, the smallest positive entry (lowest column on ties) is swapped
/// onto the diagonal and subtracted from the others until they vanish.
LVFactorization lv_factorize(const IntMatrix& b);

/// Writes a |det| = 1 matrix as a product of Swap, SignFlip and unit Shear
/// factors.
FactorList unimodular_factorize(const IntMatrix& u);

/// left * center * right, where center is a single Dilate.
struct FactorChain {
  FactorList left;
  Dilate center;
  FactorList right;

  IntMatrix recompose(Eigen::Index d) const;
};

/// The three shapes of a |det| = 2 factorization around a single doubling:
///   lower:      B = L_r^(p) * D_p * V
///   swapped:    B = (I_pd * M_r^(p)) * D_d * U,  U = I_pd * V
///   elementary: the swapped shape flattened to one list of elementary
///               factors with D_d in the middle.
/// L_r^(p) = I + sum_j r_j e_p e_j^T and M_r^(p) = I + sum_j r_j e_d e_j^T with
/// r a 0/1 vector supported below p.
struct Det2Factorization {
  Eigen::Index pivot = 0;
  std::vector<int> r;
  FactorChain lower;
  FactorChain swapped;
  FactorList elementary;

  /// I_pd * M_r^(p)
  IntMatrix swap_shear(Eigen::Index d) const { return compose(swapped.left, d); }
  /// U
  IntMatrix u_matrix(Eigen::Index d) const { return compose(swapped.right, d); }
};

Det2Factorization det2_factorize(const IntMatrix& b);

}  // namespace pfw
