#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pfw/cascade.hpp"

namespace pfw {

/// D^n T_l g (t) = 2^{n/2} g(A^n t - l) for |det A| = 2.
///
/// Coefficients are inner products of cell functions. When both sides live on
/// the same level the sum is exact; otherwise f is point-sampled on the finer
/// level plus `margin` and g is read at those anchors, which is exact whenever
/// the tilings nest (the dyadic and Example 1 cases) and a quadrature otherwise.
struct CoefficientOptions {
  int margin = 2;
  /// Refuse common levels above this.
  int max_level = 40;
};

/// All nonzero <f, D^n T_l g>, keyed by l. The window of l is derived from
/// the supports, so every l not returned has coefficient exactly 0.
std::map<Point, double, LexLess> analysis_coeffs(const SampledFunction& f, const SampledFunction& g,
                                                 int n, const CoefficientOptions& opt = {});

double analysis_coeff(const SampledFunction& f, const SampledFunction& g, int n, const Point& l,
                      const CoefficientOptions& opt = {});

/// sum_l c_l D^n T_l g as a cell function on g.level + n (n >= 0).
SampledFunction synthesize(const std::map<Point, double, LexLess>& coeffs, const SampledFunction& g,
                           int n);

struct PartialSum {
  double value = 0;
  int n_lo = 0, n_hi = 0;
  /// Number of translates l with a nonzero coefficient, per scale n.
  std::map<int, std::size_t> window;
};

/// sum_{n_lo <= n <= n_hi} sum_l |<f, D^n T_l psi>|^2.
PartialSum parseval_partial_sum(const SampledFunction& f, const SampledFunction& psi, int n_lo,
                                int n_hi, const CoefficientOptions& opt = {});

/// L_J(f) = sum_l |<f, D^J T_l phi>|^2 for J_lo <= J <= J_hi.
std::map<int, double> lj_curve(const SampledFunction& f, const SampledFunction& phi, int j_lo,
                               int j_hi, const CoefficientOptions& opt = {});

struct TelescopeResult {
  int J = 0;
  /// |I_{J+1}[phi_k] - I_J[phi_{k+1}] - F_J[psi_k]|_2
  double residual = 0;
  /// L_{J+1}[phi_k] - L_J[phi_{k+1}] - sum_l |<f, D^J T_l psi_k>|^2
  double energy_residual = 0;
  double lj_fine = 0, lj_coarse = 0, wavelet_energy = 0;
};

/// The stage-k telescoping identity. With I_J[phi] f = sum_l <f, D^J T_l phi> D^J T_l phi
/// and F_J the same with psi, the two-scale relations
///   phi_{k+1} = sum h_n D T_n phi_k,  psi_k = sum g_n D T_n phi_k
/// and the Lawton equations give I_{J+1}[phi_k] = I_J[phi_{k+1}] + F_J[psi_k]
/// at every finite stage. Requires J >= 0.
TelescopeResult telescope_check(const SampledFunction& f, const SampledFunction& phi_k,
                                const SampledFunction& phi_k1, const SampledFunction& psi_k, int J,
                                const CoefficientOptions& opt = {});

struct FrameReport {
  double f_norm_sq = 0;
  std::vector<PartialSum> parseval_partial;
  std::map<int, double> lj_curve;
  std::vector<TelescopeResult> telescope;
  // error sources, reported separately
  double lawton_residual = 0;
  double stage_diff = 0;
  int quadrature_margin = 2;
};

/// Values uniform in [-1, 1] on the 2^level level-`level` cells of the unit
/// cell T[0,1)^d.
SampledFunction random_function(const IntMatrix& a, int level, std::uint64_t seed,
                                const Mat64& tile);
SampledFunction random_function(const IntMatrix& a, int level, std::uint64_t seed);

/// D^m f = 2^{m/2} f(A^m ·): same indices, level shifted by m.
SampledFunction dilate(const SampledFunction& f, int m);

/// <f, g> at their common level (exact), or sampled at the finer level plus margin.
double inner_product(const SampledFunction& f, const SampledFunction& g, int margin = 2);

}  // namespace pfw
