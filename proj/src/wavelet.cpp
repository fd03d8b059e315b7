#include "pfw/wavelet.hpp"

#include <algorithm>
#include <numeric>

#include "pfw/errors.hpp"

namespace pfw {

namespace {

bool odd_parity(const IntVector& q, const Point& m) {
  Integer s = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) s += q(i) * m(i);
  return (s % 2) != 0;
}

void sort_mask(Mask& m) {
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  const LexLess less;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return less(m.support[a], m.support[b]); });
  Mask out = m;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.support[i] = m.support[order[i]];
    out.coeffs[i] = m.coeffs[order[i]];
  }
  m = std::move(out);
}

}  // namespace

Mask wavelet_mask(const Mask& mask, const PartitionData& pd) {
  if (mask.dim != pd.dim()) throw PreconditionError("mask dimension does not match the partition");
  const Point ell = to_point(pd.ell);
  Mask g;
  g.dim = mask.dim;
  g.role = "wavelet";
  g.verified_tol = mask.verified_tol;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const Point m = ell - mask.support[i];
    g.support.push_back(m);
    g.coeffs.push_back(odd_parity(pd.q, m) ? -mask.coeffs[i] : mask.coeffs[i]);
  }
  sort_mask(g);
  return g;
}

SampledFunction build_wavelet(const SampledFunction& phi, const Mask& mask, const PartitionData& pd) {
  detail::require_same_matrix(phi.matrix, pd.a);
  return cascade_step(phi, wavelet_mask(mask, pd));
}

Mask conjugate_mask(const Mask& mask, const PartitionData& pd) {
  if (mask.dim != pd.dim()) throw PreconditionError("mask dimension does not match the partition");
  const Mat64 s_inv = to_int64(pd.s_inv);
  Mask out = mask;
  for (Point& n : out.support) n = checked_apply(s_inv, n);
  sort_mask(out);
  return out;
}

SampledFunction conjugate_to_original(const SampledFunction& f, const PartitionData& pd) {
  detail::require_same_matrix(f.matrix, pd.a);
  const Mat64 s_inv = to_int64(pd.s_inv);
  SampledFunction out;
  out.matrix = pd.a0;
  out.level = f.level;
  out.tile = checked_product(s_inv, f.tile);
  for (const auto& [m, v] : f.values) out.values.emplace(checked_apply(s_inv, m), v);
  return out;
}

SampledFunction init_conjugated_indicator(const PartitionData& pd) {
  return init_indicator(pd.a, to_int64(pd.s));
}

double two_scale_residual(const SampledFunction& phi_k, const SampledFunction& phi_k1,
                          const Mask& mask) {
  if (phi_k1.level != phi_k.level + 1) throw PreconditionError("levels must differ by one");
  return l2_distance(phi_k1, cascade_step(phi_k, mask));
}

}  // namespace pfw
