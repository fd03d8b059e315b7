#pragma once

#include "pfw/cascade.hpp"
#include "pfw/lawton.hpp"
#include "pfw/partition.hpp"

namespace pfw {

/// g_m = (-1)^{q·m} h_{ell - m} on ell - supp h, lexicographic order, role
/// "wavelet". Real masks only, so the conjugate is the identity.
Mask wavelet_mask(const Mask& mask, const PartitionData& pd);

/// One cascade step of phi with the wavelet mask: psi(t) = sqrt 2 sum g_n phi(At - n).
SampledFunction build_wavelet(const SampledFunction& phi, const Mask& mask, const PartitionData& pd);

/// Mask with translations S^{-1} n, for the cascade over A0 = S^{-1} A S.
Mask conjugate_mask(const Mask& mask, const PartitionData& pd);

/// U_S f = f(S ·), a function over A0. Level-k cells of f are A^{-k}(m + T Q);
/// their preimages under S are A0^{-k}(S^{-1} m + S^{-1} T Q), so the result
/// carries index S^{-1} m and tile S^{-1} T.
SampledFunction conjugate_to_original(const SampledFunction& f, const PartitionData& pd);

/// Unit cube seed in A0 coordinates, seen from A: chi_{S[0,1)^d}, i.e. tile S.
/// Cascading over A from here and conjugating back is the A0 cascade from the
/// unit cube.
SampledFunction init_conjugated_indicator(const PartitionData& pd);

/// |phi_k1 - cascade_step(phi_k, mask)|_2.
double two_scale_residual(const SampledFunction& phi_k, const SampledFunction& phi_k1,
                          const Mask& mask);

}  // namespace pfw
