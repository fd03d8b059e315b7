#include "pfw/frame_verify.hpp"

#include <cmath>
#include <random>

#include "pfw/errors.hpp"

namespace pfw {

namespace {

using CellMap = std::map<Point, double, LexLess>;

void require_compatible(const SampledFunction& f, const SampledFunction& g) {
  detail::require_same_matrix(f.matrix, g.matrix);
  if (f.tile != g.tile) throw PreconditionError("functions use different cell tiles");
}

int common_level(int alpha, int beta, const CoefficientOptions& opt) {
  const int level = alpha == beta ? alpha : std::max(alpha, beta) + opt.margin;
  if (level > opt.max_level) throw PreconditionError("common refinement level exceeds the limit");
  return level;
}

// f sampled at the level-L anchors and summed over the level-beta cell each
// anchor falls in (beta <= L).
CellMap aggregate(const SampledFunction& f, int beta, int level) {
  const SampledFunction fine = level == f.level ? f : refine(f, level);
  if (level == beta) return fine.values;
  const DilationPowers dp(f.matrix, f.tile);
  CellMap out;
  for (const auto& [m, v] : fine.values) out[dp.cell_index(level - beta, m)] += v;
  return out;
}

}  // namespace

SampledFunction dilate(const SampledFunction& f, int m) {
  if (f.level + m < 0) throw PreconditionError("dilation below level 0");
  SampledFunction out = f;
  out.level = f.level + m;
  const double scale = std::pow(2.0, m / 2.0);
  if (scale != 1.0)
    for (auto& [idx, v] : out.values) v *= scale;
  return out;
}

double inner_product(const SampledFunction& f, const SampledFunction& g, int margin) {
  require_compatible(f, g);
  CoefficientOptions opt;
  opt.margin = margin;
  // sample on the finer grid: aggregate the finer function onto the coarser one
  const SampledFunction& fine = f.level >= g.level ? f : g;
  const SampledFunction& coarse = f.level >= g.level ? g : f;
  const int level = common_level(fine.level, coarse.level, opt);
  const CellMap p = aggregate(fine, coarse.level, level);
  double s = 0;
  for (const auto& [idx, v] : p) {
    auto it = coarse.values.find(idx);
    if (it != coarse.values.end()) s += v * it->second;
  }
  return std::ldexp(s, -level);
}

namespace {

// Coefficients without the dilation factor: <f, D^n T_l g> = 2^{|n|/2} raw_l.
// Keeping the factor apart makes sums of squares exact powers of two times
// the raw sums.
CellMap raw_coeffs(const SampledFunction& f, const SampledFunction& g, int n,
                   const CoefficientOptions& opt) {
  require_compatible(f, g);
  // <f, D^n T_l g> = <D^{-n} f, T_l g>; dilate whichever side keeps levels >= 0
  SampledFunction F = f, G = g;
  if (n >= 0)
    G.level += n;
  else
    F.level -= n;
  const int shift_level = g.level;  // T_l moves g's level-s index by A^s l
  const int level = common_level(F.level, G.level, opt);
  const CellMap p = aggregate(F, G.level, level);

  const DilationPowers dp(f.matrix, f.tile);
  // index j = A^s cell(j) + residue(j); p - j ∈ A^s Z^d iff residues agree
  std::map<Point, std::vector<std::pair<Point, double>>, LexLess> buckets;
  for (const auto& [j, v] : G.values) {
    Point cell = dp.cell_index(shift_level, j);
    Point residue = j - dp.apply(shift_level, cell);
    buckets[residue].emplace_back(std::move(cell), v);
  }
  CellMap out;
  for (const auto& [idx, w] : p) {
    const Point cell = dp.cell_index(shift_level, idx);
    auto it = buckets.find(Point(idx - dp.apply(shift_level, cell)));
    if (it == buckets.end()) continue;
    for (const auto& [gcell, v] : it->second) out[Point(cell - gcell)] += w * v;
  }
  for (auto it = out.begin(); it != out.end();) {
    it->second = std::ldexp(it->second, -level);
    if (it->second == 0.0)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

double energy(const SampledFunction& f, const SampledFunction& g, int n,
              const CoefficientOptions& opt, std::size_t* count = nullptr) {
  const CellMap raw = raw_coeffs(f, g, n, opt);
  if (count) *count = raw.size();
  double s = 0;
  for (const auto& [l, v] : raw) s += v * v;
  return std::ldexp(s, std::abs(n));
}

}  // namespace

std::map<Point, double, LexLess> analysis_coeffs(const SampledFunction& f, const SampledFunction& g,
                                                 int n, const CoefficientOptions& opt) {
  CellMap c = raw_coeffs(f, g, n, opt);
  const double scale = std::pow(2.0, std::abs(n) / 2.0);
  if (scale != 1.0)
    for (auto& [l, v] : c) v *= scale;
  return c;
}

double analysis_coeff(const SampledFunction& f, const SampledFunction& g, int n, const Point& l,
                      const CoefficientOptions& opt) {
  const auto c = analysis_coeffs(f, g, n, opt);
  auto it = c.find(l);
  return it == c.end() ? 0.0 : it->second;
}

SampledFunction synthesize(const std::map<Point, double, LexLess>& coeffs, const SampledFunction& g,
                           int n) {
  if (n < 0) throw PreconditionError("synthesize needs n >= 0");
  const DilationPowers dp(g.matrix, g.tile);
  const SampledFunction G = dilate(g, n);
  SampledFunction out;
  out.matrix = g.matrix;
  out.tile = g.tile;
  out.level = G.level;
  for (const auto& [l, c] : coeffs) {
    const Point shift = dp.apply(g.level, l);
    for (const auto& [j, v] : G.values) out.values[Point(j + shift)] += c * v;
  }
  return out;
}

PartialSum parseval_partial_sum(const SampledFunction& f, const SampledFunction& psi, int n_lo,
                                int n_hi, const CoefficientOptions& opt) {
  PartialSum ps;
  ps.n_lo = n_lo;
  ps.n_hi = n_hi;
  for (int n = n_lo; n <= n_hi; ++n) {
    std::size_t count = 0;
    ps.value += energy(f, psi, n, opt, &count);
    ps.window[n] = count;
  }
  return ps;
}

std::map<int, double> lj_curve(const SampledFunction& f, const SampledFunction& phi, int j_lo,
                               int j_hi, const CoefficientOptions& opt) {
  std::map<int, double> out;
  for (int J = j_lo; J <= j_hi; ++J) out[J] = energy(f, phi, J, opt);
  return out;
}

TelescopeResult telescope_check(const SampledFunction& f, const SampledFunction& phi_k,
                                const SampledFunction& phi_k1, const SampledFunction& psi_k, int J,
                                const CoefficientOptions& opt) {
  if (J < 0) throw PreconditionError("telescope_check needs J >= 0");
  if (phi_k1.level != phi_k.level + 1 || psi_k.level != phi_k.level + 1)
    throw PreconditionError("stage mismatch: phi_{k+1} and psi_k must be one level finer than phi_k");
  const auto c_fine = analysis_coeffs(f, phi_k, J + 1, opt);
  const auto c_coarse = analysis_coeffs(f, phi_k1, J, opt);
  const auto c_wave = analysis_coeffs(f, psi_k, J, opt);

  TelescopeResult r;
  r.J = J;
  for (const auto& [l, v] : c_fine) r.lj_fine += v * v;
  for (const auto& [l, v] : c_coarse) r.lj_coarse += v * v;
  for (const auto& [l, v] : c_wave) r.wavelet_energy += v * v;
  r.energy_residual = r.lj_fine - r.lj_coarse - r.wavelet_energy;

  SampledFunction rhs = synthesize(c_coarse, phi_k1, J);
  for (const auto& [m, v] : synthesize(c_wave, psi_k, J).values) rhs.values[m] += v;
  r.residual = l2_distance(synthesize(c_fine, phi_k, J + 1), rhs);
  return r;
}

SampledFunction random_function(const IntMatrix& a, int level, std::uint64_t seed,
                                const Mat64& tile) {
  const DilationPowers dp(a, tile);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SampledFunction f;
  f.matrix = a;
  f.tile = tile;
  f.level = level;
  for (const Point& m : dp.digits(level)) f.values.emplace(m, u(rng));
  return f;
}

SampledFunction random_function(const IntMatrix& a, int level, std::uint64_t seed) {
  return random_function(a, level, seed, Mat64::Identity(a.rows(), a.rows()));
}

}  // namespace pfw
