#include "pfw/cascade.hpp"

#include <cmath>
#include <numbers>

#include "pfw/filter.hpp"

namespace pfw {

CascadeWeights<double> cascade_weights(const Mask& mask) {
  if (mask.support.size() != mask.coeffs.size())
    throw PreconditionError("mask support and coefficient counts differ");
  CascadeWeights<double> w;
  w.support = mask.support;
  const Quad root2 = sqrt(Quad(2));
  for (double h : mask.coeffs) w.w.push_back(static_cast<double>(root2 * Quad(h)));
  return w;
}

CascadeWeights<Rational> exact_cascade_weights(const Mask& mask) {
  const auto w = cascade_weights(mask);
  CascadeWeights<Rational> out;
  out.support = w.support;
  for (double x : w.w) {
    // every finite double is a dyadic rational
    int e = 0;
    const double frac = std::frexp(x, &e);
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    Rational r(mant);
    const int shift = e - 53;
    if (shift >= 0)
      r *= Rational(Integer(1) << shift);
    else
      r /= Rational(Integer(1) << -shift);
    out.w.push_back(r);
  }
  return out;
}

SampledFunction cascade_step(const SampledFunction& phi, const Mask& mask) {
  if (mask.dim != phi.dim()) throw PreconditionError("mask dimension does not match the matrix");
  return cascade_step(phi, cascade_weights(mask));
}

SampledFunction sample_at_level(const Mask& mask, const IntMatrix& a, int k, int level) {
  if (k < 0 || level < k) throw PreconditionError("sample_at_level needs 0 <= k <= L");
  const auto w = cascade_weights(mask);
  SampledFunction v = refine(init_indicator(a), level - k);
  for (int j = 0; j < k; ++j) v = cascade_step(v, w);
  return v;
}

double l2_distance(const SampledFunction& f, const SampledFunction& g) {
  detail::require_same_matrix(f.matrix, g.matrix);
  if (f.level != g.level) throw PreconditionError("l2_distance needs a common level");
  if (f.tile != g.tile) throw PreconditionError("l2_distance needs a common tile");
  double s = 0;
  auto it = f.values.begin();
  auto jt = g.values.begin();
  const LexLess less;
  while (it != f.values.end() || jt != g.values.end()) {
    double d;
    if (jt == g.values.end() || (it != f.values.end() && less(it->first, jt->first))) {
      d = it->second;
      ++it;
    } else if (it == f.values.end() || less(jt->first, it->first)) {
      d = jt->second;
      ++jt;
    } else {
      d = it->second - jt->second;
      ++it;
      ++jt;
    }
    s += d * d;
  }
  return std::sqrt(std::ldexp(s, -f.level));
}

IterateResult iterate(const Mask& mask, const IntMatrix& a, int k_max, double eps) {
  return iterate(mask, init_indicator(a), k_max, eps);
}

IterateResult iterate(const Mask& mask, const SampledFunction& seed, int k_max, double eps) {
  if (k_max < 0) throw PreconditionError("negative iteration count");
  const auto w = cascade_weights(mask);
  IterateResult res;
  res.phi = seed;
  for (int k = 0; k < k_max; ++k) {
    SampledFunction next = cascade_step(res.phi, w);
    const int common = res.phi.level + 3;
    res.diffs.push_back(l2_distance(refine(res.phi, common), refine(next, common)));
    res.phi = std::move(next);
    if (eps > 0 && res.diffs.back() < eps) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::complex<double> cube_transform(const Eigen::VectorXd& s) {
  std::complex<double> out = 1;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double x = s(j);
    if (std::abs(x) < 1e-8)
      out *= std::complex<double>(1, -x / 2);
    else
      out *= (1.0 - std::exp(std::complex<double>(0, -x))) / std::complex<double>(0, x);
  }
  return out;
}

std::complex<double> fourier_transform(const SampledFunction& f, const Eigen::VectorXd& xi) {
  const Eigen::Index d = f.dim();
  if (xi.size() != d) throw PreconditionError("frequency has the wrong dimension");
  const Eigen::VectorXd eta = inverse_powers(f.matrix, f.level + 1, true).back() * xi;
  const Eigen::VectorXd s = f.tile.cast<double>().transpose() * eta;
  std::complex<double> sum = 0;
  for (const auto& [m, v] : f.values) {
    double phase = 0;
    for (Eigen::Index j = 0; j < d; ++j) phase += static_cast<double>(m(j)) * eta(j);
    sum += v * std::complex<double>(std::cos(phase), -std::sin(phase));
  }
  const double norm = std::pow(2 * std::numbers::pi, -static_cast<double>(d) / 2);
  return norm * std::ldexp(1.0, -f.level) * cube_transform(s) * sum;
}

std::vector<Point> offset_window(Eigen::Index d, int r) {
  std::vector<Point> out;
  Point p = Point::Constant(d, -r);
  while (true) {
    out.push_back(p);
    Eigen::Index j = d - 1;
    while (j >= 0 && p(j) == r) p(j--) = -r;
    if (j < 0) break;
    ++p(j);
  }
  return out;
}

}  // namespace pfw
