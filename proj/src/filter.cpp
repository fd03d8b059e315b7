#include "pfw/filter.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "pfw/errors.hpp"
#include "pfw/lattice_algebra.hpp"

namespace pfw {

namespace {

constexpr double kPi = std::numbers::pi;

double operator_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Generalized golden ratio: the positive root of x^{d+1} = x + 1.
double kronecker_root(Eigen::Index d) {
  double x = 2.0;
  for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
  return x;
}

}  // namespace

Complex eval_m0_complex(const Mask& mask, const Eigen::VectorXcd& t) {
  Complex s = 0;
  for (std::size_t i = 0; i < mask.support.size(); ++i) {
    Complex phase = 0;
    for (Eigen::Index j = 0; j < t.size(); ++j)
      phase += static_cast<double>(mask.support[i](j)) * t(j);
    s += mask.coeffs[i] * std::exp(Complex(0, -1) * phase);
  }
  return s / std::sqrt(2.0);
}

Complex eval_m0(const Mask& mask, const Eigen::VectorXd& t) {
  Complex s = 0;
  for (std::size_t i = 0; i < mask.support.size(); ++i) {
    double phase = 0;
    for (Eigen::Index j = 0; j < t.size(); ++j)
      phase += static_cast<double>(mask.support[i](j)) * t(j);
    s += mask.coeffs[i] * Complex(std::cos(phase), -std::sin(phase));
  }
  return s / std::sqrt(2.0);
}

QmfReport check_qmf(const Mask& mask, const PartitionData& pd, int samples, std::uint64_t seed) {
  const Eigen::Index d = pd.dim();
  Eigen::VectorXd q(d);
  for (Eigen::Index i = 0; i < d; ++i) q(i) = static_cast<double>(pd.q(i));

  QmfReport rep;
  rep.seed = seed;
  auto probe = [&](const Eigen::VectorXd& t) {
    const double a = std::norm(eval_m0(mask, t));
    const double b = std::norm(eval_m0(mask, Eigen::VectorXd(t + kPi * q)));
    rep.max_dev = std::max(rep.max_dev, std::abs(a + b - 1.0));
    ++rep.samples;
  };

  probe(Eigen::VectorXd::Zero(d));
  probe(kPi * q);
  for (Eigen::Index j = 0; j < d; ++j) probe(kPi * Eigen::VectorXd::Unit(d, j));

  const double g = kronecker_root(d);
  Eigen::VectorXd alpha(d);
  for (Eigen::Index j = 0; j < d; ++j) alpha(j) = std::fmod(std::pow(1.0 / g, double(j + 1)), 1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd shift(d);
  for (Eigen::Index j = 0; j < d; ++j) shift(j) = unif(rng);
  for (int k = 1; k <= samples; ++k) {
    Eigen::VectorXd t(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double x = shift(j) + k * alpha(j);
      t(j) = 2 * kPi * (x - std::floor(x)) - kPi;
    }
    probe(t);
  }
  return rep;
}

std::vector<Eigen::MatrixXd> inverse_powers(const IntMatrix& a, int count, bool transpose) {
  RatMatrix inv = inverse_exact(a);
  if (transpose) {
    RatMatrix t(inv.cols(), inv.rows());
    t = inv.transpose();
    inv = t;
  }
  std::vector<Eigen::MatrixXd> out;
  RatMatrix p = RatMatrix::Identity(a.rows(), a.cols());
  for (int j = 0; j < count; ++j) {
    out.push_back(to_double(p));
    p = exact_product(p, inv);
  }
  return out;
}

ProductEvaluator::ProductEvaluator(const Mask& mask, const IntMatrix& a, int J) : mask_(&mask) {
  if (J < 0) throw PreconditionError("negative truncation depth");
  auto p = inverse_powers(a, J + 1, true);
  powers_.assign(p.begin() + 1, p.end());
}

Complex ProductEvaluator::operator()(const Eigen::VectorXd& xi) const {
  const double d = static_cast<double>(xi.size());
  Complex g = std::pow(2 * kPi, -d / 2);
  for (const auto& p : powers_) g *= eval_m0(*mask_, Eigen::VectorXd(p * xi));
  return g;
}

Complex eval_g(const Mask& mask, const IntMatrix& a, const Eigen::VectorXd& xi, int J) {
  return ProductEvaluator(mask, a, J)(xi);
}

double SupportBound::iterate_radius(int k) const {
  const int top = static_cast<int>(inverse_norms.size()) - 1;
  double factor = 1.0;
  while (k > top) {
    factor *= contraction;
    k -= block;
  }
  return radius + factor * inverse_norms[k] * std::sqrt(static_cast<double>(dim));
}

SupportBound support_bound(const Mask& mask, const IntMatrix& a) {
  if (classify_expansive(a) != Expansiveness::Expansive)
    throw PreconditionError("support bound needs an expansive matrix");
  const Eigen::Index d = a.rows();
  SupportBound sb;
  sb.dim = d;
  sb.n0 = mask.n0();
  sb.b0 = 2 * std::sqrt(static_cast<double>(d)) * static_cast<double>(sb.n0);
  for (const Point& n : mask.support)
    sb.max_shift = std::max(sb.max_shift, n.cast<double>().norm());

  constexpr double kContraction = 0.9;
  constexpr int kMaxSearch = 400;
  constexpr int kExplicitTerms = 40;
  RatMatrix inv = inverse_exact(a);
  RatMatrix p = RatMatrix::Identity(d, d);
  sb.inverse_norms.push_back(1.0);
  sb.block = 0;
  for (int j = 1;; ++j) {
    p = exact_product(p, inv);
    const double nrm = operator_norm(to_double(p));
    sb.inverse_norms.push_back(nrm);
    if (sb.block == 0 && nrm <= kContraction) {
      sb.block = j;
      sb.contraction = nrm;
    }
    if (sb.block == 0 && j >= kMaxSearch)
      throw PreconditionError("no power of A^{-1} contracts; A is not expansive");
    if (sb.block != 0 && j >= 2 * sb.block + kExplicitTerms) break;
  }
  // Explicit terms j = 1..J, then sum_{j>J} |A^{-j}| <= sum_{r=1..p} |A^{-(J+r)}| / (1 - c).
  const int J = sb.block + kExplicitTerms;
  sb.tail_start = J + 1;
  double explicit_sum = 0;
  for (int j = 1; j <= J; ++j) {
    sb.terms.push_back(sb.inverse_norms[j] * sb.max_shift);
    explicit_sum += sb.inverse_norms[j];
  }
  double block_sum = 0;
  for (int r = 1; r <= sb.block; ++r) block_sum += sb.inverse_norms[J + r];
  sb.tail = block_sum / (1 - sb.contraction) * sb.max_shift;
  sb.radius = explicit_sum * sb.max_shift + sb.tail;
  sb.inverse_norms.resize(J + sb.block + 1);
  return sb;
}

}  // namespace pfw
