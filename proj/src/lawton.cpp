#include "pfw/lawton.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "pfw/dilation.hpp"
#include "pfw/errors.hpp"

namespace pfw {

std::int64_t Mask::n0() const {
  std::int64_t n = 0;
  for (const Point& p : support) n = std::max(n, p.cwiseAbs().maxCoeff());
  return n;
}

double Mask::at(const Point& n) const {
  for (std::size_t i = 0; i < support.size(); ++i)
    if (support[i] == n) return coeffs[i];
  return 0.0;
}

std::vector<Point> support_box(const Point& lo, const Point& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw PreconditionError("bad support box");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (lo(i) > hi(i)) throw PreconditionError("empty support box");
  std::vector<Point> out;
  Point p = lo;
  for (;;) {
    out.push_back(p);
    Eigen::Index i = 0;
    while (i < p.size() && p(i) == hi(i)) {
      p(i) = lo(i);
      ++i;
    }
    if (i == p.size()) return out;
    ++p(i);
  }
}

namespace {

bool canonical(const Point& k) {
  for (Eigen::Index i = 0; i < k.size(); ++i)
    if (k(i) != 0) return k(i) > 0;
  return false;
}

template <class Scalar>
Vector<Scalar> residual_vec(const LawtonSystem& sys, const Vector<Scalar>& h) {
  using std::sqrt;
  Vector<Scalar> r(static_cast<Eigen::Index>(sys.rows()));
  for (std::size_t s = 0; s < sys.shifts.size(); ++s) {
    Scalar acc(0);
    for (auto [i, j] : sys.pairs[s]) acc += h(i) * h(j);
    r(s) = s == 0 ? Scalar(acc - Scalar(1)) : acc;
  }
  Scalar sum(0);
  for (Eigen::Index i = 0; i < h.size(); ++i) sum += h(i);
  r(r.size() - 1) = sum - sqrt(Scalar(2));
  return r;
}

template <class Scalar>
Matrix<Scalar> jacobian(const LawtonSystem& sys, const Vector<Scalar>& h) {
  const auto m = static_cast<Eigen::Index>(sys.rows());
  const auto n = static_cast<Eigen::Index>(sys.unknowns());
  Matrix<Scalar> jac = Matrix<Scalar>::Zero(m, n);
  for (std::size_t s = 0; s < sys.shifts.size(); ++s)
    for (auto [i, j] : sys.pairs[s]) {
      jac(s, i) += h(j);
      jac(s, j) += h(i);
    }
  for (Eigen::Index i = 0; i < n; ++i) jac(m - 1, i) = Scalar(1);
  return jac;
}

template <class Scalar>
Scalar max_abs(const Vector<Scalar>& v) {
  using std::abs;
  Scalar m(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max<Scalar>(m, abs(v(i)));
  return m;
}

Eigen::VectorXd levenberg_marquardt(const LawtonSystem& sys, Eigen::VectorXd h, int max_iter) {
  double lambda = 1e-3;
  Eigen::VectorXd r = residual_vec<double>(sys, h);
  double cost = r.squaredNorm();
  const auto n = h.size();
  for (int it = 0; it < max_iter && max_abs<double>(r) > 1e-15; ++it) {
    const Eigen::MatrixXd jac = jacobian<double>(sys, h);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      const Eigen::MatrixXd lhs = jtj + lambda * Eigen::MatrixXd::Identity(n, n);
      const Eigen::VectorXd step = lhs.ldlt().solve(-g);
      const Eigen::VectorXd trial = h + step;
      const Eigen::VectorXd rt = residual_vec<double>(sys, trial);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        h = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 3, 1e-12);
        accepted = true;
      } else {
        lambda *= 4;
      }
    }
    if (!accepted) break;
  }
  return h;
}

// Minimum-norm Gauss–Newton steps in quad precision. The Jacobian may be
// singular at the solution (a double root), where convergence is only linear;
// the extra precision keeps the iteration going long after double would stall.
Eigen::VectorXd polish(const LawtonSystem& sys, const Eigen::VectorXd& start) {
  Vector<Quad> h(start.size());
  for (Eigen::Index i = 0; i < start.size(); ++i) h(i) = Quad(start(i));
  Vector<Quad> r = residual_vec<Quad>(sys, h);
  Quad cost = r.squaredNorm();
  const Quad floor_cost("1e-60");
  for (int it = 0; it < 400 && cost > floor_cost; ++it) {
    const Matrix<Quad> jac = jacobian<Quad>(sys, h);
    const Vector<Quad> step = jac.completeOrthogonalDecomposition().solve(Vector<Quad>(-r));
    Quad t(1);
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings, t /= 2) {
      const Vector<Quad> trial = h + t * step;
      const Vector<Quad> rt = residual_vec<Quad>(sys, trial);
      const Quad ct = rt.squaredNorm();
      if (ct < cost) {
        h = trial;
        r = rt;
        cost = ct;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  Eigen::VectorXd out(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) out(i) = static_cast<double>(h(i));
  return out;
}

}  // namespace

LawtonSystem build_system(const std::vector<Point>& support, const IntMatrix& a) {
  if (support.empty()) throw PreconditionError("empty support");
  const Eigen::Index d = a.rows();
  std::map<Point, int, LexLess> index;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i].size() != d) throw PreconditionError("support dimension mismatch");
    if (!index.emplace(support[i], static_cast<int>(i)).second)
      throw PreconditionError("duplicate support point");
  }

  LawtonSystem sys;
  sys.a = a;
  sys.support = support;
  const DilationPowers dp(a);
  std::map<Point, std::vector<std::pair<int, int>>, LexLess> by_shift;
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < support.size(); ++j) {
      const Point k = support[j] - support[i];
      if (!(k.isZero() || canonical(k))) continue;
      if (!dp.in_image(1, k)) continue;
      by_shift[k].emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  const Point zero = Point::Zero(d);
  sys.shifts.push_back(zero);
  sys.pairs.push_back(by_shift[zero]);
  for (auto& [k, prs] : by_shift) {
    if (k.isZero()) continue;
    sys.shifts.push_back(k);
    sys.pairs.push_back(prs);
  }
  return sys;
}

Eigen::VectorXd residual(const Mask& mask, const LawtonSystem& sys) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.unknowns()));
  for (std::size_t m = 0; m < mask.support.size(); ++m) {
    bool found = false;
    for (std::size_t i = 0; i < sys.support.size() && !found; ++i)
      if (sys.support[i] == mask.support[m]) {
        h(i) = mask.coeffs[m];
        found = true;
      }
    if (!found) throw PreconditionError("mask support is not contained in the system support");
  }
  return residual_vec<double>(sys, h);
}

std::vector<Mask> solve(const LawtonSystem& sys, const SolveConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto n = static_cast<Eigen::Index>(sys.unknowns());

  struct Candidate {
    double res;
    Eigen::VectorXd h;
  };
  std::vector<Candidate> found;
  for (int rs = 0; rs < cfg.restarts; ++rs) {
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = unif(rng);
    h = levenberg_marquardt(sys, h, cfg.max_iter);
    if (max_abs<double>(residual_vec<double>(sys, h)) > 1e-5) continue;
    h = polish(sys, h);
    const double res = max_abs<double>(residual_vec<double>(sys, h));
    if (res <= cfg.tol) found.push_back({res, h});
  }

  std::sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
    if (x.res != y.res) return x.res < y.res;
    return std::lexicographical_compare(x.h.data(), x.h.data() + x.h.size(), y.h.data(),
                                        y.h.data() + y.h.size());
  });
  std::vector<Mask> out;
  std::vector<Eigen::VectorXd> kept;
  for (const auto& c : found) {
    bool dup = false;
    for (const auto& k : kept) dup = dup || (k - c.h).cwiseAbs().maxCoeff() <= 1e-6;
    if (dup) continue;
    kept.push_back(c.h);
    Mask m;
    m.dim = sys.a.rows();
    m.support = sys.support;
    m.coeffs.assign(c.h.data(), c.h.data() + c.h.size());
    m.verified_tol = cfg.tol;
    out.push_back(std::move(m));
  }
  return out;
}

VerifyResult verify(Mask& mask, const IntMatrix& a, double tol) {
  const LawtonSystem sys = build_system(mask.support, a);
  const Eigen::VectorXd r = residual(mask, sys);
  VerifyResult v;
  v.max_residual = r.cwiseAbs().maxCoeff();
  v.pass = v.max_residual <= tol;
  if (v.pass) mask.verified_tol = tol;
  return v;
}

}  // namespace pfw
