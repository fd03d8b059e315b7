#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "pfw/cascade.hpp"
#include "pfw/errors.hpp"
#include "pfw/filter.hpp"

using namespace pfw;
using std::numbers::pi;

namespace {

// Example 1's mask moved to A0: translations S^{-1} n.
Mask example1_on_a0() {
  Mask m = fixtures::haar(3, 2);
  return m;
}

bool is_indicator_of_unit_cube(const SampledFunction& f) {
  if (f.values.size() != (std::size_t{1} << f.level)) return false;
  const DilationPowers dp(f.matrix);
  const auto dig = dp.digits(f.level);
  for (const Point& m : dig)
    if (f.at(m) != 1.0) return false;
  return true;
}

}  // namespace

TEST_CASE("init_indicator") {
  const auto f = init_indicator(fixtures::dyadic().a);
  CHECK(f.level == 0);
  CHECK(f.values.size() == 1);
  CHECK(l2_norm(f) == 1.0);
  CHECK(l2_norm(init_indicator(fixtures::example2().a)) == 1.0);
}

TEST_CASE("cascade_step") {
  const auto w = cascade_weights(fixtures::haar(1));
  CHECK(w.w[0] == 1.0);
  CHECK(w.w[1] == 1.0);

  const auto s1 = cascade_step(init_indicator(fixtures::dyadic().a), fixtures::haar(1));
  CHECK(s1.level == 1);
  REQUIRE(s1.values.size() == 2);
  CHECK(s1.at(make_point({0})) == 1.0);
  CHECK(s1.at(make_point({1})) == 1.0);

  const auto e1 = cascade_step(init_indicator(fixtures::example1_paper().a0), example1_on_a0());
  CHECK(is_indicator_of_unit_cube(e1));

  Mask zero = fixtures::haar(1);
  zero.coeffs = {0, 0};
  CHECK(cascade_step(init_indicator(fixtures::dyadic().a), zero).values.empty());

  CHECK_THROWS_AS(cascade_step(init_indicator(fixtures::dyadic().a), fixtures::haar(3)),
                  PreconditionError);
}

TEST_CASE("sample_at_level and refine") {
  const IntMatrix two = fixtures::dyadic().a;
  const auto p0 = sample_at_level(fixtures::haar(1), two, 0, 2);
  CHECK(p0.values.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(p0.at(make_point({i})) == 1.0);

  const auto s1 = cascade_step(init_indicator(two), fixtures::haar(1));
  const auto p1 = sample_at_level(fixtures::haar(1), two, 1, 1);
  CHECK(p1.values == s1.values);

  const auto p2 = sample_at_level(fixtures::haar(1), two, 2, 3);
  CHECK(p2.values.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(p2.at(make_point({i})) == 1.0);

  CHECK_THROWS_AS(sample_at_level(fixtures::haar(1), two, 3, 2), PreconditionError);

  // the two-index recurrence agrees with refining the iterate itself
  const Mask t1 = fixtures::table1(1);
  const IntMatrix a = fixtures::example2().a;
  auto phi = init_indicator(a);
  for (int k = 0; k < 3; ++k) phi = cascade_step(phi, t1);
  const auto direct = sample_at_level(t1, a, 3, 5);
  const auto refined = refine(phi, 5);
  CHECK(l2_distance(direct, refined) < 1e-13);
}

TEST_CASE("iterate") {
  const auto h = iterate(fixtures::haar(1), fixtures::dyadic().a, 8, 0);
  REQUIRE(h.diffs.size() == 8);
  for (double d : h.diffs) CHECK(d == 0.0);

  const IntMatrix a0 = fixtures::example1_paper().a0;
  const auto e1 = iterate(example1_on_a0(), a0, 6, 0);
  REQUIRE(e1.diffs.size() == 6);
  for (double d : e1.diffs) CHECK(d == 0.0);
  CHECK(is_indicator_of_unit_cube(e1.phi));

  const auto stop = iterate(fixtures::haar(1), fixtures::dyadic().a);
  CHECK(stop.converged);
  CHECK(stop.diffs.size() == 1);

  const auto t = iterate(fixtures::table1(1), fixtures::example2().a, 6, 0);
  REQUIRE(t.diffs.size() == 6);
  CHECK_FALSE(t.converged);
  CHECK(t.phi.level == 6);
  for (double d : t.diffs) CHECK(d <= 2.0);
  CHECK(l2_norm(t.phi) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("norm conservation along the Table 1 cascade") {
  for (int set : {1, 2}) {
    auto phi = init_indicator(fixtures::example2().a);
    for (int k = 1; k <= 6; ++k) {
      phi = cascade_step(phi, fixtures::table1(set));
      CHECK(l2_norm(phi) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

// Example 2's matrix barely expands (|A^{-4}|_2 ~ 1), so consecutive iterates
// stay nearly orthogonal through k = 6: the diffs hover around sqrt 2 and
// diffs[1] > diffs[0]. Kept as a recorded expected failure.
TEST_CASE("Table 1 set 1 cascade diffs decrease" * doctest::should_fail()) {
  const auto t = iterate(fixtures::table1(1), fixtures::example2().a, 6, 0);
  for (std::size_t k = 0; k < t.diffs.size(); ++k) MESSAGE("diff[" << k << "] = " << t.diffs[k]);
  for (std::size_t k = 1; k < t.diffs.size(); ++k) CHECK(t.diffs[k] < t.diffs[k - 1]);
}

TEST_CASE("translates_gram") {
  SUBCASE("Haar, exact") {
    auto f = init_indicator<Rational>(fixtures::dyadic().a);
    const auto w = exact_cascade_weights(fixtures::haar(1));
    for (int k = 0; k < 3; ++k) f = cascade_step(f, w);
    const auto g = translates_gram(f, {make_point({-1}), make_point({0}), make_point({1})});
    CHECK(same(g, RatMatrix::Identity(3, 3)));
    CHECK(l2_norm_sq(f) == Rational(1));
  }
  SUBCASE("3-d Haar over A0, exact") {
    auto f = init_indicator<Rational>(fixtures::example1_paper().a0);
    const auto w = exact_cascade_weights(example1_on_a0());
    for (int k = 0; k < 3; ++k) f = cascade_step(f, w);
    CHECK(same(translates_gram(f, offset_window(3, 1)), RatMatrix::Identity(27, 27)));
  }
  SUBCASE("Table 1 set 1") {
    const Mask t1 = fixtures::table1(1);
    auto phi = init_indicator(fixtures::example2().a);
    const auto window = offset_window(3, 1);
    for (int k = 1; k <= 3; ++k) {
      phi = cascade_step(phi, t1);
      const Eigen::MatrixXd g = translates_gram(phi, window);
      CHECK((g - Eigen::MatrixXd::Identity(27, 27)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("offset_window") {
  const auto w = offset_window(2, 1);
  REQUIRE(w.size() == 9);
  CHECK(w.front() == make_point({-1, -1}));
  CHECK(w[1] == make_point({-1, 0}));
  CHECK(w.back() == make_point({1, 1}));
}

TEST_CASE("support soundness") {
  const Mask t1 = fixtures::table1(1);
  const IntMatrix a = fixtures::example2().a;
  const SupportBound sb = support_bound(t1, a);
  auto phi = init_indicator(a);
  const auto inv = inverse_powers(a, 7, false);
  const auto weights = cascade_weights(t1);
  for (int k = 1; k <= 6; ++k) {
    // occupied cells of phi_k come only from the stencil of phi_{k-1}
    const DilationPowers dp(a);
    auto next = cascade_step(phi, weights);
    for (const auto& [m, v] : next.values) {
      bool reachable = false;
      for (const Point& n : t1.support)
        if (phi.values.count(Point(m - dp.apply(k - 1, n)))) reachable = true;
      CHECK(reachable);
    }
    phi = std::move(next);
    double worst_anchor = 0;
    for (const auto& [m, v] : phi.values)
      worst_anchor = std::max(worst_anchor, (inv[k] * m.cast<double>()).norm());
    CHECK(worst_anchor <= sb.radius);
    CHECK(worst_anchor + sb.inverse_norms[k] * std::sqrt(3.0) <= sb.iterate_radius(k) + 1e-12);
  }
}

TEST_CASE("Fourier transform of cell functions") {
  // chi_[0,1): (2 pi)^{-1/2} (1 - e^{-i xi}) / (i xi)
  const auto chi = init_indicator(fixtures::dyadic().a);
  const Eigen::VectorXd xi = Eigen::VectorXd::Constant(1, 1.3);
  const Complex want = (1.0 - std::exp(Complex(0, -1.3))) / Complex(0, 1.3) / std::sqrt(2 * pi);
  CHECK(std::abs(fourier_transform(chi, xi) - want) < 1e-15);
  CHECK(std::abs(fourier_transform(refine(chi, 4), xi) - want) < 1e-14);

  // the transform of phi_K is g_K times the cube transform at (A^T)^{-K} xi
  const Mask t1 = fixtures::table1(1);
  const IntMatrix a = fixtures::example2().a;
  auto phi = init_indicator(a);
  for (int k = 0; k < 4; ++k) phi = cascade_step(phi, t1);
  const ProductEvaluator g(t1, a, 4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = Eigen::Vector3d(u(rng), u(rng), u(rng));
    const Complex rhs = g(x) * cube_transform(Eigen::VectorXd(g.inverse_transpose_power(4) * x));
    CHECK(std::abs(fourier_transform(phi, x) - rhs) < 1e-12);
  }
}
