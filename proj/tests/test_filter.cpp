#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "pfw/errors.hpp"
#include "pfw/filter.hpp"

using namespace pfw;
using std::numbers::pi;

TEST_CASE("eval_m0") {
  const Mask h = fixtures::haar(1);
  CHECK(std::abs(eval_m0(h, Eigen::VectorXd::Zero(1)) - 1.0) < 1e-15);
  CHECK(std::abs(eval_m0(h, Eigen::VectorXd::Constant(1, pi))) < 1e-15);

  const Mask t1 = fixtures::table1(1);
  double sum = 0;
  for (double c : t1.coeffs) sum += c;
  const Complex at0 = eval_m0(t1, Eigen::VectorXd::Zero(3));
  CHECK(std::abs(at0 - sum / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(at0 - 1.0) < 1e-9);

  // periodicity and agreement of the complex overload on real input
  const Eigen::VectorXd t = Eigen::Vector3d(0.3, -1.1, 2.0);
  for (Eigen::Index j = 0; j < 3; ++j) {
    const Eigen::VectorXd shifted = t + 2 * pi * Eigen::VectorXd::Unit(3, j);
    CHECK(std::abs(eval_m0(t1, t) - eval_m0(t1, shifted)) < 1e-13);
  }
  CHECK(std::abs(eval_m0(t1, t) - eval_m0_complex(t1, Eigen::VectorXcd(t.cast<Complex>()))) < 1e-14);
}

TEST_CASE("|m0| <= 1 on a grid") {
  const Mask t1 = fixtures::table1(1);
  double worst = 0;
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      for (int c = 0; c < 12; ++c) {
        const Eigen::VectorXd t = Eigen::Vector3d(a, b, c) * (2 * pi / 12) - Eigen::Vector3d::Constant(pi);
        worst = std::max(worst, std::abs(eval_m0(t1, t)));
      }
  CHECK(worst <= 1 + 1e-9);
}

TEST_CASE("check_qmf") {
  CHECK(check_qmf(fixtures::haar(1), fixtures::dyadic(), 200, 3).max_dev <= 1e-15);

  const QmfReport r = check_qmf(fixtures::table1(1), fixtures::example2(), 1000, 1);
  CHECK(r.max_dev < 1e-8);
  CHECK(r.samples == 1000 + 2 + 3);
  CHECK(r.seed == 1);

  Mask p = fixtures::haar(1);
  p.coeffs[0] += 0.1;
  CHECK(check_qmf(p, fixtures::dyadic(), 10, 1).max_dev > 0.01);
}

TEST_CASE("eval_g") {
  const Mask h = fixtures::haar(1);
  const IntMatrix two = from_rows({{2}});
  const double c = 1 / std::sqrt(2 * pi);
  CHECK(std::abs(eval_g(h, two, Eigen::VectorXd::Zero(1), 7) - c) < 1e-15);
  CHECK(std::abs(eval_g(h, two, Eigen::VectorXd::Constant(1, 1.0), 0) - c) < 1e-15);

  // prod_j cos(xi 2^{-j-1}) e^{-i xi 2^{-j-1}} -> e^{-i xi/2} sin(xi/2)/(xi/2)
  const Complex want = c * std::exp(Complex(0, -pi / 2)) * (std::sin(pi / 2) / (pi / 2));
  CHECK(std::abs(eval_g(h, two, Eigen::VectorXd::Constant(1, pi), 40) - want) < 1e-10);

  const Mask t1 = fixtures::table1(1);
  const IntMatrix a = fixtures::example2().a;
  ProductEvaluator g30(t1, a, 30), g40(t1, a, 40), g31(t1, a, 31);
  const double norm = std::pow(2 * pi, -1.5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd xi = Eigen::Vector3d(i, j, k) * (pi / 2) - Eigen::Vector3d::Constant(pi);
        const Complex step = eval_m0(t1, Eigen::VectorXd(g31.inverse_transpose_power(31) * xi));
        CHECK(std::abs(g31(xi) - step * g30(xi)) < 1e-15);
        // |prod a_j - prod b_j| <= sum |a_j - 1| when every factor has modulus <= 1
        double tail = 0;
        for (int J = 31; J <= 40; ++J)
          tail += std::abs(eval_m0(t1, Eigen::VectorXd(g40.inverse_transpose_power(J) * xi)) - 1.0);
        CHECK(std::abs(g30(xi) - g40(xi)) <= norm * tail * (1 + 1e-9) + 1e-15);
      }
}

// Example 2's matrix is only weakly expansive (|A^{-30}|_2 ~ 0.023), so the
// product has not settled to 1e-8 by J = 30. Kept as a recorded expected
// failure: if it ever passes, doctest reports it.
TEST_CASE("eval_g truncation J=30 vs J=40 within 1e-8 on the Table 1 mask" *
          doctest::should_fail()) {
  const Mask t1 = fixtures::table1(1);
  const IntMatrix a = fixtures::example2().a;
  ProductEvaluator g30(t1, a, 30), g40(t1, a, 40);
  double worst = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd xi = Eigen::Vector3d(i, j, k) * (pi / 2) - Eigen::Vector3d::Constant(pi);
        worst = std::max(worst, std::abs(g30(xi) - g40(xi)));
      }
  MESSAGE("max |g30 - g40| = " << worst);
  CHECK(worst <= 1e-8);
}

TEST_CASE("support_bound") {
  const SupportBound hb = support_bound(fixtures::haar(1), from_rows({{2}}));
  CHECK(hb.radius >= 1.0);
  CHECK(std::isfinite(hb.radius));
  CHECK(hb.radius == doctest::Approx(1.0).epsilon(1e-9));

  Mask single;
  single.dim = 3;
  single.support = {Point::Zero(3)};
  single.coeffs = {std::sqrt(2.0)};
  CHECK(support_bound(single, fixtures::example2().a).radius == 0);

  const SupportBound b2 = support_bound(fixtures::table1(1), fixtures::example2().a);
  CHECK(std::isfinite(b2.radius));
  CHECK(b2.radius > 0);
  CHECK(b2.contraction <= 0.9);
  CHECK(b2.iterate_radius(6) > b2.radius);
  CHECK(b2.iterate_radius(500) >= b2.radius);

  CHECK_THROWS_AS(support_bound(fixtures::haar(3), from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}})),
                  PreconditionError);
}
