#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "pfw/errors.hpp"
#include "pfw/frame_verify.hpp"
#include "pfw/wavelet.hpp"

using namespace pfw;

namespace {

struct Stage {
  SampledFunction phi, phi_next, psi;
};

Stage stage(const Mask& h, const PartitionData& pd, int k) {
  Stage s;
  s.phi = init_indicator(pd.a);
  for (int i = 0; i < k; ++i) s.phi = cascade_step(s.phi, h);
  s.phi_next = cascade_step(s.phi, h);
  s.psi = build_wavelet(s.phi, h, pd);
  return s;
}

SampledFunction zero_like(const SampledFunction& f) {
  SampledFunction z = f;
  z.values.clear();
  return z;
}

// Table 1 stage used for the L_J checks.
constexpr int kTableStage = 4;

}  // namespace

TEST_CASE("analysis_coeff") {
  const PartitionData pd = fixtures::dyadic();
  const Mask h = fixtures::haar(1);
  const SampledFunction chi = init_indicator(pd.a);
  const Stage s3 = stage(h, pd, 3);
  CHECK(analysis_coeff(s3.psi, s3.psi, 0, make_point({0})) == doctest::Approx(1.0).epsilon(1e-15));

  const SampledFunction psi = build_wavelet(chi, h, pd);
  CHECK(analysis_coeff(chi, psi, -1, make_point({0})) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  SampledFunction far = chi;
  far.values = {{make_point({5}), 1.0}};
  CHECK(analysis_coeff(far, psi, 0, make_point({0})) == 0.0);
  CHECK(analysis_coeff(far, psi, 0, make_point({5})) == 0.0);  // Haar has zero mean
  CHECK(analysis_coeff(far, chi, 0, make_point({5})) == 1.0);

  CHECK_THROWS_AS(analysis_coeff(chi, init_indicator(fixtures::example2().a), 0, make_point({0})),
                  PreconditionError);
}

TEST_CASE("property: derived window is sound") {
  // every coefficient agrees with a direct inner product against the
  // synthesized translate, and translates just outside the window vanish
  const PartitionData pd = fixtures::example2();
  const Stage s = stage(fixtures::table1(1), pd, 2);
  const SampledFunction f = random_function(pd.a, 3, 17);
  for (int n : {0, 1, 2}) {
    const auto c = analysis_coeffs(f, s.phi, n);
    REQUIRE_FALSE(c.empty());
    for (const auto& [l, v] : c) {
      const double direct = inner_product(f, synthesize({{l, 1.0}}, s.phi, n));
      CHECK(std::abs(v - direct) < 1e-14);
    }
    for (const auto& [l, v] : c)
      for (Eigen::Index j = 0; j < 3; ++j)
        for (int sign : {-1, 1}) {
          const Point l2 = l + sign * unit_point(3, j);
          if (c.count(l2)) continue;
          CHECK(inner_product(f, synthesize({{l2, 1.0}}, s.phi, n)) == 0.0);
        }
  }
}

TEST_CASE("inner_product") {
  const SampledFunction chi = init_indicator(fixtures::dyadic().a);
  CHECK(inner_product(chi, chi) == 1.0);
  CHECK(inner_product(chi, refine(chi, 5)) == 1.0);
  const SampledFunction f = random_function(fixtures::dyadic().a, 4, 1);
  CHECK(inner_product(f, f) == doctest::Approx(l2_norm_sq(f)).epsilon(1e-15));
}

TEST_CASE("parseval_partial_sum") {
  const PartitionData pd = fixtures::dyadic();
  const Mask h = fixtures::haar(1);
  const SampledFunction chi = init_indicator(pd.a);
  const SampledFunction psi = build_wavelet(chi, h, pd);

  const PartialSum p = parseval_partial_sum(chi, psi, -20, 5);
  CHECK(std::abs(p.value - (1 - std::ldexp(1.0, -20))) <= 1e-5);
  CHECK(p.window.at(-3) == 1);
  CHECK(p.window.at(2) == 0);

  CHECK(parseval_partial_sum(zero_like(chi), psi, -5, 5).value == 0.0);
  CHECK(std::abs(parseval_partial_sum(psi, psi, -10, 10).value - 1) <= 1e-6);

  // nondecreasing as the window grows, bounded by |f|^2
  const SampledFunction f = random_function(pd.a, 4, 9);
  double last = 0;
  for (int r = 0; r <= 8; ++r) {
    const double v = parseval_partial_sum(f, psi, -r, r).value;
    CHECK(v >= last);
    CHECK(v <= l2_norm_sq(f) + 1e-9);
    last = v;
  }
}

TEST_CASE("lj_curve") {
  const PartitionData pd = fixtures::dyadic();
  const SampledFunction chi = init_indicator(pd.a);
  const auto haar = lj_curve(chi, chi, -10, 5);
  for (int J = 1; J <= 10; ++J) CHECK(std::abs(haar.at(-J) - std::ldexp(1.0, -J)) <= 1e-10);
  for (int J = 0; J <= 5; ++J) CHECK(haar.at(J) == 1.0);
  for (const auto& [J, v] : lj_curve(zero_like(chi), chi, -3, 3)) CHECK(v == 0.0);

  const PartitionData pd3 = fixtures::example1_a0();
  const SampledFunction chi3 = init_indicator(pd3.a);
  const auto haar3 = lj_curve(chi3, chi3, -6, 3);
  for (int J = 1; J <= 6; ++J) CHECK(std::abs(haar3.at(-J) - std::ldexp(1.0, -J)) <= 1e-10);
  for (int J = 0; J <= 3; ++J) CHECK(haar3.at(J) == 1.0);

  const Stage s = stage(fixtures::table1(1), fixtures::example2(), kTableStage);
  const auto t = lj_curve(init_indicator(fixtures::example2().a), s.phi, -8, 5);
  CHECK(t.at(-8) <= 0.05);
  for (int J = 0; J < 5; ++J) CHECK(t.at(J + 1) >= t.at(J));
  for (const auto& [J, v] : t) CHECK(v <= 1.0 + 1e-9);
}

// Example 2's matrix barely expands (|A^{-5}|_2 ~ 0.9), so L_J creeps toward
// |f|^2: L_5 ~ 0.37, L_16 ~ 0.82. Recorded expected failures.
TEST_CASE("Table 1 L_5(chi) >= 0.9" * doctest::should_fail()) {
  const Stage s = stage(fixtures::table1(1), fixtures::example2(), kTableStage);
  const auto t = lj_curve(init_indicator(fixtures::example2().a), s.phi, 5, 5);
  MESSAGE("L_5 = " << t.at(5));
  CHECK(t.at(5) >= 0.9);
}

TEST_CASE("Table 1 L_{-J}(chi) decreases in J" * doctest::should_fail()) {
  const Stage s = stage(fixtures::table1(1), fixtures::example2(), kTableStage);
  const auto t = lj_curve(init_indicator(fixtures::example2().a), s.phi, -8, 0);
  for (int J = 0; J < 8; ++J) CHECK(t.at(-J - 1) <= t.at(-J));
}

TEST_CASE("telescope_check") {
  SUBCASE("Haar on the line") {
    const PartitionData pd = fixtures::dyadic();
    for (int k : {0, 2}) {
      const Stage s = stage(fixtures::haar(1), pd, k);
      const SampledFunction f = random_function(pd.a, 4, 100 + k);
      for (int J : {0, 1}) {
        const TelescopeResult r = telescope_check(f, s.phi, s.phi_next, s.psi, J);
        CHECK(r.residual <= 1e-10);
        CHECK(std::abs(r.energy_residual) <= 1e-10);
      }
    }
  }
  SUBCASE("3-d Haar over A0") {
    const PartitionData pd = fixtures::example1_a0();
    const Stage s = stage(fixtures::haar(3, 2), pd, 1);
    const SampledFunction f = random_function(pd.a, 4, 5);
    for (int J : {0, 1}) CHECK(telescope_check(f, s.phi, s.phi_next, s.psi, J).residual <= 1e-10);
  }
  SUBCASE("Table 1 set 1") {
    const PartitionData pd = fixtures::example2();
    const Stage s = stage(fixtures::table1(1), pd, 2);
    const SampledFunction f = random_function(pd.a, 4, 3);
    for (int J : {0, 1}) {
      const TelescopeResult r = telescope_check(f, s.phi, s.phi_next, s.psi, J);
      CHECK(r.residual <= 1e-8);
      CHECK(std::abs(r.energy_residual) <= 1e-8);
      CHECK(r.wavelet_energy > 0);
    }
    CHECK(telescope_check(zero_like(f), s.phi, s.phi_next, s.psi, 0).residual == 0.0);
    CHECK_THROWS_AS(telescope_check(f, s.phi, s.phi, s.psi, 0), PreconditionError);
  }
}

TEST_CASE("random_function") {
  const auto a = random_function(fixtures::example2().a, 4, 11);
  const auto b = random_function(fixtures::example2().a, 4, 11);
  CHECK(a.values == b.values);
  CHECK(a.values.size() == 16);
  for (const auto& [m, v] : a.values) CHECK(std::abs(v) <= 1.0);
}
