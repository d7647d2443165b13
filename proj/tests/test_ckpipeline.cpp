#include <gtest/gtest.h>

#include "varkit/ckpipeline.hpp"

using namespace varkit;

namespace {

Density density(std::vector<std::size_t> sizes, std::vector<DyadicRational> mass, double p) {
  Density f;
  f.factor_sizes = std::move(sizes);
  f.mass = std::move(mass);
  f.phase.assign(f.mass.size(), 0.0);
  f.p = p;
  return f;
}

Density uniform_2x2(double p) { return density({2, 2}, std::vector<DyadicRational>(4, DyadicRational(1, 2)), p); }

}  // namespace

TEST(CellGrid, Examples) {
  const auto uni = make_instance(uniform_2x2(1.0), {0, 0}, {0, 0});
  const auto g11 = build_cell_grid(uni, 1, 1);
  for (const auto& m : g11.mass) EXPECT_EQ(m, Rational(1, 4));
  const auto g00 = build_cell_grid(uni, 0, 0);
  ASSERT_EQ(g00.mass.size(), 1U);
  EXPECT_EQ(g00.mass[0], 1);

  // Masses ((1/8, 1/8), (1/4, 1/2)): B^1_1 is atom 0 plus a third of atom 1,
  // C^1_1 is atom 0 plus a fifth of atom 1.
  const auto skew = make_instance(
      density({2, 2}, {DyadicRational(1, 3), DyadicRational(1, 3), DyadicRational(1, 2), DyadicRational(1, 1)}, 1.0),
      {0, 0}, {0, 0});
  const auto g = build_cell_grid(skew, 1, 1);
  EXPECT_EQ(g.at(0, 0), Rational(4, 15));
  EXPECT_EQ(g.at(0, 1), Rational(7, 30));
  EXPECT_EQ(g.at(1, 0), Rational(7, 30));
  EXPECT_EQ(g.at(1, 1), Rational(4, 15));
  EXPECT_EQ(g.total(), 1);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(g.mass_y1_times(k), Rational(1, 2));
    EXPECT_EQ(g.mass_times_y2(k), Rational(1, 2));
  }
}

TEST(CellGrid, MassIdentityOnRandomDensities) {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(1 + rng.below(4), 1 + rng.below(4), 1.5, 6, 4, rng);
    for (unsigned m = 0; m <= 4; ++m)
      for (unsigned n = 0; n <= 4; ++n) {
        const auto g = build_cell_grid(inst, m, n);
        ASSERT_EQ(g.total(), 1);
        const Rational row(1, boost::multiprecision::cpp_int(1) << n), col(1, boost::multiprecision::cpp_int(1) << m);
        for (std::size_t i = 0; i < g.cols(); ++i) ASSERT_EQ(g.mass_y1_times(i), row);
        for (std::size_t j = 0; j < g.rows(); ++j) ASSERT_EQ(g.mass_times_y2(j), col);
      }
  }
}

TEST(SMn, Examples) {
  const auto f = uniform_2x2(2.0);
  LinearContext zero(make_instance(f, {0, 0}, {0, 0}), OperatorSpec::zero(4));
  for (double v : s_mn_profile(zero, 1, 1, 2.0)) EXPECT_EQ(v, 0.0);

  LinearContext id(make_instance(f, {0, 0}, {0, 0}), OperatorSpec::identity(4));
  const auto s11 = s_mn_profile(id, 1, 1, 2.0);
  EXPECT_NEAR(s11[1], 0.5, 1e-15);

  Rng rng(43);
  auto inst = random_instance(3, 2, 1.0, 6, 3, rng);
  const auto fvals = inst.f.function().values;
  LinearContext dft(std::move(inst), OperatorSpec{Dft{6}});
  const auto tf = varkit::apply(OperatorSpec{Dft{6}}, fvals);
  const auto s00 = s_mn_profile(dft, 0, 0, 1.5);
  for (std::size_t x = 0; x < 6; ++x) EXPECT_NEAR(s00[x], std::abs(tf[x]), 1e-14);
}

TEST(PointwiseDomination, ConstantFamilyHasZeroLhs) {
  LinearContext zero(make_instance(uniform_2x2(1.0), {0, 1}, {1, 0}), OperatorSpec::zero(4));
  const std::vector<std::array<std::int64_t, 2>> chain{{0, 0}, {1, 1}, {2, 2}};
  const auto rep = verify_pointwise_domination(zero, 2.0, chain, 6);
  EXPECT_EQ(rep.max_lhs, 0.0);
  EXPECT_TRUE(rep.pass());
}

TEST(PointwiseDomination, SingleStepIsOneFragmentTerm) {
  Rng rng(47);
  auto inst = random_instance(2, 2, 1.0, 6, 2, rng);
  const auto levels = inst.levels;
  const auto fvals = inst.f.function();
  LinearContext ctx(std::move(inst), OperatorSpec::identity(4));
  const std::vector<std::array<std::int64_t, 2>> chain{{0, 0}, {2, 2}};
  const auto rep = verify_pointwise_domination(ctx, 2.0, chain, 6);
  const auto region = region_split(chain[0], chain[1])[0];
  std::vector<std::vector<double>> w{indicator_weights(levels[0], region.axes[0]),
                                     indicator_weights(levels[1], region.axes[1])};
  const auto term = restrict_product(fvals, w);
  for (const auto& r : rep.per_x) {
    EXPECT_NEAR(r.lhs_full, std::abs(term[r.x]), 1e-14);
    EXPECT_GE(r.slack, -1e-10);
  }
}

TEST(PointwiseDomination, RandomInstances) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto kase = random_domination_case(Rng::derive(53, t), 1.0, 4, 4, 3, 4);
    for (double r : {1.5, 2.0}) {
      const auto rep = verify_pointwise_domination(kase.ctx, r, kase.chain, 6);
      ASSERT_TRUE(rep.pass()) << "trial " << t << " slack " << rep.min_slack;
      ASSERT_LE(rep.max_reassembly_error, 1e-12);
    }
  }
}

TEST(PointwiseDomination, OtherRegionsAndDepthError) {
  auto kase = random_domination_case(Rng::derive(59, 0), 1.0, 4, 4, 3, 4);
  for (std::size_t mask : {1U, 3U}) EXPECT_TRUE(verify_pointwise_domination(kase.ctx, 2.0, kase.chain, 6, mask).pass());

  // Masses of level 6 need cells below level 1.
  const std::vector<std::array<std::int64_t, 2>> chain{{-1, -1}, {0, 0}, {1, 1}, {2, 2}, {3, 3}};
  bool threw = false;
  for (std::uint64_t t = 0; t < 20 && !threw; ++t) {
    auto k = random_domination_case(Rng::derive(61, t), 1.0, 4, 4, 3, 4);
    try {
      verify_pointwise_domination(k.ctx, 2.0, chain, 1);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::depth_insufficient);
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
}

TEST(NormChain, Examples) {
  LinearContext id(make_instance(uniform_2x2(1.0), {0, 0}, {0, 0}), OperatorSpec::identity(4));
  const ExponentConfig exps{{1.0}, 2.0, 2.0};
  const auto r00 = verify_norm_chain(id, exps, 0, 0);
  EXPECT_TRUE(r00.pass);
  EXPECT_DOUBLE_EQ(r00.bound, 1.0);

  const auto r11 = verify_norm_chain(id, exps, 1, 1);
  EXPECT_NEAR(r11.bound, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(r11.measured, 0.5, 1e-15);
  EXPECT_TRUE(r11.pass);

  // All mass on one atom of a lone-atom factor: the level-0 cell carries mass 1.
  const auto point = density({1, 2}, {DyadicRational::one(), DyadicRational::zero()}, 1.0);
  LinearContext conc(make_instance(point, {0}, {0, 0}), OperatorSpec::identity(2));
  const auto rc = verify_norm_chain(conc, exps, 0, 0);
  EXPECT_DOUBLE_EQ(rc.max_cell_mass, 1.0);
  EXPECT_DOUBLE_EQ(rc.cell_bound, certified_norm(conc.spec(), exps));
}

TEST(NormChain, RegistryOperators) {
  for (auto exps : {ExponentConfig{{1.0}, 2.0, 2.0}, ExponentConfig{{1.5}, 3.0, 2.0}}) {
    Rng rng(67);
    for (auto kind : kRegistryKinds) {
      auto inst = random_instance(2, 4, exps.p_at(0), 6, 3, rng);
      LinearContext ctx(std::move(inst), registry_operator(kind, 8, rng));
      for (unsigned m = 0; m <= 4; ++m)
        for (unsigned n = 0; n <= 4; ++n) ASSERT_TRUE(verify_norm_chain(ctx, exps, m, n).pass) << to_string(kind);
    }
  }
}

TEST(Constants, Examples) {
  const auto c = constants({{1.0}, 2.0, 2.0});
  EXPECT_NEAR(c.ck_maximal_constant, 1.0 / (1.0 - std::pow(2.0, -0.5)), 1e-12);
  EXPECT_NEAR(c.ck_maximal_constant, 3.41421356, 1e-8);

  // Partial geometric sums to machine convergence.
  double s = 0.0;
  for (int m = 1; m < 4000; ++m) s += std::pow(2.0, -m * 0.25);
  EXPECT_NEAR(c.a_constant, s * s, 1e-9 * s * s);
  EXPECT_NEAR(c.a_constant, 27.93, 0.01);

  try {
    constants({{2.0}, 2.0, 3.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_exponent);
  }
}

TEST(Constants, Monotonicity) {
  double previous = 0.0;
  for (double r : {4.0, 3.0, 2.0, 1.5, 1.2, 1.1, 1.01}) {
    const auto c = constants({{1.0}, 8.0, r});
    EXPECT_GT(c.a_constant, previous);
    EXPECT_TRUE(std::isfinite(c.a_constant));
    previous = c.a_constant;
  }
  previous = 0.0;
  for (double p : {1.0, 1.2, 1.5, 1.8, 1.95}) {
    const auto c = constants({{p}, 4.0, 2.0});
    EXPECT_GT(c.a_constant, previous);
    previous = c.a_constant;
  }
  const std::vector<double> ps{1.0, 1.0};
  EXPECT_NEAR(multilinear_budget(ps, 2.0, 1), constants({{1.0}, 2.0, 2.0}).a_constant, 1e-9);
}

TEST(BoundTrial, ZeroOperator) {
  BoundTrialConfig cfg;
  cfg.op = OperatorSpec::zero(8);
  cfg.trials = 10;
  const auto rep = bound_trial(cfg);
  EXPECT_EQ(rep.max_ratio, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(BoundTrial, IdentityAndBilinear) {
  BoundTrialConfig cfg;
  cfg.trials = 100;
  cfg.seed = 71;
  const auto rep = bound_trial(cfg);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_ratio, constants(cfg.exps).a_constant);
  EXPECT_LE(rep.max_maximal_ratio, constants(cfg.exps).ck_maximal_constant);
  EXPECT_EQ(rep.max_oracle_gap, 0.0);

  Rng rng(73);
  BilinearKernel k;
  for (int i = 0; i < 4; ++i) {
    k.g.push_back(rng.unit_disk());
    k.u.push_back(rng.unit_disk());
    k.v.push_back(rng.unit_disk());
  }
  BoundTrialConfig bil;
  bil.op = OperatorSpec{k};
  bil.exps = {{1.0, 1.0}, 2.0, 2.0};
  bil.slots = {{4}, {4}};
  bil.max_level = 2;
  bil.trials = 50;
  const auto rb = bound_trial(bil);
  EXPECT_TRUE(rb.pass);
  EXPECT_LT(rb.max_oracle_gap, 1e-12);
}

TEST(Sharpness, ExtremalSequence) {
  EXPECT_EQ(explicit_chain_lower_bound(0.5, 1.5), 0.0);
  EXPECT_TRUE(extremal_sequence(0.5).empty());
  for (double x : {10.0, 37.5, -120.0}) {
    const auto seq = extremal_sequence(x);
    ASSERT_GE(seq.size(), 2U);
    for (std::size_t l = 1; l < seq.size(); ++l)
      EXPECT_NEAR(std::abs(truncated_sinc(seq[l], x) - truncated_sinc(seq[l - 1], x)),
                  2.0 / (std::numbers::pi * std::abs(x)), 1e-12);
  }
}

TEST(Sharpness, DominatesLowerBoundAndDecays) {
  const std::vector<double> xs{10.0, 31.6, 100.0, 316.0};
  const auto rep = sharpness_experiment(1.5, xs, 500);
  EXPECT_TRUE(rep.dominates_lower_bound);
  EXPECT_LT(rep.slope, 0.0);
  for (const auto& row : rep.rows) EXPECT_LE(row.v_r[0], row.v_p + 1e-12);
  EXPECT_THROW(sharpness_experiment(2.5, xs, 10), Error);
}

TEST(Fourier, Examples) {
  CoefficientArray delta;
  delta.dims = 2;
  delta.set({0, 0}, 1.0);
  EXPECT_NEAR(fourier_variation_ratio(delta, 1.5, 2.0, 3, 16), 0.0, 1e-15);

  CoefficientArray single;
  single.dims = 2;
  single.set({1, 1}, Complex(0.6, -0.8));
  EXPECT_NEAR(fourier_variation_ratio(single, 1.5, 2.0, 3, 16), 1.0, 1e-12);

  FourierConfig cfg;
  cfg.draws = 5;
  cfg.points = 16;
  const auto rep = fourier_variation_experiment(cfg);
  EXPECT_TRUE(rep.pass);
}
