#include <gtest/gtest.h>

#include "oracles.hpp"
#include "varkit/sampling.hpp"
#include "varkit/transport.hpp"

using namespace varkit;

namespace {

FiltrationSpace space_of(std::vector<DyadicRational> masses, Filtration levels) {
  return FiltrationSpace::from_masses(masses, levels);
}

oracle::Fraction frac(const DyadicRational& d) {
  return oracle::Fraction(d.numerator(), boost::multiprecision::cpp_int(1) << d.level());
}

/// Pieces merged per atom into exact covered fractions, keyed by atom id.
std::map<std::int64_t, Rational> as_set(const MeasureTransport& t, const std::vector<Piece>& pieces) {
  std::map<std::int64_t, Rational> out;
  for (const auto& p : pieces) out[p.atom_id] += to_rational(p.length()) / to_rational(t.segment(p.atom_id).length());
  return out;
}

}  // namespace

TEST(FiltrationSpace, RejectsBadMasses) {
  try {
    space_of({DyadicRational(1, 1), DyadicRational(1, 2)}, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_normalized);
  }
  EXPECT_THROW(FiltrationSpace({{0, DyadicRational(1, 1), 0}, {0, DyadicRational(1, 1), 1}}), Error);
}

TEST(FiltrationSpace, OrdersAtomsByLevelThenId) {
  const auto s = space_of({DyadicRational(1, 2), DyadicRational(1, 2), DyadicRational(1, 1)}, {2, 0, 0});
  std::vector<std::int64_t> ids;
  for (const auto& a : s.atoms()) ids.push_back(a.id);
  EXPECT_EQ(ids, (std::vector<std::int64_t>{1, 2, 0}));
  EXPECT_EQ(s.measure(0), DyadicRational(3, 2));
  EXPECT_EQ(s.members(0), (std::vector<std::int64_t>{1, 2}));
}

TEST(MarginalMeasures, Examples) {
  const std::vector<DyadicRational> uniform(4, DyadicRational(1, 2));
  auto [u1, u2] = marginal_measures(ProductMasses{2, 2, uniform}, {0, 0}, {0, 0});
  EXPECT_EQ(u1.atom(0).mass, DyadicRational(1, 1));
  EXPECT_EQ(u2.atom(1).mass, DyadicRational(1, 1));

  const ProductMasses w{2, 2, {DyadicRational(1, 3), DyadicRational(1, 3), DyadicRational(1, 2), DyadicRational(1, 1)}};
  auto [l1, l2] = marginal_measures(w, {0, 0}, {0, 0});
  EXPECT_EQ(l1.atom(0).mass, DyadicRational(1, 2));
  EXPECT_EQ(l1.atom(1).mass, DyadicRational(3, 2));
  EXPECT_EQ(l2.atom(0).mass, DyadicRational(3, 3));
  EXPECT_EQ(l2.atom(1).mass, DyadicRational(5, 3));

  const std::vector<double> short_mass{0.25, 0.25, 0.25, 0.15};
  try {
    marginal_measures(short_mass, 2, 2, {0, 0}, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_normalized);
  }
  const std::vector<double> ok{0.125, 0.125, 0.25, 0.5};
  EXPECT_NO_THROW(marginal_measures(ok, 2, 2, {0, 0}, {0, 0}));
}

TEST(BuildTransport, Examples) {
  const auto halves = build_transport(space_of({DyadicRational(1, 1), DyadicRational(1, 1)}, {0, 0}));
  ASSERT_EQ(halves.segments().size(), 2U);
  EXPECT_EQ(halves.segments()[0].hi, DyadicRational(1, 1));
  EXPECT_EQ(halves.segments()[1].lo, DyadicRational(1, 1));
  EXPECT_EQ(halves.segments()[1].hi, DyadicRational::one());

  const auto single = build_transport(space_of({DyadicRational::one()}, {0}));
  ASSERT_EQ(single.segments().size(), 1U);
  EXPECT_EQ(single.segments()[0].length(), DyadicRational::one());

  const auto skew = build_transport(space_of({DyadicRational(1, 2), DyadicRational(3, 2)}, {0, 1}));
  const auto pre = skew.preimage(DyadicRational::zero(), skew.measure(0));
  ASSERT_EQ(pre.size(), 1U);
  EXPECT_EQ(pre[0].atom_id, 0);
  EXPECT_EQ(pre[0].length(), DyadicRational(1, 2));
}

TEST(CellPreimage, Examples) {
  const auto halves = build_transport(space_of({DyadicRational(1, 1), DyadicRational(1, 1)}, {0, 0}));
  const auto c = cell_preimage(halves, DyadicInterval(1, 1));
  ASSERT_EQ(c.parts.size(), 1U);
  EXPECT_EQ(c.parts[0].atom_id, 0);
  EXPECT_EQ(c.parts[0].length(), DyadicRational(1, 1));

  const auto skew = build_transport(space_of({DyadicRational(1, 2), DyadicRational(3, 2)}, {0, 0}));
  const auto split = cell_preimage(skew, DyadicInterval(1, 2));
  ASSERT_EQ(split.parts.size(), 1U);
  EXPECT_EQ(split.parts[0].atom_id, 1);
  EXPECT_EQ(split.parts[0].lo, DyadicRational(1, 1));
  EXPECT_EQ(split.parts[0].hi, DyadicRational::one());
  EXPECT_EQ(skew.coverage(split.parts, 2)[1], Rational(2, 3));

  const auto root = cell_preimage(skew, DyadicInterval::root());
  EXPECT_EQ(root.mass(), DyadicRational::one());
}

TEST(DecomposeDifference, Examples) {
  // Levels chosen so lambda(Y_0) = 1/4 and lambda(Y_1) = 7/8.
  const auto t = build_transport(
      space_of({DyadicRational(1, 2), DyadicRational(5, 3), DyadicRational(1, 3)}, {0, 1, 2}));
  const auto d = decompose_difference(t, 0, 1);
  ASSERT_EQ(d.right_cells.size(), 1U);
  ASSERT_EQ(d.left_cells.size(), 2U);
  EXPECT_EQ(d.right_cells[0].tag, DyadicInterval(2, 2));
  EXPECT_EQ(d.left_cells[0].tag, DyadicInterval(2, 3));
  EXPECT_EQ(d.left_cells[1].tag, DyadicInterval(3, 7));

  const auto all = decompose_difference(t, -1, 2);
  ASSERT_EQ(all.left_cells.size(), 1U);
  EXPECT_EQ(all.left_cells[0].tag, DyadicInterval::root());
  EXPECT_TRUE(all.right_cells.empty());

  const auto none = decompose_difference(t, 1, 1);
  EXPECT_TRUE(none.left_cells.empty() && none.right_cells.empty());
  EXPECT_THROW(decompose_difference(t, 2, 1), Error);
}

// Random spaces: cell masses, partition and refinement, filtration compatibility,
// difference reassembly, all checked exactly against an independent layout.
TEST(TransportProperties, RandomSpaces) {
  Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t atoms = 1 + rng.below(8);
    const auto space = random_filtration_space(atoms, 6, 4, rng);
    const auto t = build_transport(space);

    std::vector<oracle::Fraction> mass(atoms);
    std::vector<std::int64_t> level(atoms);
    for (const auto& a : space.atoms()) {
      mass[static_cast<std::size_t>(a.id)] = frac(a.mass);
      level[static_cast<std::size_t>(a.id)] = a.filt_level;
    }
    const auto lay = oracle::layout(mass, level);

    for (unsigned m = 0; m <= 6; ++m) {
      std::vector<Rational> tiled(atoms);
      for (std::uint64_t j = 1; j <= (std::uint64_t{1} << m); ++j) {
        const DyadicInterval iv(m, j);
        const auto cell = cell_preimage(t, iv);
        ASSERT_EQ(cell.mass(), iv.length());
        const auto expected = oracle::overlap(lay, frac(iv.lower()), frac(iv.upper()));
        const auto cov = t.coverage(cell.parts, atoms);
        for (std::size_t y = 0; y < atoms; ++y) {
          ASSERT_EQ(cov[y], expected[y]);
          tiled[y] += cov[y];
        }
        if (m < 6) {
          const auto kids = iv.children();
          const auto a = t.coverage(cell_preimage(t, kids.first).parts, atoms);
          const auto b = t.coverage(cell_preimage(t, kids.second).parts, atoms);
          for (std::size_t y = 0; y < atoms; ++y) ASSERT_EQ(a[y] + b[y], cov[y]);
        }
      }
      for (std::size_t y = 0; y < atoms; ++y) ASSERT_EQ(tiled[y], 1);
    }

    for (std::int64_t n = -1; n <= 5; ++n) {
      const auto pre = as_set(t, t.preimage(DyadicRational::zero(), t.measure(n)));
      std::map<std::int64_t, Rational> expected;
      for (const auto& a : space.atoms())
        if (a.filt_level <= n) expected[a.id] = 1;
      ASSERT_EQ(pre, expected);
      for (std::int64_t m = -1; m <= n; ++m) {
        const auto d = decompose_difference(t, m, n);
        std::vector<Piece> parts;
        DyadicRational total;
        for (const auto* side : {&d.left_cells, &d.right_cells})
          for (const auto& c : *side) {
            parts.insert(parts.end(), c.parts.begin(), c.parts.end());
            total = total + c.mass();
          }
        std::map<std::int64_t, Rational> diff;
        for (const auto& a : space.atoms())
          if (a.filt_level <= n && a.filt_level > m) diff[a.id] = 1;
        ASSERT_EQ(as_set(t, parts), diff);
        ASSERT_EQ(total, t.measure(n) - t.measure(m));
      }
    }
  }
}
