#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "varkit/dyadic.hpp"
#include "varkit/error.hpp"
#include "varkit/operators.hpp"
#include "varkit/parallel.hpp"
#include "varkit/rng.hpp"
#include "varkit/sampling.hpp"
#include "varkit/transport.hpp"
#include "varkit/variation.hpp"

namespace varkit {

// ---------------------------------------------------------------------------
// Constants.

struct ConstantBudget {
  double p = 1.0, q = 2.0, r = 2.0;
  double ck_maximal_constant = 0.0;
  double a_constant = 0.0;

  /// C_{p,q,r} = A_{p,r} |T|_{p,q}.
  double combined(double operator_norm) const { return a_constant * operator_norm; }
};

/// sum_{m>=1} 2^{-m (1/p - 1/r)/2} = (2^{(1/p - 1/r)/2} - 1)^{-1}.
inline double axis_factor(double p, double r) { return 1.0 / (std::exp2((1.0 / p - 1.0 / r) / 2.0) - 1.0); }

/// Budget for a k-linear operator with d parameters per slot: one axis factor per parameter.
inline double multilinear_budget(std::span<const double> p, double r, std::size_t params_per_slot) {
  double b = 1.0;
  for (double pi : p) b *= std::pow(axis_factor(pi, r), static_cast<double>(params_per_slot));
  return b;
}

inline ConstantBudget constants(const ExponentConfig& exps) {
  if (!exps.valid())
    throw Error(Errc::invalid_exponent, "need 1 <= p < min(q, r)");
  ConstantBudget out;
  out.p = exps.p_at(0);
  out.q = exps.q;
  out.r = exps.r;
  out.ck_maximal_constant = 1.0 / (1.0 - std::exp2(-(1.0 / out.p - 1.0 / out.q)));
  out.a_constant = axis_factor(out.p, out.r) * axis_factor(out.p, out.r);
  return out;
}

// ---------------------------------------------------------------------------
// Two-factor instances and their dyadic cell grids.

/// f on Y1 x Y2 together with level maps and the transports of its marginals.
struct ProductInstance {
  Density f;
  std::array<Filtration, 2> levels;
  std::array<MeasureTransport, 2> transports;
};

inline ProductInstance make_instance(Density f, Filtration levels1, Filtration levels2) {
  auto [s1, s2] = marginal_measures(f.product_masses(), levels1, levels2);
  ProductInstance inst{std::move(f), {std::move(levels1), std::move(levels2)}, {}};
  inst.transports = {build_transport(s1), build_transport(s2)};
  return inst;
}

inline ProductInstance random_instance(std::size_t n1, std::size_t n2, double p, unsigned mass_level,
                                       std::int64_t max_level, Rng& rng) {
  auto f = random_density({n1, n2}, p, mass_level, rng);
  auto l1 = random_filtration(n1, max_level, rng, 0.1);
  auto l2 = random_filtration(n2, max_level, rng, 0.1);
  return make_instance(std::move(f), std::move(l1), std::move(l2));
}

/// The grid {B^m_j x C^n_i} with exact p-masses |f 1_{B x C}|_p^p.
struct CellGrid {
  unsigned m = 0, n = 0;
  std::vector<Cell> b_cells;  // B^m_j on Y1, j = 1..2^m
  std::vector<Cell> c_cells;  // C^n_i on Y2, i = 1..2^n
  std::vector<Rational> mass;  // (j-1) * 2^n + (i-1)

  std::size_t rows() const { return b_cells.size(); }
  std::size_t cols() const { return c_cells.size(); }
  const Rational& at(std::size_t j0, std::size_t i0) const { return mass[j0 * cols() + i0]; }

  Rational total() const {
    Rational s = 0;
    for (const auto& v : mass) s += v;
    return s;
  }
  /// |f 1_{Y1 x C_i}|_p^p.
  Rational mass_y1_times(std::size_t i0) const {
    Rational s = 0;
    for (std::size_t j = 0; j < rows(); ++j) s += at(j, i0);
    return s;
  }
  /// |f 1_{B_j x Y2}|_p^p.
  Rational mass_times_y2(std::size_t j0) const {
    Rational s = 0;
    for (std::size_t i = 0; i < cols(); ++i) s += at(j0, i);
    return s;
  }
  Rational max_mass() const {
    Rational best = 0;
    for (const auto& v : mass) best = std::max(best, v);
    return best;
  }
};

inline std::vector<Cell> level_cells(const MeasureTransport& t, unsigned level) {
  std::vector<Cell> out;
  const std::uint64_t count = std::uint64_t{1} << level;
  for (std::uint64_t j = 1; j <= count; ++j) out.push_back(cell_preimage(t, DyadicInterval(level, j)));
  return out;
}

inline CellGrid build_cell_grid(const ProductInstance& inst, unsigned m, unsigned n) {
  const auto& f = inst.f;
  const std::size_t n1 = f.factor_sizes[0], n2 = f.factor_sizes[1];
  CellGrid grid{m, n, level_cells(inst.transports[0], m), level_cells(inst.transports[1], n), {}};

  auto sparse_cover = [](const MeasureTransport& t, const Cell& cell, std::size_t atoms) {
    std::vector<std::pair<std::size_t, Rational>> out;
    const auto full = t.coverage(cell.parts, atoms);
    for (std::size_t y = 0; y < atoms; ++y)
      if (full[y] != 0) out.emplace_back(y, full[y]);
    return out;
  };
  std::vector<Rational> w;
  w.reserve(f.mass.size());
  for (const auto& v : f.mass) w.push_back(to_rational(v));

  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows, cols;
  for (const auto& c : grid.b_cells) rows.push_back(sparse_cover(inst.transports[0], c, n1));
  for (const auto& c : grid.c_cells) cols.push_back(sparse_cover(inst.transports[1], c, n2));
  grid.mass.reserve(rows.size() * cols.size());
  for (const auto& rc : rows)
    for (const auto& cc : cols) {
      Rational s = 0;
      for (const auto& [y1, t1] : rc)
        for (const auto& [y2, t2] : cc) s += w[y1 * n2 + y2] * t1 * t2;
      grid.mass.push_back(std::move(s));
    }
  return grid;
}

// ---------------------------------------------------------------------------
// Operator side.

/// (atom, covered fraction) pairs of one cell.
using CellCover = std::vector<std::pair<std::size_t, double>>;

inline CellCover cover_of(const MeasureTransport& t, const Cell& cell) {
  CellCover out;
  for (const auto& part : cell.parts) {
    const auto& seg = t.segment(part.atom_id);
    out.emplace_back(static_cast<std::size_t>(part.atom_id), part.length().to_double() / seg.length().to_double());
  }
  return out;
}

/// A linear registry operator bound to a two-factor instance.
class LinearContext {
 public:
  LinearContext(ProductInstance inst, OperatorSpec op)
      : inst_(std::move(inst)), op_(std::move(op)), matrix_(to_dense(op_)), f_(inst_.f.function()) {
    if (matrix_.cols != inst_.f.size())
      throw Error(Errc::dimension_mismatch, "operator input size " + std::to_string(matrix_.cols) +
                                                " != " + std::to_string(inst_.f.size()) + " atoms");
  }

  const ProductInstance& instance() const { return inst_; }
  const OperatorSpec& spec() const { return op_; }
  const DenseMatrix& matrix() const { return matrix_; }
  std::size_t outputs() const { return matrix_.rows; }
  std::size_t cols() const { return inst_.f.factor_sizes[1]; }

  std::vector<CellCover> covers(std::size_t axis, unsigned level) const {
    std::vector<CellCover> out;
    for (const auto& c : level_cells(inst_.transports[axis], level)) out.push_back(cover_of(inst_.transports[axis], c));
    return out;
  }

  /// out += T(f theta_a (x) theta_b).
  void accumulate(const CellCover& a, const CellCover& b, std::vector<Complex>& out) const {
    const std::size_t n2 = cols();
    for (const auto& [y1, t1] : a)
      for (const auto& [y2, t2] : b) {
        const std::size_t idx = y1 * n2 + y2;
        const Complex c = f_.values[idx] * (t1 * t2);
        if (c == Complex(0.0)) continue;
        for (std::size_t x = 0; x < matrix_.rows; ++x) out[x] += matrix_.entries[x * matrix_.cols + idx] * c;
      }
  }

  /// T(f 1_region) with the region given by level sets.
  std::vector<Complex> apply_region(const Region& region) const {
    std::vector<std::vector<double>> w;
    for (std::size_t a = 0; a < 2; ++a) w.push_back(indicator_weights(inst_.levels[a], region.axes[a]));
    return varkit::apply(matrix_, restrict_product(f_, w));
  }

 private:
  ProductInstance inst_;
  OperatorSpec op_;
  DenseMatrix matrix_;
  ProductFunction f_;
};

/// S_{m,n} f(x) = (sum_{j,i} |T(f 1_{B^m_j x C^n_i})(x)|^r)^{1/r} for every x.
inline std::vector<double> s_mn_profile(const LinearContext& ctx, unsigned m, unsigned n, double r) {
  const detail::PowerFn pw(r);
  const auto rows = ctx.covers(0, m), cols = ctx.covers(1, n);
  std::vector<double> acc(ctx.outputs(), 0.0);
  std::vector<Complex> out(ctx.outputs());
  for (const auto& a : rows)
    for (const auto& b : cols) {
      std::fill(out.begin(), out.end(), Complex(0.0));
      ctx.accumulate(a, b, out);
      for (std::size_t x = 0; x < out.size(); ++x) acc[x] += pw(std::abs(out[x]));
    }
  for (auto& v : acc) v = std::pow(v, 1.0 / r);
  return acc;
}

inline double s_mn(const LinearContext& ctx, double r, const CellGrid& grid, std::size_t x) {
  return s_mn_profile(ctx, grid.m, grid.n, r).at(x);
}

// ---------------------------------------------------------------------------
// Pointwise domination along a chain.

struct DominationReport {
  std::size_t x = 0;
  double lhs = 0.0;       // max over sibling-side patterns of the fragment variation
  double lhs_full = 0.0;  // fragment variation with all cells of the region
  double rhs = 0.0;       // sum_{m,n <= depth} S_{m,n} f(x)
  double slack = 0.0;     // rhs - lhs
};

struct DominationSummary {
  std::vector<DominationReport> per_x;
  double min_slack = std::numeric_limits<double>::infinity();
  double max_lhs = 0.0;
  double max_reassembly_error = 0.0;
  bool labels_distinct = true;
  bool full_within_bound = true;  // lhs_full <= patterns * rhs
  std::size_t side_patterns = 0;
  bool pass(double tol = 1e-10) const { return min_slack >= -tol && labels_distinct && full_within_bound; }
};

namespace detail {

/// Cells of one axis set: preimages of the maximal dyadic intervals of its transport image.
inline std::vector<DyadicInterval> axis_intervals(const MeasureTransport& t, const AxisSet& set, unsigned depth) {
  const DyadicRational lo = set.difference ? t.measure(set.lower) : DyadicRational::zero();
  const DyadicRational hi = t.measure(set.upper);
  if (!(lo < hi)) return {};
  auto out = decompose_interval(lo, hi, kMaxDyadicLevel);
  for (const auto& iv : out)
    if (iv.level() > depth)
      throw Error(Errc::depth_insufficient,
                  "decomposition needs level " + std::to_string(iv.level()) + " > depth " + std::to_string(depth));
  return out;
}

}  // namespace detail

/// Checks, for every x, that the fragment variation along `chain` for the
/// region selected by `region_mask` (bit a set: axis a is a difference
/// factor; 2 is Y1_{s1} x (Y2_{t2} \ Y2_{s2})) is dominated by
/// sum_{m,n<=depth} S_{m,n} f(x).
///
/// The region is split by sibling side on each axis; each side pattern uses
/// at most one cell per (m, n, l), which is the case the bound covers. The
/// lhs reported is the largest side-pattern fragment; the all-cells fragment
/// is checked against patterns * rhs.
inline DominationSummary verify_pointwise_domination(const LinearContext& ctx, double r,
                                                     std::span<const std::array<std::int64_t, 2>> chain,
                                                     unsigned depth, std::size_t region_mask = 2) {
  detail::check_exponent(r);
  if (region_mask < 1 || region_mask > 3) throw Error(Errc::invalid_value, "region mask must be 1, 2 or 3");
  if (chain.empty()) throw Error(Errc::invalid_value, "empty chain");
  for (std::size_t l = 1; l < chain.size(); ++l)
    if (chain[l - 1][0] > chain[l][0] || chain[l - 1][1] > chain[l][1])
      throw Error(Errc::not_comparable, "chain is not increasing");

  const std::size_t L = chain.size();
  const std::size_t nx = ctx.outputs();
  const auto& inst = ctx.instance();
  DominationSummary summary;

  // Side pattern index: bit a set means axis a uses right siblings.
  constexpr std::size_t kPatterns = 4;
  // h[pattern][s * L + t][x]
  std::vector<std::vector<std::vector<Complex>>> h(kPatterns + 1,
                                                   std::vector<std::vector<Complex>>(L * L, std::vector<Complex>(nx)));
  std::set<std::size_t> used_patterns;
  // labels[axis][level] -> indices seen over consecutive pairs
  std::array<std::map<unsigned, std::vector<std::uint64_t>>, 2> labels;

  for (std::size_t s = 0; s < L; ++s)
    for (std::size_t t = s + 1; t < L; ++t) {
      const auto regions = fragment_regions(chain[s], chain[t]);
      const Region& region = regions[region_mask - 1];
      std::array<std::vector<DyadicInterval>, 2> ivs;
      for (std::size_t a = 0; a < 2; ++a) ivs[a] = detail::axis_intervals(inst.transports[a], region.axes[a], depth);

      if (t == s + 1)
        for (std::size_t a = 0; a < 2; ++a)
          if (region.axes[a].difference)
            for (const auto& iv : ivs[a]) labels[a][iv.level()].push_back(iv.index());

      for (const auto& i0 : ivs[0])
        for (const auto& i1 : ivs[1]) {
          const std::size_t pattern = (i0.is_right_sibling() ? 1U : 0U) | (i1.is_right_sibling() ? 2U : 0U);
          used_patterns.insert(pattern);
          const auto c0 = cover_of(inst.transports[0], cell_preimage(inst.transports[0], i0));
          const auto c1 = cover_of(inst.transports[1], cell_preimage(inst.transports[1], i1));
          ctx.accumulate(c0, c1, h[pattern][s * L + t]);
        }
      auto& full = h[kPatterns][s * L + t];
      for (std::size_t pat = 0; pat < kPatterns; ++pat)
        for (std::size_t x = 0; x < nx; ++x) full[x] += h[pat][s * L + t][x];

      const auto direct = ctx.apply_region(region);
      for (std::size_t x = 0; x < nx; ++x)
        summary.max_reassembly_error = std::max(summary.max_reassembly_error, std::abs(direct[x] - full[x]));
    }

  for (auto& per_axis : labels)
    for (auto& [level, seen] : per_axis) {
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) summary.labels_distinct = false;
    }
  summary.side_patterns = std::max<std::size_t>(1, used_patterns.size());

  std::vector<double> rhs(nx, 0.0);
  for (unsigned m = 0; m <= depth; ++m)
    for (unsigned n = 0; n <= depth; ++n) {
      const auto s = s_mn_profile(ctx, m, n, r);
      for (std::size_t x = 0; x < nx; ++x) rhs[x] += s[x];
    }

  const IndexGrid line = IndexGrid::uniform(1, L);
  for (std::size_t x = 0; x < nx; ++x) {
    DominationReport rep;
    rep.x = x;
    rep.rhs = rhs[x];
    for (std::size_t pat = 0; pat <= kPatterns; ++pat) {
      const auto v = generalized_chain_variation(line, r, [&](std::size_t s, std::size_t t) { return h[pat][s * L + t][x]; });
      if (pat < kPatterns)
        rep.lhs = std::max(rep.lhs, v.value);
      else
        rep.lhs_full = v.value;
    }
    rep.slack = rep.rhs - rep.lhs;
    summary.min_slack = std::min(summary.min_slack, rep.slack);
    summary.max_lhs = std::max(summary.max_lhs, rep.lhs);
    if (rep.lhs_full > static_cast<double>(summary.side_patterns) * rep.rhs + 1e-10) summary.full_within_bound = false;
    summary.per_x.push_back(rep);
  }
  return summary;
}

// ---------------------------------------------------------------------------
// Norm decay of S_{m,n}.

struct NormChainReport {
  unsigned m = 0, n = 0;
  double measured = 0.0;       // |S_{m,n} f|_q
  double max_cell_mass = 0.0;  // max_{j,i} |f 1_{B x C}|_p^p (exact, then rounded)
  double cell_bound = 0.0;     // |T| (max cell mass)^{1/p - 1/r}
  double bound = 0.0;          // |T| 2^{-max(m,n)(1/p - 1/r)}
  bool pass = false;
};

inline NormChainReport verify_norm_chain(const LinearContext& ctx, const ExponentConfig& exps, unsigned m, unsigned n) {
  const double p = exps.p_at(0), q = exps.q, r = exps.r;
  if (!(p >= 1.0 && p < r && r <= q))
    throw Error(Errc::invalid_exponent, "norm chain needs 1 <= p < r <= q");
  if (p != ctx.instance().f.p) throw Error(Errc::invalid_exponent, "density was normalized for a different p");
  const double cert = certified_norm(ctx.spec(), exps);

  NormChainReport rep;
  rep.m = m;
  rep.n = n;
  const auto profile = s_mn_profile(ctx, m, n, r);
  rep.measured = lp_norm<double>(profile, q);
  const auto grid = build_cell_grid(ctx.instance(), m, n);
  const Rational max_mass = grid.max_mass();
  rep.max_cell_mass = static_cast<double>(max_mass);
  const double alpha = 1.0 / p - 1.0 / r;
  rep.cell_bound = cert * std::pow(rep.max_cell_mass, alpha);
  rep.bound = cert * std::exp2(-static_cast<double>(std::max(m, n)) * alpha);
  const Rational level_cap = Rational(1, boost::multiprecision::cpp_int(1) << std::max(m, n));
  constexpr double tol = 1e-12;
  rep.pass = max_mass <= level_cap && rep.measured <= rep.cell_bound * (1 + tol) + tol &&
             rep.cell_bound <= rep.bound * (1 + tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Empirical bound trials.

struct BoundTrialConfig {
  OperatorSpec op = OperatorSpec::identity(8);
  ExponentConfig exps;
  /// Factor sizes of every argument slot; a linear operator has one slot.
  std::vector<std::vector<std::size_t>> slots{{8}};
  std::int64_t max_level = 5;
  unsigned mass_level = 6;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
};

struct BoundTrialRow {
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  double ratio = 0.0;
  double maximal_ratio = std::numeric_limits<double>::quiet_NaN();
  double oracle_gap = 0.0;  // max relative |DP - brute force|, 0 when not checked
};

struct BoundTrialReport {
  std::vector<BoundTrialRow> rows;
  double certified = 0.0;
  double budget = 0.0;
  double maximal_budget = std::numeric_limits<double>::quiet_NaN();
  double max_ratio = 0.0;
  double max_maximal_ratio = std::numeric_limits<double>::quiet_NaN();
  double max_oracle_gap = 0.0;
  bool pass = false;
};

inline BoundTrialReport bound_trial(const BoundTrialConfig& cfg) {
  if (!cfg.exps.valid()) throw Error(Errc::invalid_exponent, "need 1 <= p_i < min(q, r)");
  if (cfg.slots.size() != cfg.op.arity()) throw Error(Errc::dimension_mismatch, "one slot per operator argument");
  const bool bilinear = cfg.op.arity() == 2;
  const double r = cfg.exps.r, q = cfg.exps.q;

  BoundTrialReport report;
  report.certified = certified_norm(cfg.op, cfg.exps);
  std::size_t factors = 0;
  for (const auto& s : cfg.slots) factors += s.size();
  if (bilinear) {
    std::vector<double> ps{cfg.exps.p_at(0), cfg.exps.p_at(1)};
    report.budget = multilinear_budget(ps, r, cfg.slots[0].size());
  } else {
    report.budget = constants(cfg.exps).a_constant;
  }
  const bool maximal = !bilinear && factors == 1 && cfg.exps.p_at(0) < q;
  if (maximal) report.maximal_budget = constants(cfg.exps).ck_maximal_constant;

  const IndexGrid grid = IndexGrid::uniform(factors, static_cast<std::size_t>(cfg.max_level + 1));
  report.rows.resize(cfg.trials);

  parallel_for(cfg.trials, [&](std::size_t trial) {
    BoundTrialRow row;
    row.trial = trial;
    row.trial_seed = Rng::derive(cfg.seed, trial);
    Rng rng(row.trial_seed);

    std::vector<ProductFunction> args;
    std::vector<Filtration> filtrations;
    for (std::size_t slot = 0; slot < cfg.slots.size(); ++slot) {
      const auto f = random_density(cfg.slots[slot], cfg.exps.p_at(slot), cfg.mass_level, rng);
      args.push_back(f.function());
      for (auto n : cfg.slots[slot]) filtrations.push_back(random_filtration(n, cfg.max_level, rng, 0.1));
    }
    const auto family = truncation_family(cfg.op, args, filtrations, grid);

    std::vector<double> v(family.samples.size()), sup(family.samples.size());
    for (std::size_t x = 0; x < family.samples.size(); ++x) {
      v[x] = chain_variation(family, r, x).value;
      if (grid.size() <= kBruteForceLimit) {
        const double bf = chain_variation_bruteforce(family, r, x).value;
        const double gap = std::abs(bf - v[x]) / std::max(1.0, std::abs(bf));
        row.oracle_gap = std::max(row.oracle_gap, gap);
      }
      for (const auto& value : family.values[x]) sup[x] = std::max(sup[x], std::abs(value));
    }
    row.ratio = report.certified > 0.0 ? lp_norm<double>(v, q) / report.certified : 0.0;
    if (maximal) row.maximal_ratio = report.certified > 0.0 ? lp_norm<double>(sup, q) / report.certified : 0.0;
    report.rows[trial] = row;
  });

  report.pass = true;
  for (const auto& row : report.rows) {
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.max_oracle_gap = std::max(report.max_oracle_gap, row.oracle_gap);
    if (row.ratio > report.budget || row.oracle_gap > 1e-12) report.pass = false;
    if (maximal) {
      report.max_maximal_ratio =
          std::isnan(report.max_maximal_ratio) ? row.maximal_ratio : std::max(report.max_maximal_ratio, row.maximal_ratio);
      if (row.maximal_ratio > report.maximal_budget) report.pass = false;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Endpoint sharpness for the truncated Fourier transform of 1_{[-1,1]}.

/// Quarter-period points N_l = (1/2 + l) / (2x), l >= 1, inside (0, 1).
inline std::vector<double> extremal_sequence(double x) {
  std::vector<double> out;
  const double ax = std::abs(x);
  for (std::int64_t l = 1;; ++l) {
    const double n = (0.5 + static_cast<double>(l)) / (2.0 * ax);
    if (n >= 1.0) break;
    out.push_back(n);
  }
  return out;
}

/// (L - 1)^{1/r} * 2 / (pi |x|) for the L extremal points in (0, 1).
inline double explicit_chain_lower_bound(double x, double r) {
  const auto seq = extremal_sequence(x);
  if (seq.size() < 2) return 0.0;
  return std::pow(static_cast<double>(seq.size() - 1), 1.0 / r) * 2.0 / (std::numbers::pi * std::abs(x));
}

/// N-grid: k / n_steps for k = 1..n_steps together with the extremal sequence.
inline std::vector<double> sharpness_cutoffs(double x, std::size_t n_steps) {
  std::vector<double> grid = extremal_sequence(x);
  for (std::size_t k = 1; k <= n_steps; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(n_steps));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// V_r(F_N f(x) : N in grid).
inline double sharpness_variation(double x, double r, std::size_t n_steps) {
  const auto cutoffs = sharpness_cutoffs(x, n_steps);
  std::vector<double> values;
  values.reserve(cutoffs.size());
  for (double n : cutoffs) values.push_back(truncated_sinc(n, x));
  return sequence_variation<double>(values, r).value;
}

struct SharpnessRow {
  double x = 0.0;
  double v_p = 0.0;
  std::vector<double> v_r;  // one per extra exponent
  double lower_bound = 0.0;
  std::size_t extremal_points = 0;
};

struct SharpnessReport {
  double p = 1.5;
  std::vector<double> extra_r;
  std::vector<SharpnessRow> rows;
  double slope = 0.0;  // least squares of log V_p against log x
  bool dominates_lower_bound = true;
};

inline double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(count - 1));
  return out;
}

inline SharpnessReport sharpness_experiment(double p, std::span<const double> xs, std::size_t n_steps,
                                            std::vector<double> extra_r = {2.0}) {
  if (!(p > 1.0 && p <= 2.0)) throw Error(Errc::invalid_exponent, "sharpness needs p in (1, 2]");
  SharpnessReport rep;
  rep.p = p;
  rep.extra_r = extra_r;
  rep.rows.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t k) {
    SharpnessRow row;
    row.x = xs[k];
    row.v_p = sharpness_variation(xs[k], p, n_steps);
    for (double r : extra_r) row.v_r.push_back(sharpness_variation(xs[k], r, n_steps));
    row.lower_bound = explicit_chain_lower_bound(xs[k], p);
    row.extremal_points = extremal_sequence(xs[k]).size();
    rep.rows[k] = std::move(row);
  });
  std::vector<double> lx, lv;
  for (const auto& row : rep.rows) {
    if (row.v_p < row.lower_bound * (1.0 - 1e-12)) rep.dominates_lower_bound = false;
    if (row.v_p > 0.0) {
      lx.push_back(std::log(std::abs(row.x)));
      lv.push_back(std::log(row.v_p));
    }
  }
  rep.slope = lx.size() >= 2 ? least_squares_slope(lx, lv) : 0.0;
  return rep;
}

/// |V_r|_{L^{p'}([1, X])} for each X in `limits` (ascending), by trapezoid
/// quadrature in log x on `per_decade` samples per decade.
inline std::vector<double> sharpness_norms(double p, double r, std::span<const double> limits, std::size_t per_decade,
                                           std::size_t n_steps) {
  if (limits.empty()) return {};
  const double top = limits.back();
  const std::size_t count = static_cast<std::size_t>(std::ceil(std::log10(top) * static_cast<double>(per_decade))) + 1;
  auto xs = log_spaced(1.0, top, count);
  for (double lim : limits) xs.push_back(lim);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) <= 1e-9 * b; }), xs.end());

  const double pc = conjugate(p);
  std::vector<double> integrand(xs.size());
  parallel_for(xs.size(), [&](std::size_t k) {
    integrand[k] = std::pow(sharpness_variation(xs[k], r, n_steps), pc) * xs[k];
  });
  std::vector<double> out;
  double integral = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 1; k < xs.size() && next < limits.size(); ++k) {
    integral += 0.5 * (integrand[k] + integrand[k - 1]) * std::log(xs[k] / xs[k - 1]);
    while (next < limits.size() && std::abs(xs[k] - limits[next]) <= 1e-9 * limits[next]) {
      out.push_back(std::pow(integral, 1.0 / pc));
      ++next;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-parameter Fourier partial sums.

/// |V_r(S_{M,N}(a) : 0 <= M, N <= max_freq)|_{L^{p'}(T^2)} / |a|_p with the
/// torus sampled on a uniform points x points grid (normalized measure).
inline double fourier_variation_ratio(const CoefficientArray& a, double p, double r, std::int64_t max_freq,
                                      std::size_t points) {
  if (a.dims != 2) throw Error(Errc::dimension_mismatch, "fourier experiment is two-dimensional");
  detail::check_exponent(r);
  const double norm = a.lp_norm(p);
  if (norm == 0.0) return 0.0;
  const std::size_t side = static_cast<std::size_t>(max_freq + 1);
  const IndexGrid grid = IndexGrid::uniform(2, side);
  const double pc = conjugate(p);
  const detail::PowerFn pw(r);

  std::vector<double> v(points * points);
  parallel_for(points, [&](std::size_t i) {
    std::vector<Complex> box(side * side), partial(side * side);
    for (std::size_t k = 0; k < points; ++k) {
      std::fill(box.begin(), box.end(), Complex(0.0));
      const double xi = static_cast<double>(i) / static_cast<double>(points);
      const double eta = static_cast<double>(k) / static_cast<double>(points);
      for (const auto& [n, coef] : a.entries) {
        const auto am = static_cast<std::size_t>(std::abs(n[0])), an = static_cast<std::size_t>(std::abs(n[1]));
        if (am >= side || an >= side) continue;
        box[am * side + an] += coef * unit_phase(static_cast<double>(n[0]) * xi + static_cast<double>(n[1]) * eta);
      }
      // S_{M,N} = sum of box over [0,M] x [0,N].
      for (std::size_t mm = 0; mm < side; ++mm)
        for (std::size_t nn = 0; nn < side; ++nn) {
          Complex s = box[mm * side + nn];
          if (mm > 0) s += partial[(mm - 1) * side + nn];
          if (nn > 0) s += partial[mm * side + nn - 1];
          if (mm > 0 && nn > 0) s -= partial[(mm - 1) * side + nn - 1];
          partial[mm * side + nn] = s;
        }
      const auto res = detail::max_weight_chain(
          grid.size(), r, [&](std::size_t s, std::size_t t) { return grid.precedes(s, t); },
          [&](std::size_t s, std::size_t t) { return pw(std::abs(partial[t] - partial[s])); });
      v[i * points + k] = res.value;
    }
  });
  double mean = 0.0;
  if (std::isinf(pc)) {
    for (double x : v) mean = std::max(mean, x);
    return mean / norm;
  }
  for (double x : v) mean += std::pow(x, pc);
  mean /= static_cast<double>(v.size());
  return std::pow(mean, 1.0 / pc) / norm;
}

struct FourierConfig {
  double p = 1.5;
  double r = 2.0;
  std::size_t draws = 50;
  std::int64_t max_freq = 4;
  std::size_t max_support = 12;
  std::size_t points = 64;
  std::uint64_t seed = 1;
};

struct FourierRow {
  std::size_t draw = 0;
  std::uint64_t draw_seed = 0;
  std::size_t support = 0;
  double ratio = 0.0;
};

struct FourierReport {
  std::vector<FourierRow> rows;
  double budget = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
};

/// Random sparse coefficients with |a|_p = 1; support size cycles through 1..max_support.
inline CoefficientArray random_sparse_coefficients(std::size_t support, std::int64_t max_freq, double p, Rng& rng) {
  CoefficientArray a;
  a.dims = 2;
  while (a.entries.size() < support) a.set({rng.between(-max_freq, max_freq), rng.between(-max_freq, max_freq)}, rng.unit_disk());
  const double norm = a.lp_norm(p);
  for (auto& [n, v] : a.entries) v /= norm;
  return a;
}

inline FourierReport fourier_variation_experiment(const FourierConfig& cfg) {
  if (!(cfg.p >= 1.0 && cfg.p < 2.0 && cfg.p < cfg.r))
    throw Error(Errc::invalid_exponent, "need 1 <= p < 2 and p < r");
  FourierReport rep;
  rep.budget = axis_factor(cfg.p, cfg.r) * axis_factor(cfg.p, cfg.r);
  const std::size_t max_terms = static_cast<std::size_t>((2 * cfg.max_freq + 1) * (2 * cfg.max_freq + 1));
  for (std::size_t d = 0; d < cfg.draws; ++d) {
    FourierRow row;
    row.draw = d;
    row.draw_seed = Rng::derive(cfg.seed, d);
    Rng rng(row.draw_seed);
    row.support = std::min(1 + d % cfg.max_support, max_terms);
    const auto a = random_sparse_coefficients(row.support, cfg.max_freq, cfg.p, rng);
    row.ratio = fourier_variation_ratio(a, cfg.p, cfg.r, cfg.max_freq, cfg.points);
    rep.rows.push_back(row);
  }
  rep.pass = true;
  for (const auto& row : rep.rows) {
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    if (!std::isfinite(row.ratio) || row.ratio > rep.budget) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Seeded instances shared by the CLI and the acceptance suite.

enum class RegistryKind { identity, diagonal, rank_one, dft };

inline constexpr std::array<RegistryKind, 4> kRegistryKinds{RegistryKind::identity, RegistryKind::diagonal,
                                                            RegistryKind::rank_one, RegistryKind::dft};

inline std::string_view to_string(RegistryKind k) {
  switch (k) {
    case RegistryKind::identity: return "identity";
    case RegistryKind::diagonal: return "diagonal";
    case RegistryKind::rank_one: return "rank_one";
    case RegistryKind::dft: return "dft";
  }
  return "unknown";
}

/// A registry operator on n points; weights and vectors drawn from the unit disk.
inline OperatorSpec registry_operator(RegistryKind kind, std::size_t n, Rng& rng) {
  auto draw = [&] {
    std::vector<Complex> v(n);
    for (auto& z : v) z = rng.unit_disk();
    return v;
  };
  switch (kind) {
    case RegistryKind::identity: return OperatorSpec::identity(n);
    case RegistryKind::diagonal: return {Diagonal{draw()}};
    case RegistryKind::rank_one: {
      auto u = draw();
      return {RankOne{u, draw()}};
    }
    case RegistryKind::dft: return {Dft{n}};
  }
  throw Error(Errc::invalid_value, "unknown registry kind");
}

struct DominationCase {
  LinearContext ctx;
  std::vector<std::array<std::int64_t, 2>> chain;
};

/// n1 x n2 atoms, levels in [0, max_level], a registry operator, and a
/// strictly increasing chain of 2..max_chain points in [-1, max_level + 1]^2.
inline DominationCase random_domination_case(std::uint64_t seed, double p, std::size_t n1, std::size_t n2,
                                             std::int64_t max_level, std::size_t max_chain, unsigned mass_level = 6) {
  Rng rng(seed);
  auto inst = random_instance(n1, n2, p, mass_level, max_level, rng);
  const auto kind = kRegistryKinds[rng.below(kRegistryKinds.size())];
  auto op = registry_operator(kind, n1 * n2, rng);
  const std::size_t length = 2 + rng.below(std::max<std::size_t>(max_chain, 2) - 1);
  std::vector<std::array<std::int64_t, 2>> chain;
  std::array<std::int64_t, 2> cur{rng.between(-1, max_level), rng.between(-1, max_level)};
  chain.push_back(cur);
  while (chain.size() < length) {
    // Step along at least one axis so the chain stays strictly increasing.
    const std::size_t forced = rng.below(2);
    for (std::size_t a = 0; a < 2; ++a) cur[a] += (a == forced ? 1 : 0) + rng.between(0, 1);
    chain.push_back(cur);
  }
  return {LinearContext(std::move(inst), std::move(op)), std::move(chain)};
}

}  // namespace varkit
