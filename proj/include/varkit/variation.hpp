#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "varkit/error.hpp"
#include "varkit/transport.hpp"

namespace varkit {

using Complex = std::complex<double>;

/// Finite product grid axes[0] x ... x axes[d-1] under the coordinatewise order.
///
/// Points are addressed by their row-major flat index; that order is a
/// linear extension of the partial order, so s precedes t whenever s < t
/// strictly in the poset.
class IndexGrid {
 public:
  IndexGrid() = default;

  explicit IndexGrid(std::vector<std::vector<std::int64_t>> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw Error(Errc::invalid_value, "grid needs at least one axis");
    for (const auto& axis : axes_) {
      if (axis.empty()) throw Error(Errc::invalid_value, "grid axis is empty");
      for (std::size_t k = 1; k < axis.size(); ++k)
        if (axis[k - 1] >= axis[k]) throw Error(Errc::invalid_value, "grid axis is not strictly increasing");
    }
    strides_.assign(axes_.size(), 1);
    for (std::size_t a = axes_.size() - 1; a > 0; --a) strides_[a - 1] = strides_[a] * axes_[a].size();
    size_ = strides_[0] * axes_[0].size();
  }

  /// Axis {0, 1, ..., count-1} repeated `dims` times.
  static IndexGrid uniform(std::size_t dims, std::size_t count, std::int64_t start = 0) {
    std::vector<std::int64_t> axis(count);
    std::iota(axis.begin(), axis.end(), start);
    return IndexGrid(std::vector<std::vector<std::int64_t>>(dims, axis));
  }

  std::size_t dims() const { return axes_.size(); }
  std::size_t size() const { return size_; }
  const std::vector<std::int64_t>& axis(std::size_t a) const { return axes_[a]; }
  const std::vector<std::vector<std::int64_t>>& axes() const { return axes_; }

  /// Position of `flat` along axis a.
  std::size_t position(std::size_t flat, std::size_t a) const { return (flat / strides_[a]) % axes_[a].size(); }

  std::vector<std::int64_t> point(std::size_t flat) const {
    std::vector<std::int64_t> out(dims());
    for (std::size_t a = 0; a < dims(); ++a) out[a] = axes_[a][position(flat, a)];
    return out;
  }

  std::size_t flat_index(std::span<const std::int64_t> point) const {
    if (point.size() != dims()) throw Error(Errc::dimension_mismatch, "point has wrong dimension");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dims(); ++a) {
      auto it = std::lower_bound(axes_[a].begin(), axes_[a].end(), point[a]);
      if (it == axes_[a].end() || *it != point[a]) throw Error(Errc::invalid_value, "point not on grid");
      flat += static_cast<std::size_t>(it - axes_[a].begin()) * strides_[a];
    }
    return flat;
  }

  bool precedes(std::size_t s, std::size_t t) const {
    for (std::size_t a = 0; a < dims(); ++a)
      if (position(s, a) > position(t, a)) return false;
    return true;
  }

 private:
  std::vector<std::vector<std::int64_t>> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Values F_t(x) for every grid point t and sample x.
struct TruncationFamily {
  IndexGrid grid;
  std::vector<std::int64_t> samples;
  std::vector<std::vector<Complex>> values;  // values[sample][flat grid index]

  std::size_t sample_index(std::int64_t id) const {
    auto it = std::find(samples.begin(), samples.end(), id);
    if (it == samples.end()) throw Error(Errc::invalid_value, "unknown sample " + std::to_string(id));
    return static_cast<std::size_t>(it - samples.begin());
  }
};

struct VariationResult {
  double value = 0.0;
  std::vector<std::size_t> witness;  // flat grid indices, increasing in the partial order
};

namespace detail {

/// |z|^r with cheap paths for the exponents used most.
class PowerFn {
 public:
  explicit PowerFn(double r) : r_(r) {}
  double operator()(double a) const {
    if (r_ == 1.0) return a;
    if (r_ == 2.0) return a * a;
    if (r_ == 1.5) return a * std::sqrt(a);
    if (r_ == 4.0) return (a * a) * (a * a);
    return std::pow(a, r_);
  }

 private:
  double r_;
};

inline void check_exponent(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw Error(Errc::invalid_exponent, "need finite r >= 1, got " + std::to_string(r));
}

/// Maximum-weight chain over a finite poset given by a linear extension.
/// best[t] = max(0, max_{s < t, s precedes t} best[s] + weight(s, t)).
/// Ties resolve to the smallest flat index at every step.
template <class Precedes, class Weight>
VariationResult max_weight_chain(std::size_t size, double r, Precedes&& precedes, Weight&& weight) {
  VariationResult out;
  if (size == 0) return out;
  std::vector<double> best(size, 0.0);
  for (std::size_t t = 0; t < size; ++t) {
    double b = 0.0;
    for (std::size_t s = 0; s < t; ++s)
      if (precedes(s, t)) b = std::max(b, best[s] + weight(s, t));
    best[t] = b;
  }
  std::size_t end = 0;
  for (std::size_t t = 1; t < size; ++t)
    if (best[t] > best[end]) end = t;
  // Walk back along edges that reproduce best[] exactly.
  out.witness.push_back(end);
  std::size_t t = end;
  while (best[t] > 0.0) {
    std::size_t pred = t;
    for (std::size_t s = 0; s < t; ++s)
      if (precedes(s, t) && best[s] + weight(s, t) == best[t]) {
        pred = s;
        break;
      }
    if (pred == t) break;
    out.witness.push_back(pred);
    t = pred;
  }
  std::reverse(out.witness.begin(), out.witness.end());
  out.value = std::pow(best[end], 1.0 / r);
  return out;
}

}  // namespace detail

/// r-variation of a totally ordered sequence of real or complex values.
///
/// O(n^2) with a vectorizable inner loop; the witness is recovered afterwards.
template <class T>
VariationResult sequence_variation(std::span<const T> values, double r) {
  detail::check_exponent(r);
  const detail::PowerFn pw(r);
  const std::size_t n = values.size();
  VariationResult out;
  if (n == 0) return out;
  std::vector<double> best(n, 0.0);
  for (std::size_t t = 1; t < n; ++t) {
    const T vt = values[t];
    double b = 0.0;
    for (std::size_t s = 0; s < t; ++s) {
      const double c = best[s] + pw(std::abs(vt - values[s]));
      b = c > b ? c : b;
    }
    best[t] = b;
  }
  std::size_t end = 0;
  for (std::size_t t = 1; t < n; ++t)
    if (best[t] > best[end]) end = t;
  out.witness.push_back(end);
  for (std::size_t t = end; best[t] > 0.0;) {
    std::size_t pred = t;
    for (std::size_t s = 0; s < t; ++s)
      if (best[s] + pw(std::abs(values[t] - values[s])) == best[t]) {
        pred = s;
        break;
      }
    if (pred == t) break;
    out.witness.push_back(pred);
    t = pred;
  }
  std::reverse(out.witness.begin(), out.witness.end());
  out.value = std::pow(best[end], 1.0 / r);
  return out;
}

/// V_r(F_t : t in grid)(x) by dynamic programming over all comparable pairs.
inline VariationResult chain_variation(const TruncationFamily& family, double r, std::size_t sample) {
  detail::check_exponent(r);
  const auto& values = family.values.at(sample);
  if (family.grid.dims() == 1) return sequence_variation<Complex>(values, r);
  const detail::PowerFn pw(r);
  return detail::max_weight_chain(
      family.grid.size(), r, [&](std::size_t s, std::size_t t) { return family.grid.precedes(s, t); },
      [&](std::size_t s, std::size_t t) { return pw(std::abs(values[t] - values[s])); });
}

/// Same quantity for an edge functional H(s, t) that is not a difference of point values.
template <class EdgeFn>
VariationResult generalized_chain_variation(const IndexGrid& grid, double r, EdgeFn&& edge) {
  detail::check_exponent(r);
  const detail::PowerFn pw(r);
  return detail::max_weight_chain(
      grid.size(), r, [&](std::size_t s, std::size_t t) { return grid.precedes(s, t); },
      [&](std::size_t s, std::size_t t) { return pw(std::abs(Complex(edge(s, t)))); });
}

inline constexpr std::size_t kBruteForceLimit = 12;

/// Exhaustive enumeration of every strictly increasing chain.
inline VariationResult chain_variation_bruteforce(const TruncationFamily& family, double r, std::size_t sample) {
  detail::check_exponent(r);
  const auto& grid = family.grid;
  if (grid.size() > kBruteForceLimit)
    throw Error(Errc::too_large, "brute force limited to " + std::to_string(kBruteForceLimit) + " grid points");
  const auto& values = family.values.at(sample);

  double best = 0.0;
  std::vector<std::size_t> best_chain{0};
  std::vector<std::size_t> chain;
  std::function<void(double)> extend = [&](double sum) {
    if (sum > best) {
      best = sum;
      best_chain = chain;
    }
    const std::size_t last = chain.back();
    for (std::size_t t = 0; t < grid.size(); ++t) {
      if (t == last || !grid.precedes(last, t)) continue;
      chain.push_back(t);
      extend(sum + std::pow(std::abs(values[t] - values[last]), r));
      chain.pop_back();
    }
  };
  for (std::size_t start = 0; start < grid.size(); ++start) {
    chain.assign(1, start);
    extend(0.0);
  }
  return {std::pow(best, 1.0 / r), best_chain};
}

/// Recomputes (sum |F_{t_{l+1}} - F_{t_l}|^r)^{1/r} along a chain.
inline double chain_functional(const TruncationFamily& family, double r, std::size_t sample,
                               std::span<const std::size_t> chain) {
  const auto& values = family.values.at(sample);
  double sum = 0.0;
  for (std::size_t l = 1; l < chain.size(); ++l) sum += std::pow(std::abs(values[chain[l]] - values[chain[l - 1]]), r);
  return std::pow(sum, 1.0 / r);
}

/// One coordinate factor of a product region: Y_upper, or Y_upper \ Y_lower.
struct AxisSet {
  bool difference = false;
  std::int64_t lower = 0;  // meaningful only when difference
  std::int64_t upper = 0;

  bool symbolically_empty() const { return difference && lower == upper; }
  bool contains_level(std::int64_t level) const { return level <= upper && (!difference || level > lower); }
  friend bool operator==(const AxisSet&, const AxisSet&) = default;
};

struct Region {
  std::vector<AxisSet> axes;

  bool symbolically_empty() const {
    return std::any_of(axes.begin(), axes.end(), [](const AxisSet& a) { return a.symbolically_empty(); });
  }

  /// Atoms of each factor lying in the region, given the factors' level maps.
  std::vector<std::vector<std::size_t>> atoms(std::span<const Filtration> filtrations) const {
    if (filtrations.size() != axes.size()) throw Error(Errc::dimension_mismatch, "one filtration per axis");
    std::vector<std::vector<std::size_t>> out(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a)
      for (std::size_t y = 0; y < filtrations[a].size(); ++y)
        if (axes[a].contains_level(filtrations[a][y])) out[a].push_back(y);
    return out;
  }

  bool empty_on(std::span<const Filtration> filtrations) const {
    const auto per_axis = atoms(filtrations);
    return std::any_of(per_axis.begin(), per_axis.end(), [](const auto& v) { return v.empty(); });
  }

  friend bool operator==(const Region&, const Region&) = default;
};

/// The 2^D - 1 product regions whose disjoint union is Y_t \ Y_s.
///
/// Writing 1_{Y_t^a} = 1_{Y_s^a} + 1_{Y_t^a \ Y_s^a} on every axis and
/// expanding the product gives one term per subset of axes taking the
/// difference factor; the all-base term is 1_{Y_s} and cancels. Bit a of the
/// region's mask marks axis a as a difference factor; regions are listed by
/// increasing mask.
inline std::vector<Region> fragment_regions(std::span<const std::int64_t> s, std::span<const std::int64_t> t) {
  if (s.size() != t.size()) throw Error(Errc::dimension_mismatch, "points differ in dimension");
  for (std::size_t a = 0; a < s.size(); ++a)
    if (s[a] > t[a]) throw Error(Errc::not_comparable, "s does not precede t");
  const std::size_t dims = s.size();
  std::vector<Region> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << dims); ++mask) {
    Region region;
    for (std::size_t a = 0; a < dims; ++a) {
      if (mask >> a & 1U)
        region.axes.push_back({true, s[a], t[a]});
      else
        region.axes.push_back({false, 0, s[a]});
    }
    out.push_back(std::move(region));
  }
  return out;
}

/// Two-parameter split of Y_t \ Y_s into
///   Y1_{s1} x (Y2_{t2} \ Y2_{s2}),
///   (Y1_{t1} \ Y1_{s1}) x (Y2_{t2} \ Y2_{s2}),
///   (Y1_{t1} \ Y1_{s1}) x Y2_{s2}.
inline std::array<Region, 3> region_split(std::span<const std::int64_t> s, std::span<const std::int64_t> t) {
  if (s.size() != 2 || t.size() != 2) throw Error(Errc::dimension_mismatch, "region_split is two-parameter");
  auto regions = fragment_regions(s, t);  // masks 1, 2, 3
  return {regions[1], regions[2], regions[0]};
}

}  // namespace varkit
