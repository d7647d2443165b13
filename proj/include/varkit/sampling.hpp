#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "varkit/dyadic.hpp"
#include "varkit/operators.hpp"
#include "varkit/rng.hpp"
#include "varkit/transport.hpp"

namespace varkit {

/// `count` positive dyadic masses of level <= `level` summing to exactly 1.
/// Every atom starts with one unit of 2^-level; the remaining units land on
/// uniformly chosen atoms.
inline std::vector<DyadicRational> random_dyadic_partition(std::size_t count, unsigned level, Rng& rng) {
  const std::uint64_t units = std::uint64_t{1} << level;
  if (count == 0 || count > units) throw Error(Errc::invalid_value, "cannot split 1 into that many dyadic units");
  std::vector<std::uint64_t> share(count, 1);
  for (std::uint64_t u = count; u < units; ++u) ++share[rng.below(count)];
  std::vector<DyadicRational> out;
  for (auto s : share) out.push_back(DyadicRational(s, level).canonical());
  return out;
}

/// Uniform random level map with levels in [0, max_level]; with probability
/// `never_prob` an atom joins no filtration element.
inline Filtration random_filtration(std::size_t atoms, std::int64_t max_level, Rng& rng, double never_prob = 0.0) {
  Filtration out(atoms);
  for (auto& level : out) level = rng.uniform() < never_prob ? kNeverIncluded : rng.between(0, max_level);
  return out;
}

/// A random filtration space: dyadic masses at `level`, levels in [0, max_level].
inline FiltrationSpace random_filtration_space(std::size_t atoms, unsigned level, std::int64_t max_level, Rng& rng) {
  const auto masses = random_dyadic_partition(atoms, level, rng);
  const auto levels = random_filtration(atoms, max_level, rng, 0.1);
  return FiltrationSpace::from_masses(masses, levels);
}

/// f on a product of finite factors (counting measure) given by exact |f|^p
/// masses and phases, so that |f|_p = 1 holds exactly.
struct Density {
  std::vector<std::size_t> factor_sizes;
  std::vector<DyadicRational> mass;
  std::vector<double> phase;
  double p = 1.0;

  std::size_t size() const { return mass.size(); }

  ProductFunction function() const {
    ProductFunction f{factor_sizes, std::vector<Complex>(mass.size())};
    for (std::size_t k = 0; k < mass.size(); ++k)
      f.values[k] = std::polar(std::pow(mass[k].to_double(), 1.0 / p), phase[k]);
    return f;
  }

  /// Exact marginal masses on factor `axis`.
  std::vector<DyadicRational> marginal(std::size_t axis) const {
    std::size_t stride = mass.size();
    for (std::size_t a = 0; a <= axis; ++a) stride /= factor_sizes[a];
    const std::size_t n = factor_sizes[axis];
    std::vector<unsigned __int128> acc(n);
    for (std::size_t k = 0; k < mass.size(); ++k) acc[(k / stride) % n] += mass[k].scaled_to(kMaxDyadicLevel);
    std::vector<DyadicRational> out;
    for (auto v : acc) out.push_back(DyadicRational(static_cast<std::uint64_t>(v), kMaxDyadicLevel).canonical());
    return out;
  }

  ProductMasses product_masses() const {
    if (factor_sizes.size() != 2) throw Error(Errc::dimension_mismatch, "product masses need two factors");
    return {factor_sizes[0], factor_sizes[1], mass};
  }
};

inline Density random_density(std::vector<std::size_t> factor_sizes, double p, unsigned level, Rng& rng) {
  Density f;
  f.factor_sizes = std::move(factor_sizes);
  f.p = p;
  std::size_t n = 1;
  for (auto s : f.factor_sizes) n *= s;
  f.mass = random_dyadic_partition(n, level, rng);
  for (std::size_t k = 0; k < n; ++k) f.phase.push_back(rng.phase());
  return f;
}

}  // namespace varkit
