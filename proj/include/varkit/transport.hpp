#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "varkit/dyadic.hpp"
#include "varkit/error.hpp"

namespace varkit {

using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(const DyadicRational& d) {
  return Rational(boost::multiprecision::cpp_int(d.numerator()),
                  boost::multiprecision::cpp_int(1) << d.level());
}

/// Level of an atom that belongs to no filtration element.
inline constexpr std::int64_t kNeverIncluded = std::numeric_limits<std::int64_t>::max();

/// Least-inclusion level of each atom of one factor, indexed by atom id.
/// The filtration element Y_N is {y : levels[y] <= N}.
using Filtration = std::vector<std::int64_t>;

struct Atom {
  std::int64_t id = 0;
  DyadicRational mass;
  std::int64_t filt_level = 0;
};

/// Finite probability space of atoms with a nested family Y_N.
///
/// Atoms are kept sorted by (filt_level, id), which is the order the
/// transport map lays them out on [0, 1).
class FiltrationSpace {
 public:
  explicit FiltrationSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw Error(Errc::invalid_value, "filtration space needs at least one atom");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
      return std::pair(a.filt_level, a.id) < std::pair(b.filt_level, b.id);
    });
    std::set<std::int64_t> ids;
    unsigned __int128 total = 0;
    for (const auto& atom : atoms_) {
      if (!ids.insert(atom.id).second) throw Error(Errc::invalid_value, "duplicate atom id " + std::to_string(atom.id));
      if (atom.mass == DyadicRational::zero())
        throw Error(Errc::invalid_value, "atom " + std::to_string(atom.id) + " has zero mass");
      total += atom.mass.scaled_to(kMaxDyadicLevel);
    }
    if (total != (static_cast<unsigned __int128>(1) << kMaxDyadicLevel))
      throw Error(Errc::not_normalized, "atom masses do not sum to 1");
  }

  /// Space over the atoms with positive mass; zero-mass atoms carry no
  /// measure and are left out.
  static FiltrationSpace from_masses(std::span<const DyadicRational> masses, const Filtration& levels) {
    if (masses.size() != levels.size())
      throw Error(Errc::dimension_mismatch, "mass and level vectors differ in length");
    std::vector<Atom> atoms;
    for (std::size_t y = 0; y < masses.size(); ++y)
      if (masses[y] != DyadicRational::zero())
        atoms.push_back({static_cast<std::int64_t>(y), masses[y], levels[y]});
    return FiltrationSpace(std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  const Atom& atom(std::int64_t id) const {
    for (const auto& a : atoms_)
      if (a.id == id) return a;
    throw Error(Errc::invalid_value, "no atom with id " + std::to_string(id));
  }

  bool contains(std::int64_t id, std::int64_t level) const { return atom(id).filt_level <= level; }

  /// lambda(Y_N).
  DyadicRational measure(std::int64_t level) const {
    DyadicRational sum;
    for (const auto& a : atoms_)
      if (a.filt_level <= level) sum = sum + a.mass;
    return sum;
  }

  std::vector<std::int64_t> members(std::int64_t level) const {
    std::vector<std::int64_t> out;
    for (const auto& a : atoms_)
      if (a.filt_level <= level) out.push_back(a.id);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Distinct finite filtration levels, ascending.
  std::vector<std::int64_t> levels() const {
    std::vector<std::int64_t> out;
    for (const auto& a : atoms_)
      if (a.filt_level != kNeverIncluded && (out.empty() || out.back() != a.filt_level)) out.push_back(a.filt_level);
    return out;
  }

 private:
  std::vector<Atom> atoms_;
};

/// A sub-interval [lo, hi) of an atom's segment, in transport coordinates.
struct Piece {
  std::int64_t atom_id = 0;
  DyadicRational lo, hi;

  DyadicRational length() const { return hi - lo; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Dyadic cell B^m_j: the transport preimage of I^m_j.
struct Cell {
  DyadicInterval tag = DyadicInterval::root();
  std::vector<Piece> parts;

  DyadicRational mass() const {
    DyadicRational sum;
    for (const auto& p : parts) sum = sum + p.length();
    return sum;
  }
};

/// Monotone measure-preserving map from the atoms onto [0, 1).
///
/// Atom y occupies the segment [c_y, c_y + lambda(y)) where c_y is the mass of
/// the atoms before it in (filt_level, id) order. Points of a segment stand for
/// slices of the split atom y x [0, 1).
class MeasureTransport {
 public:
  MeasureTransport() = default;

  explicit MeasureTransport(const FiltrationSpace& space) {
    DyadicRational cursor;
    for (const auto& atom : space.atoms()) {
      const auto next = cursor + atom.mass;
      segments_.push_back({atom.id, cursor, next});
      levels_.push_back(atom.filt_level);
      masses_.push_back(atom.mass);
      cursor = next;
    }
  }

  const std::vector<Piece>& segments() const { return segments_; }

  const Piece& segment(std::int64_t atom_id) const {
    for (const auto& s : segments_)
      if (s.atom_id == atom_id) return s;
    throw Error(Errc::invalid_value, "no segment for atom " + std::to_string(atom_id));
  }

  /// lambda(Y_N), read off as the right end of the last segment with level <= N.
  DyadicRational measure(std::int64_t level) const {
    DyadicRational out;
    for (std::size_t k = 0; k < segments_.size(); ++k)
      if (levels_[k] <= level) out = segments_[k].hi;
    return out;
  }

  std::int64_t level_of(std::int64_t atom_id) const {
    for (std::size_t k = 0; k < segments_.size(); ++k)
      if (segments_[k].atom_id == atom_id) return levels_[k];
    throw Error(Errc::invalid_value, "no segment for atom " + std::to_string(atom_id));
  }

  /// Preimage of [lo, hi) as pieces ordered by position.
  std::vector<Piece> preimage(const DyadicRational& lo, const DyadicRational& hi) const {
    std::vector<Piece> out;
    for (const auto& s : segments_) {
      const auto a = std::max(lo, s.lo);
      const auto b = std::min(hi, s.hi);
      if (a < b) out.push_back({s.atom_id, a, b});
    }
    return out;
  }

  /// Fraction of each atom covered by `pieces`, indexed by atom id
  /// (atoms not in the space get 0). Exact.
  std::vector<Rational> coverage(std::span<const Piece> pieces, std::size_t atom_count) const {
    std::vector<Rational> out(atom_count);
    for (const auto& p : pieces) {
      const auto& seg = segment(p.atom_id);
      out.at(static_cast<std::size_t>(p.atom_id)) += to_rational(p.length()) / to_rational(seg.length());
    }
    return out;
  }

 private:
  std::vector<Piece> segments_;
  std::vector<std::int64_t> levels_;
  std::vector<DyadicRational> masses_;
};

inline MeasureTransport build_transport(const FiltrationSpace& space) { return MeasureTransport(space); }

inline Cell cell_preimage(const MeasureTransport& transport, const DyadicInterval& interval) {
  return {interval, transport.preimage(interval.lower(), interval.upper())};
}

struct DifferenceCells {
  std::vector<Cell> left_cells;
  std::vector<Cell> right_cells;
};

/// Y_N \ Y_M as the preimages of the left and right siblings of
/// [lambda(Y_M), lambda(Y_N)).
inline DifferenceCells decompose_difference(const MeasureTransport& transport, std::int64_t lower_level,
                                            std::int64_t upper_level, unsigned max_level = kDefaultDepth) {
  if (lower_level > upper_level)
    throw Error(Errc::invalid_range, "need M <= N, got M=" + std::to_string(lower_level) +
                                         " N=" + std::to_string(upper_level));
  DifferenceCells out;
  const auto a = transport.measure(lower_level);
  const auto b = transport.measure(upper_level);
  if (a == b) return out;
  for (const auto& interval : decompose_interval(a, b, max_level)) {
    auto cell = cell_preimage(transport, interval);
    (interval.is_left_sibling() ? out.left_cells : out.right_cells).push_back(std::move(cell));
  }
  return out;
}

/// |f|^p masses of a function on Y1 x Y2, row-major with rows indexed by Y1 atoms.
struct ProductMasses {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<DyadicRational> mass;

  const DyadicRational& at(std::size_t i, std::size_t k) const { return mass[i * cols + k]; }
};

/// The marginal probability spaces lambda_1(S) = mass(S x Y2), lambda_2(U) = mass(Y1 x U).
inline std::pair<FiltrationSpace, FiltrationSpace> marginal_measures(const ProductMasses& f, const Filtration& levels1,
                                                                     const Filtration& levels2) {
  if (f.mass.size() != f.rows * f.cols || levels1.size() != f.rows || levels2.size() != f.cols)
    throw Error(Errc::dimension_mismatch, "mass grid and filtrations disagree in size");
  unsigned __int128 total = 0;
  std::vector<unsigned __int128> row(f.rows), col(f.cols);
  for (std::size_t i = 0; i < f.rows; ++i)
    for (std::size_t k = 0; k < f.cols; ++k) {
      const auto v = f.at(i, k).scaled_to(kMaxDyadicLevel);
      row[i] += v;
      col[k] += v;
      total += v;
    }
  const auto unit = static_cast<unsigned __int128>(1) << kMaxDyadicLevel;
  if (total != unit) throw Error(Errc::not_normalized, "sum of |f|^p masses is not 1");
  auto to_dyadic = [](unsigned __int128 v) {
    return DyadicRational(static_cast<std::uint64_t>(v), kMaxDyadicLevel).canonical();
  };
  std::vector<DyadicRational> m1, m2;
  for (auto v : row) m1.push_back(to_dyadic(v));
  for (auto v : col) m2.push_back(to_dyadic(v));
  return {FiltrationSpace::from_masses(m1, levels1), FiltrationSpace::from_masses(m2, levels2)};
}

/// Same as above from floating-point masses, which must be exactly dyadic of level <= max_level.
inline std::pair<FiltrationSpace, FiltrationSpace> marginal_measures(std::span<const double> masses, std::size_t rows,
                                                                     std::size_t cols, const Filtration& levels1,
                                                                     const Filtration& levels2,
                                                                     unsigned max_level = kDefaultDepth) {
  if (masses.size() != rows * cols) throw Error(Errc::dimension_mismatch, "mass grid has wrong size");
  double total = 0.0;
  for (double v : masses) total += v;
  if (total != 1.0) throw Error(Errc::not_normalized, "sum of |f|^p masses is " + std::to_string(total));
  ProductMasses f{rows, cols, {}};
  for (double v : masses) f.mass.push_back(DyadicRational::from_double(v, max_level));
  return marginal_measures(f, levels1, levels2);
}

}  // namespace varkit
