#pragma once

// Text formats: FiltrationSpace and OperatorSpec as JSON, TruncationFamily
// and CoefficientArray as CSV. Doubles are written with %.17g so output is
// byte-identical across runs.

#include <cstdio>
#include <istream>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "varkit/dyadic.hpp"
#include "varkit/error.hpp"
#include "varkit/operators.hpp"
#include "varkit/transport.hpp"
#include "varkit/variation.hpp"

namespace varkit {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// FiltrationSpace.

inline Json to_json(const FiltrationSpace& space) {
  Json atoms = Json::array();
  for (const auto& a : space.atoms()) {
    const auto m = a.mass.canonical();
    Json level = a.filt_level == kNeverIncluded ? Json("inf") : Json(a.filt_level);
    atoms.push_back({{"id", a.id}, {"mass_num", m.numerator()}, {"mass_level", m.level()}, {"filt_level", level}});
  }
  return Json{{"atoms", atoms}};
}

inline FiltrationSpace filtration_space_from_json(const Json& j) {
  try {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.at("mass_num").is_number_integer() || !a.at("mass_level").is_number_integer())
        throw Error(Errc::parse_error, "masses must be integer pairs");
      const auto& lv = a.at("filt_level");
      std::int64_t level = 0;
      if (lv.is_string() && lv.get<std::string>() == "inf")
        level = kNeverIncluded;
      else if (lv.is_number_integer())
        level = lv.get<std::int64_t>();
      else
        throw Error(Errc::parse_error, "filt_level must be an integer or \"inf\"");
      atoms.push_back({a.at("id").get<std::int64_t>(),
                       DyadicRational(a.at("mass_num").get<std::uint64_t>(), a.at("mass_level").get<unsigned>()), level});
    }
    return FiltrationSpace(std::move(atoms));
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

// ---------------------------------------------------------------------------
// Complex values in JSON: a number or [re, im].

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(Errc::parse_error, "expected a number or [re, im]");
}

inline std::vector<Complex> complex_vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(Errc::parse_error, "expected an array");
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_from_json(v));
  return out;
}

inline Json complex_to_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

inline Json complex_vector_to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (auto z : v) out.push_back(complex_to_json(z));
  return out;
}

// ---------------------------------------------------------------------------
// OperatorSpec. Kinds: identity, zero, diagonal, rank_one, dft, dense_matrix,
// bilinear_kernel (separable or dense).

inline OperatorSpec operator_from_json(const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "identity") return OperatorSpec::identity(j.at("size").get<std::size_t>());
    if (kind == "zero") return OperatorSpec::zero(j.at("size").get<std::size_t>());
    if (kind == "diagonal") return {Diagonal{complex_vector_from_json(j.at("weights"))}};
    if (kind == "rank_one") return {RankOne{complex_vector_from_json(j.at("u")), complex_vector_from_json(j.at("v"))}};
    if (kind == "dft") return {Dft{j.at("size").get<std::size_t>()}};
    if (kind == "dense_matrix") {
      DenseMatrix m;
      const auto& rows = j.at("entries");
      m.rows = rows.size();
      for (const auto& row : rows) {
        auto r = complex_vector_from_json(row);
        if (m.cols == 0) m.cols = r.size();
        if (r.size() != m.cols) throw Error(Errc::dimension_mismatch, "ragged matrix rows");
        m.entries.insert(m.entries.end(), r.begin(), r.end());
      }
      return {m};
    }
    if (kind == "bilinear_kernel") {
      BilinearKernel k;
      k.separable = j.value("separable", true);
      if (k.separable) {
        k.g = complex_vector_from_json(j.at("g"));
        k.u = complex_vector_from_json(j.at("u"));
        k.v = complex_vector_from_json(j.at("v"));
      } else {
        k.nx = j.at("nx").get<std::size_t>();
        k.n1 = j.at("n1").get<std::size_t>();
        k.n2 = j.at("n2").get<std::size_t>();
        k.entries = complex_vector_from_json(j.at("entries"));
        if (k.entries.size() != k.nx * k.n1 * k.n2) throw Error(Errc::dimension_mismatch, "kernel needs nx*n1*n2 entries");
      }
      return {k};
    }
    throw Error(Errc::parse_error, "unknown operator kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

inline Json to_json(const OperatorSpec& spec) {
  return std::visit(
      [](const auto& op) -> Json {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Diagonal>) {
          return {{"kind", "diagonal"}, {"weights", complex_vector_to_json(op.weights)}};
        } else if constexpr (std::is_same_v<T, RankOne>) {
          return {{"kind", "rank_one"}, {"u", complex_vector_to_json(op.u)}, {"v", complex_vector_to_json(op.v)}};
        } else if constexpr (std::is_same_v<T, Dft>) {
          return {{"kind", "dft"}, {"size", op.size}};
        } else if constexpr (std::is_same_v<T, DenseMatrix>) {
          Json rows = Json::array();
          for (std::size_t i = 0; i < op.rows; ++i)
            rows.push_back(complex_vector_to_json(
                std::vector<Complex>(op.entries.begin() + i * op.cols, op.entries.begin() + (i + 1) * op.cols)));
          return {{"kind", "dense_matrix"}, {"entries", rows}};
        } else {
          if (op.separable)
            return {{"kind", "bilinear_kernel"}, {"separable", true}, {"g", complex_vector_to_json(op.g)},
                    {"u", complex_vector_to_json(op.u)}, {"v", complex_vector_to_json(op.v)}};
          return {{"kind", "bilinear_kernel"}, {"separable", false}, {"nx", op.nx}, {"n1", op.n1}, {"n2", op.n2},
                  {"entries", complex_vector_to_json(op.entries)}};
        }
      },
      spec.payload);
}

// ---------------------------------------------------------------------------
// CSV helpers.

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

inline double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error(Errc::parse_error, "not a number: '" + s + "'");
  return v;
}

inline std::int64_t parse_integer(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "not an integer: '" + s + "'");
  }
  if (used != s.size()) throw Error(Errc::parse_error, "not an integer: '" + s + "'");
  return v;
}

/// Non-empty, non-comment rows; a first row whose first cell is not numeric is a header.
inline std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    auto cells = split_csv(line);
    if (first) {
      first = false;
      const auto& c = cells.front();
      if (!c.empty() && !(std::isdigit(static_cast<unsigned char>(c[0])) || c[0] == '-' || c[0] == '+' || c[0] == '.'))
        continue;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// TruncationFamily CSV: sample_id,t_1..t_d,re,im.

inline void write_csv(std::ostream& out, const TruncationFamily& family) {
  const auto d = family.grid.dims();
  out << "sample_id";
  for (std::size_t a = 0; a < d; ++a) out << ",t_" << (a + 1);
  out << ",re,im\n";
  for (std::size_t s = 0; s < family.samples.size(); ++s)
    for (std::size_t k = 0; k < family.grid.size(); ++k) {
      out << family.samples[s];
      for (auto t : family.grid.point(k)) out << ',' << t;
      const auto z = family.values[s][k];
      out << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
}

/// Every sample must list every point of the product of the observed axis values.
inline TruncationFamily read_family_csv(std::istream& in) {
  const auto rows = detail::read_rows(in);
  if (rows.empty()) throw Error(Errc::parse_error, "empty family");
  const std::size_t width = rows.front().size();
  if (width < 4) throw Error(Errc::parse_error, "need sample_id, at least one t column, re, im");
  const std::size_t d = width - 3;

  std::vector<std::set<std::int64_t>> axis_values(d);
  std::map<std::int64_t, std::map<std::vector<std::int64_t>, Complex>> by_sample;
  for (const auto& row : rows) {
    if (row.size() != width) throw Error(Errc::parse_error, "ragged CSV row");
    const auto id = detail::parse_integer(row[0]);
    std::vector<std::int64_t> point(d);
    for (std::size_t a = 0; a < d; ++a) {
      point[a] = detail::parse_integer(row[1 + a]);
      axis_values[a].insert(point[a]);
    }
    const Complex z(detail::parse_number(row[d + 1]), detail::parse_number(row[d + 2]));
    if (!by_sample[id].emplace(point, z).second) throw Error(Errc::parse_error, "duplicate grid point");
  }
  std::vector<std::vector<std::int64_t>> axes;
  for (const auto& s : axis_values) axes.emplace_back(s.begin(), s.end());
  TruncationFamily family{IndexGrid(axes), {}, {}};
  for (const auto& [id, points] : by_sample) {
    if (points.size() != family.grid.size())
      throw Error(Errc::parse_error, "sample " + std::to_string(id) + " does not cover the full grid");
    family.samples.push_back(id);
    std::vector<Complex> values(family.grid.size());
    for (const auto& [pt, z] : points) values[family.grid.flat_index(pt)] = z;
    family.values.push_back(std::move(values));
  }
  return family;
}

// ---------------------------------------------------------------------------
// CoefficientArray CSV: n_1[,n_2],re,im.

inline CoefficientArray read_coefficients_csv(std::istream& in) {
  const auto rows = detail::read_rows(in);
  if (rows.empty()) throw Error(Errc::parse_error, "empty coefficient array");
  const std::size_t width = rows.front().size();
  if (width != 3 && width != 4) throw Error(Errc::parse_error, "coefficient rows are n_1[,n_2],re,im");
  CoefficientArray a;
  a.dims = width - 2;
  for (const auto& row : rows) {
    if (row.size() != width) throw Error(Errc::parse_error, "ragged CSV row");
    std::vector<std::int64_t> n;
    for (std::size_t k = 0; k < a.dims; ++k) n.push_back(detail::parse_integer(row[k]));
    a.set(n, {detail::parse_number(row[a.dims]), detail::parse_number(row[a.dims + 1])});
  }
  return a;
}

inline void write_csv(std::ostream& out, const CoefficientArray& a) {
  out << (a.dims == 1 ? "n_1,re,im\n" : "n_1,n_2,re,im\n");
  for (const auto& [n, z] : a.entries) {
    for (auto k : n) out << k << ',';
    out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
  }
}

}  // namespace varkit
