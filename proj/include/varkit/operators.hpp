#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "varkit/error.hpp"
#include "varkit/rng.hpp"
#include "varkit/transport.hpp"
#include "varkit/variation.hpp"

namespace varkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Conjugate exponent p' with 1/p + 1/p' = 1.
inline double conjugate(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

template <class T>
double lp_norm(std::span<const T> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (const auto& x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

/// e^{-2 pi i theta} with theta reduced mod 1 first.
inline Complex unit_phase(double theta) {
  const double frac = theta - std::floor(theta);
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

/// Finitely supported coefficients a_n, n in Z^d.
struct CoefficientArray {
  std::size_t dims = 1;
  std::map<std::vector<std::int64_t>, Complex> entries;

  void set(std::vector<std::int64_t> n, Complex value) {
    if (n.size() != dims) throw Error(Errc::dimension_mismatch, "frequency has wrong dimension");
    entries[std::move(n)] = value;
  }

  double lp_norm(double p) const {
    std::vector<Complex> v;
    for (const auto& [n, a] : entries) v.push_back(a);
    return varkit::lp_norm<Complex>(v, p);
  }

  std::int64_t max_abs_frequency() const {
    std::int64_t m = 0;
    for (const auto& [n, a] : entries)
      for (auto c : n) m = std::max(m, c < 0 ? -c : c);
    return m;
  }
};

/// S_{M,N}(a)(xi, eta) = sum over |m| <= M, |n| <= N of a_{m,n} e^{-2 pi i (m xi + n eta)} (any d).
inline Complex rect_partial_sum(const CoefficientArray& a, std::span<const std::int64_t> bounds,
                                std::span<const double> point) {
  if (bounds.size() != a.dims || point.size() != a.dims)
    throw Error(Errc::dimension_mismatch, "bounds/point do not match coefficient dimension");
  Complex sum = 0.0;
  for (const auto& [n, coef] : a.entries) {
    bool inside = true;
    double theta = 0.0;
    for (std::size_t k = 0; k < a.dims; ++k) {
      if (std::abs(n[k]) > bounds[k]) inside = false;
      theta += static_cast<double>(n[k]) * point[k];
    }
    if (inside) sum += coef * unit_phase(theta);
  }
  return sum;
}

/// S_R(a)(xi) over the Euclidean ball |n| <= R.
inline Complex spherical_partial_sum(const CoefficientArray& a, double radius, std::span<const double> point) {
  if (point.size() != a.dims) throw Error(Errc::dimension_mismatch, "point does not match coefficient dimension");
  if (radius < 0) throw Error(Errc::invalid_value, "radius must be non-negative");
  Complex sum = 0.0;
  for (const auto& [n, coef] : a.entries) {
    double norm2 = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < a.dims; ++k) {
      norm2 += static_cast<double>(n[k]) * static_cast<double>(n[k]);
      theta += static_cast<double>(n[k]) * point[k];
    }
    if (norm2 <= radius * radius) sum += coef * unit_phase(theta);
  }
  return sum;
}

/// Fourier transform of 1_{[-1,1]} truncated to [-N, N]: sin(2 pi min(N,1) x) / (pi x).
inline double truncated_sinc(double cutoff, double x) {
  if (x == 0.0) throw Error(Errc::singular_point, "x = 0 (limit is 2 min(N,1))");
  if (!(cutoff > 0.0)) throw Error(Errc::invalid_value, "cutoff must be positive");
  const double n = std::min(cutoff, 1.0);
  return std::sin(2.0 * std::numbers::pi * n * x) / (std::numbers::pi * x);
}

// ---------------------------------------------------------------------------
// Operators on finite spaces with counting measure.

struct Diagonal {
  std::vector<Complex> weights;
};
/// T f = u <v, f>, with the bilinear pairing <v, f> = sum v_i f_i.
struct RankOne {
  std::vector<Complex> u, v;
};
/// Unitary DFT of the given size.
struct Dft {
  std::size_t size = 0;
};
struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Complex> entries;  // row-major
};
/// T(f1, f2)(x) = sum K(x, y1, y2) f1(y1) f2(y2). Separable kernels carry g, u, v with K = g(x) u(y1) v(y2).
struct BilinearKernel {
  bool separable = true;
  std::vector<Complex> g, u, v;
  std::size_t nx = 0, n1 = 0, n2 = 0;
  std::vector<Complex> entries;  // dense: [x][y1][y2]

  std::size_t out_size() const { return separable ? g.size() : nx; }
  std::size_t size1() const { return separable ? u.size() : n1; }
  std::size_t size2() const { return separable ? v.size() : n2; }
  Complex at(std::size_t x, std::size_t y1, std::size_t y2) const {
    return separable ? g[x] * u[y1] * v[y2] : entries[(x * n1 + y1) * n2 + y2];
  }
};

enum class OperatorKind { diagonal, rank_one, dft, dense_matrix, bilinear_kernel };

inline std::string_view to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::diagonal: return "diagonal";
    case OperatorKind::rank_one: return "rank_one";
    case OperatorKind::dft: return "dft";
    case OperatorKind::dense_matrix: return "dense_matrix";
    case OperatorKind::bilinear_kernel: return "bilinear_kernel";
  }
  return "unknown";
}

struct OperatorSpec {
  std::variant<Diagonal, RankOne, Dft, DenseMatrix, BilinearKernel> payload;

  OperatorKind kind() const { return static_cast<OperatorKind>(payload.index()); }
  std::size_t arity() const { return kind() == OperatorKind::bilinear_kernel ? 2 : 1; }

  std::size_t input_size() const {
    return std::visit(
        [](const auto& op) -> std::size_t {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, Diagonal>) return op.weights.size();
          else if constexpr (std::is_same_v<T, RankOne>) return op.v.size();
          else if constexpr (std::is_same_v<T, Dft>) return op.size;
          else if constexpr (std::is_same_v<T, DenseMatrix>) return op.cols;
          else return op.size1();
        },
        payload);
  }

  std::size_t output_size() const {
    return std::visit(
        [](const auto& op) -> std::size_t {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, Diagonal>) return op.weights.size();
          else if constexpr (std::is_same_v<T, RankOne>) return op.u.size();
          else if constexpr (std::is_same_v<T, Dft>) return op.size;
          else if constexpr (std::is_same_v<T, DenseMatrix>) return op.rows;
          else return op.out_size();
        },
        payload);
  }

  static OperatorSpec identity(std::size_t n) { return {Diagonal{std::vector<Complex>(n, 1.0)}}; }
  static OperatorSpec zero(std::size_t n) { return {Diagonal{std::vector<Complex>(n, 0.0)}}; }
};

/// Exponents (p_1..p_k, q, r). A single p is shared by every slot.
struct ExponentConfig {
  std::vector<double> p{1.0};
  double q = 2.0;
  double r = 2.0;

  double p_at(std::size_t slot) const { return p.size() == 1 ? p[0] : p.at(slot); }

  /// 1 <= p_i < min(q, r) for every slot.
  bool valid() const {
    return !p.empty() && std::all_of(p.begin(), p.end(), [&](double pi) { return pi >= 1.0 && pi < q && pi < r; });
  }
};

/// Dense matrix of a linear registry operator.
inline DenseMatrix to_dense(const OperatorSpec& spec) {
  if (spec.arity() != 1) throw Error(Errc::invalid_value, "bilinear kernel has no matrix");
  const std::size_t rows = spec.output_size(), cols = spec.input_size();
  DenseMatrix m{rows, cols, std::vector<Complex>(rows * cols)};
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Diagonal>) {
          for (std::size_t i = 0; i < rows; ++i) m.entries[i * cols + i] = op.weights[i];
        } else if constexpr (std::is_same_v<T, RankOne>) {
          for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m.entries[i * cols + j] = op.u[i] * op.v[j];
        } else if constexpr (std::is_same_v<T, Dft>) {
          const double scale = 1.0 / std::sqrt(static_cast<double>(op.size));
          for (std::size_t k = 0; k < rows; ++k)
            for (std::size_t j = 0; j < cols; ++j)
              m.entries[k * cols + j] =
                  scale * unit_phase(static_cast<double>((j * k) % op.size) / static_cast<double>(op.size));
        } else if constexpr (std::is_same_v<T, DenseMatrix>) {
          m = op;
        }
      },
      spec.payload);
  return m;
}

inline std::vector<Complex> apply(const DenseMatrix& m, std::span<const Complex> f) {
  if (f.size() != m.cols) throw Error(Errc::dimension_mismatch, "input size does not match operator");
  std::vector<Complex> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m.entries[i * m.cols + j] * f[j];
    out[i] = s;
  }
  return out;
}

inline std::vector<Complex> apply(const OperatorSpec& spec, std::span<const Complex> f) {
  return varkit::apply(to_dense(spec), f);
}

inline std::vector<Complex> apply(const BilinearKernel& k, std::span<const Complex> f1, std::span<const Complex> f2) {
  if (f1.size() != k.size1() || f2.size() != k.size2())
    throw Error(Errc::dimension_mismatch, "inputs do not match bilinear kernel");
  std::vector<Complex> out(k.out_size());
  if (k.separable) {
    Complex a = 0.0, b = 0.0;
    for (std::size_t y = 0; y < f1.size(); ++y) a += k.u[y] * f1[y];
    for (std::size_t y = 0; y < f2.size(); ++y) b += k.v[y] * f2[y];
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = k.g[x] * a * b;
    return out;
  }
  for (std::size_t x = 0; x < out.size(); ++x) {
    Complex s = 0.0;
    for (std::size_t y1 = 0; y1 < f1.size(); ++y1)
      for (std::size_t y2 = 0; y2 < f2.size(); ++y2) s += k.at(x, y1, y2) * f1[y1] * f2[y2];
    out[x] = s;
  }
  return out;
}

inline std::vector<Complex> apply(const OperatorSpec& spec, std::span<const Complex> f1, std::span<const Complex> f2) {
  const auto* k = std::get_if<BilinearKernel>(&spec.payload);
  if (k == nullptr) throw Error(Errc::invalid_value, "operator is not bilinear");
  return varkit::apply(*k, f1, f2);
}

namespace detail {

inline double row_dual_bound(const DenseMatrix& m, double p, double q) {
  std::vector<double> rows(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    rows[i] = lp_norm<Complex>(std::span(m.entries).subspan(i * m.cols, m.cols), conjugate(p));
  return lp_norm<double>(rows, q);
}

}  // namespace detail

/// Analytic upper bound for the (p, q) norm, counting measure on both sides.
///
///  diagonal, p <= q     max |d_i|                      (l^p embeds contractively in l^q)
///  rank_one             |u|_q |v|_{p'}                 (Hoelder, attained)
///  dft, q >= 2          max(1, n^{1/q' - 1/p})         (Hausdorff-Young into l^q from l^{q'})
///  dft, q < 2           n^{1/q - 1/2} max(1, n^{1/2 - 1/p})   (Plancherel plus l^q/l^2 comparison)
///  dense_matrix         (sum_x |row_x|_{p'}^q)^{1/q}    (Hoelder row by row)
///  bilinear separable   |g|_q |u|_{p1'} |v|_{p2'}
///  bilinear dense       l^q over x of the mixed l^{p1'}(l^{p2'}) kernel norm
inline double certified_norm(const OperatorSpec& spec, const ExponentConfig& exps) {
  const double p = exps.p_at(0), q = exps.q;
  if (p < 1.0 || q < 1.0) throw Error(Errc::invalid_exponent, "exponents must be >= 1");
  return std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Diagonal>) {
          if (p > q) throw Error(Errc::no_certificate, "diagonal operator certified only for p <= q");
          return lp_norm<Complex>(op.weights, kInf);
        } else if constexpr (std::is_same_v<T, RankOne>) {
          return lp_norm<Complex>(op.u, q) * lp_norm<Complex>(op.v, conjugate(p));
        } else if constexpr (std::is_same_v<T, Dft>) {
          const double n = static_cast<double>(op.size);
          if (q >= 2.0) return std::max(1.0, std::pow(n, 1.0 / conjugate(q) - 1.0 / p));
          return std::pow(n, 1.0 / q - 0.5) * std::max(1.0, std::pow(n, 0.5 - 1.0 / p));
        } else if constexpr (std::is_same_v<T, DenseMatrix>) {
          return detail::row_dual_bound(op, p, q);
        } else {
          const double p2 = exps.p_at(1);
          if (op.separable)
            return lp_norm<Complex>(op.g, q) * lp_norm<Complex>(op.u, conjugate(p)) *
                   lp_norm<Complex>(op.v, conjugate(p2));
          std::vector<double> per_x(op.nx);
          for (std::size_t x = 0; x < op.nx; ++x) {
            std::vector<double> inner(op.n1);
            for (std::size_t y1 = 0; y1 < op.n1; ++y1)
              inner[y1] = lp_norm<Complex>(std::span(op.entries).subspan((x * op.n1 + y1) * op.n2, op.n2), conjugate(p2));
            per_x[x] = lp_norm<double>(inner, conjugate(p));
          }
          return lp_norm<double>(per_x, q);
        }
      },
      spec.payload);
}

/// Lower estimate of the (p, q) norm: best ratio |Tf|_q / |f|_p over basis
/// vectors and random inputs, refined by coordinate ascent.
inline double norm_lower_estimate(const OperatorSpec& spec, const ExponentConfig& exps, std::size_t trials,
                                  std::uint64_t seed) {
  Rng rng(seed);
  const bool bilinear = spec.arity() == 2;
  const std::size_t n1 = spec.input_size();
  const std::size_t n2 = bilinear ? std::get<BilinearKernel>(spec.payload).size2() : 0;
  const double p1 = exps.p_at(0), p2 = bilinear ? exps.p_at(1) : 1.0;
  const DenseMatrix matrix = bilinear ? DenseMatrix{} : to_dense(spec);

  auto ratio = [&](const std::vector<Complex>& z) {
    std::span<const Complex> f1(z.data(), n1);
    const double d1 = lp_norm<Complex>(f1, p1);
    if (d1 == 0.0) return 0.0;
    if (!bilinear) return lp_norm<Complex>(varkit::apply(matrix, f1), exps.q) / d1;
    std::span<const Complex> f2(z.data() + n1, n2);
    const double d2 = lp_norm<Complex>(f2, p2);
    if (d2 == 0.0) return 0.0;
    return lp_norm<Complex>(varkit::apply(spec, f1, f2), exps.q) / (d1 * d2);
  };

  const std::size_t total = n1 + n2;
  std::vector<std::vector<Complex>> candidates;
  if (!bilinear) {
    for (std::size_t j = 0; j < n1; ++j) {
      std::vector<Complex> e(total, 0.0);
      e[j] = 1.0;
      candidates.push_back(std::move(e));
    }
  } else {
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n2; ++k) {
        std::vector<Complex> e(total, 0.0);
        e[j] = 1.0;
        e[n1 + k] = 1.0;
        candidates.push_back(std::move(e));
      }
  }
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Complex> z(total);
    for (auto& c : z) c = rng.unit_disk();
    candidates.push_back(std::move(z));
  }

  std::vector<Complex> best_z;
  double best = -1.0;
  for (auto& z : candidates) {
    const double v = ratio(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }

  // Coordinate ascent with step halving.
  const Complex directions[] = {1.0, -1.0, Complex(0, 1), Complex(0, -1)};
  for (double step = 0.5; step > 1e-9; step *= 0.5) {
    bool improved = true;
    for (int sweep = 0; improved && sweep < 50; ++sweep) {
      improved = false;
      for (std::size_t j = 0; j < total; ++j)
        for (const auto& dir : directions) {
          auto z = best_z;
          z[j] += step * dir;
          const double v = ratio(z);
          if (v > best * (1.0 + 1e-15)) {
            best = v;
            best_z = std::move(z);
            improved = true;
          }
        }
    }
  }

  try {
    const double cert = certified_norm(spec, exps);
    if (best > cert * (1.0 + 1e-9))
      throw std::logic_error("norm estimate " + std::to_string(best) + " exceeds certificate " + std::to_string(cert));
  } catch (const Error& e) {
    if (e.code() != Errc::no_certificate) throw;
  }
  return std::max(best, 0.0);
}

// ---------------------------------------------------------------------------
// Truncation families.

/// A function on a product of finite factors, row-major over factor_sizes.
struct ProductFunction {
  std::vector<std::size_t> factor_sizes;
  std::vector<Complex> values;

  std::size_t size() const {
    std::size_t n = 1;
    for (auto s : factor_sizes) n *= s;
    return n;
  }
};

/// f multiplied by the product weight theta_1(y_1) ... theta_D(y_D).
inline std::vector<Complex> restrict_product(const ProductFunction& f, std::span<const std::vector<double>> weights) {
  if (weights.size() != f.factor_sizes.size()) throw Error(Errc::dimension_mismatch, "one weight vector per factor");
  std::vector<Complex> out(f.values);
  std::size_t stride = out.size();
  for (std::size_t a = 0; a < weights.size(); ++a) {
    const std::size_t n = f.factor_sizes[a];
    if (weights[a].size() != n) throw Error(Errc::dimension_mismatch, "weight vector has wrong size");
    stride /= n;
    for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] *= weights[a][(idx / stride) % n];
  }
  return out;
}

inline std::vector<double> indicator_weights(const Filtration& levels, const AxisSet& set) {
  std::vector<double> w(levels.size());
  for (std::size_t y = 0; y < levels.size(); ++y) w[y] = set.contains_level(levels[y]) ? 1.0 : 0.0;
  return w;
}

/// F_t(x) = T(f 1_{Y_t})(x) for every grid point; for a bilinear T the grid
/// has one axis per factor of every slot, slot-major.
inline TruncationFamily truncation_family(const OperatorSpec& spec, std::span<const ProductFunction> args,
                                          std::span<const Filtration> filtrations, const IndexGrid& grid) {
  if (args.size() != spec.arity()) throw Error(Errc::dimension_mismatch, "wrong number of arguments for operator");
  std::size_t factors = 0;
  for (const auto& f : args) {
    if (f.values.size() != f.size()) throw Error(Errc::dimension_mismatch, "function values do not match factor sizes");
    factors += f.factor_sizes.size();
  }
  if (grid.dims() != factors || filtrations.size() != factors)
    throw Error(Errc::dimension_mismatch, "grid needs one axis and one filtration per factor");
  {
    std::size_t a = 0;
    for (const auto& f : args)
      for (auto n : f.factor_sizes)
        if (filtrations[a++].size() != n) throw Error(Errc::dimension_mismatch, "filtration size differs from factor size");
  }

  TruncationFamily family;
  family.grid = grid;
  const std::size_t nx = spec.output_size();
  for (std::size_t x = 0; x < nx; ++x) family.samples.push_back(static_cast<std::int64_t>(x));
  family.values.assign(nx, std::vector<Complex>(grid.size()));
  const DenseMatrix matrix = spec.arity() == 1 ? to_dense(spec) : DenseMatrix{};

  for (std::size_t t = 0; t < grid.size(); ++t) {
    const auto point = grid.point(t);
    std::vector<std::vector<Complex>> restricted;
    std::size_t a = 0;
    for (const auto& f : args) {
      std::vector<std::vector<double>> w;
      for (std::size_t k = 0; k < f.factor_sizes.size(); ++k, ++a)
        w.push_back(indicator_weights(filtrations[a], AxisSet{false, 0, point[a]}));
      restricted.push_back(restrict_product(f, w));
    }
    const auto out = spec.arity() == 1 ? varkit::apply(matrix, restricted[0]) : varkit::apply(spec, restricted[0], restricted[1]);
    for (std::size_t x = 0; x < nx; ++x) family.values[x][t] = out[x];
  }
  return family;
}

}  // namespace varkit
