#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the elimination, null-space or evaluation code it is used to check.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "newton/ir.hpp"
#include "newton/rational.hpp"
#include "newton/runtime.hpp"

namespace newton::testing {

/// Determinant by cofactor expansion along the first row.
inline Rational laplace_det(const std::vector<std::vector<Rational>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return Rational(1);
  if (n == 1) return a[0][0];
  Rational total(0);
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<Rational>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(std::move(row));
    }
    const Rational term = a[0][c] * laplace_det(minor);
    total += (c % 2 == 0) ? term : -term;
  }
  return total;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    if (f(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Rank as the size of the largest nonzero minor.
inline std::size_t minor_scan_rank(const std::vector<std::vector<Rational>>& m, std::size_t cols) {
  const std::size_t rows = m.size();
  for (std::size_t r = std::min(rows, cols); r > 0; --r) {
    bool found = false;
    for_each_subset(rows, r, [&](const std::vector<std::size_t>& rs) {
      for_each_subset(cols, r, [&](const std::vector<std::size_t>& cs) {
        std::vector<std::vector<Rational>> sub;
        for (auto i : rs) {
          std::vector<Rational> row;
          for (auto j : cs) row.push_back(m[i][j]);
          sub.push_back(std::move(row));
        }
        found = !laplace_det(sub).is_zero();
        return found;
      });
      return found;
    });
    if (found) return r;
  }
  return 0;
}

/// Every nonzero integer vector in [lo, hi]^n with m * x = 0.
inline std::vector<std::vector<long>> exhaustive_null_vectors(const std::vector<std::vector<Rational>>& m,
                                                              std::size_t cols, long lo, long hi) {
  std::vector<std::vector<long>> out;
  std::vector<long> x(cols, lo);
  while (true) {
    bool nonzero = false;
    for (auto v : x) nonzero = nonzero || v != 0;
    if (nonzero) {
      bool zero = true;
      for (std::size_t r = 0; r < m.size() && zero; ++r) {
        Rational s(0);
        for (std::size_t c = 0; c < cols; ++c) s += m[r][c] * Rational(x[c]);
        zero = s.is_zero();
      }
      if (zero) out.push_back(x);
    }
    std::size_t i = 0;
    while (i < cols && x[i] == hi) x[i++] = lo;
    if (i == cols) break;
    ++x[i];
  }
  return out;
}

/// Divides out the gcd and makes the last nonzero entry positive.
inline std::vector<long> canonical_monomial(std::vector<long> v) {
  long g = 0;
  for (auto x : v) g = std::gcd(g, x);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] != 0) {
      if (v[i] < 0) {
        for (auto& x : v) x = -x;
      }
      break;
    }
  }
  return v;
}

/// Solves x = sum c_i basis_i over the rationals by brute elimination on an
/// augmented matrix; nullopt if x is outside the span.
inline std::optional<std::vector<Rational>> span_coefficients(const std::vector<std::vector<Rational>>& basis,
                                                              const std::vector<Rational>& x) {
  const std::size_t d = basis.size();
  const std::size_t n = x.size();
  // rows = coordinates, columns = basis vectors + rhs
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(d + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) a[r][c] = basis[c][r];
    a[r][d] = x[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < d && row < n; ++c) {
    std::size_t p = row;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][c].is_zero()) continue;
      const Rational f = a[r][c] / a[row][c];
      for (std::size_t k = 0; k <= d; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r) {
    if (!a[r][d].is_zero()) return std::nullopt;
  }
  std::vector<Rational> coeffs(d, Rational(0));
  for (std::size_t r = 0; r < pivot_col.size(); ++r) coeffs[pivot_col[r]] = a[r][d] / a[r][pivot_col[r]];
  return coeffs;
}

/// Tree-walking evaluator in long double.
inline std::optional<long double> reference_eval(const TypedExpr& e, const SampleRecord& rec,
                                                 const ConstantTable& constants) {
  switch (e.op) {
    case ExprOp::Number: return static_cast<long double>(e.number);
    case ExprOp::Unit: return 1.0L;
    case ExprOp::Parameter: {
      const auto key = e.component ? e.name + "@" + std::to_string(*e.component) : e.name;
      const auto it = rec.values.find(key);
      if (it == rec.values.end()) return std::nullopt;
      return static_cast<long double>(it->second);
    }
    case ExprOp::Constant: {
      const auto it = constants.find(e.name);
      if (it == constants.end()) return std::nullopt;
      return static_cast<long double>(it->second);
    }
    case ExprOp::Signal: return std::nullopt;
    case ExprOp::Negate: {
      auto v = reference_eval(e.operands[0], rec, constants);
      if (!v) return std::nullopt;
      return -*v;
    }
    case ExprOp::Pow: {
      auto v = reference_eval(e.operands[0], rec, constants);
      if (!v) return std::nullopt;
      const long double p = e.exponent.numerator().get_si();
      const long double q = e.exponent.denominator().get_si();
      if (*v < 0) return std::nullopt;
      return std::pow(*v, p / q);
    }
    default: {
      auto a = reference_eval(e.operands[0], rec, constants);
      auto b = reference_eval(e.operands[1], rec, constants);
      if (!a || !b) return std::nullopt;
      switch (e.op) {
        case ExprOp::Add: return *a + *b;
        case ExprOp::Sub: return *a - *b;
        case ExprOp::Mul: return *a * *b;
        default:
          if (*b == 0) return std::nullopt;
          return *a / *b;
      }
    }
  }
}

/// Distance in units in the last place between two finite doubles.
inline std::uint64_t ulp_distance(double a, double b) {
  auto key = [](double x) {
    std::int64_t i;
    std::memcpy(&i, &x, sizeof i);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t ka = key(a);
  const std::int64_t kb = key(b);
  return ka > kb ? static_cast<std::uint64_t>(ka - kb) : static_cast<std::uint64_t>(kb - ka);
}

}  // namespace newton::testing
