#include "newton/pi_analysis.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace newton {

namespace {

void collect_constants(const TypedExpr& e, std::vector<Quantity>& out, std::unordered_set<std::string>& seen) {
  if (e.op == ExprOp::Constant && !e.dimension.empty() && seen.insert(e.name).second) {
    out.push_back(Quantity{e.name, e.dimension, true});
  }
  for (const auto& child : e.operands) collect_constants(child, out, seen);
}

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntegerMatrix = std::vector<std::vector<Integer>>;

// In-place reduced row echelon form. Returns the pivot column of each
// nonzero row, in order.
std::vector<std::size_t> reduce(RationalMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t pick = row;
    while (pick < a.size() && a[pick][col].is_zero()) ++pick;
    if (pick == a.size()) continue;
    std::swap(a[row], a[pick]);
    const Rational inv = Rational(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= factor * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row i -= q * row j.
void sub_row(std::vector<Integer>& target, const std::vector<Integer>& source, const Integer& q) {
  for (std::size_t c = 0; c < target.size(); ++c) target[c] -= q * source[c];
}

// Kernel of an integer matrix by unimodular column reduction: A U = [H | 0],
// the trailing columns of U span the integer kernel.
IntegerMatrix integer_kernel(IntegerMatrix a, std::size_t cols) {
  IntegerMatrix u(cols, std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
  auto col_sub = [&](std::size_t target, std::size_t source, const Integer& q) {
    for (auto& row : a) row[target] -= q * row[source];
    for (auto& row : u) row[target] -= q * row[source];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : a) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };
  std::size_t lead = 0;
  for (std::size_t r = 0; r < a.size() && lead < cols; ++r) {
    while (true) {
      std::size_t best = cols;
      for (std::size_t c = lead; c < cols; ++c) {
        if (a[r][c] != 0 && (best == cols || abs(a[r][c]) < abs(a[r][best]))) best = c;
      }
      if (best == cols) break;  // row already zero from `lead` on
      col_swap(lead, best);
      bool done = true;
      for (std::size_t c = lead + 1; c < cols; ++c) {
        if (a[r][c] == 0) continue;
        col_sub(c, lead, floor_div(a[r][c], a[r][lead]));
        done = done && a[r][c] == 0;
      }
      if (done) {
        ++lead;
        break;
      }
    }
  }
  IntegerMatrix kernel;
  for (std::size_t c = lead; c < cols; ++c) {
    std::vector<Integer> v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = u[i][c];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

}  // namespace

std::vector<Quantity> quantities(const InvariantDef& inv, bool include_constants) {
  std::vector<Quantity> out;
  for (const auto& p : inv.params) out.push_back(Quantity{p.name, p.dimension, false});
  if (include_constants) {
    std::unordered_set<std::string> seen;
    for (const auto& rel : inv.relations) {
      collect_constants(rel.lhs, out, seen);
      collect_constants(rel.rhs, out, seen);
    }
  }
  return out;
}

DimensionMatrix dimension_matrix(std::span<const Quantity> qs) {
  DimensionMatrix m;
  std::set<BaseSignalId> bases;
  for (const auto& q : qs) {
    m.columns.push_back(q.name);
    for (const auto& [id, e] : q.dimension.terms()) bases.insert(id);
  }
  m.rows.assign(bases.begin(), bases.end());
  for (const auto id : m.rows) {
    std::vector<Rational> row;
    row.reserve(qs.size());
    for (const auto& q : qs) row.push_back(q.dimension.exponent(id));
    m.entries.push_back(std::move(row));
  }
  return m;
}

DimensionMatrix dimension_matrix(const InvariantDef& inv, bool include_constants) {
  const auto qs = quantities(inv, include_constants);
  return dimension_matrix(qs);
}

std::size_t rank(const DimensionMatrix& m) {
  RationalMatrix a = m.entries;
  return reduce(a, m.column_count()).size();
}

std::vector<std::vector<Integer>> integer_null_space(const DimensionMatrix& m) {
  const std::size_t n = m.column_count();
  RationalMatrix rref = m.entries;
  const auto pivots = reduce(rref, n);
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0, p = 0; c < n; ++c) {
    if (p < pivots.size() && pivots[p] == c) {
      ++p;
    } else {
      free_cols.push_back(c);
    }
  }
  if (free_cols.empty()) return {};

  // Same null space, integer coefficients.
  IntegerMatrix scaled;
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    Integer den = 1;
    for (const auto& x : rref[r]) den = lcm(den, x.denominator());
    std::vector<Integer> row;
    for (const auto& x : rref[r]) row.push_back(x.numerator() * (den / x.denominator()));
    scaled.push_back(std::move(row));
  }
  IntegerMatrix basis = integer_kernel(std::move(scaled), n);

  // Canonical lower-echelon form over the free columns. The projection of
  // the lattice onto the free coordinates is injective, so each diagonal
  // entry ends up nonzero.
  const std::size_t d = free_cols.size();
  for (std::size_t i = d; i-- > 0;) {
    const std::size_t col = free_cols[i];
    while (true) {
      std::size_t best = d;
      for (std::size_t r = 0; r <= i; ++r) {
        if (basis[r][col] != 0 && (best == d || abs(basis[r][col]) < abs(basis[best][col]))) best = r;
      }
      std::swap(basis[best], basis[i]);
      bool done = true;
      for (std::size_t r = 0; r < i; ++r) {
        if (basis[r][col] == 0) continue;
        sub_row(basis[r], basis[i], floor_div(basis[r][col], basis[i][col]));
        done = done && basis[r][col] == 0;
      }
      if (done) break;
    }
    if (basis[i][col] < 0) {
      for (auto& x : basis[i]) x = -x;
    }
  }
  for (std::size_t i = d; i-- > 0;) {
    const std::size_t col = free_cols[i];
    for (std::size_t j = i + 1; j < d; ++j) {
      const Integer q = floor_div(basis[j][col], basis[i][col]);
      if (q != 0) sub_row(basis[j], basis[i], q);
    }
  }
  return basis;
}

std::vector<PiGroup> pi_groups(const DimensionMatrix& m) {
  std::vector<PiGroup> groups;
  for (const auto& v : integer_null_space(m)) {
    PiGroup g;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c] != 0) g.terms.push_back(PiTerm{m.columns[c], v[c]});
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<PiGroup> pi_groups(const InvariantDef& inv, bool include_constants) {
  return pi_groups(dimension_matrix(inv, include_constants));
}

DimensionSignature group_dimension(const PiGroup& g, std::span<const Quantity> qs) {
  DimensionSignature out;
  for (const auto& t : g.terms) {
    const auto it = std::find_if(qs.begin(), qs.end(), [&](const Quantity& q) { return q.name == t.quantity; });
    if (it == qs.end()) continue;
    out = dim_mul(out, dim_pow(it->dimension, Rational(t.exponent)));
  }
  return out;
}

namespace {

std::string power_term(const std::string& name, const Integer& e) {
  return e == 1 ? name : name + "^" + e.get_str();
}

}  // namespace

std::string to_monomial_string(const PiGroup& g) {
  std::string out;
  auto append = [&](const PiTerm& t) {
    if (!out.empty()) out += " * ";
    out += power_term(t.quantity, t.exponent);
  };
  for (const auto& t : g.terms) {
    if (t.exponent > 0) append(t);
  }
  for (const auto& t : g.terms) {
    if (t.exponent < 0) append(t);
  }
  return out.empty() ? "1" : out;
}

std::string to_quotient_string(const PiGroup& g) {
  std::string out;
  for (const auto& t : g.terms) {
    if (t.exponent <= 0) continue;
    if (!out.empty()) out += " * ";
    out += power_term(t.quantity, t.exponent);
  }
  if (out.empty()) out = "1";
  for (const auto& t : g.terms) {
    if (t.exponent < 0) out += " / " + power_term(t.quantity, Integer(-t.exponent));
  }
  return out;
}

}  // namespace newton
