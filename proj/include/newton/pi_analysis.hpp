#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "newton/dimension.hpp"
#include "newton/ir.hpp"

namespace newton {

/// A physical quantity taking part in Buckingham analysis: an invariant
/// parameter or a dimensioned constant referenced by its body.
struct Quantity {
  std::string name;
  DimensionSignature dimension;
  bool is_constant = false;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// Parameters in declaration order, then (if requested) every dimensioned
/// constant in order of first reference in the body. Dimensionless
/// constants are never included.
std::vector<Quantity> quantities(const InvariantDef& inv, bool include_constants = true);

/// Exponents of each quantity (columns) over each fundamental signal that
/// occurs in at least one of them (rows, ascending BaseSignalId).
struct DimensionMatrix {
  std::vector<std::string> columns;
  std::vector<BaseSignalId> rows;
  std::vector<std::vector<Rational>> entries;  // entries[row][column]

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return columns.size(); }

  friend bool operator==(const DimensionMatrix&, const DimensionMatrix&) = default;
};

DimensionMatrix dimension_matrix(std::span<const Quantity> qs);
DimensionMatrix dimension_matrix(const InvariantDef& inv, bool include_constants = true);

/// Exact rank by Gaussian elimination over the rationals.
std::size_t rank(const DimensionMatrix& m);

struct PiTerm {
  std::string quantity;
  Integer exponent;

  friend bool operator==(const PiTerm& a, const PiTerm& b) {
    return a.quantity == b.quantity && a.exponent == b.exponent;
  }
};

/// Dimensionless monomial. Terms are the nonzero exponents in column order;
/// exponents are coprime integers and the last one is positive.
struct PiGroup {
  std::vector<PiTerm> terms;

  friend bool operator==(const PiGroup&, const PiGroup&) = default;
};

/// Integer exponent vectors (one per group, one entry per column) spanning
/// the integer null space of `m`. There are exactly n - rank of them.
///
/// The result is the unique lower-echelon lattice basis over the free
/// columns of the reduced row echelon form: group i is supported on free
/// columns up to the i-th (plus pivot columns), its entry there is
/// positive, and later groups' entries in that column are reduced modulo
/// it. When the free-variable null vectors of the echelon form already
/// generate the lattice this is exactly those vectors scaled to coprime
/// integers.
std::vector<std::vector<Integer>> integer_null_space(const DimensionMatrix& m);

std::vector<PiGroup> pi_groups(const DimensionMatrix& m);
std::vector<PiGroup> pi_groups(const InvariantDef& inv, bool include_constants = true);

/// Product of each quantity's dimension raised to its exponent.
DimensionSignature group_dimension(const PiGroup& g, std::span<const Quantity> qs);

/// `period^2 * g * L^-1`: positive exponents first, each side in column order.
std::string to_monomial_string(const PiGroup& g);
/// `period^2 * g / L`: negative exponents become divisors.
std::string to_quotient_string(const PiGroup& g);

}  // namespace newton
