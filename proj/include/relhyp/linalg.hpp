#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "relhyp/rational.hpp"

namespace relhyp {

/// Sparse integer column: (row, value) pairs sorted by row, no zeros.
using IntColumn = std::vector<std::pair<int, std::int64_t>>;

struct SparseIntMatrix {
  int rows = 0;
  std::vector<IntColumn> columns;

  int cols() const { return static_cast<int>(columns.size()); }
};

/// Coefficient field or ring for a reduction.
enum class Ring { integers, mod2 };

struct SmithResult {
  std::size_t rank = 0;
  /// invariant factors greater than one, nondecreasing, each dividing the next
  std::vector<std::int64_t> torsion;
};

/**
 * Smith normal form invariants of a sparse integer matrix.
 *
 * Unit pivots are eliminated sparsely first (smallest column, then smallest
 * row); the remainder is reduced densely with the smallest-absolute-value
 * pivot, ties broken in row-major order.  Over mod2 only the rank is
 * meaningful.
 */
SmithResult smith_invariants(SparseIntMatrix m, Ring ring);

/// Dense Smith normal form diagonal (all nonzero invariant factors).
std::vector<std::int64_t> dense_smith(std::vector<std::vector<std::int64_t>> a);

/// Sparse vector over Q (or over F2 when reduced mod 2).
using RatVector = std::map<int, Rational>;

/**
 * Incrementally built basis over Q or F2 with column-echelon reduction.
 * Every inserted vector gets an index; reduce() reports how a vector in the
 * span decomposes over the inserted vectors.
 */
class IncrementalBasis {
 public:
  explicit IncrementalBasis(bool mod2) : mod2_(mod2) {}

  /// Inserts `v`; returns its index if independent of earlier insertions.
  std::optional<std::size_t> insert(const RatVector& v);

  struct Reduced {
    RatVector residual;
    /// v = residual + sum coeff_i * inserted_i
    std::map<std::size_t, Rational> coefficients;
  };
  Reduced reduce(const RatVector& v) const;

  std::size_t size() const { return count_; }

 private:
  Rational norm(const Rational& r) const;
  struct Entry {
    RatVector vec;  // reduced, pivot = last key
    std::map<std::size_t, Rational> combo;
  };
  bool mod2_;
  std::size_t count_ = 0;
  std::map<int, Entry> by_pivot_;
};

/// Basis of the kernel of `m` over Q (or F2), as sparse column combinations.
std::vector<RatVector> kernel_basis(const SparseIntMatrix& m, bool mod2);

}  // namespace relhyp
