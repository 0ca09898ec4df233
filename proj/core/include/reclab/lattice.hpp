#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "reclab/hpreal.hpp"

namespace reclab {

using IntVector = std::vector<BigInt>;
using IntMatrix = std::vector<IntVector>;

// Lattice basis stored row-wise: row i is the basis vector u_i. Square bases
// are the general case; bases with fewer rows than columns (full row rank)
// are accepted by lll_reduce for integer-relation embeddings.
class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(IntMatrix rows);

  static LatticeBasis identity(std::size_t n);

  std::size_t rank() const { return rows_.size(); }
  std::size_t dimension() const { return rows_.empty() ? 0 : rows_[0].size(); }
  bool is_square() const { return rank() == dimension(); }

  const IntMatrix& rows() const { return rows_; }
  const IntVector& operator[](std::size_t i) const { return rows_[i]; }

  friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;

 private:
  IntMatrix rows_;
};

// LLL parameter delta = num/den with 1/4 < delta < 1.
struct Delta {
  long num = 3;
  long den = 4;
};

struct ReductionOutput {
  LatticeBasis reduced;
  // Unimodular M with reduced = M * input (rows combine rows).
  IntMatrix transform;
};

BigInt dot(const IntVector& a, const IntVector& b);
BigInt squared_norm(const IntVector& v);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// |det| by fraction-free (Bareiss) elimination. Throws DimensionMismatch for
// non-square input and SingularBasis for a zero determinant.
BigInt determinant(const LatticeBasis& basis);

// Signed determinant of any square integer matrix (zero allowed).
BigInt signed_determinant(const IntMatrix& m);

// Integral LLL (exact Gram-Schmidt via the d_i / lambda_ij integers), so no
// floating-point value ever enters a swap or size-reduction decision.
ReductionOutput lll_reduce(const LatticeBasis& basis, Delta delta = {});

// d(L) / prod |u_i|, in (0, 1]; 1 iff the rows are mutually orthogonal.
HPReal hadamard_defect(const LatticeBasis& basis, int digits = 30);

// Rational bases are scaled to integers by the lcm of the denominators;
// d(scaled) = scale^n d(original).
struct ScaledBasis {
  LatticeBasis basis;
  BigInt scale;
};
ScaledBasis scale_to_integers(const std::vector<std::vector<mpq_class>>& rows);

}  // namespace reclab
