#include "reclab/lattice.hpp"

#include <string>
#include <utility>

namespace reclab {

LatticeBasis::LatticeBasis(IntMatrix rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidArgument("lattice basis needs at least one row");
  const std::size_t cols = rows_[0].size();
  for (const auto& row : rows_) {
    if (row.size() != cols) {
      throw DimensionMismatch("lattice basis rows have different lengths");
    }
  }
  if (cols < rows_.size()) {
    throw DimensionMismatch("lattice basis has more rows than columns");
  }
}

LatticeBasis LatticeBasis::identity(std::size_t n) {
  IntMatrix rows(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
  return LatticeBasis(std::move(rows));
}

BigInt dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

BigInt squared_norm(const IntVector& v) { return dot(v, v); }

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty() || b.empty()) return {};
  if (a[0].size() != b.size()) throw DimensionMismatch("multiply: shape mismatch");
  IntMatrix out(a.size(), IntVector(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

BigInt signed_determinant(const IntMatrix& input) {
  const std::size_t n = input.size();
  for (const auto& row : input) {
    if (row.size() != n) throw DimensionMismatch("determinant needs a square matrix");
  }
  if (n == 0) return 1;
  IntMatrix m = input;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

BigInt determinant(const LatticeBasis& basis) {
  if (!basis.is_square()) {
    throw DimensionMismatch("determinant needs a square basis");
  }
  BigInt d = abs(signed_determinant(basis.rows()));
  if (d == 0) throw SingularBasis("basis rows are linearly dependent");
  return d;
}

namespace {

// Working state of the integral LLL. Indices are 0-based rows; d[j] is the
// Gram determinant of the first j rows (d[0] = 1), and lambda[k][j] =
// d[j+1] * mu_kj is an integer for j < k.
class IntegralLll {
 public:
  IntegralLll(const LatticeBasis& basis, Delta delta)
      : b_(basis.rows()),
        n_(basis.rank()),
        delta_num_(delta.num),
        delta_den_(delta.den),
        h_(LatticeBasis::identity(basis.rank()).rows()),
        d_(n_ + 1, 0),
        lambda_(n_, IntVector(n_, 0)) {}

  ReductionOutput run() {
    d_[0] = 1;
    d_[1] = squared_norm(b_[0]);
    if (d_[1] == 0) throw SingularBasis("zero basis vector");
    std::size_t k = 1;
    std::size_t kmax = 0;
    while (k < n_) {
      if (k > kmax) {
        kmax = k;
        extend_gram_schmidt(k);
      }
      size_reduce(k, k - 1);
      if (lovasz_fails(k)) {
        swap_rows(k, kmax);
        k = std::max<std::size_t>(1, k - 1);
      } else {
        for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
        ++k;
      }
    }
    return {LatticeBasis(std::move(b_)), std::move(h_)};
  }

 private:
  void extend_gram_schmidt(std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      BigInt u = dot(b_[k], b_[j]);
      for (std::size_t i = 0; i < j; ++i) {
        u = d_[i + 1] * u - lambda_[k][i] * lambda_[j][i];
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d_[i].get_mpz_t());
      }
      if (j < k) {
        lambda_[k][j] = u;
      } else {
        if (u == 0) throw SingularBasis("basis rows are linearly dependent");
        d_[k + 1] = u;
      }
    }
  }

  // Makes |mu_kl| <= 1/2.
  void size_reduce(std::size_t k, std::size_t l) {
    const BigInt& dl = d_[l + 1];
    BigInt twice = 2 * abs(lambda_[k][l]);
    if (twice <= dl) return;
    // q = round(lambda / d) = floor((2 lambda + d) / (2 d))
    BigInt num = 2 * lambda_[k][l] + dl;
    BigInt den = 2 * dl;
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    for (std::size_t c = 0; c < b_[k].size(); ++c) b_[k][c] -= q * b_[l][c];
    for (std::size_t c = 0; c < n_; ++c) h_[k][c] -= q * h_[l][c];
    lambda_[k][l] -= q * dl;
    for (std::size_t i = 0; i < l; ++i) lambda_[k][i] -= q * lambda_[l][i];
  }

  // den * d_{k+1} d_{k-1} < num * d_k^2 - den * lambda_{k,k-1}^2
  bool lovasz_fails(std::size_t k) const {
    const BigInt lhs = delta_den_ * d_[k + 1] * d_[k - 1];
    const BigInt rhs = delta_num_ * d_[k] * d_[k] -
                       delta_den_ * lambda_[k][k - 1] * lambda_[k][k - 1];
    return lhs < rhs;
  }

  void swap_rows(std::size_t k, std::size_t kmax) {
    std::swap(b_[k], b_[k - 1]);
    std::swap(h_[k], h_[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      std::swap(lambda_[k][j], lambda_[k - 1][j]);
    }
    const BigInt lam = lambda_[k][k - 1];
    BigInt bnew = d_[k - 1] * d_[k + 1] + lam * lam;
    mpz_divexact(bnew.get_mpz_t(), bnew.get_mpz_t(), d_[k].get_mpz_t());
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const BigInt t = lambda_[i][k];
      BigInt v = d_[k + 1] * lambda_[i][k - 1] - lam * t;
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d_[k].get_mpz_t());
      lambda_[i][k] = v;
      BigInt w = bnew * t + lam * lambda_[i][k];
      mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), d_[k + 1].get_mpz_t());
      lambda_[i][k - 1] = w;
    }
    d_[k] = bnew;
  }

  IntMatrix b_;
  std::size_t n_;
  long delta_num_;
  long delta_den_;
  IntMatrix h_;
  IntVector d_;
  IntMatrix lambda_;
};

}  // namespace

ReductionOutput lll_reduce(const LatticeBasis& basis, Delta delta) {
  if (delta.den <= 0 || 4 * delta.num <= delta.den || delta.num >= delta.den) {
    throw InvalidArgument("LLL delta must satisfy 1/4 < delta < 1");
  }
  if (basis.rank() == 0) throw InvalidArgument("empty basis");
  return IntegralLll(basis, delta).run();
}

HPReal hadamard_defect(const LatticeBasis& basis, int digits) {
  const BigInt det = determinant(basis);
  const int working = digits + 10;
  HPReal product(BigInt(1), working);
  for (const auto& row : basis.rows()) {
    product *= sqrt(HPReal(squared_norm(row), working));
  }
  return (HPReal(det, working) / product).with_digits_cap(digits);
}

ScaledBasis scale_to_integers(const std::vector<std::vector<mpq_class>>& rows) {
  BigInt scale = 1;
  for (const auto& row : rows) {
    for (const auto& x : row) {
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), x.get_den_mpz_t());
    }
  }
  IntMatrix out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    IntVector r;
    r.reserve(row.size());
    for (const auto& x : row) {
      mpq_class scaled = x * mpq_class(scale);
      r.push_back(scaled.get_num());
    }
    out.push_back(std::move(r));
  }
  return {LatticeBasis(std::move(out)), scale};
}

}  // namespace reclab
