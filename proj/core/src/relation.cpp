#include <algorithm>
#include <cmath>

#include "reclab/diophantine.hpp"

namespace reclab {

HPReal default_relation_threshold() {
  return HPReal::parse("1e" + std::to_string(kDefaultRelationThresholdExponent));
}

BigInt default_coeff_bound() { return pow10(kDefaultCoeffBoundExponent); }

namespace {

// Decimal exponent of the scaling column. It must make every genuine
// relation with coefficients up to the bound much shorter than the
// generic lattice vectors (whose length is about K^(1/m)), and must resolve
// residuals well below the threshold.
unsigned scale_exponent(std::size_t m, const HPReal& threshold,
                        const BigInt& coeff_bound) {
  const double bound_digits = static_cast<double>(digits10(coeff_bound));
  const double threshold_digits = -threshold.log10_abs();
  const double need = std::max(static_cast<double>(m) * bound_digits,
                               threshold_digits);
  return static_cast<unsigned>(std::ceil(std::max(need, 1.0))) + 10;
}

}  // namespace

std::vector<RelationResult> find_integer_relations(
    const std::vector<HPReal>& values, const HPReal& threshold,
    const BigInt& coeff_bound) {
  if (values.empty()) throw InvalidArgument("relation search needs values");
  if (threshold.sign() <= 0) throw InvalidArgument("threshold must be positive");
  if (coeff_bound < 1) throw InvalidArgument("coefficient bound must be positive");

  const std::size_t m = values.size();
  const BigInt scale = pow10(scale_exponent(m, threshold, coeff_bound));

  // Row i: (e_i, round(K v_i)).
  IntMatrix rows(m, IntVector(m + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    rows[i][i] = 1;
    rows[i][m] = round_nearest(HPReal(scale, values[i].working_digits()) * values[i]);
  }
  const ReductionOutput reduced = lll_reduce(LatticeBasis(std::move(rows)));

  std::vector<RelationResult> found;
  for (const auto& row : reduced.reduced.rows()) {
    IntVector coeffs(row.begin(), row.begin() + static_cast<long>(m));
    bool small = true;
    bool nonzero = false;
    for (const auto& c : coeffs) {
      if (abs(c) > coeff_bound) small = false;
      if (c != 0) nonzero = true;
    }
    if (!small || !nonzero) continue;

    HPReal sum(BigInt(0), values[0].working_digits());
    for (std::size_t i = 0; i < m; ++i) {
      sum += HPReal(coeffs[i], values[i].working_digits()) * values[i];
    }
    HPReal residual = abs(sum);
    if (residual > threshold) continue;

    auto lead = std::find_if(coeffs.begin(), coeffs.end(),
                             [](const BigInt& c) { return c != 0; });
    if (*lead < 0) {
      for (auto& c : coeffs) c = -c;
    }
    found.push_back({std::move(coeffs), std::move(residual)});
  }
  return found;
}

RelationResult find_integer_relation(const std::vector<HPReal>& values,
                                     const HPReal& threshold,
                                     const BigInt& coeff_bound) {
  auto found = find_integer_relations(values, threshold, coeff_bound);
  if (found.empty()) {
    throw NoRelation("no integer relation with coefficients up to " +
                     to_string(coeff_bound) + " below the threshold");
  }
  return std::move(found.front());
}

}  // namespace reclab
