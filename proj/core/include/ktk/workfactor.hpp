#pragma once

#include <cstdint>
#include <string>

namespace ktk::workfactor {

/// Inputs shared by the estimators; unused fields stay zero.
struct EstimatorParams {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t d = 0;
  std::int64_t t = 0;
  std::int64_t r_D = 0;
  std::int64_t l = 0;
  std::int64_t p = 0;
};

/// log2 of some quantity. A zero quantity is reported as -infinity.
struct Estimate {
  double log2_value = 0.0;
  std::string formula_id;
  EstimatorParams inputs;

  bool is_zero() const noexcept;
};

/// log2 C(n, k) via lgamma. Throws DomainError unless 0 <= k <= n.
double log2_binomial(std::int64_t n, std::int64_t k);

/// Permutation-recovery loop count 2n * 2^r_D, i.e. r_D + 1 + log2(n).
Estimate perm_recovery_work(std::int64_t n, std::int64_t r_D);

/// Per-iteration ISD success probability
///   C((k+l)/2, p/2)^2 * C(n-k-l, t-p) / C(n, t).
/// Odd halves are split as C(ceil, ceil) * C(floor, floor).
Estimate isd_iteration_success(std::int64_t n, std::int64_t k, std::int64_t t, std::int64_t l, std::int64_t p);

/// log2 of P(KTK) / P(McEliece) where the KTK side's information-set
/// dimension is k + r_D. The McEliece side ignores its r_D field. Uses t
/// from each side and l, p from `ktk`.
Estimate ratio_vs_mceliece(const EstimatorParams& mce, const EstimatorParams& ktk);

/// Rule-of-thumb ISD security exponent n / 20.
Estimate naive_security_exponent(std::int64_t n);

/// Probability that at least one of `repeats` independent tries succeeds.
double repeat_success(double q, std::int64_t repeats);

/// Smallest r with repeat_success(q, r) >= confidence (q in (0, 1]).
std::uint64_t iterations_for_confidence(double q, double confidence);

}  // namespace ktk::workfactor
