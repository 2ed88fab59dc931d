#include "ktk/workfactor.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ktk/errors.hpp"

namespace ktk::workfactor {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log2 C(n, k), or -inf when the binomial vanishes (k < 0 or k > n).
double log2_binomial_or_zero(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  return log2_binomial(n, k);
}

double log2_halved_square(std::int64_t top, std::int64_t bottom) {
  const std::int64_t top_hi = top - top / 2;
  const std::int64_t bottom_hi = bottom - bottom / 2;
  return log2_binomial_or_zero(top_hi, bottom_hi) + log2_binomial_or_zero(top / 2, bottom / 2);
}

double success_log2(std::int64_t n, std::int64_t k, std::int64_t t, std::int64_t l, std::int64_t p) {
  const double num = log2_halved_square(k + l, p) + log2_binomial_or_zero(n - k - l, t - p);
  const double den = log2_binomial_or_zero(n, t);
  if (std::isinf(num) || std::isinf(den)) return kNegInf;
  return num - den;
}

}  // namespace

bool Estimate::is_zero() const noexcept { return std::isinf(log2_value) && log2_value < 0; }

double log2_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("log2_binomial: need 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (k == 0 || k == n) return 0.0;
  const double nats = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(n - k) + 1.0);
  return nats / std::numbers::ln2;
}

Estimate perm_recovery_work(std::int64_t n, std::int64_t r_D) {
  if (n < 1) throw DomainError("perm_recovery_work: n must be positive");
  Estimate e;
  e.formula_id = "perm_recovery_work";
  e.inputs.n = n;
  e.inputs.r_D = r_D;
  e.log2_value = static_cast<double>(r_D) + 1.0 + std::log2(static_cast<double>(n));
  return e;
}

Estimate isd_iteration_success(std::int64_t n, std::int64_t k, std::int64_t t, std::int64_t l, std::int64_t p) {
  if (p < 0 || p > t || l < 0 || l > n - k || k < 0 || k > n || t < 0) {
    throw DomainError("isd_iteration_success: need 0 <= p <= t and 0 <= l <= n - k");
  }
  Estimate e;
  e.formula_id = "isd_iteration_success";
  e.inputs = {n, k, 0, t, 0, l, p};
  e.log2_value = success_log2(n, k, t, l, p);
  return e;
}

Estimate ratio_vs_mceliece(const EstimatorParams& mce, const EstimatorParams& ktk) {
  Estimate e;
  e.formula_id = "ratio_vs_mceliece";
  e.inputs = ktk;
  const double top = success_log2(ktk.n, ktk.k + ktk.r_D, ktk.t, ktk.l, ktk.p);
  const double bottom = success_log2(mce.n, mce.k, mce.t, ktk.l, ktk.p);
  if (std::isinf(top) || std::isinf(bottom)) {
    e.log2_value = kNegInf;
  } else {
    e.log2_value = top - bottom;
  }
  return e;
}

Estimate naive_security_exponent(std::int64_t n) {
  if (n < 1) throw DomainError("naive_security_exponent: n must be positive");
  Estimate e;
  e.formula_id = "naive_security_exponent";
  e.inputs.n = n;
  e.log2_value = static_cast<double>(n) / 20.0;
  return e;
}

double repeat_success(double q, std::int64_t repeats) {
  if (q < 0.0 || q > 1.0 || repeats < 0) throw DomainError("repeat_success: need q in [0,1] and repeats >= 0");
  return 1.0 - std::pow(1.0 - q, static_cast<double>(repeats));
}

std::uint64_t iterations_for_confidence(double q, double confidence) {
  if (!(q > 0.0 && q <= 1.0) || !(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("iterations_for_confidence: need q in (0,1] and confidence in (0,1)");
  }
  if (q == 1.0) return 1;
  const double r = std::log1p(-confidence) / std::log1p(-q);
  auto out = static_cast<std::uint64_t>(std::ceil(r - 1e-12));
  return out == 0 ? 1 : out;
}

}  // namespace ktk::workfactor
