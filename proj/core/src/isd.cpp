#include <cmath>
#include <numeric>

#include "ktk/attack.hpp"
#include "ktk/errors.hpp"
#include "ktk/linear_code.hpp"
#include "ktk/rng.hpp"
#include "ktk/workfactor.hpp"
#include "parallel.hpp"

namespace ktk::attack {

IsdSolver::IsdSolver(const BitMatrix& A0, const BitVector& s2, std::size_t t, std::size_t p)
    : n_(A0.rows()), redundancy_(A0.cols()), t_(t), p_(p) {
  if (s2.size() != A0.cols()) throw DomainError("isd: syndrome length must equal A0 columns");
  if (p > t) throw DomainError("isd: need p <= t");
  BitMatrix rhs(redundancy_, 1);
  for (std::size_t i : s2.support()) rhs.set(i, 0);
  augmented_ = A0.transpose().hconcat(rhs);
}

IsdSolver::Iteration IsdSolver::iterate(RandomStream& rng, const Verifier& verify) const {
  std::vector<std::size_t> order(n_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  Iteration out;
  BitMatrix work = augmented_;
  std::vector<bool> is_pivot(n_, false);
  std::size_t r = 0;
  for (std::size_t c : order) {
    if (r == redundancy_) break;
    std::size_t row = r;
    while (row < redundancy_ && !work.get(row, c)) ++row;
    if (row == redundancy_) continue;
    if (row != r) std::swap(work.row(row), work.row(r));
    for (std::size_t i = 0; i < redundancy_; ++i) {
      if (i != r && work.get(i, c)) work.row(i) ^= work.row(r);
    }
    out.pivots.push_back(c);
    is_pivot[c] = true;
    ++r;
  }
  if (r < redundancy_) return out;

  std::vector<std::size_t> info_set;
  for (std::size_t c : order) {
    if (!is_pivot[c]) info_set.push_back(c);
  }
  std::vector<BitVector> info_columns;
  info_columns.reserve(info_set.size());
  for (std::size_t c : info_set) info_columns.push_back(work.column(c));
  const BitVector reduced_syndrome = work.column(n_);

  for (std::size_t w = 0; w <= p_ && w <= info_set.size(); ++w) {
    const bool hit = for_each_combination(info_set.size(), w, [&](const std::vector<std::size_t>& idx) {
      BitVector forced = reduced_syndrome;
      for (std::size_t i : idx) forced ^= info_columns[i];
      if (w + forced.weight() > t_) return false;
      BitVector e(n_);
      for (std::size_t i : idx) e.set(info_set[i]);
      for (std::size_t i : forced.support()) e.set(out.pivots[i]);
      ++out.candidates;
      if (auto accepted = verify(e)) {
        out.found = std::move(accepted);
        return true;
      }
      ++out.rejected;
      return false;
    });
    if (hit) break;
  }
  return out;
}

IsdResult isd_search(const BitMatrix& A0, const BitVector& s2, std::size_t t, std::size_t p,
                     std::uint64_t max_iterations, const IsdConfig& cfg, const Verifier& verify) {
  const IsdSolver solver(A0, s2, t, p);
  const std::uint64_t batch = 16 * std::max(1U, cfg.threads);
  IsdResult result;
  for (std::uint64_t start = 0; start < max_iterations; start += batch) {
    const std::uint64_t count = std::min(batch, max_iterations - start);
    std::vector<IsdSolver::Iteration> runs(count);
    detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
      RandomStream rng(cfg.seed, "isd", start + i);
      runs[i] = solver.iterate(rng, verify);
    });
    for (std::uint64_t i = 0; i < count; ++i) {
      result.iterations = start + i + 1;
      result.candidates += runs[i].candidates;
      result.rejected += runs[i].rejected;
      if (runs[i].found) {
        result.e = std::move(runs[i].found);
        return result;
      }
    }
  }
  return result;
}

std::uint64_t isd_iteration_budget(std::size_t n, std::size_t redundancy, std::size_t t, const IsdConfig& cfg) {
  std::uint64_t budget = cfg.max_iterations;
  if (cfg.target_confidence > 0.0 && cfg.target_confidence < 1.0 && redundancy <= n && t <= n) {
    const auto k_eff = static_cast<std::int64_t>(n - redundancy);
    const auto est = workfactor::isd_iteration_success(static_cast<std::int64_t>(n), k_eff,
                                                       static_cast<std::int64_t>(t), 0, 0);
    if (!est.is_zero()) {
      const double q = std::min(1.0, std::exp2(est.log2_value));
      budget = std::min(budget, workfactor::iterations_for_confidence(q, cfg.target_confidence));
    }
  }
  return std::max<std::uint64_t>(budget, 1);
}

IsdResult isd_prange(const ReducedInstance& inst, std::size_t t, const IsdConfig& cfg) {
  const auto budget = isd_iteration_budget(inst.A0.rows(), inst.A0.cols(), t, cfg);
  return isd_search(inst.A0, inst.s2, t, 0, budget, cfg,
                    [&, hidden = hidden_positions(inst)](const BitVector& e) {
                      return complete_candidate(inst, hidden, e, t);
                    });
}

IsdResult isd_lee_brickell(const ReducedInstance& inst, std::size_t t, std::size_t p, const IsdConfig& cfg) {
  const auto budget = isd_iteration_budget(inst.A0.rows(), inst.A0.cols(), t, cfg);
  return isd_search(inst.A0, inst.s2, t, p, budget, cfg,
                    [&, hidden = hidden_positions(inst)](const BitVector& e) {
                      return complete_candidate(inst, hidden, e, t);
                    });
}

}  // namespace ktk::attack
