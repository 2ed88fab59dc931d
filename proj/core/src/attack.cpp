#include "ktk/attack.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ktk/errors.hpp"
#include "ktk/rng.hpp"
#include "parallel.hpp"

namespace ktk::attack {

BitVector syndrome(const BitMatrix& H_pub, const BitVector& y) { return y * H_pub.transpose(); }

BitVector syndrome(const PublicKey& pub, const BitVector& y) { return syndrome(public_parity(pub), y); }

// ---------------------------------------------------------------------------

CandidateMap::CandidateMap(std::size_t n) : sets_(n, BitVector(n)), constrained_(n, false) {}

BitVector CandidateMap::candidates(std::size_t j) const {
  if (constrained_[j]) return sets_[j];
  BitVector all(size());
  for (std::size_t i = 0; i < size(); ++i) all.set(i);
  return all;
}

std::size_t CandidateMap::resolved_positions() const noexcept {
  std::size_t count = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (constrained_[j] && sets_[j].weight() == 1) ++count;
  }
  return count;
}

std::optional<Permutation> CandidateMap::resolved() const {
  std::vector<std::uint32_t> image(size());
  std::vector<bool> used(size(), false);
  for (std::size_t j = 0; j < size(); ++j) {
    if (!constrained_[j] || sets_[j].weight() != 1) return std::nullopt;
    const std::size_t x = sets_[j].support().front();
    if (used[x]) return std::nullopt;
    used[x] = true;
    image[j] = static_cast<std::uint32_t>(x);
  }
  return Permutation(std::move(image));
}

std::optional<std::vector<Permutation>> CandidateMap::completions(std::size_t limit) const {
  const std::size_t n = size();
  std::vector<BitVector> sets(n);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) {
    sets[j] = candidates(j);
    order[j] = j;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sets[a].weight() < sets[b].weight(); });

  std::vector<Permutation> out;
  std::vector<std::uint32_t> image(n);
  BitVector used(n);
  std::uint64_t nodes = 0;
  const std::uint64_t node_cap = 64 * (limit + 1) * n * n;
  bool overflow = false;

  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    if (overflow) return;
    if (depth == n) {
      if (out.size() == limit) {
        overflow = true;
        return;
      }
      out.emplace_back(image);
      return;
    }
    const std::size_t j = order[depth];
    for (std::size_t x : sets[j].support()) {
      if (used.get(x)) continue;
      if (++nodes > node_cap) {
        overflow = true;
        return;
      }
      used.set(x);
      image[j] = static_cast<std::uint32_t>(x);
      self(self, depth + 1);
      used.set(x, false);
      if (overflow) return;
    }
  };
  dfs(dfs, 0);
  if (overflow) return std::nullopt;
  return out;
}

bool CandidateMap::apply(const BitVector& e, const BitVector& b) {
  auto sets = sets_;
  auto constrained = constrained_;
  for (std::size_t j : e.support()) {
    if (constrained[j]) {
      sets[j] &= b;
    } else {
      sets[j] = b;
      constrained[j] = true;
    }
    if (sets[j].is_zero()) return false;
  }
  if (!propagate(sets, constrained)) return false;
  sets_ = std::move(sets);
  constrained_ = std::move(constrained);
  ++accepted_;
  return true;
}

bool CandidateMap::propagate(std::vector<BitVector>& sets, std::vector<bool>& constrained) {
  const std::size_t n = sets.size();
  for (bool changed = true; changed;) {
    changed = false;
    BitVector taken(n);
    std::vector<std::size_t> owner(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      if (!constrained[j] || sets[j].weight() != 1) continue;
      const std::size_t x = sets[j].support().front();
      if (taken.get(x)) return false;
      taken.set(x);
      owner[x] = j;
    }
    // A resolved image leaves every other set.
    for (std::size_t j = 0; j < n; ++j) {
      if (!constrained[j] || sets[j].weight() == 1) continue;
      BitVector overlap = sets[j] & taken;
      if (overlap.is_zero()) continue;
      sets[j] ^= overlap;
      if (sets[j].is_zero()) return false;
      changed = true;
    }
    if (changed) continue;
    // An image that only one open position can still take goes there.
    for (std::size_t x = 0; x < n && !changed; ++x) {
      if (taken.get(x)) continue;
      std::size_t holders = 0;
      std::size_t holder = n;
      for (std::size_t j = 0; j < n && holders < 2; ++j) {
        const bool open = !constrained[j] || sets[j].weight() > 1;
        if (open && (!constrained[j] || sets[j].get(x))) {
          ++holders;
          holder = j;
        }
      }
      if (holders == 0) return false;
      if (holders == 1) {
        sets[holder] = BitVector(n);
        sets[holder].set(x);
        constrained[holder] = true;
        changed = true;
      }
    }
  }
  return true;
}

std::uint64_t default_perm_budget(std::size_t n, std::size_t r_D) {
  return 4 * static_cast<std::uint64_t>(n) << r_D;
}

bool erasure_rank_matches(const PublicKey& pub, const BitMatrix& H_pub, const Permutation& sigma) {
  const BitMatrix A1 = (pub.E_pub - sigma.as_matrix()) * H_pub.transpose();
  return rank(A1) == pub.params.r_D;
}

namespace {

// Keeps completions that pass the erasure rank test and were not refuted by
// validation; ties are broken by the rank of E_pub - sigma itself, which is
// r_D for the true split when the error matrix has no codeword mask. Returns
// every candidate left at the best rank.
std::vector<Permutation> screen_completions(const PublicKey& pub, const BitMatrix& H_pub, std::vector<Permutation> all,
                                            const std::vector<Permutation>& refuted) {
  std::vector<Permutation> passing;
  for (auto& p : all) {
    if (std::find(refuted.begin(), refuted.end(), p) != refuted.end()) continue;
    if (erasure_rank_matches(pub, H_pub, p)) passing.push_back(std::move(p));
  }
  if (passing.size() <= 1) return passing;
  std::size_t best = pub.params.n + 1;
  std::vector<Permutation> at_best;
  for (auto& p : passing) {
    const std::size_t r = rank(pub.E_pub - p.as_matrix());
    if (r < best) {
      best = r;
      at_best.clear();
    }
    if (r == best) at_best.push_back(std::move(p));
  }
  return at_best;
}

}  // namespace

PermRecoveryResult recover_permutation(const PublicKey& pub, const PermRecoveryConfig& cfg) {
  const std::size_t n = pub.params.n;
  const std::size_t t = pub.params.t;
  const std::uint64_t budget = cfg.budget != 0 ? cfg.budget : default_perm_budget(n, pub.params.r_D);
  const BitMatrix H_pub = public_parity(pub);
  const std::uint64_t batch = 64 * std::max(1U, cfg.threads);

  PermRecoveryResult result;
  CandidateMap map(n);
  std::uint64_t next_trial = 0;
  std::uint64_t next_validation = 0;

  auto draw = [&](std::string_view label, std::uint64_t index) {
    RandomStream rng(cfg.seed, label, index);
    PermSample s;
    s.trial = index;
    s.e = rng.weight_vector(n, t);
    s.b = s.e * pub.E_pub;
    s.accepted = s.b.weight() == t;
    return s;
  };

  // Every accepted sample is kept. Two samples clash when no bijection can
  // explain both: sigma(e1 & e2) = b1 & b2 forces equal overlap sizes.
  std::vector<std::pair<BitVector, BitVector>> history;
  std::vector<std::vector<bool>> clash;
  std::vector<bool> kept;
  auto record = [&](const BitVector& e, const BitVector& b) {
    const std::size_t i = history.size();
    std::vector<bool> row(i + 1, false);
    for (std::size_t j = 0; j < i; ++j) {
      row[j] = (history[j].first & e).weight() != (history[j].second & b).weight();
      clash[j].push_back(row[j]);
    }
    clash.push_back(std::move(row));
    history.emplace_back(e, b);
    kept.push_back(true);
  };

  // Fresh accepted samples must agree with sigma. A disagreeing sample is
  // handed back so it can still narrow the map.
  enum class Verdict { Confirmed, Refuted, OutOfBudget };
  std::optional<PermSample> refuting;
  auto validate = [&](const Permutation& sigma) {
    refuting.reset();
    if (!erasure_rank_matches(pub, H_pub, sigma)) return Verdict::Refuted;
    std::size_t confirmed = 0;
    while (confirmed < cfg.validation_samples) {
      if (result.trials >= budget) return Verdict::OutOfBudget;
      PermSample s = draw("perm-validate", next_validation++);
      s.validation = true;
      s.resolved_positions = n;
      ++result.trials;
      if (cfg.observer) cfg.observer(s);
      if (!s.accepted) continue;
      ++result.accepted;
      if (!(s.b == sigma.apply(s.e))) {
        refuting = std::move(s);
        return Verdict::Refuted;
      }
      record(s.e, s.b);
      map.apply(s.e, s.b);
      ++confirmed;
    }
    return Verdict::Confirmed;
  };

  std::vector<Permutation> refuted;
  // Rebuilds the map from the history, dropping the sample that clashes with
  // most others (latest first on ties) until the rest admit a bijection.
  auto rebuild = [&] {
    ++result.resets;
    refuted.clear();
    result.ambiguous.clear();
    const std::size_t h = history.size();
    std::vector<bool> active(h, true);
    for (;;) {
      std::size_t worst = h, worst_degree = 0;
      for (std::size_t i = 0; i < h; ++i) {
        if (!active[i]) continue;
        std::size_t degree = 0;
        for (std::size_t j = 0; j < h; ++j) degree += active[j] && clash[i][j];
        if (degree > 0 && degree >= worst_degree) {
          worst = i;
          worst_degree = degree;
        }
      }
      if (worst != h) {
        active[worst] = false;
        continue;
      }
      CandidateMap fresh(n);
      std::size_t last = h;
      bool consistent = true;
      for (std::size_t i = 0; i < h && consistent; ++i) {
        if (!active[i]) continue;
        last = i;
        consistent = fresh.apply(history[i].first, history[i].second);
      }
      if (consistent && cfg.completion_limit != 0) {
        const auto all = fresh.completions(cfg.completion_limit);
        consistent = !(all && all->empty());
      }
      if (!consistent) {
        active[last] = false;
        continue;
      }
      map = std::move(fresh);
      break;
    }
    kept = std::move(active);
    result.rolled_back = static_cast<std::uint64_t>(std::count(kept.begin(), kept.end(), false));
    result.resolved_positions = map.resolved_positions();
  };

  while (result.trials < budget) {
    const std::uint64_t count = std::min(batch, budget - result.trials);
    std::vector<PermSample> samples(count);
    detail::parallel_for(count, cfg.threads,
                         [&](std::size_t i) { samples[i] = draw("perm-trial", next_trial + i); });
    next_trial += count;

    for (auto& s : samples) {
      if (result.trials >= budget) break;
      ++result.trials;
      if (s.accepted) {
        ++result.accepted;
        record(s.e, s.b);
        if (!map.apply(s.e, s.b)) {
          rebuild();
          s.rolled_back = !kept.back();
        }
      }
      s.resolved_positions = map.resolved_positions();
      result.resolved_positions = s.resolved_positions;
      if (cfg.observer) cfg.observer(s);
      if (!s.accepted) continue;

      std::optional<Permutation> sigma = map.resolved();
      if (sigma && std::find(refuted.begin(), refuted.end(), *sigma) != refuted.end()) {
        rebuild();
        continue;
      }
      if (!sigma && cfg.completion_limit != 0) {
        auto all = map.completions(cfg.completion_limit);
        if (all && all->empty()) {
          // Poisoned beyond what a single rollback catches.
          rebuild();
          continue;
        }
        if (all) {
          auto left = screen_completions(pub, H_pub, std::move(*all), refuted);
          if (left.size() == 1) {
            sigma = std::move(left.front());
            result.ambiguous.clear();
          } else {
            result.ambiguous = std::move(left);
          }
        }
      }
      if (!sigma) continue;
      const Verdict verdict = validate(*sigma);
      if (verdict == Verdict::Confirmed) {
        result.permutation = std::move(sigma);
        result.ambiguous.clear();
        return result;
      }
      if (verdict == Verdict::OutOfBudget) {
        result.ambiguous = {std::move(*sigma)};
        return result;
      }
      refuted.push_back(std::move(*sigma));
      if (refuting) {
        record(refuting->e, refuting->b);
        if (!map.apply(refuting->e, refuting->b)) rebuild();
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

ReducedInstance split_and_reduce(const PublicKey& pub, const BitMatrix& H_pub, const Permutation& sigma,
                                 const BitVector& y) {
  const std::size_t r_D = pub.params.r_D;
  const BitMatrix Ht = H_pub.transpose();
  ReducedInstance inst;
  inst.r_D = r_D;
  inst.A = pub.E_pub * Ht;
  inst.A2 = sigma.as_matrix() * Ht;
  inst.A1 = inst.A - inst.A2;

  const auto ech = rref_with_transform(inst.A1);
  if (ech.rank != r_D) {
    throw RankMismatch("rank(A1) = " + std::to_string(ech.rank) + ", expected r_D = " + std::to_string(r_D));
  }
  inst.T = ech.transform;
  const std::size_t redundancy = Ht.cols();
  inst.A0 = (inst.A * inst.T).column_slice(r_D, redundancy);
  inst.s = y * Ht;
  const BitVector sT = inst.s * inst.T;
  inst.s1 = sT.slice(0, r_D);
  inst.s2 = sT.slice(r_D, redundancy);
  return inst;
}

ReducedInstance split_and_reduce(const PublicKey& pub, const Permutation& sigma, const BitVector& y) {
  return split_and_reduce(pub, public_parity(pub), sigma, y);
}

bool verify_full(const ReducedInstance& inst, const BitVector& e, std::size_t t) {
  return e.weight() <= t && e * inst.A == inst.s;
}

std::vector<std::size_t> hidden_positions(const ReducedInstance& inst) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < inst.A0.rows(); ++i) {
    if (inst.A0.row(i).is_zero()) out.push_back(i);
  }
  return out;
}

std::optional<BitVector> complete_candidate(const ReducedInstance& inst, const std::vector<std::size_t>& hidden,
                                            const BitVector& candidate, std::size_t t) {
  std::optional<BitVector> out;
  for (std::size_t w = 0; w <= hidden.size() && !out; ++w) {
    for_each_combination(hidden.size(), w, [&](const std::vector<std::size_t>& idx) {
      BitVector e = candidate;
      for (std::size_t i : idx) e.flip(hidden[i]);
      if (!verify_full(inst, e, t)) return false;
      out = std::move(e);
      return true;
    });
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(AttackStatus s) {
  switch (s) {
    case AttackStatus::Verified:
      return "verified";
    case AttackStatus::Unresolved:
      return "unresolved";
    case AttackStatus::RankMismatch:
      return "rank_mismatch";
    case AttackStatus::NotFound:
      return "not_found";
    case AttackStatus::Inconsistent:
      return "inconsistent";
  }
  return "unresolved";
}

namespace {

double log2_count(std::uint64_t x) { return x == 0 ? 0.0 : std::log2(static_cast<double>(x)); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

AttackReport finish_attack(const PublicKey& pub, const Permutation& sigma, const BitVector& y,
                           const AttackConfig& cfg, AttackReport report) {
  const auto& params = pub.params;
  report.recovered_perm = sigma;

  report.stage = "split_and_reduce";
  ReducedInstance inst;
  try {
    inst = split_and_reduce(pub, sigma, y);
  } catch (const RankMismatch&) {
    report.status = AttackStatus::RankMismatch;
    return report;
  }

  report.stage = "isd";
  IsdConfig isd = cfg.isd;
  isd.seed = cfg.seed;
  isd.threads = cfg.threads;
  const std::size_t p = isd.algorithm == IsdAlgorithm::Prange ? 0 : isd.p;
  const std::uint64_t budget = isd_iteration_budget(inst.A0.rows(), inst.A0.cols(), params.t, isd);
  const auto hidden = hidden_positions(inst);
  const auto found = isd_search(inst.A0, inst.s2, params.t, p, budget, isd, [&](const BitVector& e) {
    return complete_candidate(inst, hidden, e, params.t);
  });
  report.isd_iterations = found.iterations;
  if (cfg.progress) {
    cfg.progress(ProgressEvent{"isd", 0, 0, params.n, found.iterations, log2_count(found.iterations),
                               found.e.has_value()});
  }
  if (!found.e) {
    report.status = AttackStatus::NotFound;
    return report;
  }
  report.e_found = *found.e;

  report.stage = "message_recovery";
  const BitVector c = y ^ (*found.e * pub.E_pub);
  try {
    report.m_found = solve_left(pub.G_pub, c);
  } catch (const NoSolution&) {
    report.status = AttackStatus::Inconsistent;
    return report;
  }
  report.verified = (*report.m_found * pub.G_pub) + (*found.e * pub.E_pub) == y && found.e->weight() <= params.t;
  report.status = report.verified ? AttackStatus::Verified : AttackStatus::Inconsistent;
  return report;
}

}  // namespace

AttackReport attack_with_permutation(const PublicKey& pub, const Permutation& sigma, const BitVector& y,
                                     const AttackConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (y.size() != pub.params.n) throw DomainError("attack: ciphertext length must be n");
  AttackReport report = finish_attack(pub, sigma, y, cfg, AttackReport{});
  report.wall_time = seconds_since(start);
  return report;
}

namespace {

PermRecoveryResult run_recovery(const PublicKey& pub, const AttackConfig& cfg, AttackReport& report) {
  report.stage = "recover_permutation";
  PermRecoveryConfig perm;
  perm.seed = cfg.seed;
  perm.budget = cfg.perm_budget;
  perm.validation_samples = cfg.validation_samples;
  perm.threads = cfg.threads;
  if (cfg.progress) {
    std::uint64_t accepted = 0;
    perm.observer = [&cfg, accepted](const PermSample& s) mutable {
      if (!s.accepted) return;
      ++accepted;
      cfg.progress(ProgressEvent{"recover_permutation", s.trial, accepted, s.resolved_positions, 0,
                                 log2_count(s.trial + 1), false});
    };
  }
  auto recovered = recover_permutation(pub, perm);
  report.perm_samples_used = recovered.trials;
  report.perm_accepted = recovered.accepted;
  report.recovered_perm = recovered.permutation;
  report.verified = recovered.permutation.has_value();
  report.status = report.verified ? AttackStatus::Verified : AttackStatus::Unresolved;
  if (cfg.progress) {
    cfg.progress(ProgressEvent{"recover_permutation", recovered.trials, recovered.accepted,
                               recovered.resolved_positions, 0, log2_count(recovered.trials), report.verified});
  }
  return recovered;
}

}  // namespace

AttackReport recover_permutation_stage(const PublicKey& pub, const AttackConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  AttackReport report;
  run_recovery(pub, cfg, report);
  report.wall_time = seconds_since(start);
  return report;
}

AttackReport full_attack(const PublicKey& pub, const BitVector& y, const AttackConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (y.size() != pub.params.n) throw DomainError("attack: ciphertext length must be n");

  AttackReport base;
  auto recovered = run_recovery(pub, cfg, base);
  // Tied candidates are all tried: the ciphertext has a unique weight-<=t
  // solution, so only a correct split can produce a verified answer.
  std::vector<Permutation> candidates;
  if (recovered.permutation) {
    candidates.push_back(*recovered.permutation);
  } else {
    candidates = std::move(recovered.ambiguous);
  }
  if (candidates.empty()) {
    base.wall_time = seconds_since(start);
    return base;
  }
  base.verified = false;
  base.status = AttackStatus::Unresolved;
  AttackReport report;
  std::uint64_t iterations = 0;
  for (const auto& sigma : candidates) {
    report = finish_attack(pub, sigma, y, cfg, base);
    iterations += report.isd_iterations;
    if (report.verified) break;
  }
  report.isd_iterations = iterations;
  report.wall_time = seconds_since(start);
  return report;
}

}  // namespace ktk::attack
