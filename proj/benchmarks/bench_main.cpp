#include <benchmark/benchmark.h>

#include "ktk/attack.hpp"
#include "ktk/bit_matrix.hpp"
#include "ktk/rng.hpp"
#include "ktk/scheme.hpp"

using namespace ktk;

namespace {

void BM_Multiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomStream rng(1, "bench-mul");
  const BitMatrix a = BitMatrix::random(n, n, rng), b = BitMatrix::random(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_Multiply)->Arg(15)->Arg(64)->Arg(256);

void BM_Rank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomStream rng(1, "bench-rank");
  const BitMatrix a = BitMatrix::random(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rank(a));
}
BENCHMARK(BM_Rank)->Arg(15)->Arg(64)->Arg(256)->Arg(1023);

struct Desk {
  KeyPair kp;
  Ciphertext ct;
  attack::ReducedInstance inst;
};

Desk desk(const SchemeParams& p, bool bch) {
  KeygenOptions opts;
  opts.bch = bch;
  Desk d{keygen(p, 11, opts), {}, {}};
  RandomStream rng(11, "bench-msg");
  d.ct = encrypt(d.kp.pub, rng.vector(p.k), rng);
  d.inst = attack::split_and_reduce(d.kp.pub, d.kp.priv.composite_permutation(), d.ct.y);
  return d;
}

// One Prange iteration on the reduced system, verifier included.
void BM_PrangeIteration(benchmark::State& state) {
  const bool big = state.range(0) != 0;
  const Desk d = big ? desk({31, 16, 7, 2, 2, 1, Variant::Base}, true) : desk({15, 5, 7, 2, 2, 1, Variant::Base}, false);
  const std::size_t t = d.kp.pub.params.t;
  const auto hidden = attack::hidden_positions(d.inst);
  const attack::IsdSolver solver(d.inst.A0, d.inst.s2, t, 0);
  const attack::Verifier verify = [&](const BitVector& c) { return attack::complete_candidate(d.inst, hidden, c, t); };
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(1, "bench-isd", i++);
    benchmark::DoNotOptimize(solver.iterate(rng, verify));
  }
}
BENCHMARK(BM_PrangeIteration)->Arg(0)->Arg(1);

// Permutation recovery trials: draw e, map it through E_pub, test the weight.
void BM_PermTrials(benchmark::State& state) {
  const KeyPair kp = keygen({15, 5, 7, 2, 2, 1, Variant::Base}, 11);
  const std::size_t n = kp.pub.params.n, t = kp.pub.params.t;
  std::uint64_t i = 0, accepted = 0;
  for (auto _ : state) {
    RandomStream rng(1, "bench-trial", i++);
    accepted += (rng.weight_vector(n, t) * kp.pub.E_pub).weight() == t;
  }
  state.counters["accept_rate"] = benchmark::Counter(static_cast<double>(accepted) / static_cast<double>(i));
}
BENCHMARK(BM_PermTrials);

void BM_RecoverPermutation(benchmark::State& state) {
  const KeyPair kp = keygen({15, 5, 7, 2, 2, 1, Variant::Base}, 11);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    attack::PermRecoveryConfig cfg;
    cfg.seed = seed++;
    benchmark::DoNotOptimize(attack::recover_permutation(kp.pub, cfg));
  }
}
BENCHMARK(BM_RecoverPermutation);

void BM_FullAttack(benchmark::State& state) {
  const Desk d = desk({15, 5, 7, 2, 2, 1, Variant::Base}, false);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    attack::AttackConfig cfg;
    cfg.seed = seed++;
    benchmark::DoNotOptimize(attack::full_attack(d.kp.pub, d.ct.y, cfg));
  }
}
BENCHMARK(BM_FullAttack);

}  // namespace

BENCHMARK_MAIN();
