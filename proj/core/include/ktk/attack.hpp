#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ktk/bit_matrix.hpp"
#include "ktk/permutation.hpp"
#include "ktk/scheme.hpp"

namespace ktk {
class RandomStream;
}

namespace ktk::attack {

/// s = y H_pub^T.
BitVector syndrome(const BitMatrix& H_pub, const BitVector& y);
BitVector syndrome(const PublicKey& pub, const BitVector& y);

// ---------------------------------------------------------------------------
// Permutation recovery
// ---------------------------------------------------------------------------

/// Per-position candidate images for the hidden permutation P* = P2 P.
///
/// Every accepted sample (e, b = e E_pub with weight(b) = t) constrains each
/// j in support(e) to lie in support(b). Sets only shrink. A resolved image is
/// removed from every other set, and when only one image is left for some
/// still-open position it is assigned there. A sample whose update would empty
/// any set is discarded as a whole.
class CandidateMap {
 public:
  explicit CandidateMap(std::size_t n);

  /// Returns false (and leaves the map untouched) when the sample is rolled back.
  bool apply(const BitVector& e, const BitVector& b);

  std::size_t size() const noexcept { return sets_.size(); }
  bool constrained(std::size_t j) const { return constrained_[j]; }
  /// Candidate images of j; all of {0..n-1} while unconstrained.
  BitVector candidates(std::size_t j) const;
  std::size_t resolved_positions() const noexcept;
  std::uint64_t accepted_samples() const noexcept { return accepted_; }
  /// The permutation, once every set is a singleton and the images are distinct.
  std::optional<Permutation> resolved() const;
  /// Every bijection that picks each position's image from its set, or
  /// nullopt when there are more than `limit` of them.
  std::optional<std::vector<Permutation>> completions(std::size_t limit) const;

 private:
  static bool propagate(std::vector<BitVector>& sets, std::vector<bool>& constrained);

  std::vector<BitVector> sets_;
  std::vector<bool> constrained_;
  std::uint64_t accepted_ = 0;
};

struct PermSample {
  std::uint64_t trial = 0;
  BitVector e;
  BitVector b;
  bool accepted = false;     ///< weight(b) == t
  bool rolled_back = false;  ///< accepted, but inconsistent with the map
  bool validation = false;   ///< drawn while validating a resolved candidate
  std::size_t resolved_positions = 0;
};

struct PermRecoveryConfig {
  std::uint64_t seed = 0;
  /// Total sampling trials; 0 selects default_perm_budget(n, r_D).
  std::uint64_t budget = 0;
  /// Fresh accepted samples a resolved candidate must explain.
  std::size_t validation_samples = 3;
  /// When at most this many bijections fit the map, they are screened with the
  /// rank test and a unique survivor goes to validation. 0 disables this.
  std::size_t completion_limit = 64;
  unsigned threads = 1;
  std::function<void(const PermSample&)> observer;
};

/// 4 n 2^r_D trials.
std::uint64_t default_perm_budget(std::size_t n, std::size_t r_D);

struct PermRecoveryResult {
  std::optional<Permutation> permutation;  ///< empty: unresolved within budget
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rolled_back = 0;
  std::uint64_t resets = 0;  ///< times the map was discarded and sampling restarted
  std::size_t resolved_positions = 0;
  /// When unresolved: the candidates still tied at the end (possibly one that
  /// ran out of validation budget). The public key alone cannot separate them.
  std::vector<Permutation> ambiguous;
};

/// Samples weight-t vectors e, keeps those with weight(e E_pub) = t, and
/// intersects candidate sets until a permutation sigma is pinned down (or is
/// the only few-way completion passing the rank test) and validated:
/// rank((E_pub - sigma) H_pub^T) = r_D and fresh accepted samples satisfy
/// e E_pub = e sigma. A validation sample that refutes sigma is applied to the
/// map like any other. Trial i draws from stream (seed, "perm-trial", i), so
/// the outcome does not depend on cfg.threads.
PermRecoveryResult recover_permutation(const PublicKey& pub, const PermRecoveryConfig& cfg);

/// rank((E_pub - sigma) H_pub^T) == r_D.
bool erasure_rank_matches(const PublicKey& pub, const BitMatrix& H_pub, const Permutation& sigma);

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

/// Quasi-systematic form of e (A1 + A2) = s.
///
/// T is an invertible column transform with A1 T zero outside its first r_D
/// columns, so the last n - k - r_D coordinates of s T depend only on e A2 T.
struct ReducedInstance {
  BitMatrix A;   ///< E_pub H_pub^T, n x (n - k)
  BitMatrix A1;  ///< (E_pub - sigma) H_pub^T
  BitMatrix A2;  ///< sigma H_pub^T
  BitMatrix T;   ///< (n - k) x (n - k)
  BitMatrix A0;  ///< columns r_D.. of A T, n x (n - k - r_D)
  BitVector s;
  BitVector s1;
  BitVector s2;
  std::size_t r_D = 0;
};

/// Throws RankMismatch if rank(A1) != r_D (wrong sigma).
ReducedInstance split_and_reduce(const PublicKey& pub, const Permutation& sigma, const BitVector& y);
ReducedInstance split_and_reduce(const PublicKey& pub, const BitMatrix& H_pub, const Permutation& sigma,
                                 const BitVector& y);

/// e A == s and weight(e) <= t.
bool verify_full(const ReducedInstance& inst, const BitVector& e, std::size_t t);

/// Positions whose row of A0 is zero. Errors there leave s2 unchanged and are
/// only visible through s1.
std::vector<std::size_t> hidden_positions(const ReducedInstance& inst);

/// Extends a solution of e A0 = s2 on the hidden positions (lowest weight,
/// then lexicographic) until the full system holds with weight <= t.
std::optional<BitVector> complete_candidate(const ReducedInstance& inst, const std::vector<std::size_t>& hidden,
                                            const BitVector& candidate, std::size_t t);

// ---------------------------------------------------------------------------
// Information set decoding
// ---------------------------------------------------------------------------

enum class IsdAlgorithm { Prange, LeeBrickell };

struct IsdConfig {
  IsdAlgorithm algorithm = IsdAlgorithm::Prange;
  std::size_t p = 0;  ///< Lee-Brickell enumeration weight
  std::uint64_t max_iterations = 100000;
  std::uint64_t seed = 0;
  /// In (0, 1): cap the run at the iteration count that reaches this success
  /// probability under the estimated per-iteration success. Otherwise unused.
  double target_confidence = 0.0;
  unsigned threads = 1;
};

/// Maps a candidate that solves the reduced system to an accepted answer.
using Verifier = std::function<std::optional<BitVector>(const BitVector&)>;

/// One syndrome-decoding problem e * A0 = s2, weight(e) <= t.
///
/// An iteration draws a uniform column order, runs Gauss-Jordan on A0^T
/// taking pivots in that order (dependent columns are skipped), and tries every
/// pattern of at most p errors outside the pivot set; the pivot part is then
/// forced. p = 0 is Prange.
class IsdSolver {
 public:
  IsdSolver(const BitMatrix& A0, const BitVector& s2, std::size_t t, std::size_t p);

  struct Iteration {
    std::optional<BitVector> found;
    std::uint64_t candidates = 0;  ///< weight-<=t solutions of the reduced system
    std::uint64_t rejected = 0;    ///< of those, refused by the verifier
    std::vector<std::size_t> pivots;
  };

  Iteration iterate(RandomStream& rng, const Verifier& verify) const;

  std::size_t length() const noexcept { return n_; }

 private:
  BitMatrix augmented_;  // A0^T | s2^T
  std::size_t n_ = 0;
  std::size_t redundancy_ = 0;
  std::size_t t_ = 0;
  std::size_t p_ = 0;
};

struct IsdResult {
  std::optional<BitVector> e;
  std::uint64_t iterations = 0;
  std::uint64_t candidates = 0;
  std::uint64_t rejected = 0;
};

/// Iteration i uses stream (cfg.seed, "isd", i); returns the verified
/// solution of the lowest successful iteration, independent of cfg.threads.
IsdResult isd_search(const BitMatrix& A0, const BitVector& s2, std::size_t t, std::size_t p,
                     std::uint64_t max_iterations, const IsdConfig& cfg, const Verifier& verify);

IsdResult isd_prange(const ReducedInstance& inst, std::size_t t, const IsdConfig& cfg);
IsdResult isd_lee_brickell(const ReducedInstance& inst, std::size_t t, std::size_t p, const IsdConfig& cfg);

/// Iteration cap for a reduced system of length n and `redundancy` syndrome
/// bits: cfg.max_iterations, lowered to the confidence-derived count when
/// cfg.target_confidence is in (0, 1).
std::uint64_t isd_iteration_budget(std::size_t n, std::size_t redundancy, std::size_t t, const IsdConfig& cfg);

// ---------------------------------------------------------------------------
// End to end
// ---------------------------------------------------------------------------

enum class AttackStatus { Verified, Unresolved, RankMismatch, NotFound, Inconsistent };
std::string_view to_string(AttackStatus s);

/// One progress record (emitted as a JSON line by the CLI).
struct ProgressEvent {
  std::string stage;
  std::uint64_t trial = 0;
  std::uint64_t accepted = 0;
  std::size_t resolved_positions = 0;
  std::uint64_t iterations = 0;
  double log2_work_observed = 0.0;
  bool verified = false;
};

struct AttackConfig {
  std::uint64_t seed = 0;
  std::uint64_t perm_budget = 0;  ///< 0: default_perm_budget
  std::size_t validation_samples = 3;
  IsdConfig isd;  ///< isd.seed is replaced by `seed`
  unsigned threads = 1;
  std::function<void(const ProgressEvent&)> progress;
};

struct AttackReport {
  AttackStatus status = AttackStatus::Unresolved;
  std::string stage;  ///< last stage entered
  std::optional<Permutation> recovered_perm;
  std::uint64_t perm_samples_used = 0;
  std::uint64_t perm_accepted = 0;
  std::uint64_t isd_iterations = 0;
  std::optional<BitVector> e_found;
  std::optional<BitVector> m_found;
  bool verified = false;
  double wall_time = 0.0;  ///< seconds
};

/// Algorithm 1 alone. verified means a permutation passed validation; it is
/// then in recovered_perm.
AttackReport recover_permutation_stage(const PublicKey& pub, const AttackConfig& cfg);

/// recover_permutation -> split_and_reduce -> ISD -> m from m G_pub = y - e E_pub.
/// If recovery ends with a few tied candidates, each is tried in turn.
AttackReport full_attack(const PublicKey& pub, const BitVector& y, const AttackConfig& cfg);

/// Stages 2-4 with a permutation already in hand.
AttackReport attack_with_permutation(const PublicKey& pub, const Permutation& sigma, const BitVector& y,
                                     const AttackConfig& cfg);

}  // namespace ktk::attack
