#pragma once

// The IS* identification protocol: r timed near-collision rounds followed by
// an identification stage, accepted iff b = 1 or collCount > r/4.
//
// Time is counted in hash evaluations. Each round uses a fresh key k_i and a
// fresh lazily sampled oracle H(k_i, .) : {0,1}^hash_in_bits ->
// {0,1}^hash_out_bits; near-collisions compare the leading ell output bits.
// The verifier's own timekeeping evaluations are represented by the budget
// itself. The identification scheme is a stub (honest: b = 1, impersonator:
// b = 0) unless a hook is installed.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qrom/core/bits.hpp"
#include "qrom/core/random.hpp"
#include "qrom/primitives/classical_ro.hpp"
#include "qrom/qsim/bht.hpp"
#include "qrom/qsim/grover.hpp"
#include "qrom/qsim/oracle_table.hpp"

namespace qrom::separation {

inline constexpr unsigned kMaxQuantumEll = 14;
inline constexpr unsigned kMaxQuantumHashInBits = 20;

struct ISStarConfig {
  unsigned ell = 12;
  std::size_t rounds = 64;
  double alpha = 2.0;
  unsigned hash_in_bits = 12;
  unsigned hash_out_bits = 16;
  bool unsafe = false;  ///< allow ell <= 6 log2(alpha)

  /// ceil(alpha * cbrt(2^ell)). The small offset keeps cbrt(2^12) = 16 from
  /// rounding up to 17.
  std::size_t classical_budget() const {
    return static_cast<std::size_t>(std::ceil(alpha * std::cbrt(std::ldexp(1.0, static_cast<int>(ell))) - 1e-9));
  }
  /// ceil(cbrt(2^ell)): the verifier's clock.
  std::size_t verifier_clock() const { return qsim::ceil_cbrt_pow2(ell); }
  /// c * ceil(cbrt(2^ell)) with c the collision-search constant.
  std::size_t quantum_budget() const { return qsim::kBhtEvaluationConstant * verifier_clock(); }

  bool secure_parameters() const { return static_cast<double>(ell) > 6.0 * std::log2(alpha); }

  void validate() const {
    if (rounds < 4) throw std::invalid_argument("IS*: rounds must be >= 4 for the r/4 rule");
    if (!(alpha >= 1.0)) throw std::invalid_argument("IS*: alpha must be >= 1");
    if (ell == 0 || ell > hash_out_bits)
      throw std::invalid_argument("IS*: need 1 <= ell <= hash_out_bits");
    if (hash_out_bits > 64 || hash_in_bits == 0 || hash_in_bits > 63)
      throw std::invalid_argument("IS*: hash widths out of range");
    if (!unsafe && !secure_parameters())
      throw std::invalid_argument("IS*: ell = " + std::to_string(ell) + " is not > 6 log2(alpha) = " +
                                  std::to_string(6.0 * std::log2(alpha)) +
                                  "; pass the unsafe flag to run anyway");
  }
  void validate_quantum() const {
    validate();
    if (ell > kMaxQuantumEll) throw std::invalid_argument("IS*: quantum attacker needs ell <= 14");
    if (hash_in_bits > kMaxQuantumHashInBits)
      throw std::invalid_argument("IS*: quantum attacker needs hash_in_bits <= 20");
  }
};

/// b* = 1 iff b = 1 or collCount > r/4 (strict).
constexpr bool accept(bool b, std::size_t coll_count, std::size_t rounds) noexcept {
  return b || 4 * coll_count > rounds;
}

enum class Verdict { none, collision_valid, budget_exceeded, invalid_pair };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::none: return "none";
    case Verdict::collision_valid: return "collision_valid";
    case Verdict::budget_exceeded: return "budget_exceeded";
    case Verdict::invalid_pair: return "invalid_pair";
  }
  return "?";
}

/// One round's hash as seen by a prover: metered classical access, plus the
/// materialized table that stands in for quantum access (the quantum
/// attacker charges its own evaluations to the same counter).
class RoundOracle {
 public:
  RoundOracle(const ISStarConfig& cfg, std::uint64_t key, std::uint64_t run_seed, std::size_t budget)
      : cfg_(cfg), key_(key), ro_(primitives::ClassicalRO::lazy(cfg.hash_in_bits, cfg.hash_out_bits,
                                                                derive_seed(run_seed ^ 0x48a5c0ffeeULL, key))),
        counter_(budget) {}

  std::uint64_t key() const noexcept { return key_; }
  unsigned ell() const noexcept { return cfg_.ell; }
  unsigned in_bits() const noexcept { return cfg_.hash_in_bits; }
  std::size_t budget() const noexcept { return counter_.limit(); }
  qsim::EvaluationCounter& counter() noexcept { return counter_; }

  /// H(k_i, x)|_ell, charged one evaluation.
  std::uint64_t eval_prefix(std::uint64_t x) {
    counter_.charge();
    return leading_bits(ro_.query(x), cfg_.hash_out_bits, cfg_.ell);
  }

  /// x -> H(k_i, x)|_ell as a table, uncharged.
  qsim::OracleTable truncated_table() const { return ro_.as_table().truncated(cfg_.ell); }

  /// The verifier's own uncharged evaluation.
  std::uint64_t verifier_prefix(std::uint64_t x) const {
    return leading_bits(ro_.replica().query(x), cfg_.hash_out_bits, cfg_.ell);
  }

 private:
  const ISStarConfig& cfg_;
  std::uint64_t key_;
  primitives::ClassicalRO ro_;
  qsim::EvaluationCounter counter_;
};

using Pair = std::pair<std::uint64_t, std::uint64_t>;

class Prover {
 public:
  virtual ~Prover() = default;
  virtual std::string kind() const = 0;
  /// Budget this prover is allowed per round.
  virtual std::size_t budget(const ISStarConfig& cfg) const { return cfg.classical_budget(); }
  virtual std::optional<Pair> collide(RoundOracle& h, Rng& rng) = 0;
  /// Identification-stage stub: true for an honest prover.
  virtual bool passes_identification() const { return false; }
};

/// Knows the secret key; does not search for collisions.
class HonestProver final : public Prover {
 public:
  std::string kind() const override { return "honest"; }
  std::optional<Pair> collide(RoundOracle&, Rng&) override { return std::nullopt; }
  bool passes_identification() const override { return true; }
};

/// Neither searches nor identifies.
class ImpersonatorProver final : public Prover {
 public:
  std::string kind() const override { return "impersonator"; }
  std::optional<Pair> collide(RoundOracle&, Rng&) override { return std::nullopt; }
};

/// Distinct uniformly random queries until an ell-prefix collision or the
/// budget runs out. With a budget covering the whole domain it enumerates
/// the domain and finds a collision whenever one exists.
inline std::optional<Pair> classical_birthday_attack(RoundOracle& h, std::size_t budget, Rng& rng) {
  const std::uint64_t domain = std::uint64_t{1} << h.in_bits();
  std::unordered_map<std::uint64_t, std::uint64_t> seen_out;  // prefix -> input
  std::unordered_map<std::uint64_t, bool> queried;
  std::vector<std::uint64_t> order;
  const bool exhaustive = budget >= domain;
  if (exhaustive) {
    order.resize(domain);
    for (std::uint64_t i = 0; i < domain; ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  const std::size_t limit = exhaustive ? static_cast<std::size_t>(domain) : budget;
  for (std::size_t i = 0; i < limit; ++i) {
    std::uint64_t x;
    if (exhaustive) {
      x = order[i];
    } else {
      do x = uniform_below(rng, domain);
      while (queried.contains(x));
      queried[x] = true;
    }
    const auto v = h.eval_prefix(x);
    const auto [it, fresh] = seen_out.emplace(v, x);
    if (!fresh) return Pair{x, it->second};
  }
  return std::nullopt;
}

class ClassicalBirthdayProver final : public Prover {
 public:
  std::string kind() const override { return "classical-birthday"; }
  std::optional<Pair> collide(RoundOracle& h, Rng& rng) override {
    return classical_birthday_attack(h, h.budget(), rng);
  }
};

/// BHT on the ell-truncated hash.
inline std::optional<Pair> quantum_bht_attack(RoundOracle& h, Rng& rng) {
  const auto table = h.truncated_table();
  const auto res = qsim::bht_collision(table, rng, &h.counter());
  if (!res.collision) return std::nullopt;
  return Pair{res.collision->m, res.collision->m_prime};
}

class QuantumBhtProver final : public Prover {
 public:
  std::string kind() const override { return "quantum-bht"; }
  std::size_t budget(const ISStarConfig& cfg) const override { return cfg.quantum_budget(); }
  std::optional<Pair> collide(RoundOracle& h, Rng& rng) override { return quantum_bht_attack(h, rng); }
};

/// Test device: submits a valid collision (found with uncharged access) in
/// exactly the first `collisions` rounds and nothing afterwards.
class PlantedProver final : public Prover {
 public:
  PlantedProver(std::size_t collisions, bool identifies) : left_(collisions), identifies_(identifies) {}
  std::string kind() const override { return "planted"; }
  std::optional<Pair> collide(RoundOracle& h, Rng&) override {
    if (left_ == 0) return std::nullopt;
    const auto t = h.truncated_table();
    std::unordered_map<std::uint64_t, std::uint64_t> seen;
    for (std::uint64_t x = 0; x < t.size(); ++x) {
      const auto [it, fresh] = seen.emplace(t(x), x);
      if (!fresh) {
        --left_;
        return Pair{x, it->second};
      }
    }
    return std::nullopt;
  }
  bool passes_identification() const override { return identifies_; }

 private:
  std::size_t left_;
  bool identifies_;
};

struct RoundRecord {
  std::size_t index = 0;
  std::uint64_t key = 0;
  std::string attacker;
  std::size_t spent = 0;
  std::size_t budget = 0;
  std::optional<Pair> submitted;
  Verdict verdict = Verdict::none;
};

struct ISStarTranscript {
  ISStarConfig config;
  std::vector<RoundRecord> rounds;
  std::size_t coll_count = 0;
  bool b = false;
  bool b_star = false;
};

/// Optional identification hook replacing the stub; gets the prover's
/// stub verdict and the run's RNG.
using IdentificationHook = std::function<bool(bool stub_verdict, Rng& rng)>;

inline ISStarTranscript run_isstar(const ISStarConfig& cfg, Prover& prover, std::uint64_t seed,
                                   const IdentificationHook& identify = nullptr) {
  cfg.validate();
  ISStarTranscript tr;
  tr.config = cfg;
  auto verifier_rng = make_rng(derive_seed(seed, 0));
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    RoundRecord rec;
    rec.index = i;
    rec.key = verifier_rng();
    rec.attacker = prover.kind();
    rec.budget = prover.budget(cfg);
    RoundOracle h(cfg, rec.key, seed, rec.budget);
    auto prover_rng = make_rng(derive_seed(seed, 1 + i));  // state reset every round
    rec.submitted = prover.collide(h, prover_rng);
    rec.spent = h.counter().spent();
    if (rec.submitted) {
      const auto [m, m2] = *rec.submitted;
      const std::uint64_t domain = std::uint64_t{1} << cfg.hash_in_bits;
      const bool valid = m != m2 && m < domain && m2 < domain && h.verifier_prefix(m) == h.verifier_prefix(m2);
      if (!valid) rec.verdict = Verdict::invalid_pair;
      else if (rec.spent > rec.budget) rec.verdict = Verdict::budget_exceeded;
      else rec.verdict = Verdict::collision_valid;
    }
    if (rec.verdict == Verdict::collision_valid) ++tr.coll_count;
    tr.rounds.push_back(std::move(rec));
  }
  auto id_rng = make_rng(derive_seed(seed, 0x1d));
  tr.b = identify ? identify(prover.passes_identification(), id_rng) : prover.passes_identification();
  tr.b_star = accept(tr.b, tr.coll_count, cfg.rounds);
  return tr;
}

// ---- bounds ---------------------------------------------------------------

/// q(q-1) / (2N).
inline double birthday_bound(double q, double n) { return q * (q - 1.0) / (2.0 * n); }

/// exp(-r cbrt(n) / (32 alpha^2)) with n = 2^ell.
inline double classical_chernoff_bound(const ISStarConfig& c) {
  const double cn = std::cbrt(std::ldexp(1.0, static_cast<int>(c.ell)));
  return std::exp(-static_cast<double>(c.rounds) * cn / (32.0 * c.alpha * c.alpha));
}

/// The sharper intermediate expression preceding the final simplification:
/// exp(-(r a^2 / (2 cbrt n)) ((cbrt n - 2 a^2) / (2 a^2))^2 / 4).
inline double classical_chernoff_intermediate(const ISStarConfig& c) {
  const double cn = std::cbrt(std::ldexp(1.0, static_cast<int>(c.ell)));
  const double a2 = c.alpha * c.alpha;
  const double d = (cn - 2.0 * a2) / (2.0 * a2);
  return std::exp(-(static_cast<double>(c.rounds) * a2 / (2.0 * cn)) * d * d / 4.0);
}

/// Lower bound on the quantum pass rate: 1 - 0.94^r.
inline double quantum_pass_lower_bound(const ISStarConfig& c) {
  return 1.0 - std::pow(0.94, static_cast<double>(c.rounds));
}

/// Upper bound on the quantum failure rate: exp(-r/16).
inline double quantum_failure_bound(const ISStarConfig& c) {
  return std::exp(-static_cast<double>(c.rounds) / 16.0);
}

struct BoundRow {
  std::string attacker;
  std::string quantity;
  double bound = 0.0;
  double empirical = 0.0;
  double sigma = 0.0;
  double margin = 0.0;  ///< signed distance from violation, in the bound's direction
  bool upper = true;    ///< bound is an upper bound on `empirical`
  bool flagged = false;
};

struct BoundReport {
  ISStarConfig config;
  std::size_t trials = 0;
  std::size_t classical_passes = 0;
  std::size_t quantum_passes = 0;
  std::size_t classical_round_hits = 0;
  std::size_t quantum_round_hits = 0;
  std::size_t classical_budget_violations = 0;
  std::size_t quantum_budget_violations = 0;
  std::size_t max_quantum_spent = 0;
  std::vector<BoundRow> rows;
  std::vector<ISStarTranscript> sample_transcripts;  ///< first run of each attacker

  double classical_pass_rate() const { return static_cast<double>(classical_passes) / static_cast<double>(trials); }
  double quantum_pass_rate() const { return static_cast<double>(quantum_passes) / static_cast<double>(trials); }
  bool any_flagged() const {
    for (const auto& r : rows)
      if (r.flagged) return true;
    return false;
  }
};

/// Upper bound check: flagged if empirical > bound + 3 sigma, where sigma
/// is the binomial deviation at max(empirical, bound).
inline BoundRow upper_row(std::string attacker, std::string quantity, double bound, double emp, std::size_t n) {
  const double p = std::max(emp, bound);
  const double s = std::sqrt(std::min(p, 1.0) * (1.0 - std::min(p, 1.0)) / static_cast<double>(n));
  return {std::move(attacker), std::move(quantity), bound, emp, s, bound + 3 * s - emp, true, emp > bound + 3 * s};
}

/// Lower bound check: flagged if empirical < bound - 3 sigma.
inline BoundRow lower_row(std::string attacker, std::string quantity, double bound, double emp, std::size_t n) {
  const double p = std::min(emp, bound);
  const double s = std::sqrt(std::max(p, 0.0) * (1.0 - std::max(p, 0.0)) / static_cast<double>(n));
  return {std::move(attacker), std::move(quantity), bound, emp, s, emp - (bound - 3 * s), false, emp < bound - 3 * s};
}

/// Runs `trials` impersonation attempts with each attacker (identification
/// fails, so a run passes iff collCount > r/4) and compares pass rates and
/// per-round success with the bounds.
inline BoundReport bound_report(const ISStarConfig& cfg, std::size_t trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("bound_report: trials must be >= 100");
  cfg.validate_quantum();
  BoundReport rep;
  rep.config = cfg;
  rep.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    ClassicalBirthdayProver cp;
    auto tc = run_isstar(cfg, cp, derive_seed(seed, 2 * t));
    QuantumBhtProver qp;
    auto tq = run_isstar(cfg, qp, derive_seed(seed, 2 * t + 1));
    rep.classical_passes += tc.b_star;
    rep.quantum_passes += tq.b_star;
    rep.classical_round_hits += tc.coll_count;
    rep.quantum_round_hits += tq.coll_count;
    for (const auto& r : tc.rounds) rep.classical_budget_violations += r.verdict == Verdict::budget_exceeded;
    for (const auto& r : tq.rounds) {
      rep.quantum_budget_violations += r.verdict == Verdict::budget_exceeded;
      rep.max_quantum_spent = std::max(rep.max_quantum_spent, r.spent);
    }
    if (t == 0) {
      rep.sample_transcripts.push_back(std::move(tc));
      rep.sample_transcripts.push_back(std::move(tq));
    }
  }
  const std::size_t nr = trials * cfg.rounds;
  const double q = static_cast<double>(cfg.classical_budget());
  const double n = std::ldexp(1.0, static_cast<int>(cfg.ell));
  rep.rows.push_back(upper_row("classical", "pass_rate_chernoff", classical_chernoff_bound(cfg),
                               rep.classical_pass_rate(), trials));
  rep.rows.push_back(upper_row("classical", "pass_rate_chernoff_intermediate", classical_chernoff_intermediate(cfg),
                               rep.classical_pass_rate(), trials));
  rep.rows.push_back(upper_row("classical", "round_success_birthday", birthday_bound(q, n),
                               static_cast<double>(rep.classical_round_hits) / static_cast<double>(nr), nr));
  rep.rows.push_back(lower_row("quantum", "pass_rate_1_minus_0.94^r", quantum_pass_lower_bound(cfg),
                               rep.quantum_pass_rate(), trials));
  rep.rows.push_back(lower_row("quantum", "pass_rate_1_minus_exp(-r/16)", 1.0 - quantum_failure_bound(cfg),
                               rep.quantum_pass_rate(), trials));
  rep.rows.push_back(lower_row("quantum", "round_success_half", 0.5,
                               static_cast<double>(rep.quantum_round_hits) / static_cast<double>(nr), nr));
  return rep;
}

}  // namespace qrom::separation
