#pragma once

// Subcommands of qrom_lab. Each builds a Report from an ExperimentDescriptor;
// the descriptor and seed fully determine the report bytes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrom/cli/report.hpp"
#include "qrom/core/random.hpp"
#include "qrom/experiments/crypto.hpp"
#include "qrom/experiments/lemmas.hpp"
#include "qrom/experiments/reductions.hpp"
#include "qrom/experiments/search.hpp"
#include "qrom/separation/isstar.hpp"

namespace qrom::cli {

struct ExperimentDescriptor {
  std::string subcommand;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  unsigned ell = 12;
  std::size_t rounds = 64;
  double alpha = 2.0;
  std::optional<std::uint64_t> p;
  std::size_t q_sign = 20;
  std::string scheme = "all";
  bool unsafe = false;
  double epsilon_scale = 1.0;

  /// The parameter map recorded in every output. The output location and
  /// format are not part of it.
  Json params() const {
    Json j = Json::object();
    if (trials) j["trials"] = *trials;
    if (subcommand == "lemmas") {
      j["epsilon_scale"] = epsilon_scale;
    } else if (subcommand == "separation") {
      j["ell"] = ell;
      j["rounds"] = rounds;
      j["alpha"] = alpha;
      j["unsafe_params"] = unsafe;
    } else if (subcommand == "reduce") {
      j["scheme"] = scheme;
      j["q_sign"] = q_sign;
      if (p) j["p"] = *p;
    }
    return j;
  }
};

/// Raised for descriptors the experiments refuse; the message is shown
/// verbatim.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Report new_report(const ExperimentDescriptor& d) {
  Report r;
  r.subcommand = d.subcommand;
  r.seed = d.seed;
  r.params = d.params();
  return r;
}

inline std::uint64_t u64(std::size_t v) { return static_cast<std::uint64_t>(v); }

// ---- lemmas ----------------------------------------------------------------

inline Report cmd_lemmas(const ExperimentDescriptor& d) {
  if (!(d.epsilon_scale > 0.0)) throw ConfigError("--epsilon-scale must be > 0");
  const std::size_t cases = d.trials.value_or(500);
  if (cases == 0) throw ConfigError("--trials must be >= 1");
  Report rep = new_report(d);
  using namespace experiments;
  const std::vector<LemmaRow> rows{
      lemma1_suite(cases, derive_seed(d.seed, 1)),
      lemma2_suite(cases, derive_seed(d.seed, 2), 1.0, d.epsilon_scale),
      lemma2_suite(cases, derive_seed(d.seed, 2), 2.0, d.epsilon_scale),
      near_uniform_suite({0.01, 0.05}, 3, 4, derive_seed(d.seed, 3)),
      preimage_mass_suite({4, 6}, 4, cases, derive_seed(d.seed, 4)),
      geometric_suite(cases, derive_seed(d.seed, 5)),
  };
  Table t{"lemmas", {"lemma", "parameters", "cases", "bound", "measured", "worst_ratio", "pass"}, {}};
  for (const auto& r : rows) {
    t.add({r.lemma, r.parameters, u64(r.cases), r.bound, r.measured, r.worst_ratio, r.pass});
    rep.check(r.pass, r.lemma);
  }
  rep.tables.push_back(std::move(t));

  Table g{"grover", {"n", "marked", "iterations", "expected", "observed", "trials", "z", "pass"}, {}};
  for (const auto& c : grover_grid(10000, derive_seed(d.seed, 6))) {
    g.add({u64(c.n), u64(c.marked), u64(c.iterations), c.check.expected, c.check.observed.rate(),
           u64(c.check.observed.trials), c.check.z(), c.check.pass()});
    rep.check(c.check.pass(), "grover " + c.check.quantity);
  }
  const double amp = grover_n4_marked_amplitude();
  g.add({u64(4), u64(1), u64(1), 1.0, amp, u64(0), 0.0, std::abs(amp - 1.0) <= 1e-9});
  rep.check(std::abs(amp - 1.0) <= 1e-9, "grover N=4 exact amplitude");
  rep.tables.push_back(std::move(g));

  const auto b = bht_experiment(12, 200, derive_seed(d.seed, 7));
  Table bt{"bht", {"ell", "trials", "success_rate", "invalid_outputs", "max_evaluations", "evaluation_limit", "pass"}, {}};
  bt.add({u64(b.ell), u64(b.trials), b.success_rate(), u64(b.invalid_outputs), u64(b.max_evaluations),
          u64(b.evaluation_limit), b.pass()});
  rep.check(b.pass(), "bht");
  rep.tables.push_back(std::move(bt));
  return rep;
}

// ---- separation ------------------------------------------------------------

inline Json round_json(std::size_t run, const separation::ISStarTranscript& tr, const separation::RoundRecord& r) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["run"] = run;
  j["attacker"] = r.attacker;
  j["round"] = r.index;
  j["key"] = r.key;
  j["spent"] = r.spent;
  j["budget"] = r.budget;
  j["submitted"] = r.submitted ? Json::array({r.submitted->first, r.submitted->second}) : Json(nullptr);
  j["verdict"] = separation::to_string(r.verdict);
  j["run_coll_count"] = tr.coll_count;
  j["run_b"] = tr.b;
  j["run_b_star"] = tr.b_star;
  return j;
}

inline separation::ISStarConfig separation_config(const ExperimentDescriptor& d) {
  separation::ISStarConfig cfg;
  cfg.ell = d.ell;
  cfg.rounds = d.rounds;
  cfg.alpha = d.alpha;
  cfg.unsafe = d.unsafe;
  cfg.hash_in_bits = std::max(12u, d.ell);
  cfg.hash_out_bits = std::max(16u, d.ell);
  try {
    cfg.validate_quantum();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline Report cmd_separation(const ExperimentDescriptor& d) {
  const auto cfg = separation_config(d);
  const std::size_t trials = d.trials.value_or(200);
  if (trials == 0) throw ConfigError("--trials must be >= 1");
  Report rep = new_report(d);

  Table s{"summary",
          {"ell", "rounds", "alpha", "trials", "classical_budget", "quantum_budget", "classical_pass_rate",
           "quantum_pass_rate", "classical_round_rate", "quantum_round_rate", "max_quantum_spent",
           "budget_violations"},
          {}};
  auto summary = [&](std::size_t cp, std::size_t qp, std::size_t ch, std::size_t qh, std::size_t maxq,
                     std::size_t viol) {
    const double n = static_cast<double>(trials), nr = n * static_cast<double>(cfg.rounds);
    s.add({u64(cfg.ell), u64(cfg.rounds), cfg.alpha, u64(trials), u64(cfg.classical_budget()),
           u64(cfg.quantum_budget()), double(cp) / n, double(qp) / n, double(ch) / nr, double(qh) / nr, u64(maxq),
           u64(viol)});
    rep.check(viol == 0, "no budget violations");
  };

  if (trials >= 100) {
    const auto br = separation::bound_report(cfg, trials, d.seed);
    summary(br.classical_passes, br.quantum_passes, br.classical_round_hits, br.quantum_round_hits,
            br.max_quantum_spent, br.classical_budget_violations + br.quantum_budget_violations);
    Table b{"bounds", {"attacker", "quantity", "direction", "bound", "empirical", "sigma", "margin", "flagged"}, {}};
    for (const auto& r : br.rows) {
      b.add({r.attacker, r.quantity, std::string(r.upper ? "upper" : "lower"), r.bound, r.empirical, r.sigma,
             r.margin, r.flagged});
      rep.check(!r.flagged, r.attacker + " " + r.quantity);
    }
    rep.tables.push_back(std::move(s));
    rep.tables.push_back(std::move(b));
    for (std::size_t i = 0; i < br.sample_transcripts.size(); ++i)
      for (const auto& r : br.sample_transcripts[i].rounds) rep.jsonl.push_back(round_json(i / 2, br.sample_transcripts[i], r));
  } else {
    // Too few runs for the bound table: report the raw transcripts.
    std::size_t cp = 0, qp = 0, ch = 0, qh = 0, maxq = 0, viol = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      separation::ClassicalBirthdayProver c;
      separation::QuantumBhtProver q;
      const auto tc = separation::run_isstar(cfg, c, derive_seed(d.seed, 2 * t));
      const auto tq = separation::run_isstar(cfg, q, derive_seed(d.seed, 2 * t + 1));
      cp += tc.b_star;
      qp += tq.b_star;
      ch += tc.coll_count;
      qh += tq.coll_count;
      for (const auto* tr : {&tc, &tq})
        for (const auto& r : tr->rounds) {
          viol += r.verdict == separation::Verdict::budget_exceeded;
          if (tr == &tq) maxq = std::max(maxq, r.spent);
          rep.jsonl.push_back(round_json(t, *tr, r));
        }
    }
    summary(cp, qp, ch, qh, maxq, viol);
    rep.tables.push_back(std::move(s));
  }
  return rep;
}

// ---- reduce ----------------------------------------------------------------

inline void add_reduction(Report& rep, Table& rates, Table& audits, const experiments::ReductionReport& r) {
  for (const auto& c : r.rates) {
    rates.add({r.scheme, c.quantity, c.expected, c.observed.rate(), u64(c.observed.hits), u64(c.observed.trials),
               c.sigma(), c.observed.radius(c.sigmas), c.z(), c.pass()});
    rep.check(c.pass(), r.scheme + " " + c.quantity);
  }
  audits.add({r.scheme, u64(r.games), u64(r.audit.checked), u64(r.audit.mismatches), u64(r.emitted_solutions),
              u64(r.invalid_solutions), u64(r.inconsistent_signatures), r.pass()});
  rep.check(r.audit.passed(), r.scheme + " history-freedom audit");
  rep.check(r.invalid_solutions == 0, r.scheme + " solution verification");
  rep.check(r.inconsistent_signatures == 0, r.scheme + " signature consistency");
}

inline Report cmd_reduce(const ExperimentDescriptor& d) {
  static const std::vector<std::string> known{"all", "clawfree-fdh", "katz-wang", "fdh-psf"};
  if (std::find(known.begin(), known.end(), d.scheme) == known.end())
    throw ConfigError("unknown --scheme '" + d.scheme + "' (all, clawfree-fdh, katz-wang, fdh-psf)");
  const auto p = d.p.value_or(reductions::ClawFreeFdhReduction::default_p(d.q_sign));
  if (p < 2) throw ConfigError("--p must be >= 2");
  if (d.trials && *d.trials == 0) throw ConfigError("--trials must be >= 1");
  Report rep = new_report(d);
  rep.params["p"] = p;
  Table rates{"rates",
              {"scheme", "quantity", "expected", "observed", "hits", "games", "sigma", "ci_radius", "z", "pass"},
              {}};
  Table audits{"audits",
               {"scheme", "games", "replayed_queries", "mismatches", "emitted_solutions", "invalid_solutions",
                "inconsistent_signatures", "pass"},
               {}};
  const auto want = [&](const char* s) { return d.scheme == "all" || d.scheme == s; };
  using namespace experiments;
  if (want("clawfree-fdh"))
    add_reduction(rep, rates, audits, coron_experiment(p, d.q_sign, d.trials.value_or(10000), derive_seed(d.seed, 1)));
  if (want("katz-wang"))
    add_reduction(rep, rates, audits, katz_wang_experiment(d.q_sign, d.trials.value_or(1000), derive_seed(d.seed, 2)));
  if (want("fdh-psf")) {
    add_reduction(rep, rates, audits,
                  fdh_psf_experiment(clawfree_psf(derive_seed(d.seed, 3)), d.q_sign, d.trials.value_or(2000),
                                     derive_seed(d.seed, 4)));
    add_reduction(rep, rates, audits,
                  fdh_psf_experiment(regular_table_psf(8, 4, derive_seed(d.seed, 5)), d.q_sign,
                                     d.trials.value_or(2000), derive_seed(d.seed, 6)));
  }
  rep.tables.push_back(std::move(rates));
  rep.tables.push_back(std::move(audits));
  return rep;
}

// ---- crypto-demo -----------------------------------------------------------

inline Report cmd_crypto_demo(const ExperimentDescriptor& d) {
  if (d.trials && *d.trials == 0) throw ConfigError("--trials must be >= 1");
  Report rep = new_report(d);
  using namespace experiments;

  Table c{"correctness", {"scheme", "trials", "successes", "backends_agree", "pass"}, {}};
  for (const auto& r : scheme_correctness(1000, derive_seed(d.seed, 1))) {
    c.add({r.scheme, u64(r.trials), u64(r.successes), r.backends_agree, r.pass()});
    rep.check(r.pass(), r.scheme + " correctness");
  }
  const auto eq = otp_hybrid_equals_br(1000, derive_seed(d.seed, 2));
  c.add({std::string("hybrid-otp==br"), u64(eq.trials), u64(eq.identical), true, eq.pass()});
  rep.check(eq.pass(), "hybrid-otp==br");
  rep.tables.push_back(std::move(c));

  Table x{"extraction", {"adversary", "q", "trials", "mean_eps", "expected_rate", "observed_rate", "sigma", "z", "pass"},
          {}};
  for (const auto& r : extraction_table(d.trials.value_or(10000), derive_seed(d.seed, 3))) {
    const auto& s = r.stats;
    const double sig = binomial_sigma(s.expected_rate, s.extraction.trials);
    x.add({s.adversary, u64(s.q), u64(s.trials), s.mean_eps, s.expected_rate, s.extraction.rate(), sig,
           sig > 0 ? (s.extraction.rate() - s.expected_rate) / sig : 0.0, r.pass()});
    rep.check(r.pass(), "extraction " + s.adversary);
  }
  rep.tables.push_back(std::move(x));

  Table f{"forwarding", {"adversary", "runs", "equal_transcripts", "sym_challenges", "sym_decryptions", "pass"}, {}};
  for (const auto& r : forwarding_table(200, derive_seed(d.seed, 4))) {
    f.add({r.adversary, u64(r.runs), u64(r.equal), u64(r.sym_challenges), u64(r.sym_decryptions), r.pass()});
    rep.check(r.pass(), "forwarding " + r.adversary);
  }
  rep.tables.push_back(std::move(f));
  return rep;
}

inline Report run_command(const ExperimentDescriptor& d) {
  if (d.subcommand == "lemmas") return cmd_lemmas(d);
  if (d.subcommand == "separation") return cmd_separation(d);
  if (d.subcommand == "reduce") return cmd_reduce(d);
  if (d.subcommand == "crypto-demo") return cmd_crypto_demo(d);
  throw ConfigError("unknown subcommand '" + d.subcommand + "'");
}

}  // namespace qrom::cli
