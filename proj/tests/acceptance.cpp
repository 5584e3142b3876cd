// Acceptance run: one PASS/FAIL line per criterion at the fixed seed 1.
// Exit status is nonzero when any line fails.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qrom/experiments/crypto.hpp"
#include "qrom/experiments/lemmas.hpp"
#include "qrom/experiments/reductions.hpp"
#include "qrom/experiments/search.hpp"
#include "qrom/separation/isstar.hpp"

using namespace qrom;
using namespace qrom::experiments;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

// Pinned tolerances.
constexpr double kGroverAmplitudeTol = 1e-9;
constexpr std::size_t kLemmaCases = 500;
constexpr std::size_t kPreimageOracles = 500;
constexpr std::size_t kCoronGames = 10000;
constexpr std::size_t kKwGames = 1000;
constexpr std::size_t kPsfGames = 2000;
constexpr std::size_t kQSign = 20;
constexpr std::size_t kExtractionTrials = 10000;
constexpr std::size_t kForwardingRuns = 200;
constexpr std::size_t kSeparationRuns = 200;
constexpr double kQuantumPassMin = 0.9;
constexpr double kClassicalPassMax = 0.05;
constexpr std::size_t kCorrectnessTrials = 1000;

int failures = 0;

void line(int id, bool ok, const char* name, const std::string& detail) {
  std::printf("%s  %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int run_lab(const std::string& args) {
  const std::string cmd = std::string(QROM_LAB_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Two runs into different directories, every written file compared byte
/// for byte, in both output formats.
bool deterministic(const std::string& sub, const std::string& extra, std::string& why) {
  const auto root = fs::temp_directory_path() / "qrom_acceptance";
  for (const char* format : {"json", "csv"}) {
    const auto a = root / (sub + "-" + format + "-a"), b = root / (sub + "-" + format + "-b");
    fs::remove_all(a);
    fs::remove_all(b);
    const std::string args = sub + " --seed 1 --format " + format + " " + extra + " --out ";
    const int ea = run_lab(args + a.string()), eb = run_lab(args + b.string());
    if (ea != eb || ea < 0 || ea > 1) {
      why = sub + " exit codes " + std::to_string(ea) + "/" + std::to_string(eb);
      return false;
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      if (slurp(e.path()) != slurp(b / e.path().filename())) {
        why = e.path().filename().string() + " differs";
        return false;
      }
    }
    if (files == 0 || files != static_cast<std::size_t>(std::distance(fs::directory_iterator(b), {}))) {
      why = sub + " file sets differ";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  std::printf("acceptance, seed %llu\n", static_cast<unsigned long long>(kSeed));

  {
    const auto grid = grover_grid(10000, derive_seed(kSeed, 6));
    std::size_t bad = 0;
    double worst = 0;
    for (const auto& c : grid) {
      bad += !c.check.pass();
      worst = std::max(worst, std::abs(c.check.z()));
    }
    const double amp = grover_n4_marked_amplitude();
    const bool ok = bad == 0 && std::abs(amp - 1.0) <= kGroverAmplitudeTol;
    line(1, ok, "grover-success-law",
         fmt("%zu cells, %zu outside 3 sigma, max |z| %.2f, N=4 amplitude %.12f", grid.size(), bad, worst, amp));
  }
  {
    const auto b = bht_experiment(12, 200, derive_seed(kSeed, 7));
    line(2, b.pass(), "bht-collision",
         fmt("ell 12: success %.3f (need >= 0.5), max evaluations %zu <= %zu, invalid %zu", b.success_rate(),
             b.max_evaluations, b.evaluation_limit, b.invalid_outputs));
  }
  {
    const auto lit = lemma2_suite(kLemmaCases, derive_seed(kSeed, 2), 1.0);
    const auto two = lemma2_suite(kLemmaCases, derive_seed(kSeed, 2), 2.0);
    line(3, lit.pass, "lemma2-sqrt-T-eps",
         fmt("%zu cases, worst dist/sqrt(T eps) %.3f; with 2 sqrt(T eps) worst ratio %.3f", lit.cases,
             lit.worst_ratio, two.worst_ratio));
  }
  {
    const auto r = lemma1_suite(kLemmaCases, derive_seed(kSeed, 1));
    line(4, r.pass, "lemma1-tv-le-4-dist", fmt("%zu cases, worst TV/(4 dist) %.3f", r.cases, r.worst_ratio));
  }
  {
    const auto r = near_uniform_suite({0.01, 0.05}, 3, 4, derive_seed(kSeed, 3));
    line(5, r.pass, "near-uniform-oracle", fmt("%zu scripts, worst ratio %.3f", r.cases, r.worst_ratio));
  }
  {
    const auto r = preimage_mass_suite({4, 6}, 4, kPreimageOracles, derive_seed(kSeed, 4));
    line(6, r.pass, "preimage-query-mass", fmt("%zu cells, worst mean/bound %.3f", r.cases, r.worst_ratio));
  }

  std::size_t audited = 0, mismatches = 0, bad_games = 0;
  auto tally = [&](const ReductionReport& r) {
    audited += r.audit.checked;
    mismatches += r.audit.mismatches;
    bad_games += r.inconsistent_signatures;
  };
  {
    const auto r = coron_experiment(kQSign, kQSign, kCoronGames, derive_seed(kSeed, 1));
    tally(r);
    line(7, r.pass(), "coron-abort-law",
         fmt("p=q=20, %zu games: no-abort %.4f vs %.4f (z %.2f), claws %.4f vs %.4f (z %.2f)", r.games,
             r.rates[0].observed.rate(), r.rates[0].expected, r.rates[0].z(), r.rates[1].observed.rate(),
             r.rates[1].expected, r.rates[1].z()));
  }
  {
    const auto r = katz_wang_experiment(kQSign, kKwGames, derive_seed(kSeed, 2));
    tally(r);
    line(8, r.pass(), "katz-wang-extraction",
         fmt("%zu games: claw rate %.3f vs 0.5 (z %.2f), %zu emitted, %zu fail the verifier", r.games,
             r.rates[0].observed.rate(), r.rates[0].z(), r.emitted_solutions, r.invalid_solutions));
  }
  {
    const auto a = fdh_psf_experiment(clawfree_psf(derive_seed(kSeed, 3)), kQSign, kPsfGames, derive_seed(kSeed, 4));
    const auto b =
        fdh_psf_experiment(regular_table_psf(8, 4, derive_seed(kSeed, 5)), kQSign, kPsfGames, derive_seed(kSeed, 6));
    tally(a);
    tally(b);
    line(9, a.pass() && b.pass(), "psf-collision-rate",
         fmt("E=1: %.4f vs 0.5 (z %.2f); E=4: %.4f vs 0.9375 (z %.2f)", a.rates[0].observed.rate(), a.rates[0].z(),
             b.rates[0].observed.rate(), b.rates[0].z()));
  }
  {
    const auto rows = extraction_table(kExtractionTrials, derive_seed(kSeed, 3));
    const auto fwd = forwarding_table(kForwardingRuns, derive_seed(kSeed, 4));
    bool ok = true;
    double worst = 0;
    for (const auto& r : rows) {
      ok = ok && r.pass();
      const double s = binomial_sigma(r.stats.expected_rate, r.stats.extraction.trials);
      if (s > 0) worst = std::max(worst, std::abs(r.stats.extraction.rate() - r.stats.expected_rate) / s);
    }
    std::size_t unequal = 0;
    for (const auto& f : fwd) unequal += f.runs - f.equal;
    line(10, ok && unequal == 0, "cca-eps-over-q",
         fmt("%zu adversaries x %zu trials, max |z| %.2f; forwarding mismatches %zu", rows.size(), kExtractionTrials,
             worst, unequal));
  }
  {
    const separation::ISStarConfig cfg;
    const auto r = separation::bound_report(cfg, kSeparationRuns, kSeed);
    const bool ok = r.quantum_pass_rate() >= kQuantumPassMin && r.classical_pass_rate() <= kClassicalPassMax &&
                    !r.any_flagged() && r.quantum_budget_violations == 0 && r.classical_budget_violations == 0;
    line(11, ok, "isstar-separation",
         fmt("%zu runs: quantum pass %.3f (>= %.2f), classical pass %.3f (<= %.2f), flagged rows %s", r.trials,
             r.quantum_pass_rate(), kQuantumPassMin, r.classical_pass_rate(), kClassicalPassMax,
             r.any_flagged() ? "yes" : "none"));
  }
  {
    bool ok = true;
    std::size_t trials = 0;
    for (const auto& r : scheme_correctness(kCorrectnessTrials, derive_seed(kSeed, 1))) {
      ok = ok && r.pass();
      trials += r.trials;
    }
    const auto eq = otp_hybrid_equals_br(kCorrectnessTrials, derive_seed(kSeed, 2));
    line(12, ok && eq.pass(), "scheme-correctness",
         fmt("%zu corpus runs all correct: %s; hybrid(OTP) == BR %zu/%zu", trials, ok ? "yes" : "no", eq.identical,
             eq.trials));
  }
  line(13, mismatches == 0 && bad_games == 0 && audited > 0, "history-freedom-audit",
       fmt("%zu replayed queries, %zu mismatches, %zu games with inconsistent signatures", audited, mismatches,
           bad_games));
  {
    std::string why;
    bool ok = true;
    for (const auto& [sub, extra] : {std::pair<std::string, std::string>{"lemmas", "--trials 100"},
                                     {"separation", "--trials 100"},
                                     {"reduce", ""},
                                     {"crypto-demo", ""}})
      ok = ok && deterministic(sub, extra, why);
    line(14, ok, "cli-determinism", ok ? "all subcommands byte-identical across runs, json and csv" : why);
  }

  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
