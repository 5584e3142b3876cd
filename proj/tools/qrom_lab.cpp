// qrom_lab: batch driver for the lemma suites, the IS* separation, the
// signature-game reductions and the encryption demos.
//
// Exit status: 0 if every asserted check passed, 1 if any failed, 2 for a
// rejected configuration or I/O error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qrom/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace qrom::cli;
  CLI::App app{"qrom_lab: quantum random oracle experiments"};
  app.require_subcommand(1);

  ExperimentDescriptor d;
  std::string out = "results";
  Format format = Format::json;
  std::size_t trials = 0;
  std::uint64_t p = 0;
  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", d.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--trials", trials, "trial count (subcommand-specific default)");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--format", format, "json or csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->capture_default_str();
  };

  auto* lemmas = app.add_subcommand("lemmas", "oracle-perturbation lemma suites, Grover and BHT");
  common(lemmas);
  lemmas->add_option("--epsilon-scale", d.epsilon_scale,
                     "multiply measured query mass before checking the resampling bound (values < 1 misreport it)")
      ->capture_default_str();

  auto* sep = app.add_subcommand("separation", "IS* protocol: classical birthday vs quantum BHT attackers");
  common(sep);
  sep->add_option("--ell", d.ell, "near-collision length")->capture_default_str();
  sep->add_option("--rounds", d.rounds, "collision rounds r")->capture_default_str();
  sep->add_option("--alpha", d.alpha, "parallel speed-up alpha")->capture_default_str();
  sep->add_flag("--unsafe-params", d.unsafe, "allow ell <= 6 log2(alpha)");

  auto* red = app.add_subcommand("reduce", "history-free reductions against planted forgers");
  common(red);
  red->add_option("--scheme", d.scheme, "all, clawfree-fdh, katz-wang or fdh-psf")->capture_default_str();
  red->add_option("--p", p, "Coron parameter p (default max(2, q_sign))");
  red->add_option("--q-sign", d.q_sign, "signing queries per game")->capture_default_str();

  auto* demo = app.add_subcommand("crypto-demo", "scheme correctness, eps/q extraction, CCA forwarding");
  common(demo);

  CLI11_PARSE(app, argc, argv);

  auto* chosen = app.get_subcommands().front();
  d.subcommand = chosen->get_name();
  if (chosen->count("--trials")) d.trials = trials;
  if (chosen == red && red->count("--p")) d.p = p;

  try {
    const auto report = run_command(d);
    for (const auto& path : write_report(report, out, format)) std::cout << path.string() << "\n";
    for (const auto& f : report.failures) std::cerr << "FAILED: " << f << "\n";
    return report.pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration rejected: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
