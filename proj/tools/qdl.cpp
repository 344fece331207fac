// qdl: complexity estimates, case-study reproduction, toy attacks and
// quantum simulation from the command line.

#include <cstdint>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdl/cipher_io.hpp"
#include "qdl/error.hpp"
#include "qdl/param_io.hpp"
#include "qdl/presets.hpp"
#include "qdl/qsim_runs.hpp"
#include "qdl/report.hpp"

namespace {

using namespace qdl;

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;  // ran to completion, result is negative
constexpr int exit_input = 2;
constexpr int exit_infeasible = 3;

int exit_code(Errc code) {
  switch (code) {
    case Errc::infeasible: return exit_infeasible;
    case Errc::attack_failed: return exit_negative;
    default: return exit_input;
  }
}

struct Output {
  bool json = false;
  std::string out;

  void emit(const ordered_json& report, const std::string& text) const {
    const std::string dumped = report.dump(2) + "\n";
    if (!out.empty()) write_text_file(out, dumped);
    std::cout << (json ? dumped : text);
  }
};

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_flag("--json", o.json, "Print the JSON report instead of text");
  cmd->add_option("--out", o.out, "Also write the JSON report to this file");
}

std::optional<Block> parse_block(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v > 0xffffffULL) {
    throw Error(Errc::invalid_argument, std::string(flag) + " must be an integer block value");
  }
  return static_cast<Block>(v);
}

// ---- estimate ----

struct EstimateArgs {
  std::string file;
  std::string model = "all";
  std::vector<std::string> kinds;
  bool kinds_given = false;
  Output output;
};

int run_estimate(const EstimateArgs& a) {
  EstimateRequest req;
  req.params = load_params(a.file);
  req.source = a.file;
  if (a.model == "all") {
    req.models = {AdversaryModel::classical, AdversaryModel::q1, AdversaryModel::q2};
  } else {
    req.models = {parse_model(a.model)};
  }
  if (a.kinds_given) {
    for (const auto& k : a.kinds) {
      if (!k.empty()) req.kinds.insert(parse_attack_kind(k));
    }
    if (req.kinds.empty()) throw Error(Errc::invalid_argument, "empty attack-kind set");
  }
  const auto report = estimate_report(req);
  a.output.emit(report, render_models_text(report));
  return exit_ok;
}

// ---- reproduce ----

std::string render_reproduction(const Reproduction& r) {
  std::ostringstream out;
  out << render_models_text(r.report);
  out << "checks for " << r.target << ":\n";
  for (const auto& c : r.checks) {
    out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.label << ": ";
    if (c.expected) {
      out << fixed2(*c.actual) << " (expected " << fixed2(*c.expected) << " +- " << *c.tolerance << ")";
    } else {
      out << c.actual_text << " (expected " << c.expected_text << ")";
    }
    out << "\n";
  }
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  out << (r.passed() ? "all checks pass\n" : "some checks FAIL\n");
  return out.str();
}

int run_reproduce(const std::string& target, const Output& o) {
  const auto r = reproduce(target);
  o.emit(r.report, render_reproduction(r));
  return r.passed() ? exit_ok : exit_negative;
}

// ---- attack ----

struct AttackArgs {
  std::string spec;
  std::string preset;
  std::uint64_t seed = 1;
  std::optional<int> rounds;
  bool force = false;
  bool list = false;
  Output output;
};

std::string render_attack(const ordered_json& rep) {
  std::ostringstream out;
  const auto& preset = rep.at("input").at("preset");
  out << "preset " << preset.at("name").get<std::string>() << " ("
      << preset.at("kind").get<std::string>() << ") on "
      << rep.at("input").at("cipher").at("name").get<std::string>() << ", "
      << rep.at("input").at("cipher").at("rounds").get<int>() << " rounds\n";
  out << "oracle key " << rep.at("oracle_key").get<std::string>() << "\n";
  if (rep.contains("measurement")) out << "measurement " << rep.at("measurement").dump() << "\n";
  out << "result " << rep.at("result").dump() << "\n";
  const auto& l = rep.at("ledger");
  out << "ledger: encryption_queries " << l.at("encryption_queries").get<std::uint64_t>()
      << ", partial_decryptions " << l.at("partial_decryptions").get<std::uint64_t>()
      << ", key_trials " << l.at("key_trials").get<std::uint64_t>() << "\n";
  out << "term                  predicted   measured   counter\n";
  for (const auto& row : rep.at("comparison")) {
    char line[160];
    const auto& m = row.at("measured_log2");
    std::snprintf(line, sizeof line, "%-20s  2^%-8s  2^%-7s  %s%s\n",
                  row.at("term").get<std::string>().c_str(),
                  row.at("predicted_log2").get<std::string>().c_str(),
                  m.is_null() ? "-" : m.get<std::string>().c_str(),
                  row.at("counter").get<std::string>().c_str(),
                  row.at("within_factor_8").get<bool>() ? "" : "  (outside factor 8)");
    out << line;
  }
  if (rep.contains("notes")) {
    for (const auto& n : rep.at("notes")) out << "note: " << n.get<std::string>() << "\n";
  }
  out << (rep.at("success").get<bool>() ? "success\n" : "FAILED\n");
  return out.str();
}

int run_attack(const AttackArgs& a) {
  if (a.list) {
    for (const auto& p : toy_attack_presets()) {
      std::cout << p.name << "  (" << p.cipher << ", " << p.rounds << " rounds)  " << p.description << "\n";
    }
    return exit_ok;
  }
  if (a.spec.empty() || a.preset.empty()) {
    throw Error(Errc::invalid_argument, "attack needs a cipher spec and --preset (see --list)");
  }
  const auto spec = load_cipher(a.spec);
  const auto& preset = find_toy_preset(a.preset);
  ToyRunOptions opt;
  opt.seed = a.seed;
  opt.rounds = a.rounds;
  opt.force = a.force;
  const auto run = run_toy_preset(spec, preset, opt);
  a.output.emit(run.report, render_attack(run.report));
  return run.success ? exit_ok : exit_negative;
}

// ---- qsim ----

struct QsimArgs {
  std::uint64_t n = 1024;
  std::uint64_t marked = 1;
  std::uint64_t d = 64;
  std::uint64_t k = 16;
  std::uint64_t trials = 200;
  int repetitions = 5;
  std::uint64_t seed = 1;
  std::string spec;
  std::string din;
  std::string dout;
  std::optional<int> rounds;
  Output output;
};

std::string render_qsim(const ordered_json& rep) {
  std::ostringstream out;
  for (const auto& [key, value] : rep.items()) {
    if (key == "tool" || key == "version" || key == "bounds" || key == "bounds_hold" ||
        key == "estimates") {
      continue;
    }
    if (key == "input" && value.contains("cipher")) {
      out << "cipher: " << value.at("cipher").at("name").get<std::string>() << ", "
          << value.at("cipher").at("rounds").get<int>() << " rounds\n";
      continue;
    }
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  for (const auto& b : rep.at("bounds")) {
    out << "[" << (b.at("holds").get<bool>() ? "ok" : "VIOLATED") << "] "
        << b.at("bound").get<std::string>() << "\n";
  }
  return out.str();
}

int emit_qsim(const QsimRun& run, const Output& o) {
  o.emit(run.report, render_qsim(run.report));
  return run.bounds_hold ? exit_ok : exit_infeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential and linear attack complexity workbench"};
  app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
  app.require_subcommand(1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Evaluate attack complexities for a parameter file");
  c_est->add_option("file", est.file, "Parameter file (JSON)")->required();
  c_est->add_option("--model", est.model, "classical, q1, q2 or all")->capture_default_str();
  auto* kind_opt = c_est->add_option("--kind", est.kinds,
                                     "Comma-separated attack kinds (default: every applicable kind)")
                       ->delimiter(',')
                       ->allow_extra_args(false);
  add_output(c_est, est.output);

  std::string target;
  Output rep_out;
  auto* c_rep = app.add_subcommand("reproduce", "Re-derive a case study and check it");
  c_rep->add_option("target", target, "lac, klein64 or klein96")->required();
  add_output(c_rep, rep_out);

  AttackArgs atk;
  auto* c_atk = app.add_subcommand("attack", "Run a toy-cipher attack preset");
  c_atk->add_option("spec", atk.spec, "Cipher spec file (JSON)");
  c_atk->add_option("--preset", atk.preset, "Attack preset name");
  c_atk->add_option("--seed", atk.seed, "Seed for the oracle key and the attack")->capture_default_str();
  c_atk->add_option("--rounds", atk.rounds, "Override the spec's round count");
  c_atk->add_flag("--force", atk.force, "Skip the 2^30 work guard");
  c_atk->add_flag("--list", atk.list, "List the presets");
  add_output(c_atk, atk.output);

  QsimArgs q;
  auto* c_q = app.add_subcommand("qsim", "Statevector experiments");
  c_q->require_subcommand(1);
  auto* q_grover = c_q->add_subcommand("grover", "Grover search with a known marked count");
  auto* q_count = c_q->add_subcommand("count", "Quantum counting trials");
  auto* q_aa = c_q->add_subcommand("aa", "Amplitude amplification from the uniform state");
  auto* q_pairs = c_q->add_subcommand("pairs", "Random-subset step of the promised pair search");
  auto* q_demo = c_q->add_subcommand("demo", "Q2 right-pair search on a toy cipher");
  for (auto* s : {q_grover, q_count, q_aa}) {
    s->add_option("--n", q.n, "Search-space size (power of two)")->capture_default_str();
    s->add_option("--marked", q.marked, "Number of marked items")->capture_default_str();
  }
  q_count->add_option("--d", q.d, "Counting precision D")->capture_default_str();
  q_count->add_option("--trials", q.trials, "Independent trials")->capture_default_str();
  q_count->add_option("--repetitions", q.repetitions, "Runs per estimate (median)")->capture_default_str();
  q_pairs->add_option("--n", q.n, "List size")->capture_default_str();
  q_pairs->add_option("--k", q.k, "Promised disjoint pairs")->capture_default_str();
  q_pairs->add_option("--trials", q.trials, "Trials")->capture_default_str();
  q_demo->add_option("--spec", q.spec, "Cipher spec file (JSON)")->required();
  q_demo->add_option("--din", q.din, "Input difference (default 0x1)");
  q_demo->add_option("--dout", q.dout, "Output difference (default: most frequent)");
  q_demo->add_option("--rounds", q.rounds, "Override the spec's round count");
  for (auto* s : {q_grover, q_count, q_aa, q_pairs, q_demo}) {
    s->add_option("--seed", q.seed, "Seed")->capture_default_str();
    add_output(s, q.output);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_input;
  }

  try {
    if (c_est->parsed()) {
      est.kinds_given = kind_opt->count() > 0;
      return run_estimate(est);
    }
    if (c_rep->parsed()) return run_reproduce(target, rep_out);
    if (c_atk->parsed()) return run_attack(atk);
    if (q_grover->parsed()) return emit_qsim(qsim_grover(q.n, q.marked, q.seed), q.output);
    if (q_count->parsed()) return emit_qsim(qsim_count(q.n, q.marked, q.d, q.trials, q.seed, q.repetitions), q.output);
    if (q_aa->parsed()) return emit_qsim(qsim_aa(q.n, q.marked, q.seed), q.output);
    if (q_pairs->parsed()) return emit_qsim(qsim_pairs(q.n, q.k, q.trials, q.seed), q.output);
    if (q_demo->parsed()) {
      DemoOptions opt;
      opt.seed = q.seed;
      opt.rounds = q.rounds;
      opt.din = parse_block(q.din, "--din");
      opt.dout = parse_block(q.dout, "--dout");
      return emit_qsim(qsim_demo(load_cipher(q.spec), opt), q.output);
    }
  } catch (const Error& e) {
    std::cerr << "qdl: error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "qdl: error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
