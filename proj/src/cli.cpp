#include "pglcr/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pglcr/cover.hpp"
#include "pglcr/error.hpp"
#include "pglcr/gf.hpp"
#include "pglcr/metric.hpp"
#include "pglcr/projline.hpp"
#include "pglcr/report.hpp"
#include "pglcr/witness.hpp"

namespace pglcr::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultBudget = 100'000;
constexpr std::uint32_t kMaxExactQ = 13;

struct RunConfig {
  std::uint64_t q = 0;
  std::uint32_t p = 0;
  std::uint32_t f = 0;
  std::uint32_t rho = 0;
  unsigned threads = 0;
  bool long_run = false;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 10'000;
  std::string out;
  std::string format;
  std::string strategy = "dfs";
  std::string checkpoint;
  std::uint64_t checkpoint_every = 10'000'000;
  std::string delta_side = "auto";
  std::string input = "-";
  std::uint32_t exponent = 3;
};

unsigned default_threads() {
  if (const char* env = std::getenv("PGLCR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Resolves --q / --p --f into a field tower.
gf::FieldTower tower_for(RunConfig& cfg) {
  if (cfg.q == 0 && cfg.p == 0) throw InvalidArgument("give --q or --p and --f");
  if (cfg.p != 0) {
    const std::uint32_t f = cfg.f == 0 ? 1 : cfg.f;
    if (!gf::is_prime(cfg.p)) throw InvalidArgument(std::to_string(cfg.p) + " is not prime");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < f && q <= gf::kMaxFieldOrder; ++i) q *= cfg.p;
    if (cfg.q != 0 && cfg.q != q)
      throw InvalidArgument("--q " + std::to_string(cfg.q) + " is not " + std::to_string(cfg.p) +
                            "^" + std::to_string(f));
    cfg.q = q;
  }
  std::uint32_t p = 0, f = 0;
  if (!gf::prime_power(cfg.q, p, f))
    throw InvalidArgument(std::to_string(cfg.q) + " is not a prime power");
  cfg.p = p;
  cfg.f = f;
  return gf::FieldTower::build(p, f);
}

void require_witness_q(std::uint64_t q) {
  if (q % 6 != 1)
    throw InvalidArgument("q = " + std::to_string(q) + " is not 1 (mod 6); the witness needs q = 1 (mod 6)");
}

// Writes to --out when given, else to out.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + cfg.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_field_info(RunConfig& cfg, std::ostream& out) {
  const auto t = tower_for(cfg);
  const json j = report::tower_summary(t, cfg.rho);
  if (cfg.format == "text") {
    std::ostringstream os;
    os << "GF(" << t.size() << ") over GF(" << t.p() << "), q = " << t.q() << " = " << t.p()
       << "^" << t.f() << "\n";
    os << "modulus (low degree first):";
    for (const auto c : t.modulus()) os << ' ' << c;
    os << "\nprimitive: index " << t.primitive().index() << " (" << t.to_string(t.primitive())
       << ")\n";
    if (t.q() % 2 == 1) {
      os << "rho: index " << j["rho_index"] << " (" << j["rho_text"].get<std::string>() << "), "
         << j["rho_choices"] << " choices\n";
      os << "|Delta| = " << j["delta_size"] << "\n";
    } else {
      os << "rho: none (q even)\n";
    }
    emit(cfg, out, os.str());
  } else {
    emit(cfg, out, dump(j));
  }
  return kOk;
}

int cmd_group_info(RunConfig& cfg, std::ostream& out) {
  const auto t = tower_for(cfg);
  const ProjectiveLine line(t);
  const GroupTable group(line);
  emit(cfg, out, dump(report::group_table(group)));
  return kOk;
}

int cmd_witness(RunConfig& cfg, std::ostream& out) {
  const auto t = tower_for(cfg);
  if (cfg.exponent == 3) require_witness_q(cfg.q);
  const ProjectiveLine line(t);
  const WitnessContext ctx(line, {cfg.rho, cfg.exponent});
  std::ostringstream os;
  write_permutation(os, ctx.witness());
  emit(cfg, out, os.str());
  return kOk;
}

int cmd_certify(RunConfig& cfg, std::ostream& out) {
  const auto t = tower_for(cfg);
  require_witness_q(cfg.q);
  const ProjectiveLine line(t);
  const GroupTable group(line);
  const WitnessContext ctx(line, {cfg.rho, 3});
  CertifyOptions opt;
  opt.threads = cfg.threads;
  if (cfg.delta_side == "auto")
    opt.delta_side = cfg.q <= 49;
  else
    opt.delta_side = cfg.delta_side == "on";
  const auto rep = certify(ctx, group, opt);
  if (cfg.format == "text") {
    std::ostringstream os;
    os << "q = " << rep.q << ", rho index " << rep.rho_index << "\n"
       << "rho check: " << rep.lemma1.detail << "\n"
       << "sigma/tau check: " << rep.lemma2.detail << "\n"
       << "cubing check: " << rep.lemma3.detail << "\n"
       << "max coincidences over " << rep.group_order << " group elements: " << rep.max_coincidence
       << (rep.delta_side_checked ? " (Delta side agrees)" : "") << "\n"
       << rep.conclusion << "\nPASS\n";
    emit(cfg, out, os.str());
  } else {
    emit(cfg, out, dump(report::certificate(rep)));
  }
  return kOk;
}

void write_checkpoint(const std::string& path, const SearchCheckpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write checkpoint " + tmp);
    f << report::checkpoint(cp).dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

int cmd_cr(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t = tower_for(cfg);
  if (cfg.q > kMaxExactQ)
    throw InvalidArgument("exact search is supported for q <= " + std::to_string(kMaxExactQ));
  const ProjectiveLine line(t);
  const GroupTable group(line);

  SearchOptions opt;
  opt.threads = cfg.threads;
  if (cfg.strategy == "dfs")
    opt.strategy = SearchStrategy::prefix_dfs;
  else if (cfg.strategy == "scan")
    opt.strategy = SearchStrategy::candidate_scan;
  else
    throw InvalidArgument("unknown strategy " + cfg.strategy);
  if (!cfg.long_run) opt.budget = cfg.budget.value_or(kDefaultBudget);
  else if (cfg.budget) opt.budget = cfg.budget;

  if (!cfg.checkpoint.empty()) {
    if (std::filesystem::exists(cfg.checkpoint)) {
      std::ifstream f(cfg.checkpoint);
      json j;
      try {
        f >> j;
      } catch (const json::exception& e) {
        throw InvalidArgument("cannot parse checkpoint " + cfg.checkpoint + ": " + e.what());
      }
      opt.resume = report::checkpoint_from(j);
      err << "resuming from rank " << opt.resume->next_candidate_rank << " (max so far "
          << opt.resume->current_max << ")\n";
    }
    opt.checkpoint_every = cfg.checkpoint_every;
    const std::string path = cfg.checkpoint;
    opt.on_checkpoint = [path](const SearchCheckpoint& cp) { write_checkpoint(path, cp); };
  }

  const auto rep = exact_covering_radius(group, opt);
  if (!cfg.checkpoint.empty()) {
    SearchCheckpoint cp{rep.q, rep.next_candidate_rank, rep.covering_radius, std::nullopt,
                        rep.wall_time_s};
    if (rep.witness_of_max.size()) cp.witness_so_far = rep.witness_of_max;
    write_checkpoint(cfg.checkpoint, cp);
  }

  const json j = report::search(rep);
  if (cfg.format == "text") {
    std::ostringstream os;
    os << "q = " << rep.q << ": " << (rep.complete ? "Cr = " : "Cr >= ") << rep.covering_radius
       << " (expected " << j["expected_cr"] << ")\n"
       << "candidates " << rep.permutations_scanned << " / " << rep.total_candidates
       << ", leaves evaluated " << rep.leaves_evaluated << ", " << rep.wall_time_s << " s\n";
    emit(cfg, out, os.str());
  } else {
    emit(cfg, out, dump(j));
  }

  if (!rep.complete) {
    err << "budget exhausted after " << rep.permutations_scanned << " of " << rep.total_candidates
        << " candidates; covering radius >= " << rep.covering_radius
        << " (lower bound only; rerun with --long)\n";
    return kBudgetStop;
  }
  if (!j["matches_expected"].get<bool>()) {
    err << "CRITICAL: exact covering radius " << rep.covering_radius << " differs from expected "
        << j["expected_cr"] << "\n";
    return kClaimFailed;
  }
  return kOk;
}

int cmd_sample(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t = tower_for(cfg);
  if (!cfg.seed) {
    std::random_device rd;
    cfg.seed = (std::uint64_t{rd()} << 32) | rd();
    err << "seed = " << *cfg.seed << "\n";
  }
  if (cfg.trials == 0) throw InvalidArgument("--trials must be >= 1");
  const ProjectiveLine line(t);
  const GroupTable group(line);
  const auto rep = sample_distances(group, cfg.trials, *cfg.seed, cfg.threads);
  if (cfg.format == "json") {
    emit(cfg, out, dump(report::sample(rep)));
  } else if (cfg.format == "text") {
    std::ostringstream os;
    os << "q = " << rep.q << ", " << rep.trials << " trials, seed " << rep.seed << "\n";
    for (std::size_t d = 0; d < rep.histogram.size(); ++d)
      if (rep.histogram[d]) os << "  d = " << d << ": " << rep.histogram[d] << "\n";
    os << "max observed " << rep.max_observed << ", expected Cr " << rep.expected_cr << "\n";
    emit(cfg, out, os.str());
  } else {
    std::ostringstream os;
    os << "distance,count\n";
    for (std::size_t d = 0; d < rep.histogram.size(); ++d) os << d << ',' << rep.histogram[d] << '\n';
    emit(cfg, out, os.str());
  }
  if (rep.violations > 0) {
    err << "CRITICAL: " << rep.violations << " samples farther than " << rep.expected_cr
        << " from PGL2(" << rep.q << ")\n";
    return kClaimFailed;
  }
  return kOk;
}

int cmd_distance(RunConfig& cfg, std::ostream& out) {
  const auto t = tower_for(cfg);
  const ProjectiveLine line(t);
  const GroupTable group(line);
  std::vector<Permutation> perms;
  if (cfg.input == "-") {
    perms = read_permutations(std::cin, line.size());
  } else {
    std::ifstream f(cfg.input);
    if (!f) throw InvalidArgument("cannot read " + cfg.input);
    perms = read_permutations(f, line.size());
  }
  json arr = json::array();
  std::ostringstream text;
  for (const auto& v : perms) {
    const auto r = distance_to_group(v, group, cfg.threads);
    arr.push_back(report::distance(r, group));
    text << r.distance << "\n";
  }
  emit(cfg, out, cfg.format == "text" ? text.str() : dump(arr));
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.threads = default_threads();

  CLI::App app{"Covering radius of PGL2(q): field towers, witness certificates, exact search", "pglcr"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "prime power q");
    auto* p = sub->add_option("--p", cfg.p, "characteristic (with --f)");
    sub->add_option("--f", cfg.f, "extension degree (with --p)")->needs(p);
    sub->add_option("--threads", cfg.threads, "worker threads (default: $PGLCR_THREADS or cores)");
    sub->add_option("--out", cfg.out, "write the report to this file");
  };

  auto* field_info = app.add_subcommand("field-info", "field tower summary");
  add_common(field_info);
  field_info->add_option("--rho", cfg.rho, "0 = canonical, k = k-th element of order 2(q+1)");
  field_info->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));

  auto* group_info = app.add_subcommand("group-info", "PGL2(q) enumeration metadata");
  add_common(group_info);

  auto* witness = app.add_subcommand("witness", "write the witness permutation");
  add_common(witness);
  witness->add_option("--rho", cfg.rho, "0 = canonical, k = k-th element of order 2(q+1)");
  witness->add_option("--exponent", cfg.exponent, "exponent of h (experimental unless 3)");

  auto* certify_cmd = app.add_subcommand("certify", "certify d(witness, PGL2(q)) >= q-3");
  add_common(certify_cmd);
  certify_cmd->add_option("--rho", cfg.rho, "0 = canonical, k = k-th element of order 2(q+1)");
  certify_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));
  certify_cmd->add_option("--delta-side", cfg.delta_side, "compare Delta-side counts: auto|on|off")
      ->check(CLI::IsMember({"auto", "on", "off"}));

  auto* cr = app.add_subcommand("cr", "exact covering radius by exhaustive search");
  add_common(cr);
  cr->add_flag("--long", cfg.long_run, "lift the default candidate budget");
  cr->add_option("--budget", cfg.budget, "candidate budget");
  cr->add_option("--strategy", cfg.strategy, "dfs|scan")->check(CLI::IsMember({"dfs", "scan"}));
  cr->add_option("--checkpoint", cfg.checkpoint, "resumable state file");
  cr->add_option("--checkpoint-every", cfg.checkpoint_every, "candidates between checkpoints")
      ->check(CLI::PositiveNumber);
  cr->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));

  auto* sample = app.add_subcommand("sample", "histogram of d(v, G) for random v");
  add_common(sample);
  sample->add_option("--trials", cfg.trials, "number of samples");
  sample->add_option("--seed", cfg.seed, "64-bit seed (random and echoed when absent)");
  sample->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json", "text"}));

  auto* distance = app.add_subcommand("distance", "d(v, G) for permutations read from a file");
  add_common(distance);
  distance->add_option("--in", cfg.input, "permutation file, - for stdin");
  distance->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));

  // Default formats differ per subcommand; filled in after parsing.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (cfg.threads == 0) cfg.threads = 1;

  try {
    auto fmt = [&](const char* d) {
      if (cfg.format.empty()) cfg.format = d;
    };
    if (field_info->parsed()) return fmt("json"), cmd_field_info(cfg, out);
    if (group_info->parsed()) return fmt("json"), cmd_group_info(cfg, out);
    if (witness->parsed()) return fmt("text"), cmd_witness(cfg, out);
    if (certify_cmd->parsed()) return fmt("json"), cmd_certify(cfg, out);
    if (cr->parsed()) return fmt("json"), cmd_cr(cfg, out, err);
    if (sample->parsed()) return fmt("csv"), cmd_sample(cfg, out, err);
    if (distance->parsed()) return fmt("json"), cmd_distance(cfg, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CheckFailure& e) {
    err << "CHECK FAILED: " << e.what() << "\n";
    return kClaimFailed;
  }
  return kUsage;
}

} // namespace pglcr::cli
