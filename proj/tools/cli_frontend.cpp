#include "cli_frontend.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hybridpir/errors.hpp"
#include "hybridpir/pir_engine.hpp"
#include "hybridpir/privacy_audit.hpp"
#include "hybridpir/serialization.hpp"
#include "hybridpir/tradeoff.hpp"
#include "hybridpir/transcript.hpp"

namespace hybridpir::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised for checks that fail after the library ran cleanly.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path output_dir(const RunConfig& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("HYBRIDPIR_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

fs::path resolve(const RunConfig& config, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? p : output_dir(config) / p;
}

std::ofstream open_output(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw ConfigurationError("cannot write " + path.string());
  return f;
}

std::uint64_t require_seed(const RunConfig& config) {
  if (!config.seed) throw ConfigurationError("--seed is required for this command");
  return *config.seed;
}

void print_header(std::ostream& out, const RunConfig& config, const SystemParams& p) {
  out << "# N=" << p.databases << " M=" << p.messages << " t=" << p.span
      << " K=" << p.dimension;
  if (config.seed) out << " seed=" << *config.seed;
  out << " field=" << config.field << '\n';
}

struct SimulationResult {
  RetrievalSchedule schedule;
  QueryBundle bundle;
  std::vector<AnswerSet> answers;
  std::vector<DecodeStep> trace;
  bool decode_ok = false;
  Rational cost;
  std::int64_t symbol_count = 0;  // per database
};

// One full retrieval. The planted messages come from `imported` when given.
SimulationResult simulate_once(const SystemParams& params, const PartitionMap& pmap,
                               const Field& field, int desired, Rng& rng,
                               const MessageSet* imported, MessageSet* planted) {
  const auto cb = build_codebook(field, params.databases, params.dimension);
  MessageSet messages = imported ? *imported : random_messages(params, field, rng);
  if (messages.count() != static_cast<std::size_t>(params.messages) ||
      messages.rows() != static_cast<std::size_t>(params.rows_per_message) ||
      messages.row_length() != static_cast<std::size_t>(params.dimension)) {
    throw ConfigurationError("imported messages do not match the plan shape");
  }
  const auto contents = materialize(params, pmap, messages, cb);
  const auto perms = PermutationState::random(params, pmap, rng);

  SimulationResult r;
  r.schedule = build_schedule(params, pmap, desired, perms);
  r.bundle = queries_from_schedule(r.schedule, rng);
  for (int n = 0; n < params.databases; ++n) {
    r.answers.push_back(answer(contents[n], r.bundle.queries[n], cb));
  }
  const auto decoded = decode(r.schedule, r.bundle, r.answers, cb, &r.trace);
  r.decode_ok = decoded == messages.messages[desired];
  r.cost = normalized_download_cost(r.schedule);
  r.symbol_count = contents.front().symbol_count();
  if (planted) *planted = std::move(messages);
  return r;
}

void verify(const SimulationResult& r, const SystemParams& p, const PartitionMap& pmap) {
  const auto expected = hybrid_download_cost(p.span, p.dimension, p.messages);
  if (!r.decode_ok) throw VerificationFailure("decoded message differs from the planted one");
  if (r.cost != expected) {
    throw VerificationFailure("cost " + to_string(r.cost) + " differs from expected " +
                              to_string(expected));
  }
  const auto violations = check_schedule_invariants(r.schedule, pmap);
  if (!violations.empty()) throw VerificationFailure("schedule invariant: " + violations.front());
  const auto library = Rational(p.messages * p.message_length);
  if (Rational(r.symbol_count) != p.storage_ratio() * library) {
    throw VerificationFailure("stored symbol count differs from mu*M*L");
  }
}

int run_sweep(const RunConfig& config, std::ostream& out) {
  Rng rng(require_seed(config));
  const Field field(FieldConfig::parse(config.field));
  out << "# sweep N<=" << config.sweep_max_databases << " M<=" << config.sweep_max_messages
      << " seed=" << *config.seed << " field=" << config.field << '\n';
  out << "N M t K  R    cost   result\n";
  int failures = 0;
  int instances = 0;
  for (int n = 1; n <= config.sweep_max_databases; ++n) {
    for (int m = 1; m <= config.sweep_max_messages; ++m) {
      for (int t = 1; t <= n; ++t) {
        for (int k = 1; k <= t; ++k) {
          const auto p = plan(n, m, t, k);
          const auto pmap = build_partition_map(p);
          std::string status = "ok";
          Rational cost;
          for (int d = 0; d < m; ++d) {
            const auto r = simulate_once(p, pmap, field, d, rng, nullptr, nullptr);
            cost = r.cost;
            try {
              verify(r, p, pmap);
            } catch (const VerificationFailure& e) {
              status = std::string("FAIL ") + e.what();
            }
          }
          ++instances;
          if (status != "ok") ++failures;
          out << n << ' ' << m << ' ' << t << ' ' << k << "  " << std::left << std::setw(4)
              << p.rows_per_message << ' ' << std::setw(6) << to_string(cost) << ' ' << status
              << std::right << '\n';
        }
      }
    }
  }
  out << instances << " instances, " << failures << " failures\n";
  return failures == 0 ? kOk : kVerificationFailure;
}

void print_points(std::ostream& out, const std::string& title,
                  const std::vector<TradeoffPoint>& pts) {
  out << title << '\n';
  for (const auto& p : pts) {
    out << "  mu=" << std::left << std::setw(6) << to_string(p.mu) << " D=" << std::setw(8)
        << to_string(p.cost) << ' ' << p.provenance.to_string() << std::right << '\n';
  }
}

}  // namespace

int run_plan(const RunConfig& config, std::ostream& out) {
  const auto p = plan(config.databases, config.messages, config.span, config.dimension);
  const auto pmap = build_partition_map(p);
  if (config.format == Format::kJson) {
    out << plan_to_json(p, pmap) << '\n';
    return kOk;
  }
  print_header(out, config, p);
  out << "mu = " << to_string(p.storage_ratio()) << '\n'
      << "c = " << p.multiplier << '\n'
      << "R = " << p.rows_per_message << '\n'
      << "L = " << p.message_length << '\n'
      << "partitions = " << p.partitions << " x " << p.rows_per_partition << " rows\n"
      << "instances per round per subset =";
  for (auto v : p.instances_per_round) out << ' ' << v;
  out << "\natoms per round per subset =";
  for (auto v : p.atoms_per_round) out << ' ' << v;
  out << '\n';
  for (std::size_t s = 0; s < pmap.size(); ++s) {
    out << "  S" << s + 1 << " = {";
    for (std::size_t i = 0; i < pmap.subsets[s].size(); ++i) {
      out << (i ? "," : "") << pmap.subsets[s][i] + 1;
    }
    out << "} rows";
    const auto& rows = pmap.rows[s];
    const std::size_t shown = std::min<std::size_t>(rows.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) out << ' ' << rows[i] + 1;
    if (shown < rows.size()) out << " ... (" << rows.size() << ")";
    out << '\n';
  }
  return kOk;
}

int run_simulate(const RunConfig& config, std::ostream& out) {
  if (config.sweep) return run_sweep(config, out);
  const auto seed = require_seed(config);
  const Field field(FieldConfig::parse(config.field));
  const auto p = plan(config.databases, config.messages, config.span, config.dimension);
  const auto pmap = build_partition_map(p);
  if (config.desired < 1 || config.desired > p.messages) {
    throw DomainError("--theta must be in [1, M]");
  }
  if (config.runs < 1) throw ConfigurationError("--runs must be positive");

  std::optional<MessageSet> imported;
  if (!config.import_messages_path.empty()) {
    std::ifstream f(resolve(config, config.import_messages_path), std::ios::binary);
    if (!f) throw ConfigurationError("cannot read " + config.import_messages_path);
    imported = read_messages(f, field);
  }

  Rng rng(seed);
  print_header(out, config, p);
  out << "mu = " << to_string(p.storage_ratio()) << "  R = " << p.rows_per_message
      << "  L = " << p.message_length << "  theta = " << config.desired << '\n';
  const auto expected = hybrid_download_cost(p.span, p.dimension, p.messages);

  SimulationResult last;
  MessageSet planted;
  for (int run = 0; run < config.runs; ++run) {
    const auto start = std::chrono::steady_clock::now();
    last = simulate_once(p, pmap, field, config.desired - 1, rng,
                         imported ? &*imported : nullptr, &planted);
    const auto ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start).count();
    std::ostringstream counts;
    for (std::size_t n = 0; n < last.answers.size(); ++n) {
      counts << (n ? "," : "") << last.answers[n].values.size();
    }
    out << "run " << run + 1 << ": answers per database [" << counts.str()
        << "] total " << last.schedule.total_atoms() << ", cost " << to_string(last.cost)
        << " (expected " << to_string(expected) << "), decode "
        << (last.decode_ok ? "OK" : "MISMATCH") << ", " << std::fixed << std::setprecision(2)
        << ms << " ms\n"
        << std::defaultfloat;
    verify(last, p, pmap);
  }

  if (!config.transcript_path.empty()) {
    TranscriptInfo info{seed, field.config().descriptor(), last.decode_ok};
    auto f = open_output(resolve(config, config.transcript_path));
    f << transcript_to_json(last.schedule, last.bundle, last.answers, last.trace, info) << '\n';
  }
  if (!config.export_messages_path.empty()) {
    auto f = open_output(resolve(config, config.export_messages_path), true);
    write_messages(f, planted);
  }
  return kOk;
}

int run_audit(const RunConfig& config, std::ostream& out) {
  AuditOptions options;
  options.seed = require_seed(config);
  options.mode = config.exhaustive ? AuditMode::kExhaustive : AuditMode::kSampled;
  options.trials = config.trials;
  options.threshold = config.threshold;
  options.enumeration_bound = config.enumeration_bound;
  options.disable_permutations = config.disable_permutations;
  const auto p = plan(config.databases, config.messages, config.span, config.dimension);
  if (config.database) {
    if (*config.database < 1 || *config.database > p.databases) {
      throw DomainError("--database must be in [1, N]");
    }
    options.database = *config.database - 1;
  }
  const auto report = audit_privacy(p, build_partition_map(p), options);

  print_header(out, config, p);
  out << "mode = " << (config.exhaustive ? "exhaustive" : "sampled")
      << (config.disable_permutations ? " (permutations disabled)" : "")
      << "  outcomes = " << report.outcomes << '\n';
  for (const auto& pair : report.pairs) {
    out << "  db " << pair.database + 1 << "  theta " << pair.desired_a + 1 << " vs "
        << pair.desired_b + 1 << "  TV = ";
    if (pair.exact_distance) out << to_string(*pair.exact_distance);
    else out << std::fixed << std::setprecision(4) << pair.distance << std::defaultfloat;
    out << (pair.pass ? "  pass" : "  FAIL") << '\n';
  }
  out << "max TV = " << std::fixed << std::setprecision(4) << report.max_distance
      << std::defaultfloat;
  if (!config.exhaustive) out << " (threshold " << report.threshold << ")";
  out << "\nprivacy " << (report.pass ? "PASS" : "FAIL") << '\n';
  return report.pass ? kOk : kVerificationFailure;
}

int run_tradeoff(const RunConfig& config, std::ostream& out) {
  const int n = config.databases;
  const int m = config.messages;
  if (n < 1 || m < 1) throw InfeasibleParametersError("tradeoff needs N >= 1 and M >= 1");
  const auto corners = hybrid_corner_points(n, m);
  const auto uncoded = uncoded_baseline(n, m);
  const auto mds = mds_baseline(n, m);
  auto baseline_points = uncoded;
  baseline_points.insert(baseline_points.end(), mds.begin(), mds.end());
  const auto hybrid_hull = lower_convex_hull(corners);
  const auto baseline_hull = lower_convex_hull(baseline_points);
  const auto improvements = strict_improvements(hybrid_hull, baseline_hull);

  const std::vector<std::pair<std::string, TradeoffCurve>> curves{
      {"hybrid_corners", {corners, false}},
      {"uncoded_baseline", {uncoded, false}},
      {"mds_baseline", {mds, false}},
      {"hybrid_hull", hybrid_hull},
      {"baseline_hull", baseline_hull},
      {"strict_improvements", {improvements, false}},
  };

  if (config.write_files) {
    const auto dir = output_dir(config);
    for (const auto& [name, curve] : curves) {
      open_output(dir / (name + ".csv")) << curve_to_csv(curve.points);
    }
    json all = json::array();
    for (const auto& [name, curve] : curves) all.push_back(json::parse(curve_to_json(name, curve)));
    open_output(dir / "curves.json") << all.dump(2) << '\n';
  }

  switch (config.format) {
    case Format::kCsv:
      out << curve_to_csv(corners);
      return kOk;
    case Format::kJson: {
      json all = json::array();
      for (const auto& [name, curve] : curves) {
        all.push_back(json::parse(curve_to_json(name, curve)));
      }
      out << all.dump(2) << '\n';
      return kOk;
    }
    case Format::kTable:
      break;
  }
  out << "# N=" << n << " M=" << m << '\n';
  print_points(out, "hybrid corner points", corners);
  print_points(out, "uncoded baseline", uncoded);
  print_points(out, "mds baseline", mds);
  print_points(out, "hybrid hull", hybrid_hull.points);
  print_points(out, "baseline hull", baseline_hull.points);
  out << "strict improvements over the baseline hull\n";
  for (const auto& p : improvements) {
    out << "  (" << to_string(p.mu) << ", " << to_string(p.cost) << ")  baseline "
        << to_string(cost_at(baseline_hull, p.mu)) << "  " << p.provenance.to_string() << '\n';
  }
  out << "distinct storage ratios = " << distinct_storage_ratios(n) << '\n';
  return kOk;
}

int run_golden(const RunConfig& config, std::ostream& out) {
  const std::uint64_t seed = config.seed.value_or(1);
  const auto p = plan(6, 2, 5, 2);
  const auto pmap = build_partition_map(p);
  Rng rng(seed);
  const auto schedule =
      build_schedule(p, pmap, config.desired - 1, PermutationState::random(p, pmap, rng));
  out << "# N=6 M=2 t=5 K=2 seed=" << seed << " theta=" << config.desired << '\n'
      << "# mu=" << to_string(p.storage_ratio()) << " R=" << p.rows_per_message
      << " answers=" << schedule.total_atoms()
      << " cost=" << to_string(normalized_download_cost(schedule)) << '\n'
      << render_query_table(schedule);
  return kOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kPlan: return run_plan(config, out);
      case Command::kSimulate: return run_simulate(config, out);
      case Command::kAudit: return run_audit(config, out);
      case Command::kTradeoff: return run_tradeoff(config, out);
      case Command::kGolden: return run_golden(config, out);
    }
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kFeasibilityFailure;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const DecodingIntegrityError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const ProtocolViolationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  }
  return kInvalidParameters;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid coded storage PIR: plan, simulate, audit and compare tradeoffs"};
  app.require_subcommand(1);
  RunConfig config;

  const auto add_params = [&](CLI::App* sub, bool tk) {
    sub->add_option("-N,--databases", config.databases, "Number of databases")->required();
    sub->add_option("-M,--messages", config.messages, "Number of messages")->required();
    if (tk) {
      sub->add_option("-t,--span", config.span, "Databases per row partition")->required();
      sub->add_option("-K,--dimension", config.dimension, "MDS code dimension")->required();
    }
  };
  const std::map<std::string, Format> formats{
      {"table", Format::kTable}, {"json", Format::kJson}, {"csv", Format::kCsv}};

  auto* plan_cmd = app.add_subcommand("plan", "Storage plan for (N, M, t, K)");
  add_params(plan_cmd, true);
  plan_cmd->add_option("--format", config.format, "table or json")
      ->transform(CLI::CheckedTransformer(formats));

  auto* sim = app.add_subcommand("simulate", "Store random messages, retrieve one, verify");
  sim->add_option("-N,--databases", config.databases, "Number of databases");
  sim->add_option("-M,--messages", config.messages, "Number of messages");
  sim->add_option("-t,--span", config.span, "Databases per row partition");
  sim->add_option("-K,--dimension", config.dimension, "MDS code dimension");
  sim->add_option("--seed", config.seed, "Random seed")->required();
  sim->add_option("--theta", config.desired, "Desired message, 1-based");
  sim->add_option("--field", config.field, "prime:p, gf2^w or gf2^w:0xpoly");
  sim->add_option("--runs", config.runs, "Independent retrievals");
  sim->add_flag("--sweep", config.sweep, "Every (N, M, t, K) within the sweep bounds");
  sim->add_option("--max-n", config.sweep_max_databases, "Sweep bound on N");
  sim->add_option("--max-m", config.sweep_max_messages, "Sweep bound on M");
  sim->add_option("--transcript", config.transcript_path, "Write a JSON transcript");
  sim->add_option("--export-messages", config.export_messages_path, "Write planted messages");
  sim->add_option("--import-messages", config.import_messages_path, "Plant these messages");
  sim->add_option("--output-dir", config.output_dir, "Base directory for relative outputs");

  auto* audit = app.add_subcommand("audit", "Total-variation privacy audit");
  add_params(audit, true);
  audit->add_option("--seed", config.seed, "Random seed")->required();
  auto* ex = audit->add_flag("--exhaustive", config.exhaustive, "Enumerate every permutation");
  audit->add_flag("--sampled", "Monte Carlo estimate (default)")->excludes(ex);
  audit->add_option("--trials", config.trials, "Samples per message");
  audit->add_option("--threshold", config.threshold, "Sampled pass threshold");
  audit->add_option("--enumeration-bound", config.enumeration_bound, "Exhaustive size cap");
  audit->add_option("--database", config.database, "Audit one database, 1-based");
  audit->add_flag("--disable-permutations", config.disable_permutations,
                  "Mutation test: identity permutations");

  auto* trade = app.add_subcommand("tradeoff", "Corner points, baselines and hulls");
  add_params(trade, false);
  trade->add_option("--format", config.format, "table, csv or json")
      ->transform(CLI::CheckedTransformer(formats));
  trade->add_flag("--write-files", config.write_files, "Write csv and json into the output dir");
  trade->add_option("--output-dir", config.output_dir, "Output directory");

  auto* golden = app.add_subcommand("golden", "Query table for N=6, M=2, t=5, K=2");
  golden->add_option("--seed", config.seed, "Random seed (default 1)");
  golden->add_option("--theta", config.desired, "Desired message, 1-based")
      ->check(CLI::Range(1, 2));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  }

  if (*plan_cmd) config.command = Command::kPlan;
  else if (*sim) config.command = Command::kSimulate;
  else if (*audit) config.command = Command::kAudit;
  else if (*trade) config.command = Command::kTradeoff;
  else config.command = Command::kGolden;

  if (config.command == Command::kSimulate && !config.sweep &&
      (sim->count("-N") == 0 || sim->count("-M") == 0 || sim->count("-t") == 0 ||
       sim->count("-K") == 0)) {
    err << "error: simulate needs -N, -M, -t and -K unless --sweep is given\n";
    return kInvalidParameters;
  }
  return run(config, out, err);
}

}  // namespace hybridpir::cli
