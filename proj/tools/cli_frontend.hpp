#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hybridpir::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidParameters = 2,
  kFeasibilityFailure = 3,
  kVerificationFailure = 4,
};

enum class Command { kPlan, kSimulate, kAudit, kTradeoff, kGolden };
enum class Format { kTable, kJson, kCsv };

struct RunConfig {
  Command command = Command::kPlan;
  int databases = 0;
  int messages = 0;
  int span = 0;
  int dimension = 0;
  int desired = 1;  // 1-based
  std::string field = "prime:257";
  std::optional<std::uint64_t> seed;
  Format format = Format::kTable;
  // Relative file outputs land here. Empty means HYBRIDPIR_OUTPUT_DIR, then ".".
  std::string output_dir;

  // simulate
  int runs = 1;
  bool sweep = false;
  int sweep_max_databases = 5;
  int sweep_max_messages = 3;
  std::string transcript_path;
  std::string export_messages_path;
  std::string import_messages_path;

  // audit
  bool exhaustive = false;
  std::uint64_t trials = 10000;
  double threshold = 0.05;
  std::uint64_t enumeration_bound = 1'000'000;
  bool disable_permutations = false;
  std::optional<int> database;  // 1-based

  // tradeoff
  bool write_files = false;
};

int run_plan(const RunConfig& config, std::ostream& out);
int run_simulate(const RunConfig& config, std::ostream& out);
int run_audit(const RunConfig& config, std::ostream& out);
int run_tradeoff(const RunConfig& config, std::ostream& out);
int run_golden(const RunConfig& config, std::ostream& out);

// Dispatches on config.command and maps library errors to exit codes,
// writing the diagnostic to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and runs.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridpir::cli
