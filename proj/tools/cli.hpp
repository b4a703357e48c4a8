#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eulerlab/error.hpp"

namespace eulerlab::cli {

enum class Format { csv, json };

inline constexpr int kSchemaVersion = 1;

// Bad command line. Maps to exit code 2 like any other input error.
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

// --help / --version: print `text` and exit 0.
struct HelpRequested {
  std::string text;
};

struct ExperimentConfig {
  std::string subcommand;

  // graph source, one of
  std::string graph_file;
  std::string gen_spec;
  std::optional<double> holding;  // overrides the file's holding section
  std::string dump_kernel;

  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::uint64_t replicas = 1000;
  std::string out;  // empty: stdout
  Format format = Format::csv;

  // mix
  std::string metric = "both";
  double eps = 0.25;
  std::vector<std::uint64_t> times;

  // spectral
  bool profile = false;
  bool exact_profile = false;
  std::vector<double> gmt_a;

  // hit
  bool matrix = false;
  bool cover = false;
  std::string collide;  // STATIC:v or SWEEP
  std::uint32_t start = 0;
  std::uint64_t horizon = 0;

  // explore
  std::vector<std::size_t> k;
  std::string dump_labelling;

  // gadget
  std::vector<std::size_t> n_grid;
  std::vector<std::string> alphas;
  bool mc = false;
  std::vector<std::uint64_t> return_times;

  // dioph
  std::string xi = "golden";

  // audit-all
  std::string corpus_dir;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct Verdict {
  std::string graph;
  std::string bound;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string example;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;
  std::string text;  // raw output for `gen`; emitted as is
  double wall_seconds = 0.0;

  bool passed() const;
};

// Throws UsageError or HelpRequested.
ExperimentConfig parse_args(int argc, const char* const* argv);
ExperimentReport run(const ExperimentConfig& config);

// CSV: header row then data rows; several tables are separated by a blank
// line and each is preceded by `# <name>`. JSON carries schema_version and
// the config echo. Wall-clock time is not part of either.
std::string emit(const ExperimentReport& report, Format format);
nlohmann::json to_json(const ExperimentReport& report);
nlohmann::json to_json(const ExperimentConfig& config);

// parse, run, emit to --out or `out`; messages to `err`. Returns the exit
// code: 0 pass, 1 audit violation, 2 input error.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eulerlab::cli
