#ifndef INVOPT_BATCH_H_
#define INVOPT_BATCH_H_

// Runs every *.json instance of a directory through one or more models and
// aggregates the reports per (group, model). Files are processed in sorted
// order; with --parallel N workers pick files from a shared counter but
// results land in file order, so output does not depend on N (timing columns
// aside, which --no-timing zeroes).

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "invopt/cutting_plane.h"
#include "invopt/report.h"

namespace invopt {

struct BatchOptions {
  // Any model name accepted by ParseModelKind, or "cutplane".
  std::vector<std::string> models = {"tolerance", "biobj"};
  int parallel = 1;
  RunOptions run;  // kind is taken from `models`
  CutPlaneConfig cutplane;
};

struct BatchEntry {
  std::string file;  // file name within the directory
  std::string name;
  std::string group;
  std::string model;
  bool ok = false;
  int exit_code = 0;
  std::string error;
  nlohmann::json report;
};

// Throws kSchema when the directory holds no *.json file or a model name is
// unknown. Instance failures are recorded per entry, never thrown.
std::vector<BatchEntry> RunBatch(const std::filesystem::path& dir,
                                 const BatchOptions& options);

struct Stat {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

struct SummaryRow {
  std::string group;
  std::string model;
  int count = 0;   // instances attempted
  int failed = 0;
  Stat rgap;       // over successful entries with a finite rgap
  Stat rnorm;      // rnorm_norm_of_diff
  Stat cpu;
  int optimal_e2 = 0;
  int optimal_e5 = 0;
  int oracle_checked = 0;
  int oracle_e2 = 0;  // oracle rgap <= 1e-2
};

// Rows ordered by group name, then by the order models were requested.
std::vector<SummaryRow> Summarize(const std::vector<BatchEntry>& entries,
                                  const std::vector<std::string>& models);

std::string SummaryCsv(const std::vector<SummaryRow>& rows);
std::string SummaryMarkdown(const std::vector<SummaryRow>& rows,
                            const std::vector<BatchEntry>& entries);

}  // namespace invopt

#endif  // INVOPT_BATCH_H_
