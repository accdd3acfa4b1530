#pragma once

#include "iwasawa/analyzer.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace iwasawa {

struct RunConfig {
  std::string subcommand;
  std::filesystem::path curve_file;
  u32 p = 0;
  std::optional<int> level;  // n_max; defaults by prime
  int precision = 8;         // M
  unsigned digits = 30;
  std::optional<i64> denominator_bound;
  std::optional<std::filesystem::path> table;
  bool import_table = false;
  bool export_table = false;
  std::string fine_char = "1";
  std::optional<std::filesystem::path> out;
  ReportFormat format = ReportFormat::json;

  /// 2 for p <= 7, 1 otherwise, unless --level was given.
  int n_max() const noexcept;
};

enum class Stage { ingest, symbols, hecke, theta, compat, extract, gcd, compare };
std::string_view to_string(Stage stage) noexcept;

struct PipelineResult {
  CurveData curve;
  ReductionInfo reduction;
  std::optional<SymbolTable> table;
  std::string table_source;  // "computed", "imported <file>" or "cache <file>"
  ThetaFamily thetas;
  std::vector<CompatReport> compat;
  std::optional<SignedPair> pair;
  std::optional<GcdReport> gcd;
  Report report;
};

/// Runs the stages in order up to and including `last`. A failure is rethrown
/// with the same kind and the stage name in front of its message.
/// Symbol tables are cached in $IWASAWA_CACHE_DIR when it is set.
PipelineResult run_pipeline(const RunConfig& config, Stage last = Stage::compare);

/// Command-line entry point: 0 on success, 1 on computational failure (or a
/// failed verification), 2 on usage errors with the synopsis on `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iwasawa
