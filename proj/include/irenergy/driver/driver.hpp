//===-- driver.hpp - Pipeline orchestration and reports -----------------===//
#pragma once

#include "irenergy/analysis/analysis.hpp"
#include "irenergy/hcir/program.hpp"
#include "irenergy/recsolve/closed_form.hpp"
#include "irenergy/support/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irenergy::driver {

enum class Format { Text, Csv };

struct AnalyzeOptions {
  bool dump_hcir = false;
  bool dump_recurrences = false;
  bool trace = false;
  Format format = Format::Text;
};

struct AnalyzeResult {
  hcir::HCProgram program;
  analysis::Analysis analysis;
  std::string output;              // dumps followed by the report
  std::vector<std::string> trace;  // one line per stage
  int exit_code = 0;               // 0, or 2 when some function is N/A
};

/// parse -> validate -> params fixpoint -> phi elimination -> translate ->
/// model assertions -> block costs -> equations -> solve. Stage failures
/// propagate as irenergy::Error.
AnalyzeResult analyze_source(std::string_view program_text, std::string_view model_text,
                             const AnalyzeOptions& opts = {});
AnalyzeResult analyze_files(const std::string& program_path, const std::string& model_path,
                            const AnalyzeOptions& opts = {});

/// One line per function: `name(P, ...) = <form>` or `name(P, ...) = N/A`
/// followed by the reason and any unsolved recurrence, indented.
std::string render_report(const analysis::Analysis& a, Format format);

/// Canonical closed form from its printed grammar.
recsolve::ClosedForm ingest_closed_form(std::string_view text);

/// Closed forms by benchmark name. Lines are `name = form` or
/// `name(P, ...) = form`, `#` starts a comment. Text reports of `analyze`
/// load directly; their N/A lines map to nullopt.
using FunctionTable = std::map<std::string, std::optional<recsolve::ClosedForm>>;
FunctionTable load_functions(std::string_view text);

struct MeasurementRow {
  std::string benchmark;
  std::string sizes_text;  // as written, e.g. `N=131;M=69`
  std::map<std::string, Rational> sizes;
  Rational hw;             // nJ
};

/// Header `benchmark,sizes,hw_nj`. Sizes are nonnegative integers, energy is
/// positive. Errors carry stage "measurements" and the line.
std::vector<MeasurementRow> parse_measurements(std::string_view text);

struct ComparisonRow {
  MeasurementRow measurement;
  Rational unrounded;   // closed form at the sizes
  Integer estimated;    // unrounded, half away from zero
  Rational err;         // (unrounded - hw) / hw * 100, exact
  Rational err_printed; // err to one decimal, half away from zero
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  // Mean |err| per benchmark in order of first appearance, then over all rows.
  std::vector<std::pair<std::string, Rational>> averages;
  Rational overall;
};

/// Errors (stage "compare") on a benchmark without a closed form and on sizes
/// that leave a variable of the form unbound.
Comparison compare(const FunctionTable& functions, const std::vector<MeasurementRow>& rows);
std::string render_comparison(const Comparison& c, Format format);

/// Signed percentage with one decimal; `-0.0` marks a negative error that
/// rounds to zero.
std::string format_err(const Rational& err);

std::string read_file(const std::string& path);

} // namespace irenergy::driver
