#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlqacal/analysis.hpp"
#include "mlqacal/qa_metrics.hpp"

namespace mlqacal::cli {

enum class ReportFormat { table, csv, markdown };
std::optional<ReportFormat> parse_report_format(std::string_view s);

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;
inline constexpr int kInputFailure = 2;

/// Per-language EM / ECE report. Both metrics print as percentages with two
/// decimals.
std::string format_language_table(const LanguageTable& table, ReportFormat format);

/// Standalone SVG reliability diagram: one accuracy bar per bin, the
/// identity diagonal and the ECE (x100) in the title.
std::string render_reliability_svg(const ReliabilityTable& table, double ece);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlqacal::cli
