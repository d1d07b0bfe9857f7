#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlqacal/confidence_scoring.hpp"
#include "mlqacal/qa_metrics.hpp"

namespace mlqacal {

struct LanguageFeatureRow {
  std::string language;
  /// Column name -> value, e.g. syntactic, genetic, pretrain_size, geo.
  std::map<std::string, double> features;
};

struct FeatureTable {
  /// Column names in file order, excluding `language`.
  std::vector<std::string> columns;
  std::vector<LanguageFeatureRow> rows;
};

/// Delimited file with header `language,syntactic,genetic,pretrain_size[,...]`.
FeatureTable parse_feature_table(std::istream& in);
FeatureTable load_feature_table(const std::string& path);

struct LanguageMetricsRow {
  std::string language;
  std::size_t n = 0;
  double em_rate = 0.0;
  double ece = 0.0;
};

struct LanguageTable {
  std::vector<LanguageMetricsRow> rows;  // sorted by language
  LanguageMetricsRow macro_all;
  std::optional<LanguageMetricsRow> macro_non_english;
};

/// Unweighted mean of EM and ECE over rows; n is the summed count.
LanguageMetricsRow macro_average(std::span<const LanguageMetricsRow> rows, std::string label);

LanguageTable per_language_table(std::span<const ScoredPrediction> scored, const BinningConfig& cfg = {});

/// (value - base) / base
double relative_increase(double base, double value);

/// Sample Pearson correlation. Throws UndefinedCorrelationError on zero
/// variance, ConfigError on a length mismatch or fewer than two points.
double pearson(std::span<const double> x, std::span<const double> y);

struct FeatureCorrelation {
  std::string feature;
  double r = 0.0;
  std::size_t n = 0;
};

struct CorrelationReport {
  std::vector<FeatureCorrelation> correlations;
  /// Languages present in only one of the two tables.
  std::vector<std::string> unmatched;
};

/// Pearson r between ECE and every feature column over languages present
/// in both tables. Throws DomainError when fewer than two languages join.
CorrelationReport correlate_ece_with_features(std::span<const LanguageMetricsRow> metrics,
                                              const FeatureTable& features);

struct ParallelCorrelation {
  std::string language;
  std::size_t shared = 0;
  /// Empty when fewer than two ids are shared or a side has zero variance.
  std::optional<double> r;
};

/// Per target language, r between source and target confidences over
/// predictions sharing a parallel_id.
std::vector<ParallelCorrelation> parallel_confidence_correlation(std::span<const ScoredPrediction> scored,
                                                                 const std::string& source = "en");

}  // namespace mlqacal
