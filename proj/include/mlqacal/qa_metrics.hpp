#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlqacal {

struct ScoredPrediction;

/// Article tokens dropped during answer normalization, per language.
struct NormalizationConfig {
  std::map<std::string, std::set<std::string>> articles;

  /// SQuAD behaviour: {a, an, the} for English only.
  static NormalizationConfig english_only();
  /// Adds MLQA-style article lists for de, es and vi on top of English.
  static NormalizationConfig mlqa();
};

/// Lowercases (Unicode-aware), deletes punctuation code points (general
/// category P), drops the language's article tokens and collapses
/// whitespace.
std::string normalize_answer(std::string_view text, std::string_view language,
                             const NormalizationConfig& config = NormalizationConfig::english_only());

bool exact_match(std::string_view prediction, std::span<const std::string> golds, std::string_view language,
                 const NormalizationConfig& config = NormalizationConfig::english_only());

/// Lenient variant: a gold answer is contained in the normalized prediction.
bool contains_match(std::string_view prediction, std::span<const std::string> golds, std::string_view language,
                    const NormalizationConfig& config = NormalizationConfig::english_only());

/// Correctness predicate handed to scoring and fitting.
struct AnswerMatcher {
  enum class Mode { exact, contains };
  Mode mode = Mode::exact;
  NormalizationConfig normalization = NormalizationConfig::english_only();

  bool operator()(std::string_view prediction, std::span<const std::string> golds,
                  std::string_view language) const;
};

struct BinningConfig {
  std::size_t bins = 10;
};

struct ReliabilityBin {
  std::size_t bin_index = 0;  // 1-based
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double mean_accuracy = 0.0;
};

struct ReliabilityTable {
  std::vector<ReliabilityBin> bins;
  std::size_t total_n = 0;
};

/// Bin of a confidence under M equal-width upper-inclusive bins:
/// ceil(conf * M) clamped to [1, M].
std::size_t bin_index(double confidence, std::size_t bins);

/// Per-bin counts and means. Throws DomainError on empty input.
ReliabilityTable reliability_bins(std::span<const ScoredPrediction> preds, const BinningConfig& cfg = {});

/// Weighted mean |acc - conf| over the table's bins.
double ece_from_table(const ReliabilityTable& table);

/// Expected calibration error as a fraction in [0, 1].
double compute_ece(std::span<const ScoredPrediction> preds, const BinningConfig& cfg = {});

/// Combines tables built over disjoint prediction sets with the same M.
ReliabilityTable merge_tables(const ReliabilityTable& a, const ReliabilityTable& b);

/// Writes `bin,count,mean_confidence,mean_accuracy` rows, one per bin.
void write_reliability_csv(std::ostream& out, const ReliabilityTable& table);

}  // namespace mlqacal
