#include "mlqacal/qa_metrics.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cmath>
#include <ostream>

#include "mlqacal/confidence_scoring.hpp"
#include "mlqacal/errors.hpp"
#include "mlqacal/text_utils.hpp"

namespace mlqacal {

NormalizationConfig NormalizationConfig::english_only() {
  NormalizationConfig c;
  c.articles["en"] = {"a", "an", "the"};
  return c;
}

NormalizationConfig NormalizationConfig::mlqa() {
  NormalizationConfig c = english_only();
  c.articles["de"] = {"der", "die", "das", "des", "dem", "den", "ein", "eine", "einer", "eines", "einem", "einen"};
  c.articles["es"] = {"el", "la", "lo", "las", "los", "un", "una", "unas", "unos"};
  c.articles["vi"] = {"của", "là", "cái", "chiếc", "những"};
  return c;
}

std::string normalize_answer(std::string_view text, std::string_view language, const NormalizationConfig& config) {
  icu::UnicodeString lowered =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  lowered.toLower(icu::Locale::getRoot());

  icu::UnicodeString kept;
  for (std::int32_t i = 0; i < lowered.length();) {
    const UChar32 c = lowered.char32At(i);
    i += U16_LENGTH(c);
    if (u_ispunct(c)) continue;
    kept.append(u_isUWhiteSpace(c) ? UChar32(' ') : c);
  }
  std::string utf8;
  kept.toUTF8String(utf8);

  const auto found = config.articles.find(std::string(language));
  std::vector<std::string> tokens;
  for (auto& token : split(utf8, ' ')) {
    if (token.empty()) continue;
    if (found != config.articles.end() && found->second.contains(token)) continue;
    tokens.push_back(std::move(token));
  }
  return join(tokens, " ");
}

bool exact_match(std::string_view prediction, std::span<const std::string> golds, std::string_view language,
                 const NormalizationConfig& config) {
  const std::string pred = normalize_answer(prediction, language, config);
  for (const auto& g : golds) {
    if (normalize_answer(g, language, config) == pred) return true;
  }
  return false;
}

bool contains_match(std::string_view prediction, std::span<const std::string> golds, std::string_view language,
                    const NormalizationConfig& config) {
  const std::string pred = normalize_answer(prediction, language, config);
  for (const auto& g : golds) {
    const std::string gold = normalize_answer(g, language, config);
    if (gold.empty() ? pred.empty() : pred.find(gold) != std::string::npos) return true;
  }
  return false;
}

bool AnswerMatcher::operator()(std::string_view prediction, std::span<const std::string> golds,
                               std::string_view language) const {
  return mode == Mode::exact ? exact_match(prediction, golds, language, normalization)
                             : contains_match(prediction, golds, language, normalization);
}

std::size_t bin_index(double confidence, std::size_t bins) {
  const double scaled = std::ceil(confidence * static_cast<double>(bins));
  if (!(scaled >= 1.0)) return 1;
  if (scaled >= static_cast<double>(bins)) return bins;
  return static_cast<std::size_t>(scaled);
}

ReliabilityTable reliability_bins(std::span<const ScoredPrediction> preds, const BinningConfig& cfg) {
  if (cfg.bins < 1) throw ConfigError("number of bins must be at least 1");
  if (preds.empty()) throw DomainError("cannot bin an empty prediction set");

  std::vector<double> conf_sum(cfg.bins, 0.0);
  std::vector<double> correct_sum(cfg.bins, 0.0);
  std::vector<std::size_t> counts(cfg.bins, 0);
  for (const auto& p : preds) {
    const std::size_t b = bin_index(p.confidence, cfg.bins) - 1;
    ++counts[b];
    conf_sum[b] += p.confidence;
    correct_sum[b] += p.correct ? 1.0 : 0.0;
  }

  ReliabilityTable table;
  table.total_n = preds.size();
  table.bins.reserve(cfg.bins);
  for (std::size_t b = 0; b < cfg.bins; ++b) {
    ReliabilityBin bin{b + 1, counts[b], 0.0, 0.0};
    if (counts[b] > 0) {
      bin.mean_confidence = conf_sum[b] / static_cast<double>(counts[b]);
      bin.mean_accuracy = correct_sum[b] / static_cast<double>(counts[b]);
    }
    table.bins.push_back(bin);
  }
  return table;
}

double ece_from_table(const ReliabilityTable& table) {
  if (table.total_n == 0) throw DomainError("reliability table is empty");
  double ece = 0.0;
  for (const auto& bin : table.bins) {
    if (bin.count == 0) continue;
    ece += static_cast<double>(bin.count) / static_cast<double>(table.total_n) *
           std::abs(bin.mean_accuracy - bin.mean_confidence);
  }
  return ece;
}

double compute_ece(std::span<const ScoredPrediction> preds, const BinningConfig& cfg) {
  return ece_from_table(reliability_bins(preds, cfg));
}

ReliabilityTable merge_tables(const ReliabilityTable& a, const ReliabilityTable& b) {
  if (a.bins.size() != b.bins.size()) throw ConfigError("cannot merge reliability tables with different bin counts");
  ReliabilityTable out;
  out.total_n = a.total_n + b.total_n;
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const auto& x = a.bins[i];
    const auto& y = b.bins[i];
    ReliabilityBin bin{x.bin_index, x.count + y.count, 0.0, 0.0};
    if (bin.count > 0) {
      const double n = static_cast<double>(bin.count);
      bin.mean_confidence = (x.mean_confidence * x.count + y.mean_confidence * y.count) / n;
      bin.mean_accuracy = (x.mean_accuracy * x.count + y.mean_accuracy * y.count) / n;
    }
    out.bins.push_back(bin);
  }
  return out;
}

void write_reliability_csv(std::ostream& out, const ReliabilityTable& table) {
  out << "bin,count,mean_confidence,mean_accuracy\n";
  for (const auto& bin : table.bins) {
    out << bin.bin_index << ',' << bin.count << ',' << format_fixed(bin.mean_confidence, 6) << ','
        << format_fixed(bin.mean_accuracy, 6) << '\n';
  }
}

}  // namespace mlqacal
