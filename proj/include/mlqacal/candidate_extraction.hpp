#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlqacal/prediction_log.hpp"

namespace mlqacal {

struct Span {
  std::size_t start_tok = 0;
  std::size_t end_tok = 0;
  /// start_logits[start_tok] + end_logits[end_tok]
  double z_ans = 0.0;
  std::string text;

  std::size_t length() const noexcept { return end_tok - start_tok + 1; }
  bool operator==(const Span&) const = default;
};

struct ExtractionConfig {
  std::size_t k = 20;
  std::size_t max_answer_length = 30;
};

/// Ranking used for the candidate set: higher z_ans first, then the smaller
/// start token, then the shorter span.
bool span_ranks_before(const Span& a, const Span& b) noexcept;

/// The k best valid spans of `rec`, best first. A span is valid when both
/// endpoint tokens are context tokens, start <= end, and its length is at
/// most max_answer_length. Throws ExtractionError when no span is valid.
std::vector<Span> top_k_spans(const SpanLogitRecord& rec, const ExtractionConfig& cfg);

/// Metadata a span-logit record does not carry.
struct RecordMetadata {
  std::string dataset = "unknown";
  Split split = Split::test;
  /// Overrides the gold answer derived from gold_start/gold_end.
  std::vector<std::string> gold_answers;
  std::optional<std::string> parallel_id;
};

/// Builds an extractive PredictionRecord whose candidates are top_k_spans.
/// Gold answers come from `meta.gold_answers` or, when that is empty, from
/// slicing the gold token span; ExtractionError if neither is available.
PredictionRecord extract_top_k_spans(const SpanLogitRecord& rec, const ExtractionConfig& cfg,
                                     const RecordMetadata& meta = {});

/// Context text covered by tokens [start_tok, end_tok].
std::string span_text(const SpanLogitRecord& rec, std::size_t start_tok, std::size_t end_tok);

}  // namespace mlqacal
