#pragma once

// On-disk prediction logs: one JSON object per line.
//
// Prediction record:
//   {"qid","language","dataset","split","model_kind","gold_answers",
//    "candidates",["parallel_id"],["embedding"]}
// Extractive candidate: {"text","start_logit","end_logit"}
// Generative candidate: {"text","log_prob"}
//
// Span-logit record:
//   {"qid","language","start_logits","end_logits","context_mask",
//    "token_offsets","context_text",["gold_start"],["gold_end"]}
//
// Token offsets are [start_char, end_char) pairs counted in Unicode code
// points of `context_text`.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mlqacal {

enum class ModelKind { extractive, generative };
enum class Split { train, validation, test };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Split split);
std::optional<ModelKind> parse_model_kind(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

/// One answer candidate. Only the score fields of the owning record's
/// model kind are meaningful; the others stay zero.
struct CandidateAnswer {
  std::string text;
  double start_logit = 0.0;
  double end_logit = 0.0;
  double log_prob = 0.0;

  static CandidateAnswer extractive(std::string text, double start_logit, double end_logit) {
    return {std::move(text), start_logit, end_logit, 0.0};
  }
  static CandidateAnswer generative(std::string text, double log_prob) {
    return {std::move(text), 0.0, 0.0, log_prob};
  }

  bool operator==(const CandidateAnswer&) const = default;
};

struct PredictionRecord {
  std::string qid;
  std::string language;
  std::string dataset;
  Split split = Split::test;
  ModelKind model_kind = ModelKind::extractive;
  std::vector<std::string> gold_answers;
  std::vector<CandidateAnswer> candidates;
  std::optional<std::string> parallel_id;
  std::optional<std::vector<double>> embedding;

  bool operator==(const PredictionRecord&) const = default;
};

struct TokenOffset {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  bool operator==(const TokenOffset&) const = default;
};

struct SpanLogitRecord {
  std::string qid;
  std::string language;
  std::vector<double> start_logits;
  std::vector<double> end_logits;
  std::vector<bool> context_mask;
  std::vector<TokenOffset> token_offsets;
  std::string context_text;
  std::optional<std::size_t> gold_start;
  std::optional<std::size_t> gold_end;

  std::size_t size() const noexcept { return start_logits.size(); }
  bool operator==(const SpanLogitRecord&) const = default;
};

struct ParseOptions {
  std::optional<ModelKind> expected_kind;
  /// Maximum candidates per record (K_max).
  std::size_t max_candidates = 20;
  bool allow_empty_text = false;
};

struct ParseWarning {
  std::size_t line = 0;
  std::string message;
};

template <typename Record>
struct ParsedLog {
  std::vector<Record> records;
  std::vector<ParseWarning> warnings;
};

/// Reads a prediction log. Throws SchemaError (with line and field),
/// KindError or EmptyInputError.
ParsedLog<PredictionRecord> parse_log(std::istream& in, const ParseOptions& options = {});
ParsedLog<PredictionRecord> parse_log_file(const std::string& path, const ParseOptions& options = {});

ParsedLog<SpanLogitRecord> parse_span_log(std::istream& in);
ParsedLog<SpanLogitRecord> parse_span_log_file(const std::string& path);

/// Single-line JSON encoding, without the trailing newline.
std::string serialize(const PredictionRecord& record);
std::string serialize(const SpanLogitRecord& record);

void write_log(std::ostream& out, const std::vector<PredictionRecord>& records);
void write_span_log(std::ostream& out, const std::vector<SpanLogitRecord>& records);

/// Groups records by language; keys iterate in sorted code order and each
/// group keeps file order.
std::map<std::string, std::vector<PredictionRecord>> partition_by_language(
    const std::vector<PredictionRecord>& records);

/// Language codes with a known display name (the 18 evaluation languages).
bool is_known_language(std::string_view code);

}  // namespace mlqacal
