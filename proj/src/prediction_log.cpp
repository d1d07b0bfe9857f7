#include "mlqacal/prediction_log.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "json_support.hpp"
#include "mlqacal/errors.hpp"
#include "mlqacal/text_utils.hpp"

namespace mlqacal {

using detail::FieldReader;
using detail::json;

namespace {

constexpr std::array<std::string_view, 18> kKnownLanguages = {
    "en", "ar", "de", "el", "es", "hi", "ro", "ru", "th",
    "tr", "vi", "zh", "ko", "fi", "sw", "id", "bn", "te"};

std::string read_language(const FieldReader& fields, std::vector<ParseWarning>& warnings) {
  std::string code = fields.string("language");
  if (code.size() != 2 || !std::all_of(code.begin(), code.end(), [](unsigned char c) { return std::isalpha(c); })) {
    fields.fail("language", "expected a two-letter language code, got \"" + code + "\"");
  }
  std::transform(code.begin(), code.end(), code.begin(), [](unsigned char c) { return std::tolower(c); });
  if (!is_known_language(code)) {
    warnings.push_back({fields.line(), "unknown language code \"" + code + "\""});
  }
  return code;
}

std::vector<double> read_finite_vector(const FieldReader& fields, std::string_view key) {
  const json& arr = fields.array(key);
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(fields.number_value(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

CandidateAnswer read_candidate(const json& value, std::size_t line, std::size_t index, ModelKind kind,
                               const ParseOptions& options, std::vector<ParseWarning>& warnings) {
  FieldReader fields(value, line, "candidates[" + std::to_string(index) + "].");
  CandidateAnswer c;
  c.text = fields.string("text");
  if (kind == ModelKind::extractive) {
    fields.require_known_keys({"text", "start_logit", "end_logit"});
    c.start_logit = fields.number("start_logit");
    c.end_logit = fields.number("end_logit");
  } else {
    fields.require_known_keys({"text", "log_prob"});
    c.log_prob = fields.number("log_prob");
    if (c.log_prob > 0.0) {
      warnings.push_back({line, "candidates[" + std::to_string(index) + "].log_prob is positive (" +
                                    std::to_string(c.log_prob) + "); accepted"});
    }
  }
  if (c.text.empty() && !options.allow_empty_text) fields.fail("text", "empty candidate text");
  return c;
}

PredictionRecord read_prediction(const json& object, std::size_t line, const ParseOptions& options,
                                 std::vector<ParseWarning>& warnings) {
  FieldReader fields(object, line);
  fields.require_known_keys({"qid", "language", "dataset", "split", "model_kind", "gold_answers", "candidates",
                             "parallel_id", "embedding"});
  PredictionRecord r;
  r.qid = fields.string("qid");
  r.language = read_language(fields, warnings);
  r.dataset = fields.string("dataset");

  const std::string split = fields.string("split");
  const auto parsed_split = parse_split(split);
  if (!parsed_split) fields.fail("split", "expected train, validation or test, got \"" + split + "\"");
  r.split = *parsed_split;

  const std::string kind = fields.string("model_kind");
  const auto parsed_kind = parse_model_kind(kind);
  if (!parsed_kind) fields.fail("model_kind", "expected extractive or generative, got \"" + kind + "\"");
  r.model_kind = *parsed_kind;
  if (options.expected_kind && *options.expected_kind != r.model_kind) {
    throw KindError("line " + std::to_string(line) + ": expected model_kind " +
                    std::string(to_string(*options.expected_kind)) + ", got " + kind);
  }

  const json& golds = fields.array("gold_answers");
  if (golds.empty()) fields.fail("gold_answers", "must not be empty");
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (!golds[i].is_string()) fields.fail("gold_answers[" + std::to_string(i) + "]", "expected a string");
    r.gold_answers.push_back(golds[i].get<std::string>());
  }

  const json& cands = fields.array("candidates");
  if (cands.empty()) fields.fail("candidates", "must not be empty");
  if (cands.size() > options.max_candidates) {
    fields.fail("candidates", std::to_string(cands.size()) + " candidates exceed the limit of " +
                                  std::to_string(options.max_candidates));
  }
  for (std::size_t i = 0; i < cands.size(); ++i) {
    r.candidates.push_back(read_candidate(cands[i], line, i, r.model_kind, options, warnings));
  }

  r.parallel_id = fields.optional_string("parallel_id");
  if (fields.has("embedding")) {
    auto vec = read_finite_vector(fields, "embedding");
    if (vec.empty()) fields.fail("embedding", "must not be empty");
    r.embedding = std::move(vec);
  }
  return r;
}

SpanLogitRecord read_span_record(const json& object, std::size_t line, std::vector<ParseWarning>& warnings) {
  FieldReader fields(object, line);
  fields.require_known_keys({"qid", "language", "start_logits", "end_logits", "context_mask", "token_offsets",
                             "context_text", "gold_start", "gold_end"});
  SpanLogitRecord r;
  r.qid = fields.string("qid");
  r.language = read_language(fields, warnings);
  r.start_logits = read_finite_vector(fields, "start_logits");
  r.end_logits = read_finite_vector(fields, "end_logits");
  r.context_text = fields.string("context_text");

  const std::size_t n = r.start_logits.size();
  if (n == 0) fields.fail("start_logits", "must not be empty");
  if (r.end_logits.size() != n) fields.fail("end_logits", "length differs from start_logits");

  const json& mask = fields.array("context_mask");
  if (mask.size() != n) fields.fail("context_mask", "length differs from start_logits");
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i].is_boolean()) fields.fail("context_mask[" + std::to_string(i) + "]", "expected a boolean");
    r.context_mask.push_back(mask[i].get<bool>());
  }

  const json& offsets = fields.array("token_offsets");
  if (offsets.size() != n) fields.fail("token_offsets", "length differs from start_logits");
  const std::size_t text_length = utf8_length(r.context_text);
  std::optional<TokenOffset> previous;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string key = "token_offsets[" + std::to_string(i) + "]";
    const json& pair = offsets[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer() ||
        pair[0].get<long long>() < 0 || pair[1].get<long long>() < 0) {
      fields.fail(key, "expected a [start_char, end_char] pair of non-negative integers");
    }
    TokenOffset off{pair[0].get<std::size_t>(), pair[1].get<std::size_t>()};
    if (off.start_char > off.end_char || off.end_char > text_length) {
      fields.fail(key, "offset lies outside context_text");
    }
    // Only context tokens index into context_text; special and question
    // tokens carry placeholder offsets.
    if (r.context_mask[i]) {
      if (previous && (off.start_char < previous->start_char || off.end_char < previous->end_char)) {
        fields.fail(key, "context offsets must be non-decreasing");
      }
      previous = off;
    }
    r.token_offsets.push_back(off);
  }

  r.gold_start = fields.optional_index("gold_start");
  r.gold_end = fields.optional_index("gold_end");
  if (r.gold_start.has_value() != r.gold_end.has_value()) {
    fields.fail(r.gold_start ? "gold_end" : "gold_start", "gold_start and gold_end must be given together");
  }
  if (r.gold_start) {
    if (*r.gold_start > *r.gold_end || *r.gold_end >= n) fields.fail("gold_end", "gold indices out of range");
    if (!r.context_mask[*r.gold_start] || !r.context_mask[*r.gold_end]) {
      fields.fail("gold_start", "gold indices must fall on context tokens");
    }
  }
  return r;
}

template <typename Record, typename ReadFn>
ParsedLog<Record> read_lines(std::istream& in, ReadFn&& read) {
  ParsedLog<Record> log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    const json object = detail::parse_line(line, line_no);
    log.records.push_back(read(object, line_no, log.warnings));
  }
  if (log.records.empty()) throw EmptyInputError("input contains no records");
  return log;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kind == ModelKind::extractive ? "extractive" : "generative"; }

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::validation:
      return "validation";
    case Split::test:
      return "test";
  }
  return "test";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  if (s == "extractive") return ModelKind::extractive;
  if (s == "generative") return ModelKind::generative;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "validation") return Split::validation;
  if (s == "test") return Split::test;
  return std::nullopt;
}

bool is_known_language(std::string_view code) {
  return std::find(kKnownLanguages.begin(), kKnownLanguages.end(), code) != kKnownLanguages.end();
}

ParsedLog<PredictionRecord> parse_log(std::istream& in, const ParseOptions& options) {
  std::optional<std::size_t> embedding_dim;
  return read_lines<PredictionRecord>(in, [&](const json& object, std::size_t line, auto& warnings) {
    PredictionRecord r = read_prediction(object, line, options, warnings);
    if (r.embedding) {
      if (!embedding_dim) embedding_dim = r.embedding->size();
      if (*embedding_dim != r.embedding->size()) {
        throw SchemaError(line, "embedding",
                          "dimension " + std::to_string(r.embedding->size()) + " differs from the file's " +
                              std::to_string(*embedding_dim));
      }
    }
    return r;
  });
}

ParsedLog<PredictionRecord> parse_log_file(const std::string& path, const ParseOptions& options) {
  auto in = open_input(path);
  return parse_log(in, options);
}

ParsedLog<SpanLogitRecord> parse_span_log(std::istream& in) {
  return read_lines<SpanLogitRecord>(in, [](const json& object, std::size_t line, auto& warnings) {
    return read_span_record(object, line, warnings);
  });
}

ParsedLog<SpanLogitRecord> parse_span_log_file(const std::string& path) {
  auto in = open_input(path);
  return parse_span_log(in);
}

std::string serialize(const PredictionRecord& r) {
  nlohmann::ordered_json j;
  j["qid"] = r.qid;
  j["language"] = r.language;
  j["dataset"] = r.dataset;
  j["split"] = to_string(r.split);
  j["model_kind"] = to_string(r.model_kind);
  j["gold_answers"] = r.gold_answers;
  auto cands = nlohmann::ordered_json::array();
  for (const auto& c : r.candidates) {
    nlohmann::ordered_json cj;
    cj["text"] = c.text;
    if (r.model_kind == ModelKind::extractive) {
      cj["start_logit"] = c.start_logit;
      cj["end_logit"] = c.end_logit;
    } else {
      cj["log_prob"] = c.log_prob;
    }
    cands.push_back(std::move(cj));
  }
  j["candidates"] = std::move(cands);
  if (r.parallel_id) j["parallel_id"] = *r.parallel_id;
  if (r.embedding) j["embedding"] = *r.embedding;
  return j.dump();
}

std::string serialize(const SpanLogitRecord& r) {
  nlohmann::ordered_json j;
  j["qid"] = r.qid;
  j["language"] = r.language;
  j["start_logits"] = r.start_logits;
  j["end_logits"] = r.end_logits;
  auto mask = nlohmann::ordered_json::array();
  for (bool b : r.context_mask) mask.push_back(b);
  j["context_mask"] = std::move(mask);
  auto offsets = nlohmann::ordered_json::array();
  for (const auto& o : r.token_offsets) offsets.push_back({o.start_char, o.end_char});
  j["token_offsets"] = std::move(offsets);
  j["context_text"] = r.context_text;
  if (r.gold_start) j["gold_start"] = *r.gold_start;
  if (r.gold_end) j["gold_end"] = *r.gold_end;
  return j.dump();
}

void write_log(std::ostream& out, const std::vector<PredictionRecord>& records) {
  for (const auto& r : records) out << serialize(r) << '\n';
}

void write_span_log(std::ostream& out, const std::vector<SpanLogitRecord>& records) {
  for (const auto& r : records) out << serialize(r) << '\n';
}

std::map<std::string, std::vector<PredictionRecord>> partition_by_language(
    const std::vector<PredictionRecord>& records) {
  std::map<std::string, std::vector<PredictionRecord>> groups;
  for (const auto& r : records) groups[r.language].push_back(r);
  return groups;
}

}  // namespace mlqacal
