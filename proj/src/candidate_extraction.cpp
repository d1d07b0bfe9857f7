#include "mlqacal/candidate_extraction.hpp"

#include <algorithm>
#include <queue>

#include "mlqacal/errors.hpp"
#include "mlqacal/text_utils.hpp"

namespace mlqacal {

bool span_ranks_before(const Span& a, const Span& b) noexcept {
  if (a.z_ans != b.z_ans) return a.z_ans > b.z_ans;
  if (a.start_tok != b.start_tok) return a.start_tok < b.start_tok;
  return a.end_tok < b.end_tok;
}

std::string span_text(const SpanLogitRecord& rec, std::size_t start_tok, std::size_t end_tok) {
  return utf8_slice(rec.context_text, rec.token_offsets.at(start_tok).start_char,
                    rec.token_offsets.at(end_tok).end_char);
}

std::vector<Span> top_k_spans(const SpanLogitRecord& rec, const ExtractionConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("k must be at least 1");
  if (cfg.max_answer_length < 1) throw ConfigError("max_answer_length must be at least 1");

  // Max-heap on "worst first" holds the current best k.
  auto worse = [](const Span& a, const Span& b) { return span_ranks_before(a, b); };
  std::priority_queue<Span, std::vector<Span>, decltype(worse)> best(worse);

  const std::size_t n = rec.size();
  for (std::size_t end = 0; end < n; ++end) {
    if (!rec.context_mask[end]) continue;
    const std::size_t first = end + 1 >= cfg.max_answer_length ? end + 1 - cfg.max_answer_length : 0;
    for (std::size_t start = first; start <= end; ++start) {
      if (!rec.context_mask[start]) continue;
      Span s{start, end, rec.start_logits[start] + rec.end_logits[end], {}};
      if (best.size() < cfg.k) {
        best.push(std::move(s));
      } else if (span_ranks_before(s, best.top())) {
        best.pop();
        best.push(std::move(s));
      }
    }
  }
  if (best.empty()) throw ExtractionError("record " + rec.qid + " has no valid answer span");

  std::vector<Span> out;
  out.reserve(best.size());
  while (!best.empty()) {
    out.push_back(best.top());
    best.pop();
  }
  std::reverse(out.begin(), out.end());
  for (auto& s : out) s.text = span_text(rec, s.start_tok, s.end_tok);
  return out;
}

PredictionRecord extract_top_k_spans(const SpanLogitRecord& rec, const ExtractionConfig& cfg,
                                     const RecordMetadata& meta) {
  PredictionRecord out;
  out.qid = rec.qid;
  out.language = rec.language;
  out.dataset = meta.dataset;
  out.split = meta.split;
  out.model_kind = ModelKind::extractive;
  out.parallel_id = meta.parallel_id;
  if (!meta.gold_answers.empty()) {
    out.gold_answers = meta.gold_answers;
  } else if (rec.gold_start && rec.gold_end) {
    out.gold_answers.push_back(span_text(rec, *rec.gold_start, *rec.gold_end));
  } else {
    throw ExtractionError("record " + rec.qid + " has no gold span and no gold answers were supplied");
  }
  for (auto& s : top_k_spans(rec, cfg)) {
    out.candidates.push_back(
        CandidateAnswer::extractive(std::move(s.text), rec.start_logits[s.start_tok], rec.end_logits[s.end_tok]));
  }
  return out;
}

}  // namespace mlqacal
