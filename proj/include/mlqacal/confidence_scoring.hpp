#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlqacal/prediction_log.hpp"
#include "mlqacal/qa_metrics.hpp"

namespace mlqacal {

/// Fitted temperatures. `single` carries `tau` (generative models); `dual`
/// carries separate start/end temperatures (extractive models).
struct TemperatureParams {
  enum class Kind { single, dual };
  Kind kind = Kind::single;
  double tau = 1.0;
  double tau_start = 1.0;
  double tau_end = 1.0;
  double fit_nll_before = 0.0;
  double fit_nll_after = 0.0;
  bool hit_bound = false;

  static TemperatureParams single(double tau);
  static TemperatureParams dual(double tau_start, double tau_end);

  bool operator==(const TemperatureParams&) const = default;
};

/// JSON document `{"kind","tau","tau_start","tau_end","fit_nll_before",
/// "fit_nll_after","hit_bound"}`.
std::string to_json(const TemperatureParams& params);
TemperatureParams temperature_params_from_json(const std::string& text);
TemperatureParams load_temperature_params(const std::string& path);
void save_temperature_params(const std::string& path, const TemperatureParams& params);

struct ScoredPrediction {
  std::string qid;
  std::string language;
  std::string answer_text;
  std::size_t answer_index = 0;
  double confidence = 0.0;
  bool correct = false;
  std::vector<double> candidate_confidences;
  std::optional<std::string> parallel_id;
};

/// Softmax with max subtraction.
std::vector<double> stable_softmax(std::span<const double> logits);
/// log(sum(exp(x))) with max subtraction.
double log_sum_exp(std::span<const double> logits);

/// softmax(start/tau_start + end/tau_end) over the candidates. `temps` must be
/// absent (both temperatures 1) or of kind dual.
std::vector<double> extractive_confidences(std::span<const CandidateAnswer> candidates,
                                           const std::optional<TemperatureParams>& temps = std::nullopt);

/// Normalized sequence probabilities p_i = exp(lp_i) / sum_j exp(lp_j); with
/// a single temperature T the result is softmax(log p / T).
std::vector<double> generative_confidences(std::span<const CandidateAnswer> candidates,
                                           const std::optional<TemperatureParams>& temp = std::nullopt);

/// log p over the candidates, the logits generative temperature scaling acts on.
std::vector<double> generative_log_confidences(std::span<const CandidateAnswer> candidates);

struct ScoringOptions {
  /// Pick the answer from the tempered scores instead of the untempered
  /// ones. Off: temperatures change confidence only.
  bool rerank_with_temperature = false;
};

/// Chooses the answer (first candidate of maximal untempered confidence) and
/// reports its tempered confidence and correctness.
ScoredPrediction score_record(const PredictionRecord& rec, const std::optional<TemperatureParams>& temps,
                              const AnswerMatcher& matcher = {}, const ScoringOptions& options = {});

std::vector<ScoredPrediction> score_records(std::span<const PredictionRecord> records,
                                            const std::optional<TemperatureParams>& temps,
                                            const AnswerMatcher& matcher = {}, const ScoringOptions& options = {});

}  // namespace mlqacal
