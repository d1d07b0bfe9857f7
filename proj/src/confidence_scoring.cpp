#include "mlqacal/confidence_scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_support.hpp"
#include "mlqacal/errors.hpp"

namespace mlqacal {

namespace {

void require_candidates(std::span<const CandidateAnswer> candidates) {
  if (candidates.empty()) throw DomainError("cannot score an empty candidate list");
}

void require_positive(double tau, const char* name) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError(std::string(name) + " must be a positive finite temperature");
  }
}

std::size_t first_argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

TemperatureParams TemperatureParams::single(double tau) {
  TemperatureParams p;
  p.kind = Kind::single;
  p.tau = tau;
  return p;
}

TemperatureParams TemperatureParams::dual(double tau_start, double tau_end) {
  TemperatureParams p;
  p.kind = Kind::dual;
  p.tau_start = tau_start;
  p.tau_end = tau_end;
  return p;
}

std::string to_json(const TemperatureParams& p) {
  nlohmann::ordered_json j;
  j["kind"] = p.kind == TemperatureParams::Kind::single ? "single" : "dual";
  j["tau"] = p.tau;
  j["tau_start"] = p.tau_start;
  j["tau_end"] = p.tau_end;
  j["fit_nll_before"] = p.fit_nll_before;
  j["fit_nll_after"] = p.fit_nll_after;
  j["hit_bound"] = p.hit_bound;
  return j.dump(2);
}

TemperatureParams temperature_params_from_json(const std::string& text) {
  const detail::json j = detail::parse_line(text, 0);
  detail::FieldReader fields(j, 0);
  fields.require_known_keys({"kind", "tau", "tau_start", "tau_end", "fit_nll_before", "fit_nll_after", "hit_bound"});
  TemperatureParams p;
  const std::string kind = fields.string("kind");
  if (kind == "single") {
    p.kind = TemperatureParams::Kind::single;
    p.tau = fields.number("tau");
    if (fields.has("tau_start")) p.tau_start = fields.number("tau_start");
    if (fields.has("tau_end")) p.tau_end = fields.number("tau_end");
  } else if (kind == "dual") {
    p.kind = TemperatureParams::Kind::dual;
    p.tau_start = fields.number("tau_start");
    p.tau_end = fields.number("tau_end");
    if (fields.has("tau")) p.tau = fields.number("tau");
  } else {
    fields.fail("kind", "expected single or dual, got \"" + kind + "\"");
  }
  for (double tau : {p.tau, p.tau_start, p.tau_end}) {
    if (!(tau > 0.0)) throw SchemaError(0, "tau", "temperatures must be positive");
  }
  if (fields.has("fit_nll_before")) p.fit_nll_before = fields.number("fit_nll_before");
  if (fields.has("fit_nll_after")) p.fit_nll_after = fields.number("fit_nll_after");
  if (fields.has("hit_bound")) {
    if (!fields.at("hit_bound").is_boolean()) fields.fail("hit_bound", "expected a boolean");
    p.hit_bound = fields.at("hit_bound").get<bool>();
  }
  return p;
}

TemperatureParams load_temperature_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open temperature file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::replace(text.begin(), text.end(), '\n', ' ');
  return temperature_params_from_json(text);
}

void save_temperature_params(const std::string& path, const TemperatureParams& params) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << to_json(params) << '\n';
}

double log_sum_exp(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - m);
  return m + std::log(sum);
}

std::vector<double> stable_softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> extractive_confidences(std::span<const CandidateAnswer> candidates,
                                           const std::optional<TemperatureParams>& temps) {
  require_candidates(candidates);
  double tau_start = 1.0;
  double tau_end = 1.0;
  if (temps) {
    if (temps->kind != TemperatureParams::Kind::dual) {
      throw KindError("extractive confidences need dual (start/end) temperatures");
    }
    require_positive(temps->tau_start, "tau_start");
    require_positive(temps->tau_end, "tau_end");
    tau_start = temps->tau_start;
    tau_end = temps->tau_end;
  }
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(c.start_logit / tau_start + c.end_logit / tau_end);
  return stable_softmax(scores);
}

std::vector<double> generative_log_confidences(std::span<const CandidateAnswer> candidates) {
  require_candidates(candidates);
  std::vector<double> lp;
  lp.reserve(candidates.size());
  for (const auto& c : candidates) lp.push_back(c.log_prob);
  const double norm = log_sum_exp(lp);
  for (double& v : lp) v -= norm;
  return lp;
}

std::vector<double> generative_confidences(std::span<const CandidateAnswer> candidates,
                                           const std::optional<TemperatureParams>& temp) {
  require_candidates(candidates);
  if (!temp) {
    std::vector<double> lp;
    lp.reserve(candidates.size());
    for (const auto& c : candidates) lp.push_back(c.log_prob);
    return stable_softmax(lp);
  }
  if (temp->kind != TemperatureParams::Kind::single) {
    throw KindError("generative confidences need a single temperature");
  }
  require_positive(temp->tau, "tau");
  std::vector<double> logits = generative_log_confidences(candidates);
  for (double& z : logits) z /= temp->tau;
  return stable_softmax(logits);
}

ScoredPrediction score_record(const PredictionRecord& rec, const std::optional<TemperatureParams>& temps,
                              const AnswerMatcher& matcher, const ScoringOptions& options) {
  auto confidences = [&](const std::optional<TemperatureParams>& t) {
    return rec.model_kind == ModelKind::extractive ? extractive_confidences(rec.candidates, t)
                                                   : generative_confidences(rec.candidates, t);
  };
  const std::vector<double> untempered = confidences(std::nullopt);
  std::vector<double> tempered = temps ? confidences(temps) : untempered;

  const std::size_t answer = first_argmax(options.rerank_with_temperature ? tempered : untempered);

  ScoredPrediction out;
  out.qid = rec.qid;
  out.language = rec.language;
  out.answer_index = answer;
  out.answer_text = rec.candidates[answer].text;
  out.confidence = tempered[answer];
  out.correct = matcher(out.answer_text, rec.gold_answers, rec.language);
  out.candidate_confidences = std::move(tempered);
  out.parallel_id = rec.parallel_id;
  return out;
}

std::vector<ScoredPrediction> score_records(std::span<const PredictionRecord> records,
                                            const std::optional<TemperatureParams>& temps,
                                            const AnswerMatcher& matcher, const ScoringOptions& options) {
  std::vector<ScoredPrediction> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(score_record(r, temps, matcher, options));
  return out;
}

}  // namespace mlqacal
