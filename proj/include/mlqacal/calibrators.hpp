#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mlqacal/confidence_scoring.hpp"
#include "mlqacal/prediction_log.hpp"
#include "mlqacal/qa_metrics.hpp"

namespace mlqacal {

/// Search settings for the one-dimensional temperature fit.
struct FitConfig {
  double tau_min = 0.05;
  double tau_max = 50.0;
  /// Log-spaced coarse grid points (tau = 1 is always added).
  std::size_t grid_size = 50;
  /// Golden-section stopping width in log(tau).
  double log_tolerance = 1e-4;

  void validate() const;
};

struct SmoothingConfig {
  double alpha_start = 0.1;
  double alpha_end = 0.1;
};

enum class Position { start, end };

/// Mean over records of -log softmax(logits / tau)[gold] for the start or
/// end position vector. Throws InputError naming the qid of a record
/// without gold indices.
double nll_position(std::span<const SpanLogitRecord> records, Position which, double tau);

using Objective = std::function<double(double)>;

/// Minimizes a 1-D objective over tau in [tau_min, tau_max]: coarse
/// log-grid scan, then golden-section refinement around the best grid point.
/// Grid ties go to the smallest |log tau|. The result never scores worse than
/// tau = 1. Returns kind single.
TemperatureParams fit_single_temperature(const Objective& objective, const FitConfig& cfg = {});

/// Independent start and end temperature fits on position NLL.
TemperatureParams fit_dual_temperature(std::span<const SpanLogitRecord> records, const FitConfig& cfg = {});

struct GenerativeFit {
  TemperatureParams params;
  std::size_t used_count = 0;
  /// Records without any candidate matching a gold answer.
  std::size_t excluded_count = 0;
};

/// Fits T on softmax(log p / T) where the gold class is the first candidate
/// the matcher accepts.
GenerativeFit fit_generative_temperature(std::span<const PredictionRecord> records, const AnswerMatcher& matcher = {},
                                         const FitConfig& cfg = {});

/// Label-smoothed target: (1 - alpha) * one_hot(gold) + alpha / classes.
std::vector<double> smooth_targets(std::size_t classes, std::size_t gold, double alpha);

struct PositionTargets {
  std::vector<double> start;
  std::vector<double> end;
};

/// Smoothed start/end targets over a span-logit record. The smoothing mass is
/// spread over context tokens only; other positions get 0.
PositionTargets smooth_position_targets(const SpanLogitRecord& record, const SmoothingConfig& cfg = {});

}  // namespace mlqacal
