#include "mlqacal/calibrators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mlqacal/errors.hpp"

namespace mlqacal {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

struct GridPoint {
  double tau;
  double value;
};

double evaluate(const Objective& objective, double tau) {
  const double v = objective(tau);
  if (!std::isfinite(v)) {
    throw FitError("objective is not finite at tau = " + std::to_string(tau));
  }
  return v;
}

std::vector<double> log_grid(const FitConfig& cfg) {
  const double lo = std::log(cfg.tau_min);
  const double hi = std::log(cfg.tau_max);
  std::vector<double> grid;
  grid.reserve(cfg.grid_size + 1);
  for (std::size_t i = 0; i < cfg.grid_size; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.grid_size - 1);
    grid.push_back(std::exp(t));
  }
  grid.front() = cfg.tau_min;
  grid.back() = cfg.tau_max;
  auto near_one = std::find_if(grid.begin(), grid.end(), [](double t) { return std::abs(std::log(t)) < 1e-12; });
  if (near_one != grid.end()) {
    *near_one = 1.0;
  } else {
    grid.insert(std::upper_bound(grid.begin(), grid.end(), 1.0), 1.0);
  }
  return grid;
}

/// -log softmax(logits / tau)[gold]; log1p form when gold is the maximum.
double categorical_nll(std::span<const double> logits, std::size_t gold, double tau) {
  double m = logits[0] / tau;
  for (double z : logits) m = std::max(m, z / tau);
  const double g = logits[gold] / tau;
  double rest = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (i != gold) rest += std::exp(logits[i] / tau - m);
  }
  if (g == m) return std::log1p(rest);
  return (m - g) + std::log(std::exp(g - m) + rest);
}

double position_nll(const SpanLogitRecord& rec, Position which, double tau) {
  return which == Position::start ? categorical_nll(rec.start_logits, *rec.gold_start, tau)
                                  : categorical_nll(rec.end_logits, *rec.gold_end, tau);
}

}  // namespace

void FitConfig::validate() const {
  if (!(tau_min > 0.0 && tau_min < 1.0 && tau_max > 1.0 && std::isfinite(tau_max))) {
    throw ConfigError("temperature bounds must satisfy 0 < tau_min < 1 < tau_max");
  }
  if (grid_size < 3) throw ConfigError("temperature grid needs at least 3 points");
  if (!(log_tolerance > 0.0)) throw ConfigError("refinement tolerance must be positive");
}

double nll_position(std::span<const SpanLogitRecord> records, Position which, double tau) {
  if (records.empty()) throw DomainError("no records to evaluate");
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  double total = 0.0;
  for (const auto& rec : records) {
    if (!rec.gold_start || !rec.gold_end) throw InputError("record " + rec.qid + " has no gold indices");
    total += position_nll(rec, which, tau);
  }
  return total / static_cast<double>(records.size());
}

TemperatureParams fit_single_temperature(const Objective& objective, const FitConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = log_grid(cfg);

  std::vector<GridPoint> scan;
  scan.reserve(grid.size());
  for (double tau : grid) scan.push_back({tau, evaluate(objective, tau)});

  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    const bool lower = scan[i].value < scan[best].value;
    const bool tie_closer =
        scan[i].value == scan[best].value && std::abs(std::log(scan[i].tau)) < std::abs(std::log(scan[best].tau));
    if (lower || tie_closer) best = i;
  }
  const double at_one = scan[static_cast<std::size_t>(
                                std::find(grid.begin(), grid.end(), 1.0) - grid.begin())]
                            .value;

  // Golden-section search in log(tau) over the neighbours of the best point.
  double a = std::log(scan[best == 0 ? 0 : best - 1].tau);
  double b = std::log(scan[std::min(best + 1, scan.size() - 1)].tau);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = evaluate(objective, std::exp(c));
  double fd = evaluate(objective, std::exp(d));
  while (b - a > cfg.log_tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = evaluate(objective, std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = evaluate(objective, std::exp(d));
    }
  }
  const double refined_tau = std::exp(0.5 * (a + b));
  const double refined_value = evaluate(objective, refined_tau);

  GridPoint chosen = scan[best];
  if (refined_value < chosen.value) chosen = {refined_tau, refined_value};

  // Snap to a bound when the refinement converged onto it.
  const std::array<GridPoint, 2> bounds = {scan.front(), scan.back()};
  for (const auto& bound : bounds) {
    if (std::abs(std::log(chosen.tau) - std::log(bound.tau)) <= 2.0 * cfg.log_tolerance &&
        bound.value <= chosen.value) {
      chosen = bound;
    }
  }

  TemperatureParams p = TemperatureParams::single(chosen.tau);
  p.fit_nll_before = at_one;
  p.fit_nll_after = chosen.value;
  p.hit_bound = chosen.tau == cfg.tau_min || chosen.tau == cfg.tau_max;
  return p;
}

TemperatureParams fit_dual_temperature(std::span<const SpanLogitRecord> records, const FitConfig& cfg) {
  if (records.empty()) throw FitError("no records to fit temperatures on");
  for (const auto& rec : records) {
    if (!rec.gold_start || !rec.gold_end) throw InputError("record " + rec.qid + " has no gold indices");
  }
  const TemperatureParams start =
      fit_single_temperature([&](double tau) { return nll_position(records, Position::start, tau); }, cfg);
  const TemperatureParams end =
      fit_single_temperature([&](double tau) { return nll_position(records, Position::end, tau); }, cfg);

  TemperatureParams p = TemperatureParams::dual(start.tau, end.tau);
  p.fit_nll_before = start.fit_nll_before + end.fit_nll_before;
  p.fit_nll_after = start.fit_nll_after + end.fit_nll_after;
  p.hit_bound = start.hit_bound || end.hit_bound;
  return p;
}

GenerativeFit fit_generative_temperature(std::span<const PredictionRecord> records, const AnswerMatcher& matcher,
                                         const FitConfig& cfg) {
  struct Example {
    std::vector<double> logits;
    std::size_t gold;
  };
  std::vector<Example> examples;
  GenerativeFit fit;
  for (const auto& rec : records) {
    if (rec.model_kind != ModelKind::generative) {
      throw KindError("record " + rec.qid + " is not generative");
    }
    std::optional<std::size_t> gold;
    for (std::size_t i = 0; i < rec.candidates.size() && !gold; ++i) {
      if (matcher(rec.candidates[i].text, rec.gold_answers, rec.language)) gold = i;
    }
    if (!gold) {
      ++fit.excluded_count;
      continue;
    }
    examples.push_back({generative_log_confidences(rec.candidates), *gold});
  }
  fit.used_count = examples.size();
  if (examples.empty()) {
    throw FitError("no record has a candidate matching its gold answers (" + std::to_string(fit.excluded_count) +
                   " excluded)");
  }
  fit.params = fit_single_temperature(
      [&](double tau) {
        double total = 0.0;
        for (const auto& ex : examples) total += categorical_nll(ex.logits, ex.gold, tau);
        return total / static_cast<double>(examples.size());
      },
      cfg);
  return fit;
}

std::vector<double> smooth_targets(std::size_t classes, std::size_t gold, double alpha) {
  if (classes == 0) throw ConfigError("class count must be positive");
  if (gold >= classes) {
    throw ConfigError("gold index " + std::to_string(gold) + " out of range for " + std::to_string(classes) +
                      " classes");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("smoothing alpha must lie in [0, 1]");
  const double off = alpha / static_cast<double>(classes);
  std::vector<double> target(classes, off);
  target[gold] = (1.0 - alpha) + off;
  return target;
}

PositionTargets smooth_position_targets(const SpanLogitRecord& record, const SmoothingConfig& cfg) {
  if (!record.gold_start || !record.gold_end) throw InputError("record " + record.qid + " has no gold indices");
  std::vector<std::size_t> context;
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (record.context_mask[i]) context.push_back(i);
  }
  auto spread = [&](std::size_t gold, double alpha) {
    const auto pos = static_cast<std::size_t>(std::find(context.begin(), context.end(), gold) - context.begin());
    if (pos == context.size()) throw InputError("record " + record.qid + ": gold index is not a context token");
    const std::vector<double> compact = smooth_targets(context.size(), pos, alpha);
    std::vector<double> full(record.size(), 0.0);
    for (std::size_t i = 0; i < context.size(); ++i) full[context[i]] = compact[i];
    return full;
  };
  return {spread(*record.gold_start, cfg.alpha_start), spread(*record.gold_end, cfg.alpha_end)};
}

}  // namespace mlqacal
