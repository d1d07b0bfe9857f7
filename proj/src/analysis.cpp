#include "mlqacal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "mlqacal/errors.hpp"
#include "mlqacal/text_utils.hpp"

namespace mlqacal {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size() || !std::isfinite(v)) {
    throw SchemaError(line, column, "expected a finite number, got \"" + cell + "\"");
  }
  return v;
}

}  // namespace

FeatureTable parse_feature_table(std::istream& in) {
  FeatureTable table;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split(line, ',');
    for (auto& c : cells) c = trim(c);
    if (table.columns.empty()) {
      const std::vector<std::string> required = {"language", "syntactic", "genetic", "pretrain_size"};
      if (cells.size() < required.size() || !std::equal(required.begin(), required.end(), cells.begin())) {
        throw SchemaError(line_no, "header", "expected language,syntactic,genetic,pretrain_size[,...]");
      }
      table.columns.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != table.columns.size() + 1) {
      throw SchemaError(line_no, "", "expected " + std::to_string(table.columns.size() + 1) + " columns");
    }
    LanguageFeatureRow row;
    row.language = lower(cells[0]);
    if (!seen.insert(row.language).second) throw SchemaError(line_no, "language", "duplicate language " + cells[0]);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      row.features[table.columns[i]] = parse_number(cells[i + 1], line_no, table.columns[i]);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw EmptyInputError("feature table has no header");
  return table;
}

FeatureTable load_feature_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_feature_table(in);
}

LanguageMetricsRow macro_average(std::span<const LanguageMetricsRow> rows, std::string label) {
  if (rows.empty()) throw DomainError("cannot average zero rows");
  LanguageMetricsRow out;
  out.language = std::move(label);
  for (const auto& r : rows) {
    out.n += r.n;
    out.em_rate += r.em_rate;
    out.ece += r.ece;
  }
  out.em_rate /= static_cast<double>(rows.size());
  out.ece /= static_cast<double>(rows.size());
  return out;
}

LanguageTable per_language_table(std::span<const ScoredPrediction> scored, const BinningConfig& cfg) {
  if (scored.empty()) throw DomainError("no predictions to tabulate");
  std::map<std::string, std::vector<ScoredPrediction>> groups;
  for (const auto& p : scored) groups[p.language].push_back(p);

  LanguageTable table;
  std::vector<LanguageMetricsRow> non_english;
  for (const auto& [language, preds] : groups) {
    LanguageMetricsRow row;
    row.language = language;
    row.n = preds.size();
    const auto correct = std::count_if(preds.begin(), preds.end(), [](const auto& p) { return p.correct; });
    row.em_rate = static_cast<double>(correct) / static_cast<double>(preds.size());
    row.ece = compute_ece(preds, cfg);
    table.rows.push_back(row);
    if (language != "en") non_english.push_back(row);
  }
  table.macro_all = macro_average(table.rows, "avg");
  if (!non_english.empty()) table.macro_non_english = macro_average(non_english, "avg-non-en");
  return table;
}

double relative_increase(double base, double value) {
  if (base == 0.0) throw DomainError("relative increase over a zero base");
  return (value - base) / base;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("pearson needs vectors of equal length");
  if (x.size() < 2) throw ConfigError("pearson needs at least two points");
  // Welford-style running means and co-moments.
  double mean_x = 0.0;
  double mean_y = 0.0;
  double m2x = 0.0;
  double m2y = 0.0;
  double cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    mean_x += dx / k;
    mean_y += dy / k;
    m2x += dx * (x[i] - mean_x);
    m2y += dy * (y[i] - mean_y);
    cxy += dx * (y[i] - mean_y);
  }
  if (!(m2x > 0.0) || !(m2y > 0.0)) throw UndefinedCorrelationError("correlation undefined: zero variance");
  const double r = cxy / (std::sqrt(m2x) * std::sqrt(m2y));
  return std::clamp(r, -1.0, 1.0);
}

CorrelationReport correlate_ece_with_features(std::span<const LanguageMetricsRow> metrics,
                                              const FeatureTable& features) {
  std::map<std::string, const LanguageFeatureRow*> by_language;
  for (const auto& row : features.rows) by_language[row.language] = &row;

  CorrelationReport report;
  std::vector<std::pair<const LanguageMetricsRow*, const LanguageFeatureRow*>> joined;
  std::set<std::string> metric_languages;
  for (const auto& m : metrics) {
    metric_languages.insert(m.language);
    auto it = by_language.find(m.language);
    if (it == by_language.end()) {
      report.unmatched.push_back(m.language);
    } else {
      joined.emplace_back(&m, it->second);
    }
  }
  for (const auto& row : features.rows) {
    if (!metric_languages.contains(row.language)) report.unmatched.push_back(row.language);
  }
  std::sort(report.unmatched.begin(), report.unmatched.end());
  if (joined.size() < 2) {
    throw DomainError("only " + std::to_string(joined.size()) + " language(s) shared between metrics and features");
  }

  std::vector<double> ece;
  for (const auto& [m, f] : joined) ece.push_back(m->ece);
  for (const auto& column : features.columns) {
    std::vector<double> values;
    for (const auto& [m, f] : joined) values.push_back(f->features.at(column));
    report.correlations.push_back({column, pearson(ece, values), joined.size()});
  }
  return report;
}

std::vector<ParallelCorrelation> parallel_confidence_correlation(std::span<const ScoredPrediction> scored,
                                                                 const std::string& source) {
  std::map<std::string, double> source_conf;
  std::map<std::string, std::vector<const ScoredPrediction*>> targets;
  for (const auto& p : scored) {
    if (!p.parallel_id) continue;
    if (p.language == source) {
      source_conf.emplace(*p.parallel_id, p.confidence);
    } else {
      targets[p.language].push_back(&p);
    }
  }

  std::vector<ParallelCorrelation> out;
  for (const auto& [language, preds] : targets) {
    std::vector<double> x;
    std::vector<double> y;
    std::set<std::string> used;
    for (const auto* p : preds) {
      auto it = source_conf.find(*p->parallel_id);
      if (it == source_conf.end() || !used.insert(*p->parallel_id).second) continue;
      x.push_back(it->second);
      y.push_back(p->confidence);
    }
    ParallelCorrelation row{language, x.size(), std::nullopt};
    if (x.size() >= 2) {
      try {
        row.r = pearson(x, y);
      } catch (const UndefinedCorrelationError&) {
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace mlqacal
