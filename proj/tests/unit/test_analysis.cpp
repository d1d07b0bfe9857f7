#include <random>
#include <sstream>

#include "doctest.h"
#include "mlqacal/analysis.hpp"
#include "mlqacal/errors.hpp"
#include "oracles.hpp"

using namespace mlqacal;
using doctest::Approx;

namespace {

// Per-language EM and ECE (percent) of an English-finetuned extractive model on XQuAD.
const std::vector<std::tuple<std::string, double, double>> kXquad = {
    {"en", 67.52, 7.32},  {"ar", 37.06, 21.19}, {"de", 51.84, 14.55}, {"el", 39.18, 18.65},
    {"es", 51.08, 14.00}, {"hi", 38.23, 21.31}, {"ro", 52.71, 14.36}, {"ru", 42.17, 19.72},
    {"th", 35.81, 20.72}, {"tr", 39.73, 19.18}, {"vi", 44.16, 20.19}, {"zh", 53.05, 14.03}};

std::vector<LanguageMetricsRow> xquad_rows() {
  std::vector<LanguageMetricsRow> rows;
  for (const auto& [lang, em, ece] : kXquad) rows.push_back({lang, 100, em / 100.0, ece / 100.0});
  return rows;
}

ScoredPrediction scored(std::string lang, std::string pid, double conf, bool correct = true) {
  ScoredPrediction p;
  p.qid = pid + "-" + lang;
  p.language = std::move(lang);
  p.parallel_id = std::move(pid);
  p.confidence = conf;
  p.correct = correct;
  return p;
}

}  // namespace

TEST_CASE("pearson on small vectors") {
  const std::vector<double> x = {1, 2, 3};
  CHECK(pearson(x, std::vector<double>{2, 4, 6}) == Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, std::vector<double>{3, 2, 1}) == Approx(-1.0).epsilon(1e-12));
  CHECK(pearson(x, std::vector<double>{1, 3, 2}) == Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(pearson(x, std::vector<double>{5, 5, 5}), UndefinedCorrelationError);
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), ConfigError);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), ConfigError);
}

TEST_CASE("pearson properties on random data") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 50;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng) + 1000.0;
      y[i] = 0.5 * x[i] + g(rng);
    }
    const double r = pearson(x, y);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(std::abs(r - pearson(y, x)) <= 1e-12);
    CHECK(std::abs(r - oracle::naive_pearson(x, y)) <= 1e-10);

    const double a = scale(rng);
    const double b = g(rng) * 50.0;
    std::vector<double> ax(n);
    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      ax[i] = a * x[i] + b;
      neg[i] = -a * x[i] + b;
    }
    CHECK(std::abs(pearson(ax, y) - r) <= 1e-9);
    CHECK(std::abs(pearson(neg, y) + r) <= 1e-9);
  }
}

TEST_CASE("XQuAD table: non-English error, ECE and relative increase") {
  const auto rows = xquad_rows();
  std::vector<LanguageMetricsRow> non_en(rows.begin() + 1, rows.end());
  const auto avg = macro_average(non_en, "avg-non-en");
  CHECK(avg.n == 1100);
  CHECK(100.0 * (1.0 - avg.em_rate) == Approx(55.91).epsilon(0.0051 / 55.91));
  CHECK(100.0 * avg.ece == Approx(17.99).epsilon(0.0051 / 17.99));
  CHECK(100.0 * relative_increase(0.0732, avg.ece) == Approx(145.8).epsilon(0.051 / 145.8));
  CHECK_THROWS_AS(relative_increase(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(macro_average({}, "x"), DomainError);
}

TEST_CASE("per-language table") {
  std::vector<ScoredPrediction> preds = {scored("en", "a", 0.9, true), scored("en", "b", 0.9, false),
                                         scored("de", "a", 0.6, true), scored("de", "b", 0.6, true)};
  const auto table = per_language_table(preds);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].language == "de");
  CHECK(table.rows[0].em_rate == 1.0);
  CHECK(table.rows[0].ece == Approx(0.4));
  CHECK(table.rows[1].ece == Approx(0.4));
  CHECK(table.macro_all.language == "avg");
  CHECK(table.macro_all.em_rate == Approx(0.75));
  CHECK(table.macro_all.n == 4);
  REQUIRE(table.macro_non_english.has_value());
  CHECK(table.macro_non_english->em_rate == 1.0);

  const std::vector<ScoredPrediction> english_only = {preds[0]};
  CHECK_FALSE(per_language_table(english_only).macro_non_english.has_value());
  CHECK_THROWS_AS(per_language_table({}), DomainError);
}

TEST_CASE("feature table parsing") {
  std::istringstream in("language,syntactic,genetic,pretrain_size,geo\nEN,0,0,1.0,0\nde,0.4,0.3,0.5,0.2\n");
  const auto t = parse_feature_table(in);
  CHECK(t.columns == std::vector<std::string>{"syntactic", "genetic", "pretrain_size", "geo"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].language == "en");
  CHECK(t.rows[1].features.at("genetic") == 0.3);

  std::istringstream bad_header("lang,syntactic\nen,0\n");
  CHECK_THROWS_AS(parse_feature_table(bad_header), SchemaError);
  std::istringstream bad_cell("language,syntactic,genetic,pretrain_size\nen,0,x,1\n");
  CHECK_THROWS_AS(parse_feature_table(bad_cell), SchemaError);
  std::istringstream dup("language,syntactic,genetic,pretrain_size\nen,0,0,1\nen,0,0,1\n");
  CHECK_THROWS_AS(parse_feature_table(dup), SchemaError);
}

TEST_CASE("ECE correlates with linguistic features") {
  std::istringstream in(
      "language,syntactic,genetic,pretrain_size\n"
      "en,0.0,0.0,1.0\n"
      "de,0.4,0.3,0.6\n"
      "hi,0.6,0.7,0.2\n"
      "zh,0.8,1.0,0.4\n"
      "sw,0.7,0.9,0.05\n");
  const auto features = parse_feature_table(in);
  const std::vector<LanguageMetricsRow> metrics = {
      {"en", 10, 0.7, 0.07}, {"de", 10, 0.5, 0.15}, {"hi", 10, 0.4, 0.21}, {"zh", 10, 0.5, 0.19}, {"xx", 10, 0.1, 0.5}};
  const auto report = correlate_ece_with_features(metrics, features);
  REQUIRE(report.correlations.size() == 3);
  CHECK(report.unmatched == std::vector<std::string>{"sw", "xx"});

  const std::vector<double> ece = {0.07, 0.15, 0.21, 0.19};
  const std::vector<std::vector<double>> cols = {{0.0, 0.4, 0.6, 0.8}, {0.0, 0.3, 0.7, 1.0}, {1.0, 0.6, 0.2, 0.4}};
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(report.correlations[c].n == 4);
    CHECK(report.correlations[c].r == Approx(oracle::naive_pearson(ece, cols[c])).epsilon(1e-10));
  }
  CHECK(report.correlations[0].r > 0.5);
  CHECK(report.correlations[2].r < -0.5);

  const std::vector<LanguageMetricsRow> lonely = {{"en", 1, 0.5, 0.1}};
  CHECK_THROWS_AS(correlate_ece_with_features(lonely, features), DomainError);
}

TEST_CASE("confidence correlation across parallel questions") {
  SUBCASE("a copy of the source correlates perfectly") {
    std::vector<ScoredPrediction> preds;
    for (int i = 0; i < 5; ++i) {
      const double c = 0.1 + 0.15 * i;
      preds.push_back(scored("en", "p" + std::to_string(i), c));
      preds.push_back(scored("de", "p" + std::to_string(i), c));
      preds.push_back(scored("ar", "p" + std::to_string(i), 1.0 - c));
    }
    const auto rows = parallel_confidence_correlation(preds);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].language == "ar");
    CHECK(rows[0].shared == 5);
    CHECK(*rows[0].r == Approx(-1.0));
    CHECK(*rows[1].r == Approx(1.0));
  }
  SUBCASE("no shared ids leaves r undefined") {
    const std::vector<ScoredPrediction> preds = {scored("en", "a", 0.5), scored("en", "b", 0.7),
                                                 scored("de", "c", 0.5), scored("de", "d", 0.6)};
    const auto rows = parallel_confidence_correlation(preds);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].shared == 0);
    CHECK_FALSE(rows[0].r.has_value());
  }
  SUBCASE("constant target confidence leaves r undefined") {
    const std::vector<ScoredPrediction> preds = {scored("en", "a", 0.5), scored("en", "b", 0.7),
                                                 scored("de", "a", 0.4), scored("de", "b", 0.4)};
    const auto rows = parallel_confidence_correlation(preds);
    CHECK(rows[0].shared == 2);
    CHECK_FALSE(rows[0].r.has_value());
  }
}
