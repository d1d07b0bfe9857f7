#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mlqacal/confidence_scoring.hpp"
#include "mlqacal/errors.hpp"
#include "mlqacal/qa_metrics.hpp"
#include "oracles.hpp"

using namespace mlqacal;
using doctest::Approx;

namespace {

ScoredPrediction pred(double confidence, bool correct) {
  ScoredPrediction p;
  p.qid = "q";
  p.language = "en";
  p.confidence = confidence;
  p.correct = correct;
  return p;
}

std::vector<ScoredPrediction> block(double confidence, int n, int correct) {
  std::vector<ScoredPrediction> out;
  for (int i = 0; i < n; ++i) out.push_back(pred(confidence, i < correct));
  return out;
}

}  // namespace

TEST_CASE("answer normalization") {
  CHECK(normalize_answer("The Eiffel Tower!", "en") == "eiffel tower");
  CHECK(normalize_answer("  Denver\tBroncos ", "en") == "denver broncos");
  CHECK(normalize_answer("東京", "ja") == "東京");
  CHECK(normalize_answer("«Ελλάδα»", "el") == "ελλάδα");
  CHECK(normalize_answer("A dog.", "de", NormalizationConfig::mlqa()) == "a dog");
  CHECK(normalize_answer("Der Hund.", "de", NormalizationConfig::mlqa()) == "hund");
  CHECK(normalize_answer("Der Hund.", "de") == "der hund");
  CHECK(normalize_answer("", "en").empty());
  CHECK(normalize_answer("...", "en").empty());
}

TEST_CASE("exact and contains match") {
  const std::vector<std::string> golds = {"Denver Broncos", "Broncos"};
  CHECK(exact_match("the Denver Broncos.", golds, "en"));
  CHECK(exact_match("broncos", golds, "en"));
  CHECK_FALSE(exact_match("Denver", golds, "en"));
  CHECK_FALSE(exact_match("Denver Broncos team", golds, "en"));
  CHECK(contains_match("Denver Broncos team", golds, "en"));
  CHECK_FALSE(contains_match("Carolina", golds, "en"));

  AnswerMatcher lenient;
  lenient.mode = AnswerMatcher::Mode::contains;
  CHECK(lenient("the Broncos of Denver", golds, "en"));
  CHECK_FALSE(AnswerMatcher{}("the Broncos of Denver", golds, "en"));
}

TEST_CASE("bin_index uses upper-inclusive bins") {
  CHECK(bin_index(0.0, 10) == 1);
  CHECK(bin_index(0.05, 10) == 1);
  CHECK(bin_index(0.1, 10) == 1);
  CHECK(bin_index(0.55, 10) == 6);
  CHECK(bin_index(0.6, 10) == 6);
  CHECK(bin_index(0.95, 10) == 10);
  CHECK(bin_index(1.0, 10) == 10);
  CHECK(bin_index(0.3, 1) == 1);
}

TEST_CASE("ECE on hand-checkable cases") {
  SUBCASE("all at 0.9 with 60% accuracy") {
    CHECK(compute_ece(block(0.9, 10, 6)) == Approx(0.30).epsilon(1e-12));
  }
  SUBCASE("one confident hit, one mid-confidence miss") {
    const std::vector<ScoredPrediction> preds = {pred(0.95, true), pred(0.55, false)};
    CHECK(compute_ece(preds) == Approx(0.30).epsilon(1e-12));
  }
  SUBCASE("perfectly calibrated block") { CHECK(compute_ece(block(0.7, 100, 70)) == Approx(0.0).epsilon(1e-12)); }
  SUBCASE("two bins weighted by count") {
    auto preds = block(0.9, 10, 9);
    const auto low = block(0.3, 30, 0);
    preds.insert(preds.end(), low.begin(), low.end());
    CHECK(compute_ece(preds) == Approx(0.75 * 0.3).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(compute_ece({}), DomainError);
    CHECK_THROWS_AS(compute_ece(block(0.5, 3, 1), BinningConfig{0}), ConfigError);
  }
}

TEST_CASE("reliability table reports every bin") {
  auto preds = block(0.55, 4, 3);
  preds.push_back(pred(0.05, false));
  const auto table = reliability_bins(preds);
  REQUIRE(table.bins.size() == 10);
  CHECK(table.total_n == 5);
  CHECK(table.bins[0].count == 1);
  CHECK(table.bins[5].bin_index == 6);
  CHECK(table.bins[5].count == 4);
  CHECK(table.bins[5].mean_accuracy == Approx(0.75));
  CHECK(table.bins[5].mean_confidence == Approx(0.55));
  CHECK(table.bins[9].count == 0);
  CHECK(table.bins[9].mean_confidence == 0.0);

  std::ostringstream csv;
  write_reliability_csv(csv, table);
  const std::string text = csv.str();
  CHECK(text.rfind("bin,count,mean_confidence,mean_accuracy\n", 0) == 0);
  CHECK(text.find("6,4,0.550000,0.750000\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}

TEST_CASE("ECE matches the per-bin brute-force scan") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::bernoulli_distribution hit(0.6);
  std::uniform_int_distribution<int> grid(0, 20);
  for (std::size_t bins : {1u, 5u, 10u, 15u, 20u}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<ScoredPrediction> preds;
      for (int i = 0; i < 1000; ++i) {
        // Every other trial lands exactly on bin edges.
        const double c = trial % 2 ? grid(rng) / 20.0 : conf(rng);
        preds.push_back(pred(c, hit(rng)));
      }
      const double got = compute_ece(preds, {bins});
      CHECK(got == Approx(oracle::brute_force_ece(preds, bins)).epsilon(1e-12));
      CHECK(got >= 0.0);
      CHECK(got <= 1.0);

      std::shuffle(preds.begin(), preds.end(), rng);
      CHECK(compute_ece(preds, {bins}) == Approx(got).epsilon(1e-12));
    }
  }
}

TEST_CASE("ECE reconstructs from the table and tables merge") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::bernoulli_distribution hit(0.5);
  std::vector<ScoredPrediction> preds;
  for (int i = 0; i < 500; ++i) preds.push_back(pred(conf(rng), hit(rng)));

  const auto table = reliability_bins(preds, {15});
  double manual = 0.0;
  for (const auto& b : table.bins) {
    manual += static_cast<double>(b.count) / 500.0 * std::abs(b.mean_accuracy - b.mean_confidence);
  }
  CHECK(compute_ece(preds, {15}) == Approx(manual).epsilon(1e-12));

  const std::span<const ScoredPrediction> all(preds);
  const auto merged = merge_tables(reliability_bins(all.first(200), {15}), reliability_bins(all.subspan(200), {15}));
  CHECK(merged.total_n == 500);
  CHECK(ece_from_table(merged) == Approx(ece_from_table(table)).epsilon(1e-12));
  for (std::size_t i = 0; i < 15; ++i) CHECK(merged.bins[i].count == table.bins[i].count);

  CHECK_THROWS(merge_tables(reliability_bins(all, {10}), table));
}
