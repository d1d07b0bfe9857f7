#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mlqacal/corpus_assembly.hpp"
#include "mlqacal/errors.hpp"
#include "oracles.hpp"

using namespace mlqacal;

namespace {

const std::vector<std::string> kSix = {"en", "ar", "de", "es", "hi", "vi"};

ParallelCorpus make_corpus(std::size_t ids, const std::vector<std::string>& languages) {
  std::vector<ParallelCorpusEntry> entries;
  for (const auto& lang : languages) {
    for (std::size_t i = 0; i < ids; ++i) {
      const std::string id = "ex" + std::to_string(i);
      entries.push_back({id, lang, "q " + id + " " + lang, "c " + id, "a" + std::to_string(i)});
    }
  }
  return ParallelCorpus(std::move(entries));
}

MixConfig config(MixMode mode, std::size_t n, std::vector<std::string> languages, std::uint64_t seed = 42) {
  MixConfig cfg;
  cfg.mode = mode;
  cfg.subset_size = n;
  cfg.languages = std::move(languages);
  cfg.seed = seed;
  return cfg;
}

std::size_t count_language(const std::vector<ManifestEntry>& m, const std::string& lang) {
  return static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [&](const auto& e) { return e.language == lang; }));
}

}  // namespace

TEST_CASE("corpus index") {
  const auto corpus = make_corpus(3, {"en", "de"});
  CHECK(corpus.contains("ex1", "de"));
  CHECK_FALSE(corpus.contains("ex1", "fr"));
  CHECK(corpus.find("ex2", "en")->answer == "a2");
  CHECK(corpus.ids("de") == std::vector<std::string>{"ex0", "ex1", "ex2"});
  CHECK_THROWS_AS(ParallelCorpus({{"x", "en", "", "", ""}, {"x", "en", "", "", ""}}), InputError);

  std::istringstream in(R"({"example_id":"a","language":"en","question":"q","context":"c","answer":"x"})");
  CHECK(parse_corpus(in).entries().size() == 1);
  std::istringstream bad(R"({"example_id":"a","language":"en"})");
  CHECK_THROWS_AS(parse_corpus(bad), SchemaError);
}

TEST_CASE("mix modes on nine ids, three languages, n = 3") {
  const std::vector<std::string> langs = {"en", "de", "es"};
  const auto corpus = make_corpus(9, langs);

  SUBCASE("en") {
    const auto m = build_mix_manifest(corpus, config(MixMode::en, 3, langs));
    CHECK(m.size() == 3);
    CHECK(count_language(m, "en") == 3);
  }
  SUBCASE("en_tr: the same ids in every language") {
    const auto m = build_mix_manifest(corpus, config(MixMode::en_tr, 3, langs));
    REQUIRE(m.size() == 9);
    for (const auto& lang : langs) CHECK(count_language(m, lang) == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(m[i].example_id == m[3 + i].example_id);
      CHECK(m[i].example_id == m[6 + i].example_id);
    }
  }
  SUBCASE("en_large") {
    const auto m = build_mix_manifest(corpus, config(MixMode::en_large, 3, langs));
    CHECK(m.size() == 9);
    CHECK(count_language(m, "en") == 9);
  }
  SUBCASE("mixed: nine distinct ids, three per language") {
    const auto m = build_mix_manifest(corpus, config(MixMode::mixed, 3, langs));
    REQUIRE(m.size() == 9);
    std::set<std::string> ids;
    for (const auto& e : m) ids.insert(e.example_id);
    CHECK(ids.size() == 9);
    for (const auto& lang : langs) CHECK(count_language(m, lang) == 3);
  }
  SUBCASE("the English subset is a prefix of the large one") {
    const auto small = build_mix_manifest(corpus, config(MixMode::en, 3, langs));
    const auto large = build_mix_manifest(corpus, config(MixMode::en_large, 3, langs));
    CHECK(std::equal(small.begin(), small.end(), large.begin()));
  }
}

TEST_CASE("mixed with one language equals en_large") {
  const auto corpus = make_corpus(12, {"en", "de"});
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    CHECK(build_mix_manifest(corpus, config(MixMode::mixed, 7, {"en"}, seed)) ==
          build_mix_manifest(corpus, config(MixMode::en_large, 7, {"en"}, seed)));
  }
}

TEST_CASE("missing translations and shortfalls") {
  std::vector<ParallelCorpusEntry> entries;
  for (int i = 0; i < 4; ++i) entries.push_back({"id" + std::to_string(i), "en", "q", "c", "a"});
  for (int i = 0; i < 3; ++i) entries.push_back({"id" + std::to_string(i), "de", "q", "c", "a"});
  const ParallelCorpus corpus(entries);
  try {
    build_mix_manifest(corpus, config(MixMode::en_tr, 4, {"en", "de"}));
    FAIL("expected a manifest error");
  } catch (const ManifestError& e) {
    CHECK(std::string(e.what()).find("(id3, de)") != std::string::npos);
  }
  CHECK_THROWS_AS(build_mix_manifest(corpus, config(MixMode::en, 5, {"en"})), ManifestError);
  CHECK_THROWS_AS(build_mix_manifest(corpus, config(MixMode::en_large, 3, {"en", "de"})), ManifestError);
  CHECK_THROWS_AS(build_mix_manifest(corpus, config(MixMode::en, 2, {"de", "en"})), ConfigError);
}

TEST_CASE("fewshot manifest") {
  const auto corpus = make_corpus(20, kSix);
  auto cfg = config(MixMode::fewshot, 0, kSix);
  cfg.fewshot_per_lang = 9;
  const auto m = build_mix_manifest(corpus, cfg);
  CHECK(m.size() == 20 + 5 * 9);
  CHECK(count_language(m, "en") == 20);
  for (std::size_t l = 1; l < kSix.size(); ++l) CHECK(count_language(m, kSix[l]) == 9);

  const auto small = make_corpus(9, kSix);
  CHECK(build_fewshot_manifest(small, cfg).size() == 54);
  cfg.fewshot_per_lang = 10;
  CHECK_THROWS_AS(build_fewshot_manifest(small, cfg), ManifestError);
}

TEST_CASE("manifests are deterministic in the seed") {
  const auto corpus = make_corpus(50, kSix);
  for (MixMode mode : {MixMode::en, MixMode::en_tr, MixMode::en_large, MixMode::mixed, MixMode::fewshot}) {
    auto cfg = config(mode, 5, kSix, 7);
    cfg.fewshot_per_lang = 10;
    const auto a = build_mix_manifest(corpus, cfg);
    CHECK(a == build_mix_manifest(corpus, cfg));
    cfg.seed = 8;
    CHECK(a != build_mix_manifest(corpus, cfg));
  }

  std::ostringstream out;
  write_manifest(out, {{"ex1", "de"}});
  CHECK(out.str() == "{\"example_id\":\"ex1\",\"language\":\"de\"}\n");
}

TEST_CASE("adaptive in-context selection") {
  const std::vector<double> query = {1.0, 0.0};
  const std::vector<std::vector<double>> pool = {{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}};
  CHECK(select_icl_examples(query, pool, 2, IclStrategy::adaptive) == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(select_icl_examples(query, pool, 4, IclStrategy::adaptive), DomainError);
  const std::vector<std::vector<double>> zero = {{0.0, 0.0}};
  CHECK_THROWS_AS(select_icl_examples(query, zero, 1, IclStrategy::adaptive), InputError);
  const std::vector<std::vector<double>> wide = {{1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(select_icl_examples(query, wide, 1, IclStrategy::adaptive), InputError);
}

TEST_CASE("adaptive selection matches a stable argsort and ignores scale") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> small(-1, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + trial % 6;
    const bool ties = trial % 3 == 0;
    auto draw = [&] {
      std::vector<double> v(dim);
      do {
        for (double& x : v) x = ties ? small(rng) : g(rng);
      } while (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));
      return v;
    };
    const auto query = draw();
    std::vector<std::vector<double>> pool;
    for (int i = 0; i < 30; ++i) pool.push_back(draw());
    const std::size_t k = 1 + trial % 10;
    const auto got = select_icl_examples(query, pool, k, IclStrategy::adaptive);
    CHECK(got == oracle::cosine_argsort(query, pool, k));

    if (!ties && dim > 1) {
      auto scaled = query;
      for (double& x : scaled) x *= 3.5;
      CHECK(select_icl_examples(scaled, pool, k, IclStrategy::adaptive) == got);
    }
  }
}

TEST_CASE("random in-context selection") {
  const std::vector<std::vector<double>> pool(20, std::vector<double>{1.0});
  const std::vector<double> query = {1.0};
  const auto a = select_icl_examples(query, pool, 5, IclStrategy::random, 3);
  CHECK(a == select_icl_examples(query, pool, 5, IclStrategy::random, 3));
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 5);
  for (std::size_t i : a) CHECK(i < 20);
}

TEST_CASE("prompt rendering") {
  const std::string zero = render_prompt("Who won?", "Denver won.", {});
  CHECK(zero ==
        "Extract the minimal span word from the \nfollowing context that best\nanswers the question.  \n"
        "### Question:\nWho won?\n### Context:\nDenver won.\n### Answer:\n");

  const std::vector<PromptShot> shots = {{"Q1", "C1", "A1"}, {"Q2", "C2", "A2"}};
  const std::string two = render_prompt("Q", "C", shots);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = two.find(needle); pos != std::string::npos; pos = two.find(needle, pos + 1)) ++n;
    return n;
  };
  CHECK(count("### Question:\n") == 3);
  CHECK(count("### Answer:\n") == 3);
  CHECK(two.find("### Answer:\nA1\n### Question:\nQ2") != std::string::npos);
  CHECK(two.substr(two.size() - 12) == "### Answer:\n");

  const std::string line = serialize(PromptManifestEntry{"q9", "p", {"s1", "s2"}});
  CHECK(line == R"({"qid":"q9","rendered_prompt":"p","shot_qids":["s1","s2"]})");
}
