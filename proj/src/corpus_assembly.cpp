#include "mlqacal/corpus_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "json_support.hpp"
#include "mlqacal/errors.hpp"
#include "mlqacal/seeded_random.hpp"

namespace mlqacal {

namespace {

constexpr std::string_view kInstruction =
    "Extract the minimal span word from the \n"
    "following context that best\n"
    "answers the question.  \n";

std::string pair_name(std::string_view id, std::string_view language) {
  return "(" + std::string(id) + ", " + std::string(language) + ")";
}

void append_block(std::string& out, std::string_view question, std::string_view context) {
  out += "### Question:\n";
  out += question;
  out += "\n### Context:\n";
  out += context;
  out += "\n### Answer:\n";
}

std::vector<std::string> shuffled_english_ids(const ParallelCorpus& corpus, const MixConfig& cfg,
                                              std::size_t needed) {
  std::vector<std::string> ids = corpus.ids("en");
  if (ids.size() < needed) {
    throw ManifestError("need " + std::to_string(needed) + " English examples, corpus has " +
                        std::to_string(ids.size()));
  }
  SeededRng rng(cfg.seed);
  rng.shuffle(ids);
  ids.resize(needed);
  return ids;
}

void require_entry(const ParallelCorpus& corpus, const std::string& id, const std::string& language) {
  if (!corpus.contains(id, language)) throw ManifestError("missing translation " + pair_name(id, language));
}

}  // namespace

ParallelCorpus::ParallelCorpus(std::vector<ParallelCorpusEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!index_.emplace(std::make_pair(e.example_id, e.language), i).second) {
      throw InputError("duplicate corpus entry " + pair_name(e.example_id, e.language));
    }
  }
}

const ParallelCorpusEntry* ParallelCorpus::find(std::string_view example_id, std::string_view language) const {
  auto it = index_.find(std::make_pair(std::string(example_id), std::string(language)));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> ParallelCorpus::ids(std::string_view language) const {
  std::vector<std::string> out;
  for (const auto& [key, i] : index_) {
    if (key.second == language) out.push_back(key.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParallelCorpus parse_corpus(std::istream& in) {
  std::vector<ParallelCorpusEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    const auto object = detail::parse_line(line, line_no);
    detail::FieldReader fields(object, line_no);
    fields.require_known_keys({"example_id", "language", "question", "context", "answer"});
    entries.push_back({fields.string("example_id"), fields.string("language"), fields.string("question"),
                       fields.string("context"), fields.string("answer")});
  }
  if (entries.empty()) throw EmptyInputError("corpus contains no entries");
  return ParallelCorpus(std::move(entries));
}

ParallelCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_corpus(in);
}

std::optional<MixMode> parse_mix_mode(std::string_view s) {
  if (s == "en") return MixMode::en;
  if (s == "en_tr" || s == "en-tr") return MixMode::en_tr;
  if (s == "en_large" || s == "en-large") return MixMode::en_large;
  if (s == "mixed") return MixMode::mixed;
  if (s == "fewshot") return MixMode::fewshot;
  return std::nullopt;
}

void MixConfig::validate() const {
  if (languages.empty() || languages.front() != "en") {
    throw ConfigError("language list must be non-empty and start with en");
  }
  for (std::size_t i = 0; i < languages.size(); ++i) {
    for (std::size_t j = i + 1; j < languages.size(); ++j) {
      if (languages[i] == languages[j]) throw ConfigError("language " + languages[i] + " listed twice");
    }
  }
  if (subset_size < 1 && mode != MixMode::fewshot) throw ConfigError("subset size must be at least 1");
}

std::vector<ManifestEntry> build_mix_manifest(const ParallelCorpus& corpus, const MixConfig& cfg) {
  cfg.validate();
  if (cfg.mode == MixMode::fewshot) return build_fewshot_manifest(corpus, cfg);

  const std::size_t n = cfg.subset_size;
  const std::size_t L = cfg.languages.size();
  std::vector<ManifestEntry> out;

  switch (cfg.mode) {
    case MixMode::en:
      for (auto& id : shuffled_english_ids(corpus, cfg, n)) out.push_back({std::move(id), "en"});
      break;
    case MixMode::en_tr: {
      const auto ids = shuffled_english_ids(corpus, cfg, n);
      for (const auto& language : cfg.languages) {
        for (const auto& id : ids) {
          require_entry(corpus, id, language);
          out.push_back({id, language});
        }
      }
      break;
    }
    case MixMode::en_large:
      for (auto& id : shuffled_english_ids(corpus, cfg, n * L)) out.push_back({std::move(id), "en"});
      break;
    case MixMode::mixed: {
      const auto ids = shuffled_english_ids(corpus, cfg, n * L);
      for (std::size_t block = 0; block < L; ++block) {
        for (std::size_t i = block; i < ids.size(); i += L) {
          require_entry(corpus, ids[i], cfg.languages[block]);
          out.push_back({ids[i], cfg.languages[block]});
        }
      }
      break;
    }
    case MixMode::fewshot:
      break;
  }
  return out;
}

std::vector<ManifestEntry> build_fewshot_manifest(const ParallelCorpus& corpus, const MixConfig& cfg) {
  cfg.validate();
  std::vector<ManifestEntry> out;
  for (auto& id : corpus.ids("en")) out.push_back({std::move(id), "en"});
  SeededRng rng(cfg.seed);
  for (std::size_t l = 1; l < cfg.languages.size(); ++l) {
    const auto& language = cfg.languages[l];
    const auto pool = corpus.ids(language);
    if (pool.size() < cfg.fewshot_per_lang) {
      throw ManifestError("language " + language + " has " + std::to_string(pool.size()) + " entries, " +
                          std::to_string(cfg.fewshot_per_lang) + " requested");
    }
    std::vector<std::string> picked;
    for (std::size_t i : rng.sample_indices(pool.size(), cfg.fewshot_per_lang)) picked.push_back(pool[i]);
    std::sort(picked.begin(), picked.end());
    for (auto& id : picked) out.push_back({std::move(id), language});
  }
  return out;
}

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& manifest) {
  for (const auto& e : manifest) {
    nlohmann::ordered_json j;
    j["example_id"] = e.example_id;
    j["language"] = e.language;
    out << j.dump() << '\n';
  }
}

std::optional<IclStrategy> parse_icl_strategy(std::string_view s) {
  if (s == "random") return IclStrategy::random;
  if (s == "adaptive") return IclStrategy::adaptive;
  return std::nullopt;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("embedding dimensions differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw InputError("cosine similarity of a zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::size_t> select_icl_examples(std::span<const double> query,
                                             std::span<const std::vector<double>> pool, std::size_t k,
                                             IclStrategy strategy, std::uint64_t seed) {
  if (pool.size() < k) {
    throw DomainError("pool has " + std::to_string(pool.size()) + " items, " + std::to_string(k) + " requested");
  }
  if (strategy == IclStrategy::random) {
    SeededRng rng(seed);
    return rng.sample_indices(pool.size(), k);
  }

  std::vector<double> sims;
  sims.reserve(pool.size());
  for (const auto& item : pool) sims.push_back(cosine_similarity(query, item));
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return sims[a] != sims[b] ? sims[a] > sims[b] : a < b; });
  order.resize(k);
  return order;
}

std::string render_prompt(std::string_view question, std::string_view context, std::span<const PromptShot> shots) {
  std::string out(kInstruction);
  for (const auto& shot : shots) {
    append_block(out, shot.question, shot.context);
    out += shot.answer;
    out += '\n';
  }
  append_block(out, question, context);
  return out;
}

std::string serialize(const PromptManifestEntry& entry) {
  nlohmann::ordered_json j;
  j["qid"] = entry.qid;
  j["rendered_prompt"] = entry.rendered_prompt;
  j["shot_qids"] = entry.shot_qids;
  return j.dump();
}

}  // namespace mlqacal
