#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mlqacal {

struct ParallelCorpusEntry {
  std::string example_id;
  std::string language;
  std::string question;
  std::string context;
  std::string answer;

  bool operator==(const ParallelCorpusEntry&) const = default;
};

/// Translated QA examples keyed by (example_id, language).
class ParallelCorpus {
 public:
  ParallelCorpus() = default;
  /// Throws InputError on a duplicate (example_id, language) pair.
  explicit ParallelCorpus(std::vector<ParallelCorpusEntry> entries);

  const std::vector<ParallelCorpusEntry>& entries() const noexcept { return entries_; }
  const ParallelCorpusEntry* find(std::string_view example_id, std::string_view language) const;
  bool contains(std::string_view example_id, std::string_view language) const {
    return find(example_id, language) != nullptr;
  }
  /// Example ids available in `language`, sorted.
  std::vector<std::string> ids(std::string_view language) const;

 private:
  std::vector<ParallelCorpusEntry> entries_;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> index_;
};

/// JSON lines with fields {"example_id","language","question","context","answer"}.
ParallelCorpus parse_corpus(std::istream& in);
ParallelCorpus load_corpus(const std::string& path);

enum class MixMode { en, en_tr, en_large, mixed, fewshot };
std::optional<MixMode> parse_mix_mode(std::string_view s);

struct MixConfig {
  MixMode mode = MixMode::en;
  /// Size of the English subset.
  std::size_t subset_size = 9929;
  /// English first.
  std::vector<std::string> languages = {"en", "ar", "de", "es", "hi", "vi"};
  std::size_t fewshot_per_lang = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ManifestEntry {
  std::string example_id;
  std::string language;
  bool operator==(const ManifestEntry&) const = default;
};

/// Training manifest for one augmentation configuration. English ids are
/// sorted and shuffled with the seed; every mode draws a prefix of that
/// order.
///   en       first n ids, English
///   en_tr    first n ids, in every listed language
///   en_large first n*L ids, English
///   mixed    first n*L ids, id i assigned to languages[i % L], emitted in
///            language blocks
///   fewshot  delegates to build_fewshot_manifest
/// Throws ManifestError on shortfalls, naming the missing (id, language).
std::vector<ManifestEntry> build_mix_manifest(const ParallelCorpus& corpus, const MixConfig& cfg);

/// All English entries plus a seeded sample of fewshot_per_lang entries for
/// each listed non-English language.
std::vector<ManifestEntry> build_fewshot_manifest(const ParallelCorpus& corpus, const MixConfig& cfg);

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& manifest);

enum class IclStrategy { random, adaptive };
std::optional<IclStrategy> parse_icl_strategy(std::string_view s);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Indices of k pool items used as in-context shots. adaptive: the k most
/// cosine-similar items to the query, ties to the smaller index. random:
/// seeded uniform draw without replacement, in draw order.
std::vector<std::size_t> select_icl_examples(std::span<const double> query,
                                             std::span<const std::vector<double>> pool, std::size_t k,
                                             IclStrategy strategy, std::uint64_t seed = 0);

struct PromptShot {
  std::string question;
  std::string context;
  std::string answer;
};

/// Instruction, then each shot as a filled question/context/answer block,
/// then the query block ending at "### Answer:\n".
std::string render_prompt(std::string_view question, std::string_view context, std::span<const PromptShot> shots);

struct PromptManifestEntry {
  std::string qid;
  std::string rendered_prompt;
  std::vector<std::string> shot_qids;
};

/// One JSON object per line: {"qid","rendered_prompt","shot_qids"}.
std::string serialize(const PromptManifestEntry& entry);

}  // namespace mlqacal
