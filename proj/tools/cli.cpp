#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mlqacal/analysis.hpp"
#include "mlqacal/calibrators.hpp"
#include "mlqacal/candidate_extraction.hpp"
#include "mlqacal/confidence_scoring.hpp"
#include "mlqacal/corpus_assembly.hpp"
#include "mlqacal/errors.hpp"
#include "mlqacal/prediction_log.hpp"
#include "mlqacal/qa_metrics.hpp"
#include "mlqacal/text_utils.hpp"

namespace mlqacal::cli {

namespace {

/// Writes to --out when given, otherwise to the command's stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InputError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct Options {
  std::string input;
  std::string out;
  std::string temperature;
  std::string lang;
  std::size_t bins = 10;
  std::size_t k = 20;
  std::string format = "table";
  std::string matcher = "exact";
  std::string articles = "en";
  bool rerank = false;
  bool allow_empty_text = false;

  // reliability
  std::string svg;

  // fit-temperature
  std::string kind = "auto";
  double tau_min = 0.05;
  double tau_max = 50.0;
  std::size_t grid = 50;
  double tolerance = 1e-4;
  std::string smoothing_out;
  double alpha_start = 0.1;
  double alpha_end = 0.1;

  // extract-candidates
  std::size_t max_answer_length = 30;
  std::string dataset = "unknown";
  std::string split = "test";

  // assemble
  std::string corpus;
  std::string mode;
  std::size_t subset = 0;
  std::string languages = "en,ar,de,es,hi,vi";
  std::size_t fewshot_per_lang = 1000;
  std::optional<std::uint64_t> seed;

  // icl-select
  std::string pool;
  std::string queries;
  std::size_t shots = 2;
  std::string strategy = "adaptive";
  std::string prompts;
  bool mixed_language_pool = false;

  // correlate
  std::string features;
  std::string parallel_source;
};

AnswerMatcher make_matcher(const Options& o) {
  AnswerMatcher m;
  if (o.matcher == "exact") {
    m.mode = AnswerMatcher::Mode::exact;
  } else if (o.matcher == "contains") {
    m.mode = AnswerMatcher::Mode::contains;
  } else {
    throw ConfigError("unknown matcher " + o.matcher);
  }
  if (o.articles == "en") {
    m.normalization = NormalizationConfig::english_only();
  } else if (o.articles == "mlqa") {
    m.normalization = NormalizationConfig::mlqa();
  } else {
    throw ConfigError("unknown article set " + o.articles);
  }
  return m;
}

void print_warnings(const std::vector<ParseWarning>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: line " << w.line << ": " << w.message << '\n';
}

std::vector<PredictionRecord> load_predictions(const std::string& path, const Options& o, std::ostream& err) {
  ParseOptions po;
  po.max_candidates = o.k;
  po.allow_empty_text = o.allow_empty_text;
  auto log = parse_log_file(path, po);
  print_warnings(log.warnings, err);
  return std::move(log.records);
}

std::vector<PredictionRecord> filter_language(std::vector<PredictionRecord> records, const std::string& lang) {
  if (lang.empty()) return records;
  std::erase_if(records, [&](const PredictionRecord& r) { return r.language != lang; });
  if (records.empty()) throw DomainError("no records left after filtering to language " + lang);
  return records;
}

std::optional<TemperatureParams> load_temperature(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_temperature_params(path);
}

std::vector<ScoredPrediction> score(const Options& o, std::ostream& err) {
  const auto records = filter_language(load_predictions(o.input, o, err), o.lang);
  ScoringOptions so;
  so.rerank_with_temperature = o.rerank;
  return score_records(records, load_temperature(o.temperature), make_matcher(o), so);
}

BinningConfig binning(const Options& o) {
  if (o.bins < 1) throw ConfigError("--bins must be at least 1");
  return BinningConfig{o.bins};
}

bool is_span_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    return line.find("\"start_logits\"") != std::string::npos;
  }
  return false;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  if (is_span_log(o.input)) {
    auto log = parse_span_log_file(o.input);
    print_warnings(log.warnings, err);
    out << "ok: " << log.records.size() << " span-logit records, " << log.warnings.size() << " warnings\n";
  } else {
    const auto records = load_predictions(o.input, o, err);
    std::map<std::string, std::size_t> per_language;
    for (const auto& r : records) ++per_language[r.language];
    out << "ok: " << records.size() << " prediction records";
    for (const auto& [language, n] : per_language) out << ' ' << language << '=' << n;
    out << '\n';
  }
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto format = parse_report_format(o.format);
  if (!format) throw ConfigError("unknown format " + o.format);
  const auto scored = score(o, err);
  const auto table = per_language_table(scored, binning(o));
  Output sink(o.out, out);
  *sink << format_language_table(table, *format);
  return kOk;
}

int cmd_reliability(const Options& o, std::ostream& out, std::ostream& err) {
  const auto scored = score(o, err);
  const auto table = reliability_bins(scored, binning(o));
  const double ece = ece_from_table(table);
  {
    Output sink(o.out, out);
    write_reliability_csv(*sink, table);
  }
  if (!o.svg.empty()) {
    std::ofstream svg(o.svg, std::ios::binary);
    if (!svg) throw InputError("cannot write " + o.svg);
    svg << render_reliability_svg(table, ece);
  }
  err << "ECE " << format_fixed(ece * 100.0, 2) << '\n';
  return kOk;
}

FitConfig fit_config(const Options& o) {
  FitConfig cfg;
  cfg.tau_min = o.tau_min;
  cfg.tau_max = o.tau_max;
  cfg.grid_size = o.grid;
  cfg.log_tolerance = o.tolerance;
  cfg.validate();
  return cfg;
}

int cmd_fit_temperature(const Options& o, std::ostream& out, std::ostream& err) {
  const bool spans = o.kind == "auto" ? is_span_log(o.input) : o.kind == "extractive";
  if (o.kind != "auto" && o.kind != "extractive" && o.kind != "generative") {
    throw ConfigError("--kind must be auto, extractive or generative");
  }
  TemperatureParams params;
  if (spans) {
    auto log = parse_span_log_file(o.input);
    print_warnings(log.warnings, err);
    auto& records = log.records;
    if (!o.lang.empty()) {
      std::erase_if(records, [&](const SpanLogitRecord& r) { return r.language != o.lang; });
      if (records.empty()) throw DomainError("no records left after filtering to language " + o.lang);
    }
    params = fit_dual_temperature(records, fit_config(o));
    if (!o.smoothing_out.empty()) {
      std::ofstream sm(o.smoothing_out, std::ios::binary);
      if (!sm) throw InputError("cannot write " + o.smoothing_out);
      for (const auto& r : records) {
        const auto targets = smooth_position_targets(r, {o.alpha_start, o.alpha_end});
        nlohmann::ordered_json j;
        j["qid"] = r.qid;
        j["start_targets"] = targets.start;
        j["end_targets"] = targets.end;
        sm << j.dump() << '\n';
      }
    }
  } else {
    if (!o.smoothing_out.empty()) throw ConfigError("smoothing targets need a span-logit log");
    const auto records = filter_language(load_predictions(o.input, o, err), o.lang);
    const auto fit = fit_generative_temperature(records, make_matcher(o), fit_config(o));
    err << "fit on " << fit.used_count << " records, excluded " << fit.excluded_count
        << " without a gold-matching candidate\n";
    params = fit.params;
  }
  if (params.hit_bound) err << "warning: fitted temperature lies on the search bound\n";
  Output sink(o.out, out);
  *sink << to_json(params) << '\n';
  return kOk;
}

int cmd_extract_candidates(const Options& o, std::ostream& out, std::ostream& err) {
  auto log = parse_span_log_file(o.input);
  print_warnings(log.warnings, err);
  const auto split = parse_split(o.split);
  if (!split) throw ConfigError("unknown split " + o.split);
  ExtractionConfig cfg{o.k, o.max_answer_length};
  RecordMetadata meta;
  meta.dataset = o.dataset;
  meta.split = *split;
  Output sink(o.out, out);
  for (const auto& rec : log.records) {
    if (!o.lang.empty() && rec.language != o.lang) continue;
    *sink << serialize(extract_top_k_spans(rec, cfg, meta)) << '\n';
  }
  return kOk;
}

std::uint64_t require_seed(const Options& o, std::string_view command) {
  if (!o.seed) throw ConfigError(std::string(command) + " needs --seed");
  return *o.seed;
}

int cmd_assemble(const Options& o, std::ostream& out, std::ostream&) {
  MixConfig cfg;
  const auto mode = parse_mix_mode(o.mode);
  if (!mode) throw ConfigError("unknown mode " + o.mode);
  cfg.mode = *mode;
  cfg.subset_size = o.subset;
  cfg.languages = split(o.languages, ',');
  for (auto& l : cfg.languages) l = trim(l);
  cfg.fewshot_per_lang = o.fewshot_per_lang;
  cfg.seed = require_seed(o, "assemble");
  const auto corpus = load_corpus(o.corpus);
  const auto manifest = build_mix_manifest(corpus, cfg);
  Output sink(o.out, out);
  write_manifest(*sink, manifest);
  return kOk;
}

int cmd_icl_select(const Options& o, std::ostream& out, std::ostream& err) {
  const auto strategy = parse_icl_strategy(o.strategy);
  if (!strategy) throw ConfigError("unknown strategy " + o.strategy);
  const std::uint64_t seed = *strategy == IclStrategy::random ? require_seed(o, "icl-select (random)") : o.seed.value_or(0);

  Options lenient = o;
  lenient.allow_empty_text = true;
  const auto pool = load_predictions(o.pool, lenient, err);
  const auto queries = filter_language(load_predictions(o.queries, lenient, err), o.lang);
  std::optional<ParallelCorpus> corpus;
  if (!o.prompts.empty()) {
    if (o.corpus.empty()) throw ConfigError("--prompts needs --corpus for question and context text");
    corpus = load_corpus(o.corpus);
  }

  auto text_of = [&](const std::string& id, const std::string& language) -> const ParallelCorpusEntry& {
    const auto* e = corpus->find(id, language);
    if (!e) throw InputError("corpus has no entry (" + id + ", " + language + ")");
    return *e;
  };

  Output sink(o.out, out);
  std::unique_ptr<std::ofstream> prompts;
  if (corpus) {
    prompts = std::make_unique<std::ofstream>(o.prompts, std::ios::binary);
    if (!*prompts) throw InputError("cannot write " + o.prompts);
  }
  for (const auto& q : queries) {
    std::vector<std::size_t> candidates;
    std::vector<std::vector<double>> vectors;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!o.mixed_language_pool && pool[i].language != q.language) continue;
      if (*strategy == IclStrategy::adaptive && !pool[i].embedding) {
        throw InputError("pool record " + pool[i].qid + " has no embedding");
      }
      candidates.push_back(i);
      vectors.push_back(pool[i].embedding.value_or(std::vector<double>{}));
    }
    if (*strategy == IclStrategy::adaptive && !q.embedding) {
      throw InputError("query record " + q.qid + " has no embedding");
    }
    const std::vector<double> query = q.embedding.value_or(std::vector<double>{});
    const auto picked = select_icl_examples(query, vectors, o.shots, *strategy, seed);

    std::vector<std::string> indices;
    std::vector<std::string> qids;
    for (std::size_t j : picked) {
      indices.push_back(std::to_string(candidates[j]));
      qids.push_back(pool[candidates[j]].qid);
    }
    *sink << q.qid << '\t' << join(indices, ",") << '\t' << join(qids, ",") << '\n';

    if (prompts) {
      std::vector<PromptShot> shots;
      for (std::size_t j : picked) {
        const auto& p = pool[candidates[j]];
        const auto& e = text_of(p.qid, p.language);
        shots.push_back({e.question, e.context, e.answer});
      }
      const auto& qe = text_of(q.qid, q.language);
      *prompts << serialize(PromptManifestEntry{q.qid, render_prompt(qe.question, qe.context, shots), qids}) << '\n';
    }
  }
  return kOk;
}

int cmd_correlate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.features.empty() == o.parallel_source.empty()) {
    throw ConfigError("correlate needs exactly one of --features or --parallel-source");
  }
  const auto scored = score(o, err);
  Output sink(o.out, out);
  if (!o.features.empty()) {
    const auto table = per_language_table(scored, binning(o));
    const auto report = correlate_ece_with_features(table.rows, load_feature_table(o.features));
    if (!report.unmatched.empty()) err << "unmatched languages: " << join(report.unmatched, ",") << '\n';
    *sink << "feature,r,n\n";
    for (const auto& c : report.correlations) *sink << c.feature << ',' << format_fixed(c.r, 6) << ',' << c.n << '\n';
  } else {
    *sink << "language,r,n\n";
    for (const auto& row : parallel_confidence_correlation(scored, o.parallel_source)) {
      *sink << row.language << ',' << (row.r ? format_fixed(*row.r, 6) : std::string("NA")) << ',' << row.shared
            << '\n';
    }
  }
  return kOk;
}

void add_scoring_flags(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "Prediction log")->required()->check(CLI::ExistingFile);
  sub->add_option("--temperature", o.temperature, "TemperatureParams file")->check(CLI::ExistingFile);
  sub->add_option("--lang", o.lang, "Restrict to one language code");
  sub->add_option("--bins", o.bins, "Number of equal-width confidence bins")->capture_default_str();
  sub->add_option("--k", o.k, "Maximum candidates per record")->capture_default_str();
  sub->add_option("--matcher", o.matcher, "exact or contains")->capture_default_str();
  sub->add_option("--articles", o.articles, "Article lists: en or mlqa")->capture_default_str();
  sub->add_flag("--rerank", o.rerank, "Choose answers from tempered scores");
  sub->add_flag("--allow-empty-text", o.allow_empty_text, "Accept empty candidate texts");
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "table") return ReportFormat::table;
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown") return ReportFormat::markdown;
  return std::nullopt;
}

std::string format_language_table(const LanguageTable& table, ReportFormat format) {
  std::vector<LanguageMetricsRow> rows = table.rows;
  rows.push_back(table.macro_all);
  if (table.macro_non_english) rows.push_back(*table.macro_non_english);

  std::ostringstream os;
  switch (format) {
    case ReportFormat::csv:
      os << "language,n,em,ece\n";
      for (const auto& r : rows) {
        os << r.language << ',' << r.n << ',' << format_fixed(r.em_rate * 100.0, 2) << ','
           << format_fixed(r.ece * 100.0, 2) << '\n';
      }
      break;
    case ReportFormat::markdown:
      os << "| language | n | EM | ECE |\n|---|---:|---:|---:|\n";
      for (const auto& r : rows) {
        os << "| " << r.language << " | " << r.n << " | " << format_fixed(r.em_rate * 100.0, 2) << " | "
           << format_fixed(r.ece * 100.0, 2) << " |\n";
      }
      break;
    case ReportFormat::table:
      os << std::left << std::setw(12) << "language" << std::right << std::setw(8) << "n" << std::setw(9) << "EM"
         << std::setw(9) << "ECE" << '\n';
      for (const auto& r : rows) {
        os << std::left << std::setw(12) << r.language << std::right << std::setw(8) << r.n << std::setw(9)
           << format_fixed(r.em_rate * 100.0, 2) << std::setw(9) << format_fixed(r.ece * 100.0, 2) << '\n';
      }
      break;
  }
  return os.str();
}

std::string render_reliability_svg(const ReliabilityTable& table, double ece) {
  constexpr double kSize = 400.0;
  constexpr double kMargin = 50.0;
  auto x = [&](double v) { return format_fixed(kMargin + v * kSize, 2); };
  auto y = [&](double v) { return format_fixed(kMargin + (1.0 - v) * kSize, 2); };
  const double M = static_cast<double>(table.bins.size());

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n"
     << "  <title>Reliability diagram (ECE " << format_fixed(ece * 100.0, 2) << ")</title>\n"
     << "  <rect x=\"0\" y=\"0\" width=\"500\" height=\"500\" fill=\"white\"/>\n"
     << "  <text x=\"250\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">ECE "
     << format_fixed(ece * 100.0, 2) << "</text>\n"
     << "  <g class=\"bars\">\n";
  for (const auto& bin : table.bins) {
    const double lo = static_cast<double>(bin.bin_index - 1) / M;
    const double height = bin.count > 0 ? bin.mean_accuracy : 0.0;
    os << "    <rect class=\"bar\" data-bin=\"" << bin.bin_index << "\" data-count=\"" << bin.count << "\" x=\""
       << x(lo) << "\" y=\"" << y(height) << "\" width=\"" << format_fixed(kSize / M, 2) << "\" height=\""
       << format_fixed(height * kSize, 2) << "\" fill=\"steelblue\" stroke=\"black\"/>\n";
  }
  os << "  </g>\n"
     << "  <line class=\"diagonal\" x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(1) << "\" y2=\"" << y(1)
     << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n"
     << "  <line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(1) << "\" y2=\"" << y(0)
     << "\" stroke=\"black\"/>\n"
     << "  <line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(0) << "\" y2=\"" << y(1)
     << "\" stroke=\"black\"/>\n"
     << "  <text x=\"250\" y=\"490\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        "Confidence</text>\n"
     << "  <text x=\"15\" y=\"250\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 15 250)\">Accuracy</text>\n"
     << "</svg>\n";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Calibration toolkit for multilingual question answering", "mlqacal"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a prediction or span-logit log against the schema");
  validate->add_option("--input", o.input, "Log file")->required()->check(CLI::ExistingFile);
  validate->add_option("--k", o.k, "Maximum candidates per record")->capture_default_str();
  validate->add_flag("--allow-empty-text", o.allow_empty_text, "Accept empty candidate texts");

  auto* evaluate = app.add_subcommand("evaluate", "Per-language EM and ECE");
  add_scoring_flags(evaluate, o);
  evaluate->add_option("--format", o.format, "table, csv or markdown")->capture_default_str();
  evaluate->add_option("--out", o.out, "Report path (default stdout)");

  auto* reliability = app.add_subcommand("reliability", "Reliability bins and diagram");
  add_scoring_flags(reliability, o);
  reliability->add_option("--out", o.out, "Bins CSV path (default stdout)");
  reliability->add_option("--svg", o.svg, "Reliability diagram path");

  auto* fit = app.add_subcommand("fit-temperature", "Fit temperature scaling on a validation log");
  fit->add_option("--input", o.input, "Span-logit log (extractive) or prediction log (generative)")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--kind", o.kind, "auto, extractive or generative")->capture_default_str();
  fit->add_option("--lang", o.lang, "Restrict to one language code");
  fit->add_option("--k", o.k, "Maximum candidates per record")->capture_default_str();
  fit->add_option("--matcher", o.matcher, "exact or contains")->capture_default_str();
  fit->add_option("--articles", o.articles, "Article lists: en or mlqa")->capture_default_str();
  fit->add_option("--tau-min", o.tau_min)->capture_default_str();
  fit->add_option("--tau-max", o.tau_max)->capture_default_str();
  fit->add_option("--grid", o.grid, "Coarse grid size")->capture_default_str();
  fit->add_option("--tolerance", o.tolerance, "Refinement tolerance in log(tau)")->capture_default_str();
  fit->add_option("--smoothing-targets", o.smoothing_out, "Write label-smoothed start/end targets");
  fit->add_option("--alpha-start", o.alpha_start)->capture_default_str();
  fit->add_option("--alpha-end", o.alpha_end)->capture_default_str();
  fit->add_option("--out", o.out, "TemperatureParams path (default stdout)");

  auto* extract = app.add_subcommand("extract-candidates", "Top-k answer spans from start/end logits");
  extract->add_option("--input", o.input, "Span-logit log")->required()->check(CLI::ExistingFile);
  extract->add_option("--k", o.k, "Candidates per record")->capture_default_str();
  extract->add_option("--max-answer-length", o.max_answer_length, "Tokens")->capture_default_str();
  extract->add_option("--dataset", o.dataset)->capture_default_str();
  extract->add_option("--split", o.split)->capture_default_str();
  extract->add_option("--lang", o.lang, "Restrict to one language code");
  extract->add_option("--out", o.out, "Prediction log path (default stdout)");

  auto* assemble = app.add_subcommand("assemble", "Training manifest for an augmentation configuration");
  assemble->add_option("--corpus", o.corpus, "Parallel corpus")->required()->check(CLI::ExistingFile);
  assemble->add_option("--mode", o.mode, "en, en_tr, en_large, mixed or fewshot")->required();
  assemble->add_option("--n", o.subset, "English subset size");
  assemble->add_option("--languages", o.languages, "Comma-separated, English first")->capture_default_str();
  assemble->add_option("--fewshot-per-lang", o.fewshot_per_lang)->capture_default_str();
  assemble->add_option("--seed", o.seed, "Shuffle seed");
  assemble->add_option("--out", o.out, "Manifest path (default stdout)");

  auto* icl = app.add_subcommand("icl-select", "Pick in-context examples per query");
  icl->add_option("--pool", o.pool, "Prediction log of candidate shots")->required()->check(CLI::ExistingFile);
  icl->add_option("--queries", o.queries, "Prediction log of queries")->required()->check(CLI::ExistingFile);
  icl->add_option("--k", o.shots, "Shots per query")->capture_default_str();
  icl->add_option("--strategy", o.strategy, "random or adaptive")->capture_default_str();
  icl->add_option("--seed", o.seed, "Sampling seed (random strategy)");
  icl->add_option("--lang", o.lang, "Restrict queries to one language code");
  icl->add_flag("--mixed-language-pool", o.mixed_language_pool, "Draw shots from every language");
  icl->add_option("--corpus", o.corpus, "Parallel corpus with question/context/answer text")
      ->check(CLI::ExistingFile);
  icl->add_option("--prompts", o.prompts, "Write a prompt manifest");
  icl->add_option("--out", o.out, "Selection path (default stdout)");

  auto* correlate = app.add_subcommand("correlate", "Correlate ECE with language features or parallel confidences");
  add_scoring_flags(correlate, o);
  correlate->add_option("--features", o.features, "Language feature table")->check(CLI::ExistingFile);
  correlate->add_option("--parallel-source", o.parallel_source, "Source language for parallel correlation");
  correlate->add_option("--out", o.out, "Report path (default stdout)");

  std::vector<std::string> argv_storage = {"mlqacal"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputFailure;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*evaluate) return cmd_evaluate(o, out, err);
    if (*reliability) return cmd_reliability(o, out, err);
    if (*fit) return cmd_fit_temperature(o, out, err);
    if (*extract) return cmd_extract_candidates(o, out, err);
    if (*assemble) return cmd_assemble(o, out, err);
    if (*icl) return cmd_icl_select(o, out, err);
    if (*correlate) return cmd_correlate(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kInputFailure;
}

}  // namespace mlqacal::cli
