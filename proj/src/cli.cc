#include "paranmt/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "paranmt/common.h"
#include "paranmt/corpus_io.h"
#include "paranmt/corpus_stats.h"
#include "paranmt/embedding_store.h"
#include "paranmt/encoders.h"
#include "paranmt/filter.h"
#include "paranmt/lexicon.h"
#include "paranmt/sts_eval.h"
#include "paranmt/trainer.h"

namespace paranmt {

std::string ProvenanceLine(const std::vector<std::string>& args,
                           unsigned long long seed) {
  std::string line = std::string("# paranmt ") + kToolVersion + " argv=";
  bool first = true;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--threads") {
      ++i;  // skip its value too
      continue;
    }
    if (a.rfind("--threads=", 0) == 0) continue;
    if (!first) line += ' ';
    first = false;
    line += a;
  }
  line += " seed=" + std::to_string(seed);
  // Keep it a comment line: no tabs or newlines.
  std::replace(line.begin(), line.end(), '\t', ' ');
  std::replace(line.begin(), line.end(), '\n', ' ');
  return line;
}

namespace {

struct GlobalOptions {
  unsigned long long seed = kDefaultSeed;
  int threads = 1;
  int verbosity = 0;
};

// Writes to a file when a path is given, otherwise to the fallback stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  void Close(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw Error("write failed: " + path);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::vector<std::string> inputs;
  std::string format = "pairs";
  std::string idf_corpus;
  std::vector<std::string> parses;
  std::string scorer;
  std::string out;
};

void RunStats(const StatsArgs& a, const GlobalOptions& g,
              const std::string& provenance, std::ostream& stdout_stream,
              std::ostream& err) {
  if (a.format != "pairs" && a.format != "sentences") {
    throw Error("--format must be pairs or sentences");
  }
  if (!a.parses.empty() && a.parses.size() != a.inputs.size()) {
    throw Error("--parses must be given once per input corpus");
  }
  std::optional<Encoder> scorer;
  if (!a.scorer.empty()) scorer = Encoder::Load(a.scorer);

  struct Loaded {
    std::vector<TokenizedSentence> sentences;
    std::vector<ParaphrasePair> pairs;
  };
  std::vector<Loaded> corpora;
  for (const auto& path : a.inputs) {
    Loaded c;
    if (a.format == "pairs") {
      auto loaded = LoadPairs(path);
      if (g.verbosity > 0) {
        err << path << ": skipped " << loaded.skipped << " degenerate pairs\n";
      }
      for (const auto& p : loaded.pairs) c.sentences.push_back(p.reference);
      c.pairs = std::move(loaded.pairs);
    } else {
      c.sentences = LoadSentences(path);
    }
    corpora.push_back(std::move(c));
  }
  IdfTable idf;
  if (!a.idf_corpus.empty()) {
    idf = BuildIdf(LoadSentences(a.idf_corpus));
  } else {
    DocumentFrequency df;
    for (const auto& c : corpora) {
      for (const auto& s : c.sentences) df.Add(s);
    }
    if (df.n_documents() == 0) throw Error("stats: no sentences");
    idf = IdfTable(df);
  }

  std::vector<CorpusReport> reports;
  for (size_t i = 0; i < corpora.size(); ++i) {
    std::vector<ParsedSentence> parses;
    if (!a.parses.empty()) parses = LoadParses(a.parses[i]);
    CorpusReportInputs in;
    in.name = std::filesystem::path(a.inputs[i]).stem().string();
    in.sentences = corpora[i].sentences;
    in.idf = &idf;
    in.parses = parses;
    in.pairs = corpora[i].pairs;
    in.scorer = scorer ? &*scorer : nullptr;
    in.threads = g.threads;
    try {
      reports.push_back(BuildCorpusReport(in));
    } catch (const Error& e) {
      throw Error(a.inputs[i] + ": " + e.what());
    }
  }

  if (!a.out.empty()) {
    Output out(a.out, stdout_stream);
    *out << provenance << '\n' << "#" << CorpusReportTsvHeader() << '\n';
    for (const auto& r : reports) *out << CorpusReportTsvRow(r) << '\n';
    out.Close(a.out);
  }

  auto pm = [](const MeanStd& m) {
    return FormatFixed(m.mean, 2) + " ± " + FormatFixed(m.std, 2);
  };
  char line[512];
  std::snprintf(line, sizeof(line), "%-20s %-16s %-16s %-16s %-9s %-9s %s\n",
                "Dataset", "Avg. Length", "Avg. IDF", "Avg. Para. Score",
                "Vocab.H", "Parse H", "Size");
  stdout_stream << line;
  for (const auto& r : reports) {
    std::string para = r.para_score ? pm(*r.para_score) : "-";
    std::string parse =
        r.parse_entropy_bits ? FormatFixed(*r.parse_entropy_bits, 2) : "-";
    std::snprintf(line, sizeof(line), "%-20s %-16s %-16s %-16s %-9s %-9s %zu\n",
                  r.name.c_str(), pm(r.length).c_str(), pm(r.idf).c_str(),
                  para.c_str(), FormatFixed(r.vocab_entropy_bits, 2).c_str(),
                  parse.c_str(), r.n_sentences);
    stdout_stream << line;
  }
}

// --------------------------------------------------------------- filter

struct FilterArgs {
  std::string criterion;
  std::string pairs;
  std::string scorer;
  std::string out;
};

void RunFilter(const FilterArgs& a, const GlobalOptions& g,
               const std::string& provenance, std::ostream& stdout_stream,
               std::ostream& err) {
  Criterion criterion = ParseCriterion(a.criterion);
  std::optional<Encoder> scorer;
  if (criterion == Criterion::kParaphrase) {
    if (a.scorer.empty()) throw Error("--criterion para needs --scorer");
    scorer = Encoder::Load(a.scorer);
  }
  auto loaded = LoadPairs(a.pairs);
  if (g.verbosity > 0 || loaded.skipped > 0) {
    err << "filter: skipped " << loaded.skipped << " degenerate pairs\n";
  }
  auto scores = ScorePairs(loaded.pairs, criterion,
                           scorer ? &*scorer : nullptr, g.threads);
  Output out(a.out, stdout_stream);
  *out << provenance << '\n';
  for (size_t i = 0; i < loaded.pairs.size(); ++i) {
    const auto& p = loaded.pairs[i];
    *out << p.reference.raw << '\t' << p.translation.raw;
    if (p.translation_logprob) *out << '\t' << FormatDouble(*p.translation_logprob);
    *out << '\t' << FormatDouble(scores[i]) << '\n';
  }
  out.Close(a.out);
}

// -------------------------------------------------------- split-deciles

struct SplitArgs {
  std::string scored;
  std::string out;
};

void RunSplit(const SplitArgs& a, const std::string& provenance,
              std::ostream& stdout_stream) {
  std::vector<std::string> lines;
  std::vector<double> scores;
  ForEachTsvLine(a.scored, [&](std::string_view line, size_t line_number) {
    auto fields = SplitTabs(line);
    if (fields.size() < 2) {
      ThrowAt(a.scored, line_number, "expected pair columns plus a score");
    }
    auto score = ParseDouble(fields.back());
    if (!score || !std::isfinite(*score)) {
      ThrowAt(a.scored, line_number,
              "bad score '" + std::string(fields.back()) + "'");
    }
    lines.emplace_back(line);
    scores.push_back(*score);
  });
  DecileSplit split = SplitDeciles(scores);
  auto bins = split.Assignments(scores.size());
  Output out(a.out, stdout_stream);
  *out << provenance << '\n';
  for (size_t i = 0; i < lines.size(); ++i) {
    *out << lines[i] << '\t' << bins[i] << '\n';
  }
  out.Close(a.out);
}

// --------------------------------------------------------------- sample

struct SampleArgs {
  std::string binned;
  std::vector<int> bins = {8, 9};
  size_t max_len = 30;
  size_t n = 0;
  std::string out;
};

void RunSample(const SampleArgs& a, const GlobalOptions& g,
               const std::string& provenance, std::ostream& stdout_stream,
               std::ostream& err) {
  for (int b : a.bins) {
    if (b < 0 || b > 9) throw Error("--bins values must lie in 0..9");
  }
  std::vector<std::string> pair_columns;
  std::vector<ParaphrasePair> pairs;
  std::vector<int> bin_of_pair;
  ForEachTsvLine(a.binned, [&](std::string_view line, size_t line_number) {
    auto fields = SplitTabs(line);
    if (fields.size() < 4) {
      ThrowAt(a.binned, line_number,
              "expected pair columns, a score and a bin");
    }
    auto bin = ParseInt(fields.back());
    if (!bin || *bin < 0 || *bin > 9) {
      ThrowAt(a.binned, line_number, "bad bin '" + std::string(fields.back()) +
                                         "'");
    }
    ParaphrasePair p;
    p.reference = Tokenize(fields[0]);
    p.translation = Tokenize(fields[1]);
    std::string cols(fields[0]);
    for (size_t i = 1; i + 2 < fields.size(); ++i) {
      cols += '\t';
      cols += fields[i];
    }
    pair_columns.push_back(std::move(cols));
    pairs.push_back(std::move(p));
    bin_of_pair.push_back(static_cast<int>(*bin));
  });
  SampleResult sample =
      SampleTrainingSet(pairs, bin_of_pair, a.bins, a.max_len, a.n, g.seed);
  if (sample.shortfall > 0) {
    err << "sample: " << sample.eligible << " eligible pairs, shortfall "
        << sample.shortfall << " of " << a.n << " requested\n";
  }
  Output out(a.out, stdout_stream);
  *out << provenance << '\n';
  for (size_t idx : sample.indices) *out << pair_columns[idx] << '\n';
  out.Close(a.out);
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string pairs;
  std::string encoder = "word";
  size_t dim = 300;
  size_t trigram_dim = 0;
  size_t min_count = 1;
  std::string init_embeddings;
  TrainingConfig config;
  bool freeze_word = false;
  std::string out;
  std::string loss_log;
  CLI::Option* dim_option = nullptr;
};

void RunTrain(TrainArgs a, const GlobalOptions& g,
              const std::string& provenance, std::ostream& err) {
  EncoderKind kind = ParseEncoderKind(a.encoder);
  a.config.seed = g.seed;
  a.config.threads = g.threads;
  a.config.update_embeddings = !a.freeze_word;
  a.config.Validate();

  auto loaded = LoadPairs(a.pairs);
  if (g.verbosity > 0 || loaded.skipped > 0) {
    err << "train: skipped " << loaded.skipped << " degenerate pairs\n";
  }
  if (loaded.pairs.empty()) throw Error("train: empty corpus");
  std::vector<TokenizedSentence> sentences;
  for (const auto& p : loaded.pairs) {
    sentences.push_back(p.reference);
    sentences.push_back(p.translation);
  }

  std::optional<EmbeddingMatrix> pretrained;
  size_t word_dim = a.dim;
  if (!a.init_embeddings.empty()) {
    if (!UsesWords(kind)) throw Error("--init-embeddings needs a word store");
    pretrained = LoadPretrained(a.init_embeddings, UnitKind::kWord);
    if (a.dim_option != nullptr && a.dim_option->count() > 0 &&
        pretrained->dim() != a.dim) {
      throw Error("--dim " + std::to_string(a.dim) +
                  " disagrees with pretrained dim " +
                  std::to_string(pretrained->dim()));
    }
    word_dim = pretrained->dim();
  }
  size_t trigram_dim = a.trigram_dim != 0 ? a.trigram_dim : word_dim;

  std::optional<EmbeddingMatrix> word, trigram;
  if (UsesWords(kind)) {
    word = InitMatrix(BuildVocab(sentences, UnitKind::kWord, a.min_count),
                      word_dim, g.seed);
    if (pretrained) {
      size_t copied = CopyMatchingRows(*pretrained, &*word);
      if (g.verbosity > 0) {
        err << "train: initialized " << copied << " of " << word->rows()
            << " word rows from " << a.init_embeddings << '\n';
      }
    }
  }
  if (UsesTrigrams(kind)) {
    trigram = InitMatrix(
        BuildVocab(sentences, UnitKind::kCharTrigram, a.min_count),
        trigram_dim, g.seed ^ 0x9e3779b97f4a7c15ULL);
  }
  Encoder encoder(kind, std::move(word), std::move(trigram));
  TrainResult result = Train(loaded.pairs, &encoder, a.config);
  if (g.verbosity > 0) {
    for (const auto& e : result.epochs) {
      err << "epoch " << e.epoch << " loss " << e.mean_loss << " neg_cos "
          << e.mean_negative_cosine << '\n';
    }
  }
  encoder.Save(a.out, provenance);
  if (!a.loss_log.empty()) {
    std::ostringstream unused;
    Output log(a.loss_log, unused);
    *log << provenance << '\n' << "#epoch\tmean_loss\tmean_negative_cosine\n";
    for (const auto& e : result.epochs) {
      *log << e.epoch << '\t' << FormatDouble(e.mean_loss) << '\t'
           << FormatDouble(e.mean_negative_cosine) << '\n';
    }
    log.Close(a.loss_log);
  }
}

// ----------------------------------------------------- embed/similarity

void RunEmbed(const std::string& model_path, const std::string& input,
              const std::string& out_path, const GlobalOptions& g,
              const std::string& provenance, std::ostream& stdout_stream) {
  Encoder encoder = Encoder::Load(model_path);
  auto sentences = LoadSentences(input);
  std::vector<SentenceVector> vectors(sentences.size());
  ParallelFor(sentences.size(), g.threads, [&](size_t b, size_t e) {
    for (size_t i = b; i < e; ++i) vectors[i] = encoder.Encode(sentences[i]);
  });
  Output out(out_path, stdout_stream);
  *out << provenance << '\n';
  for (const auto& v : vectors) {
    for (size_t k = 0; k < v.size(); ++k) {
      if (k) *out << '\t';
      *out << FormatDouble(v[k]);
    }
    *out << '\n';
  }
  out.Close(out_path);
}

void RunSimilarity(const std::string& model_path, const std::string& input,
                   const std::string& out_path, const GlobalOptions& g,
                   const std::string& provenance,
                   std::ostream& stdout_stream) {
  Encoder encoder = Encoder::Load(model_path);
  std::vector<std::pair<std::string, std::string>> rows;
  ForEachTsvLine(input, [&](std::string_view line, size_t line_number) {
    auto f = SplitTabs(line);
    if (f.size() < 2) ThrowAt(input, line_number, "expected <a>\\t<b>");
    rows.emplace_back(std::string(f[0]), std::string(f[1]));
  });
  std::vector<double> cos(rows.size());
  ParallelFor(rows.size(), g.threads, [&](size_t b, size_t e) {
    for (size_t i = b; i < e; ++i) {
      cos[i] = Cosine(encoder.Encode(Tokenize(rows[i].first)),
                      encoder.Encode(Tokenize(rows[i].second)));
    }
  });
  Output out(out_path, stdout_stream);
  *out << provenance << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    *out << rows[i].first << '\t' << rows[i].second << '\t'
         << FormatDouble(cos[i]) << '\n';
  }
  out.Close(out_path);
}

// ------------------------------------------------------------- eval-sts

void RunEvalSts(const std::string& model_path, const std::string& manifest,
                const std::string& out_path, const GlobalOptions& g,
                const std::string& provenance, std::ostream& stdout_stream) {
  Encoder encoder = Encoder::Load(model_path);
  StsCollection collection = LoadSts(manifest);
  EvalReport report = EvaluateSts(collection, encoder, g.threads);
  Output out(out_path, stdout_stream);
  *out << provenance << '\n' << '#' << FormatEvalReport(report);
  out.Close(out_path);
}

// -------------------------------------------------------------- lexicon

struct LexiconArgs {
  std::string pairs;
  std::string scorer;
  PmiOptions options;
  uint64_t min_joint = 10;
  std::string out;
};

void RunBuildLexicon(const LexiconArgs& a, const GlobalOptions& g,
                     const std::string& provenance,
                     std::ostream& stdout_stream, std::ostream& err) {
  Encoder scorer = Encoder::Load(a.scorer);
  auto loaded = LoadPairs(a.pairs);
  PmiCounts counts = CountPmi(loaded.pairs, a.options, scorer, g.threads);
  if (g.verbosity > 0) {
    err << "build-lexicon: counted " << counts.pairs_counted() << " pairs, "
        << counts.pairs_filtered << " filtered\n";
  }
  auto lexicon = BuildLexicon(counts, a.min_joint);
  Output out(a.out, stdout_stream);
  *out << provenance << '\n';
  WriteLexicon(*out, lexicon);
  out.Close(a.out);
}

void RunEvalSimlex(const std::string& lexicon_path, const std::string& gold,
                   const std::string& out_path, const std::string& provenance,
                   std::ostream& stdout_stream) {
  auto lexicon = LoadLexicon(lexicon_path);
  auto pairs = LoadWordPairs(gold);
  SimlexResult r = EvalSimlex(lexicon, pairs);
  Output out(out_path, stdout_stream);
  *out << provenance << '\n' << "#pairs\tcovered\tspearman\n"
       << r.pairs << '\t' << r.covered << '\t' << FormatFixed(r.spearman, 4)
       << '\n';
  out.Close(out_path);
}

// ------------------------------------------------------------ gradcheck

int RunGradCheck(size_t dim, size_t instances, double step,
                 const GlobalOptions& g, const std::string& provenance,
                 std::ostream& out, std::ostream& err) {
  constexpr double kTolerance = 1e-4;
  out << provenance << '\n'
      << "#encoder\tsymmetric\tinstances\tparameters\tmax_relative_error\n";
  bool ok = true;
  for (EncoderKind kind : {EncoderKind::kWordAvg, EncoderKind::kTrigramAvg,
                           EncoderKind::kAdditive, EncoderKind::kConcat}) {
    for (bool symmetric : {false, true}) {
      GradCheckResult r =
          GradCheck(kind, symmetric, dim, g.seed, instances, step);
      out << EncoderKindName(kind) << '\t' << (symmetric ? "yes" : "no")
          << '\t' << r.instances << '\t' << r.parameters_checked << '\t'
          << FormatDouble(r.max_relative_error) << '\n';
      if (!(r.max_relative_error < kTolerance)) ok = false;
    }
  }
  if (!ok) {
    err << "error: gradcheck: relative error above 1e-4\n";
    return 1;
  }
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Paraphrase-corpus toolkit: filtering, statistics, "
               "paraphrastic sentence embeddings and lexicon extraction",
               "paranmt"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(kDefaultSeed);
  app.add_option("--threads", g.threads, "Worker threads (results do not "
                                         "depend on it)")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", g.verbosity, "Progress on stderr");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("inputs", stats.inputs, "Corpus files")->required();
  stats_cmd->add_option("--format", stats.format, "pairs or sentences")
      ->default_val("pairs");
  stats_cmd->add_option("--idf-corpus", stats.idf_corpus,
                        "Sentences (one per line) to compute IDF from");
  stats_cmd->add_option("--parses", stats.parses,
                        "Parsed-corpus file per input, in input order");
  stats_cmd->add_option("--scorer", stats.scorer,
                        "Model for the paraphrase-score column");
  stats_cmd->add_option("--out", stats.out, "TSV output");

  FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "Score paraphrase pairs");
  filter_cmd->add_option("--criterion", filter.criterion,
                         "overlap, para or trans")
      ->required();
  filter_cmd->add_option("--pairs", filter.pairs, "Pairs TSV")->required();
  filter_cmd->add_option("--scorer", filter.scorer, "Model (for para)");
  filter_cmd->add_option("--out", filter.out, "Scored TSV");

  SplitArgs split;
  auto* split_cmd =
      app.add_subcommand("split-deciles", "Append a decile bin to scored TSV");
  split_cmd->add_option("--scored", split.scored, "Output of filter")
      ->required();
  split_cmd->add_option("--out", split.out, "Binned TSV");

  SampleArgs sample;
  auto* sample_cmd =
      app.add_subcommand("sample", "Sample training pairs from chosen bins");
  sample_cmd->add_option("--binned", sample.binned, "Output of split-deciles")
      ->required();
  sample_cmd->add_option("--bins", sample.bins, "Bins to draw from")
      ->delimiter(',')
      ->default_str("8,9");
  sample_cmd->add_option("--max-len", sample.max_len, "Max tokens per side")
      ->default_val(30);
  sample_cmd->add_option("--n", sample.n, "Sample size")->required();
  sample_cmd->add_option("--out", sample.out, "Pairs TSV");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train sentence embeddings");
  train_cmd->add_option("--pairs", train.pairs, "Pairs TSV")->required();
  train_cmd->add_option("--encoder", train.encoder,
                        "word, trigram, additive or concat")
      ->default_val("word");
  train.dim_option =
      train_cmd->add_option("--dim", train.dim, "Embedding dim")
          ->default_val(300)
          ->check(CLI::PositiveNumber);
  train_cmd->add_option("--trigram-dim", train.trigram_dim,
                        "Trigram dim for concat (default: --dim)");
  train_cmd->add_option("--min-count", train.min_count, "Min unit frequency")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--init-embeddings", train.init_embeddings,
                        "Pretrained word embeddings (text format)");
  train_cmd->add_option("--margin", train.config.margin, "Margin delta")
      ->default_val(0.4);
  train_cmd->add_option("--batch", train.config.minibatch_size,
                        "Mini-batch size")
      ->default_val(100);
  train_cmd->add_option("--megabatch", train.config.megabatch_multiplier,
                        "Mini-batches per mega-batch (M)")
      ->default_val(1);
  train_cmd->add_option("--epochs", train.config.epochs, "Epochs")
      ->default_val(5);
  train_cmd->add_option("--lr", train.config.learning_rate, "Adam step size")
      ->default_val(0.001);
  train_cmd->add_flag("--symmetric", train.config.symmetric_loss,
                      "Add the mirrored hinge term");
  train_cmd->add_flag("--freeze-word-embeddings", train.freeze_word,
                      "Do not update the word store");
  train_cmd->add_flag("--negatives-from-both", train.config.negatives_from_both_sides,
                      "Second sentences are also negative candidates");
  train_cmd->add_option("--out", train.out, "Model file")->required();
  train_cmd->add_option("--loss-log", train.loss_log, "Per-epoch loss TSV");

  std::string model, input, out_path;
  auto* embed_cmd = app.add_subcommand("embed", "Encode sentences");
  embed_cmd->add_option("--model", model, "Model file")->required();
  embed_cmd->add_option("--input", input, "One sentence per line")
      ->required();
  embed_cmd->add_option("--out", out_path, "Vectors TSV");

  auto* sim_cmd = app.add_subcommand("similarity", "Cosine of sentence pairs");
  sim_cmd->add_option("--model", model, "Model file")->required();
  sim_cmd->add_option("--pairs", input, "<a>\\t<b> per line")->required();
  sim_cmd->add_option("--out", out_path, "Output TSV");

  std::string manifest;
  auto* sts_cmd = app.add_subcommand("eval-sts", "Pearson r on STS data");
  sts_cmd->add_option("--model", model, "Model file")->required();
  sts_cmd->add_option("--manifest", manifest, "STS manifest")->required();
  sts_cmd->add_option("--out", out_path, "Report TSV");

  LexiconArgs lex;
  auto* lex_cmd = app.add_subcommand("build-lexicon",
                                     "Adjusted-PMI paraphrase lexicon");
  lex_cmd->add_option("--pairs", lex.pairs, "Pairs TSV")->required();
  lex_cmd->add_option("--scorer", lex.scorer, "Model with a word store")
      ->required();
  lex_cmd->add_option("--min-para", lex.options.min_para_score,
                      "Minimum paraphrase score")
      ->default_val(0.35);
  lex_cmd->add_option("--max-len", lex.options.max_len, "Max tokens per side")
      ->default_val(30);
  lex_cmd->add_option("--min-joint", lex.min_joint, "Minimum joint count")
      ->default_val(10);
  lex_cmd->add_option("--out", lex.out, "Lexicon TSV");

  std::string lexicon_path, gold;
  auto* simlex_cmd = app.add_subcommand("eval-simlex",
                                        "Spearman of a lexicon on word pairs");
  simlex_cmd->add_option("--lexicon", lexicon_path, "Lexicon TSV")->required();
  simlex_cmd->add_option("--gold", gold, "<w1>\\t<w2>\\t<score>")->required();
  simlex_cmd->add_option("--out", out_path, "Output TSV");

  size_t gc_dim = 10, gc_instances = 20;
  double gc_step = 1e-5;
  auto* gc_cmd = app.add_subcommand("gradcheck",
                                    "Finite-difference gradient check");
  gc_cmd->add_option("--dim", gc_dim, "Max embedding dim")
      ->default_val(10)
      ->check(CLI::Range(2, 10));
  gc_cmd->add_option("--instances", gc_instances, "Random instances")
      ->default_val(20);
  gc_cmd->add_option("--step", gc_step, "Central-difference step")
      ->default_val(1e-5);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << OneLine(e.what()) << '\n';
    return 2;
  }

  const std::string provenance = ProvenanceLine(args, g.seed);
  try {
    if (*stats_cmd) {
      RunStats(stats, g, provenance, out, err);
    } else if (*filter_cmd) {
      RunFilter(filter, g, provenance, out, err);
    } else if (*split_cmd) {
      RunSplit(split, provenance, out);
    } else if (*sample_cmd) {
      RunSample(sample, g, provenance, out, err);
    } else if (*train_cmd) {
      RunTrain(train, g, provenance, err);
    } else if (*embed_cmd) {
      RunEmbed(model, input, out_path, g, provenance, out);
    } else if (*sim_cmd) {
      RunSimilarity(model, input, out_path, g, provenance, out);
    } else if (*sts_cmd) {
      RunEvalSts(model, manifest, out_path, g, provenance, out);
    } else if (*lex_cmd) {
      RunBuildLexicon(lex, g, provenance, out, err);
    } else if (*simlex_cmd) {
      RunEvalSimlex(lexicon_path, gold, out_path, provenance, out);
    } else if (*gc_cmd) {
      return RunGradCheck(gc_dim, gc_instances, gc_step, g, provenance, out,
                          err);
    }
  } catch (const std::exception& e) {
    err << "error: " << OneLine(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace paranmt
